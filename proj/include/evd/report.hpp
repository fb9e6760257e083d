#pragma once

#include "evd/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace evd {

enum class CheckStatus { Pass, Fail, ReportOnly };

std::string status_name(CheckStatus s);

/// The harness-level result of one configured check: what ran, with which
/// inputs, what it produced, and whether it passed. `results` carries the
/// check-specific payload; `tables` carries rows destined for CSV files.
struct CheckReport {
  std::string check;
  CheckStatus status = CheckStatus::ReportOnly;
  nlohmann::json config_echo;
  nlohmann::json results;
  Seed seed = 0;
  double wall_time_ms = 0.0;

  struct Table {
    std::string name;                       // file stem suffix
    std::vector<std::string> columns;
    std::vector<std::vector<Real>> rows;
  };
  std::vector<Table> tables;

  /// Deterministic JSON document (keys sorted, version stamped). Every field
  /// except wall_time_ms is reproducible for a fixed config and seed.
  nlohmann::json to_json() const;
};

/// Convert a report's log-scale quantities from nats to bits (divides the
/// designated numeric fields by log 2 and relabels the units field).
nlohmann::json convert_nats_to_bits(const nlohmann::json& doc);
void convert_table_nats_to_bits(CheckReport::Table& table);

/// Write `<stem>.json` and/or `<stem>.<table>.csv` under out_dir.
/// `formats` entries: "json", "csv". Returns the written paths.
std::vector<std::filesystem::path> emit(const CheckReport& report,
                                        const std::vector<std::string>& formats,
                                        const std::filesystem::path& out_dir,
                                        const std::string& stem,
                                        bool bits = false);

/// Shortest-round-trip decimal text for a double (used by the CSV writer).
std::string format_real(Real x);

}  // namespace evd
