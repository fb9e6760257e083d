#include "evd/report.hpp"

#include "evd/numeric.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

namespace evd {

namespace {

// Report fields measured in nats. The --bits conversion divides exactly
// these keys (wherever they appear) by log 2.
const std::set<std::string>& nat_scale_keys() {
  static const std::set<std::string> keys = {
      "log_value",      "empirical",      "std_error",     "predicted",
      "gap",            "kl",             "target_kl",     "kl_term",
      "log_n_term",     "constant_term",  "total",         "redundancy",
      "mean_rate",      "se_rate",        "band_halfwidth","mean_increment",
      "se_increment",   "terminal",       "median_terminal",
      "max_over_paths", "log_b10",        "log_b",
      "expected_log_ratio", "crossing_log_threshold"};
  return keys;
}

void convert_in_place(nlohmann::json& node) {
  if (node.is_object()) {
    for (auto& [key, value] : node.items()) {
      if (nat_scale_keys().count(key) > 0) {
        if (value.is_number()) {
          value = value.get<Real>() / kLn2;
        } else if (value.is_array()) {
          for (auto& v : value) {
            if (v.is_number()) v = v.get<Real>() / kLn2;
          }
        }
      } else {
        convert_in_place(value);
      }
    }
  } else if (node.is_array()) {
    for (auto& v : node) convert_in_place(v);
  }
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::ReportOnly: return "report_only";
  }
  throw std::logic_error("unknown status");
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json doc;
  doc["check"] = check;
  doc["status"] = status_name(status);
  doc["seed"] = seed;
  doc["version"] = kVersion;
  doc["units"] = "nats";
  doc["config"] = config_echo;
  doc["results"] = results;
  doc["wall_time_ms"] = wall_time_ms;
  return doc;
}

nlohmann::json convert_nats_to_bits(const nlohmann::json& doc) {
  nlohmann::json out = doc;
  if (out.contains("results")) convert_in_place(out["results"]);
  out["units"] = "bits";
  return out;
}

void convert_table_nats_to_bits(CheckReport::Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (nat_scale_keys().count(table.columns[c]) == 0) continue;
    for (auto& row : table.rows) {
      row[c] /= kLn2;
    }
  }
}

std::string format_real(Real x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<std::filesystem::path> emit(const CheckReport& report,
                                        const std::vector<std::string>& formats,
                                        const std::filesystem::path& out_dir,
                                        const std::string& stem, bool bits) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const std::string& format : formats) {
    if (format == "json") {
      nlohmann::json doc = report.to_json();
      if (bits) doc = convert_nats_to_bits(doc);
      const std::filesystem::path path = out_dir / (stem + ".json");
      std::ofstream os(path);
      if (!os) throw std::runtime_error("emit: cannot open " + path.string());
      os << doc.dump(2) << '\n';
      written.push_back(path);
    } else if (format == "csv") {
      for (const CheckReport::Table& table : report.tables) {
        CheckReport::Table out_table = table;
        if (bits) convert_table_nats_to_bits(out_table);
        const std::filesystem::path path =
            out_dir / (stem + "." + table.name + ".csv");
        std::ofstream os(path);
        if (!os) throw std::runtime_error("emit: cannot open " + path.string());
        for (std::size_t c = 0; c < out_table.columns.size(); ++c) {
          if (c > 0) os << ',';
          os << out_table.columns[c];
        }
        os << '\n';
        for (const auto& row : out_table.rows) {
          for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << ',';
            os << format_real(row[c]);
          }
          os << '\n';
        }
        written.push_back(path);
      }
    } else {
      throw std::invalid_argument("emit: unknown format '" + format + "'");
    }
  }
  return written;
}

}  // namespace evd
