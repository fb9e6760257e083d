#pragma once

#include "evd/composite.hpp"
#include "evd/decision.hpp"
#include "evd/evidence.hpp"
#include "evd/method.hpp"
#include "evd/models.hpp"
#include "evd/sequential.hpp"
#include "evd/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace evd {

/// Raised for malformed or inconsistent configuration; the message names the
/// offending field path. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// One parsed check invocation: the check name, the master seed, and the raw
/// document the per-check runner pulls its blocks from.
struct ExperimentConfig {
  std::string check;
  Seed master_seed = 0;
  nlohmann::json raw;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load_file(const std::filesystem::path& path);
};

// Field access with path-carrying errors -------------------------------------

const nlohmann::json& require_field(const nlohmann::json& obj,
                                    const std::string& key,
                                    const std::string& path);
Real require_real(const nlohmann::json& obj, const std::string& key,
                  const std::string& path);
Real real_or(const nlohmann::json& obj, const std::string& key,
             const std::string& path, Real fallback);
std::int64_t require_int(const nlohmann::json& obj, const std::string& key,
                         const std::string& path);
std::int64_t int_or(const nlohmann::json& obj, const std::string& key,
                    const std::string& path, std::int64_t fallback);
bool bool_or(const nlohmann::json& obj, const std::string& key,
             const std::string& path, bool fallback);
std::string require_string(const nlohmann::json& obj, const std::string& key,
                           const std::string& path);
std::vector<Real> require_real_array(const nlohmann::json& obj,
                                     const std::string& key,
                                     const std::string& path);

// Typed block parsers ---------------------------------------------------------

Model parse_model(const nlohmann::json& obj, const std::string& path);
MixtureAlternative parse_mixture(const nlohmann::json& obj,
                                 const std::string& path);
/// An alternative block is a mixture when it contains a "prior" key and a
/// point model otherwise.
Alternative parse_alternative(const nlohmann::json& obj,
                              const std::string& path);
/// Methods: {"kind": "enumerate", "cap"?} or {"kind": "monte_carlo",
/// "reps"}. Monte Carlo replicate streams derive from `master_seed`;
/// configs never embed raw engine seeds. Config-level rule: reps >= 100.
Method parse_method(const nlohmann::json& obj, const std::string& path,
                    Seed master_seed);
RiskSpec parse_risk_spec(const nlohmann::json& obj, const std::string& path);
StoppingRule parse_stopping(const nlohmann::json& obj,
                            const std::string& path);

}  // namespace evd
