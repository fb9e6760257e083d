#include "evd/config.hpp"

#include <fstream>

namespace evd {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

template <typename Fn>
auto guarded(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config error at $: not a JSON object");
  ExperimentConfig config;
  config.check = require_string(doc, "check", "$");
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_integer() ||
        (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      fail("seed", "must be a nonnegative integer");
    }
    config.master_seed = s.get<Seed>();
  }
  config.raw = doc;
  return config;
}

ExperimentConfig ExperimentConfig::load_file(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config error: cannot open " + path.string());
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config error: " + path.string() + " is not valid JSON (" +
                      e.what() + ")");
  }
  return from_json(doc);
}

const nlohmann::json& require_field(const nlohmann::json& obj,
                                    const std::string& key,
                                    const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(path + "." + key, "missing required field");
  }
  return obj.at(key);
}

Real require_real(const nlohmann::json& obj, const std::string& key,
                  const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<Real>();
}

Real real_or(const nlohmann::json& obj, const std::string& key,
             const std::string& path, Real fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return require_real(obj, key, path);
}

std::int64_t require_int(const nlohmann::json& obj, const std::string& key,
                         const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t int_or(const nlohmann::json& obj, const std::string& key,
                    const std::string& path, std::int64_t fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return require_int(obj, key, path);
}

bool bool_or(const nlohmann::json& obj, const std::string& key,
             const std::string& path, bool fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "must be a boolean");
  return v.get<bool>();
}

std::string require_string(const nlohmann::json& obj, const std::string& key,
                           const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "must be a string");
  return v.get<std::string>();
}

std::vector<Real> require_real_array(const nlohmann::json& obj,
                                     const std::string& key,
                                     const std::string& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_array() || v.empty()) {
    fail(path + "." + key, "must be a nonempty array of numbers");
  }
  std::vector<Real> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number()) fail(path + "." + key, "must contain only numbers");
    out.push_back(item.get<Real>());
  }
  return out;
}

namespace {

Vector parse_theta(const nlohmann::json& obj, const std::string& path) {
  const auto& v = require_field(obj, "theta", path);
  if (v.is_number()) return Vector::Constant(1, v.get<Real>());
  if (v.is_array() && !v.empty()) {
    Vector theta(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(path + ".theta", "must contain only numbers");
      theta[static_cast<Index>(i)] = v[i].get<Real>();
    }
    return theta;
  }
  fail(path + ".theta", "must be a number or a nonempty numeric array");
}

}  // namespace

Model parse_model(const nlohmann::json& obj, const std::string& path) {
  return guarded(path, [&] {
    Model m;
    m.family = family_from_name(require_string(obj, "family", path));
    m.theta = parse_theta(obj, path);
    m.sigma2 = real_or(obj, "sigma2", path, 1.0);
    validate(m);
    return m;
  });
}

MixtureAlternative parse_mixture(const nlohmann::json& obj,
                                 const std::string& path) {
  return guarded(path, [&] {
    MixtureAlternative mix;
    mix.family = family_from_name(require_string(obj, "family", path));
    mix.sigma2 = real_or(obj, "sigma2", path, 1.0);
    mix.quadrature_nodes =
        static_cast<int>(int_or(obj, "quadrature_nodes", path, 256));
    const auto& prior = require_field(obj, "prior", path);
    const std::string prior_path = path + ".prior";
    const std::string kind = require_string(prior, "kind", prior_path);
    if (kind == "beta") {
      mix.prior = BetaPrior{require_real(prior, "a", prior_path),
                            require_real(prior, "b", prior_path)};
    } else if (kind == "gaussian") {
      GaussianPrior g;
      const auto& mean = require_field(prior, "mean", prior_path);
      if (mean.is_number()) {
        g.mean = Vector::Constant(1, mean.get<Real>());
      } else if (mean.is_array() && !mean.empty()) {
        g.mean.resize(static_cast<Index>(mean.size()));
        for (std::size_t i = 0; i < mean.size(); ++i) {
          g.mean[static_cast<Index>(i)] = mean[i].get<Real>();
        }
      } else {
        fail(prior_path + ".mean", "must be a number or numeric array");
      }
      g.tau2 = require_real(prior, "tau2", prior_path);
      mix.prior = std::move(g);
    } else if (kind == "grid") {
      GridPrior g;
      const auto& nodes = require_field(prior, "nodes", prior_path);
      if (!nodes.is_array() || nodes.empty()) {
        fail(prior_path + ".nodes", "must be a nonempty array");
      }
      for (const auto& node : nodes) {
        if (node.is_number()) {
          g.nodes.push_back(Vector::Constant(1, node.get<Real>()));
        } else if (node.is_array() && !node.empty()) {
          Vector v(static_cast<Index>(node.size()));
          for (std::size_t i = 0; i < node.size(); ++i) {
            v[static_cast<Index>(i)] = node[i].get<Real>();
          }
          g.nodes.push_back(std::move(v));
        } else {
          fail(prior_path + ".nodes", "entries must be numbers or arrays");
        }
      }
      g.weights = require_real_array(prior, "weights", prior_path);
      mix.prior = std::move(g);
    } else {
      fail(prior_path + ".kind", "must be 'beta', 'gaussian' or 'grid'");
    }
    validate(mix);
    return mix;
  });
}

Alternative parse_alternative(const nlohmann::json& obj,
                              const std::string& path) {
  if (obj.is_object() && obj.contains("prior")) {
    return parse_mixture(obj, path);
  }
  return parse_model(obj, path);
}

Method parse_method(const nlohmann::json& obj, const std::string& path,
                    Seed master_seed) {
  return guarded(path, [&]() -> Method {
    const std::string kind = require_string(obj, "kind", path);
    if (kind == "enumerate") {
      Enumerate en;
      en.cap = static_cast<std::uint64_t>(int_or(
          obj, "cap", path, static_cast<std::int64_t>(kDefaultEnumerationCap)));
      return en;
    }
    if (kind == "monte_carlo") {
      MonteCarlo mc;
      const std::int64_t reps = require_int(obj, "reps", path);
      if (reps < 100) fail(path + ".reps", "monte carlo needs reps >= 100");
      mc.reps = static_cast<std::size_t>(reps);
      mc.seed = master_seed;
      return mc;
    }
    fail(path + ".kind", "must be 'enumerate' or 'monte_carlo'");
  });
}

RiskSpec parse_risk_spec(const nlohmann::json& obj, const std::string& path) {
  return guarded(path, [&] {
    RiskSpec spec;
    spec.pi0 = require_real(obj, "pi0", path);
    spec.pi1 = require_real(obj, "pi1", path);
    spec.cost_type1 = require_real(obj, "cost_type1", path);
    spec.cost_type2 = require_real(obj, "cost_type2", path);
    validate(spec);
    return spec;
  });
}

StoppingRule parse_stopping(const nlohmann::json& obj,
                            const std::string& path) {
  return guarded(path, [&] {
    StoppingRule rule;
    const std::string kind = require_string(obj, "kind", path);
    if (kind == "first_crossing") {
      rule.kind = StoppingRule::Kind::FirstCrossing;
      rule.alpha = require_real(obj, "alpha", path);
    } else if (kind == "fixed_horizon") {
      rule.kind = StoppingRule::Kind::FixedHorizon;
    } else {
      fail(path + ".kind", "must be 'first_crossing' or 'fixed_horizon'");
    }
    rule.horizon_cap = static_cast<Index>(require_int(obj, "horizon_cap", path));
    validate(rule);
    return rule;
  });
}

}  // namespace evd
