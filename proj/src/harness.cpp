#include "evd/harness.hpp"

#include "evd/asymptotics.hpp"
#include "evd/numeric.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

namespace evd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

/// Re-labels validation failures raised while assembling library inputs as
/// configuration errors (they describe the config, not a bug).
template <typename Fn>
auto as_config(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json moment_json(const MomentReport& r) {
  return json{{"direction", direction_name(r.direction)},
              {"mean", r.mean},
              {"std_error", r.std_error},
              {"exact", r.exact},
              {"count", r.count},
              {"pass", r.pass},
              {"decision_rule", r.decision_rule}};
}

json bound_json(const BoundReport& r) {
  return json{{"direction", direction_name(r.direction)},
              {"level", r.level},
              {"threshold", r.threshold},
              {"estimate", r.estimate},
              {"ci_upper", r.ci_upper},
              {"exact", r.exact},
              {"count", r.count},
              {"pass", r.pass},
              {"decision_rule", r.decision_rule}};
}

json argmin_json(const ArgminInterval& iv) {
  json out;
  out["lo"] = iv.lo_is_zero ? 0.0 : iv.lo;
  out["lo_open"] = true;
  if (iv.hi_unbounded) {
    out["hi"] = "inf";
  } else {
    out["hi"] = iv.hi;
  }
  out["hi_closed"] = !iv.hi_unbounded;
  return out;
}

Index parse_n(const ExperimentConfig& c, const char* key = "n") {
  const std::int64_t n = require_int(c.raw, key, "$");
  if (n < 1) fail(std::string("$.") + key, "must be a positive integer");
  return static_cast<Index>(n);
}

std::vector<Index> parse_index_array(const ExperimentConfig& c,
                                     const std::string& key) {
  const auto& v = require_field(c.raw, key, "$");
  if (!v.is_array() || v.empty()) {
    fail("$." + key, "must be a nonempty array of positive integers");
  }
  std::vector<Index> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number_integer() || item.get<std::int64_t>() < 1) {
      fail("$." + key, "must contain positive integers");
    }
    out.push_back(static_cast<Index>(item.get<std::int64_t>()));
  }
  return out;
}

std::vector<Real> parse_levels(const ExperimentConfig& c,
                               const std::string& key = "levels") {
  std::vector<Real> levels = require_real_array(c.raw, key, "$");
  for (Real level : levels) {
    if (!(level > 0.0 && level < 1.0)) {
      fail("$." + key, "levels must lie in (0, 1)");
    }
  }
  return levels;
}

Model parse_model_field(const ExperimentConfig& c, const char* key) {
  return parse_model(require_field(c.raw, key, "$"), key);
}

MixtureAlternative parse_mixture_field(const ExperimentConfig& c,
                                       const char* key) {
  return parse_mixture(require_field(c.raw, key, "$"), key);
}

Alternative parse_alt_field(const ExperimentConfig& c, const char* key) {
  return parse_alternative(require_field(c.raw, key, "$"), key);
}

Method parse_method_field(const ExperimentConfig& c) {
  return parse_method(require_field(c.raw, "method", "$"), "method",
                      c.master_seed);
}

EValueSpec make_spec(const ExperimentConfig& c) {
  return as_config("$", [&] {
    EValueSpec spec{parse_model_field(c, "null"), parse_alt_field(c, "alt"),
                    parse_n(c)};
    validate(spec);
    return spec;
  });
}

std::size_t parse_reps(const ExperimentConfig& c, const char* key = "reps") {
  const std::int64_t reps = require_int(c.raw, key, "$");
  if (reps < 100) fail(std::string("$.") + key, "monte carlo needs reps >= 100");
  return static_cast<std::size_t>(reps);
}

void set_status(CheckReport& out, bool all_pass) {
  out.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
}

// --- check runners ----------------------------------------------------------

void run_unit_moment(const ExperimentConfig& c, CheckReport& out) {
  const EValueSpec spec = make_spec(c);
  const Method method = parse_method_field(c);
  std::string direction = "both";
  if (c.raw.contains("direction")) {
    direction = require_string(c.raw, "direction", "$");
  }
  std::vector<Direction> directions;
  if (direction == "both") {
    directions = {Direction::ForNull, Direction::ForAlt};
  } else {
    directions = {as_config("$.direction",
                            [&] { return direction_from_name(direction); })};
  }
  json moments = json::array();
  bool all_pass = true;
  for (Direction d : directions) {
    const MomentReport r = unit_moment_check(spec, d, method);
    all_pass = all_pass && r.pass;
    moments.push_back(moment_json(r));
  }
  out.results["moments"] = moments;
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

void run_dual_markov(const ExperimentConfig& c, CheckReport& out) {
  const EValueSpec spec = make_spec(c);
  const Method method = parse_method_field(c);
  const std::vector<Real> levels = parse_levels(c);

  json moments = json::array();
  json bounds = json::array();
  bool all_pass = true;
  for (Direction d : {Direction::ForNull, Direction::ForAlt}) {
    const MomentReport m = unit_moment_check(spec, d, method);
    all_pass = all_pass && m.pass;
    moments.push_back(moment_json(m));
    for (const BoundReport& b :
         as_config("$.levels", [&] {
           return markov_bound_checks(spec, d, levels, method);
         })) {
      all_pass = all_pass && b.pass;
      bounds.push_back(bound_json(b));
    }
  }
  out.results["moments"] = moments;
  out.results["bounds"] = bounds;
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

void run_markov_bound(const ExperimentConfig& c, CheckReport& out) {
  const EValueSpec spec = make_spec(c);
  const Method method = parse_method_field(c);
  const std::vector<Real> levels = parse_levels(c);
  const Direction direction = as_config("$.direction", [&] {
    return direction_from_name(require_string(c.raw, "direction", "$"));
  });
  json bounds = json::array();
  bool all_pass = true;
  for (const BoundReport& b : as_config("$.levels", [&] {
         return markov_bound_checks(spec, direction, levels, method);
       })) {
    all_pass = all_pass && b.pass;
    bounds.push_back(bound_json(b));
  }
  out.results["bounds"] = bounds;
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

void run_bayes_risk(const ExperimentConfig& c, CheckReport& out) {
  const EValueSpec spec = make_spec(c);
  const Method method = parse_method_field(c);
  if (!std::holds_alternative<Enumerate>(method)) {
    fail("$.method", "bayes_risk requires the enumerate method");
  }
  const auto& specs_field = require_field(c.raw, "risk_specs", "$");
  if (!specs_field.is_array() || specs_field.empty()) {
    fail("$.risk_specs", "must be a nonempty array");
  }

  bool all_pass = true;
  json entries = json::array();
  for (std::size_t i = 0; i < specs_field.size(); ++i) {
    const std::string path = "risk_specs[" + std::to_string(i) + "]";
    const RiskSpec risk = parse_risk_spec(specs_field[i], path);
    const Real t_star = optimal_threshold(risk);
    const ThresholdRule rule{t_star, TiePolicy::RejectOnTie};
    const ErrorRates rates =
        as_config(path, [&] { return error_rates(spec, rule, method); });
    const Real risk_at_t_star = bayes_risk(risk, rates);
    const RiskCurve curve =
        as_config(path, [&] { return threshold_sweep(spec, risk, method); });
    const bool in_argmin = curve.argmin_contains(t_star);
    const bool minimal = risk_at_t_star <= curve.min_risk + 1e-12;
    all_pass = all_pass && in_argmin && minimal;

    json entry;
    entry["pi0"] = risk.pi0;
    entry["pi1"] = risk.pi1;
    entry["cost_type1"] = risk.cost_type1;
    entry["cost_type2"] = risk.cost_type2;
    entry["t_star"] = t_star;
    entry["alpha_at_t_star"] = rates.alpha;
    entry["beta_at_t_star"] = rates.beta;
    entry["risk_at_t_star"] = risk_at_t_star;
    entry["sweep_min_risk"] = curve.min_risk;
    json argmin = json::array();
    for (const ArgminInterval& iv : curve.argmin) argmin.push_back(argmin_json(iv));
    entry["argmin"] = argmin;
    entry["t_star_in_argmin"] = in_argmin;
    entry["risk_at_t_star_minimal"] = minimal;
    entry["decision_rule"] =
        "t_star inside a sweep argmin interval and risk(t_star) <= min + 1e-12";
    entries.push_back(entry);

    CheckReport::Table table;
    table.name = "risk_curve_" + std::to_string(i);
    table.columns = {"t", "alpha", "beta", "risk"};
    for (const RiskPoint& pt : curve.points) {
      table.rows.push_back({pt.threshold, pt.alpha, pt.beta, pt.risk});
    }
    out.tables.push_back(std::move(table));
  }
  out.results["risk_specs"] = entries;

  if (c.raw.contains("levels")) {
    // Consistency with the Type I Markov bound: rejecting when B10 >= 1/a
    // must have exact size at most a.
    json rows = json::array();
    for (Real level : parse_levels(c)) {
      const ThresholdRule rule{1.0 / level, TiePolicy::RejectOnTie};
      const ErrorRates rates = error_rates(spec, rule, method);
      const bool pass = rates.alpha <= level;
      all_pass = all_pass && pass;
      rows.push_back(json{{"level", level},
                          {"alpha", rates.alpha},
                          {"pass", pass},
                          {"decision_rule", "alpha at t = 1/level <= level"}});
    }
    out.results["markov_cross_check"] = rows;
  }
  set_status(out, all_pass);
}

void run_mixture_certification(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const Index n = parse_n(c);
  const Method method = parse_method_field(c);
  const MomentReport r = as_config("$", [&] {
    return mixture_certification_check(null_model, mix, n, method);
  });
  out.results["moment"] = moment_json(r);
  out.results["method"] = method_name(method);
  set_status(out, r.pass);
}

void run_composite_type2(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const Index n = parse_n(c);
  const Method method = parse_method_field(c);
  const std::vector<Real> levels = parse_levels(c);
  json bounds = json::array();
  bool all_pass = true;
  for (Real beta : levels) {
    const BoundReport b = as_config("$", [&] {
      return composite_type2_check(null_model, mix, n, beta, method);
    });
    all_pass = all_pass && b.pass;
    bounds.push_back(bound_json(b));
  }
  out.results["bounds"] = bounds;
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

void run_pointwise_type2(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const Index n = parse_n(c);
  const Method method = parse_method_field(c);
  const Real beta = require_real(c.raw, "beta", "$");
  if (!(beta > 0.0 && beta < 1.0)) fail("$.beta", "must lie in (0, 1)");
  const std::vector<Real> theta_grid =
      require_real_array(c.raw, "theta_grid", "$");

  const BoundReport mixture_bound = as_config("$", [&] {
    return composite_type2_check(null_model, mix, n, beta, method);
  });

  json rows = json::array();
  CheckReport::Table table;
  table.name = "pointwise";
  table.columns = {"theta", "exceedance", "level", "violates"};
  bool violation_found = false;
  for (Real t : theta_grid) {
    const Vector theta = Vector::Constant(1, t);
    const BoundReport b = as_config("$.theta_grid", [&] {
      return pointwise_type2_exceedance(null_model, mix, theta, n, beta,
                                        method);
    });
    const bool violates = !b.pass;
    violation_found = violation_found || violates;
    rows.push_back(json{{"theta", t},
                        {"exceedance", b.estimate},
                        {"ci_upper", b.ci_upper},
                        {"level", beta},
                        {"violates", violates}});
    table.rows.push_back({t, b.estimate, beta, violates ? 1.0 : 0.0});
  }
  out.tables.push_back(std::move(table));
  out.results["mixture_bound"] = bound_json(mixture_bound);
  out.results["pointwise"] = rows;
  out.results["violation_found"] = violation_found;
  out.results["decision_rule"] =
      "mixture-level bound holds AND some fixed theta exceeds the level "
      "(the bound is a statement about the mixture, not any single theta)";
  set_status(out, mixture_bound.pass && violation_found);
}

void run_expansion(const ExperimentConfig& c, CheckReport& out) {
  const Model theta1 = parse_model_field(c, "theta1");
  const Model theta0 = parse_model_field(c, "null");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const std::vector<Index> n_grid = parse_index_array(c, "n_grid");
  const Method method = parse_method_field(c);
  const bool use_closed_form = bool_or(c.raw, "closed_form", "$", false);
  const bool assert_shrinkage = bool_or(c.raw, "assert_shrinkage", "$", false);

  const ConvergenceReport report = as_config("$", [&] {
    return convergence_report(theta1, theta0, mix, n_grid, method);
  });

  bool all_pass = true;
  bool any_assert = false;
  json rows = json::array();
  CheckReport::Table table;
  table.name = "convergence";
  table.columns = {"n", "empirical", "se", "predicted", "gap"};
  for (const ConvergenceRow& row : report.rows) {
    json entry;
    entry["n"] = row.n;
    entry["empirical"] = row.empirical;
    entry["std_error"] = row.std_error;
    entry["predicted"] = row.predicted;
    entry["gap"] = row.gap;
    const ExpansionPrediction pred =
        expansion_prediction(theta1, theta0, mix, row.n);
    entry["kl_term"] = pred.kl_term;
    entry["log_n_term"] = pred.log_n_term;
    entry["constant_term"] = pred.constant_term;
    if (use_closed_form) {
      any_assert = true;
      const Real oracle = as_config("$.closed_form", [&] {
        return gaussian_expected_log_ratio(theta1, theta0, mix, row.n);
      });
      entry["closed_form"] = oracle;
      const Real tol =
          row.std_error > 0.0 ? 4.0 * row.std_error : kExactMomentTol;
      const bool pass = std::abs(row.empirical - oracle) <= tol;
      entry["closed_form_pass"] = pass;
      all_pass = all_pass && pass;
    }
    rows.push_back(entry);
    table.rows.push_back({static_cast<Real>(row.n), row.empirical,
                          row.std_error, row.predicted, row.gap});
  }
  out.tables.push_back(std::move(table));
  out.results["rows"] = rows;
  out.results["method"] = method_name(method);

  if (assert_shrinkage) {
    any_assert = true;
    const ConvergenceRow& first = report.rows.front();
    const ConvergenceRow& last = report.rows.back();
    const Real combined_se = std::sqrt(first.std_error * first.std_error +
                                       last.std_error * last.std_error);
    const Real shrink = std::abs(first.gap) - std::abs(last.gap);
    const bool pass = shrink > 2.0 * combined_se;
    out.results["shrinkage"] =
        json{{"gap_first", first.gap},
             {"gap_last", last.gap},
             {"combined_se", combined_se},
             {"shrink", shrink},
             {"pass", pass},
             {"decision_rule",
              "|gap(first n)| - |gap(last n)| > 2 * combined std errors"}};
    all_pass = all_pass && pass;
  }
  out.status = any_assert ? (all_pass ? CheckStatus::Pass : CheckStatus::Fail)
                          : CheckStatus::ReportOnly;
}

void run_redundancy_growth(const ExperimentConfig& c, CheckReport& out) {
  const Model theta = parse_model_field(c, "theta");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const std::vector<Index> n_grid = parse_index_array(c, "n_grid");
  const bool closed_form = bool_or(c.raw, "closed_form", "$", false);
  const Real d = static_cast<Real>(theta.dim());

  std::vector<Real> band;
  if (c.raw.contains("band")) {
    band = require_real_array(c.raw, "band", "$");
    if (band.size() != 2 || !(band[0] <= band[1])) {
      fail("$.band", "must be [lo, hi] with lo <= hi");
    }
  }

  std::optional<Method> method;
  if (!closed_form) method = parse_method_field(c);

  bool all_pass = true;
  json rows = json::array();
  CheckReport::Table table;
  table.name = "redundancy";
  table.columns = {"n", "empirical", "se", "predicted", "gap"};
  for (Index n : n_grid) {
    Estimate est;
    if (closed_form) {
      est.value = as_config("$.closed_form", [&] {
        return gaussian_redundancy(theta, mix, n);
      });
      est.exact = true;
    } else {
      Method row_method = *method;
      if (auto* mc = std::get_if<MonteCarlo>(&row_method)) {
        mc->seed = derive_seed(mc->seed, static_cast<std::uint64_t>(n));
      }
      est = as_config("$", [&] { return redundancy(theta, mix, n, row_method); });
    }
    const Real predicted = 0.5 * d * std::log(static_cast<Real>(n));
    const Real gap = est.value - predicted;
    json entry;
    entry["n"] = n;
    entry["redundancy"] = est.value;
    entry["std_error"] = est.std_error;
    entry["predicted"] = predicted;
    entry["gap"] = gap;
    if (!band.empty()) {
      const bool pass = gap >= band[0] && gap <= band[1];
      entry["band_pass"] = pass;
      all_pass = all_pass && pass;
    }
    rows.push_back(entry);
    table.rows.push_back({static_cast<Real>(n), est.value, est.std_error,
                          predicted, gap});
  }
  out.tables.push_back(std::move(table));
  out.results["rows"] = rows;
  if (!band.empty()) {
    out.results["band"] = json{{"lo", band[0]}, {"hi", band[1]}};
    out.results["decision_rule"] =
        "redundancy - (d/2) log n inside the frozen band at every n";
    set_status(out, all_pass);
  } else {
    out.status = CheckStatus::ReportOnly;
  }
}

void run_stepwise_moments(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const Alternative alt = parse_alt_field(c, "alt");
  const Index t_max = parse_n(c, "t_max");
  const Method method = parse_method_field(c);
  const auto rows = as_config("$", [&] {
    return stepwise_moment_check(null_model, alt, t_max, method);
  });
  bool all_pass = true;
  json entries = json::array();
  for (const StepwiseMomentRow& row : rows) {
    all_pass = all_pass && row.for_null.pass && row.for_alt.pass;
    entries.push_back(json{{"t", row.t},
                           {"for_null", moment_json(row.for_null)},
                           {"for_alt", moment_json(row.for_alt)}});
  }
  out.results["steps"] = entries;
  if (const auto* point = std::get_if<Model>(&alt)) {
    const MomentReport analytic = as_config("$", [&] {
      return one_step_moment_check(null_model, *point);
    });
    out.results["analytic_one_step"] = moment_json(analytic);
    all_pass = all_pass && analytic.pass;
  }
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

void run_optional_stopping(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const Alternative alt = parse_alt_field(c, "alt");
  const Real alpha = require_real(c.raw, "alpha", "$");
  const Index t_max = parse_n(c, "t_max");
  const std::size_t reps = parse_reps(c);
  const BoundReport b = as_config("$", [&] {
    return optional_stopping_check(null_model, alt, alpha, t_max, reps,
                                   c.master_seed);
  });
  out.results["bound"] = bound_json(b);
  out.results["crossing_log_threshold"] = -std::log(alpha);
  out.results["t_max"] = t_max;
  set_status(out, b.pass);
}

void run_kl_rate(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const Model alt = parse_model_field(c, "alt");
  const Index t_max = parse_n(c, "t_max");
  const std::size_t reps = parse_reps(c);
  std::vector<Index> checkpoints;
  if (c.raw.contains("checkpoints")) {
    checkpoints = parse_index_array(c, "checkpoints");
  }
  const RateReport report = as_config("$", [&] {
    return kl_rate_check(null_model, alt, t_max, reps, c.master_seed,
                         checkpoints);
  });

  json rows = json::array();
  CheckReport::Table table;
  table.name = "rate";
  table.columns = {"t", "mean_rate", "se_rate"};
  for (const RateCheckpoint& cp : report.checkpoints) {
    rows.push_back(json{{"t", cp.t},
                        {"mean_rate", cp.mean_rate},
                        {"se_rate", cp.se_rate}});
    table.rows.push_back({static_cast<Real>(cp.t), cp.mean_rate, cp.se_rate});
  }
  out.tables.push_back(std::move(table));
  out.results["checkpoints"] = rows;
  out.results["target_kl"] = report.target_kl;
  out.results["band_halfwidth"] = report.band_halfwidth;
  out.results["within_band_fraction"] = report.within_band_fraction;
  out.results["reps"] = report.reps;

  bool any_assert = false;
  bool all_pass = true;
  if (c.raw.contains("assert_mean_within_relative")) {
    any_assert = true;
    const Real rel = require_real(c.raw, "assert_mean_within_relative", "$");
    const Real final_mean = report.checkpoints.back().mean_rate;
    const bool pass =
        std::abs(final_mean - report.target_kl) <= rel * report.target_kl;
    out.results["mean_within"] =
        json{{"relative_tolerance", rel},
             {"final_mean_rate", final_mean},
             {"pass", pass},
             {"decision_rule",
              "|mean rate at t_max - kl| <= relative_tolerance * kl"}};
    all_pass = all_pass && pass;
  }
  if (c.raw.contains("min_within_band_fraction")) {
    any_assert = true;
    const Real min_frac = require_real(c.raw, "min_within_band_fraction", "$");
    const bool pass = report.within_band_fraction >= min_frac;
    out.results["band_fraction"] =
        json{{"minimum", min_frac},
             {"observed", report.within_band_fraction},
             {"pass", pass},
             {"decision_rule",
              "fraction of paths with |rate - kl| <= 0.1 kl at t_max >= minimum"}};
    all_pass = all_pass && pass;
  }
  out.status = any_assert ? (all_pass ? CheckStatus::Pass : CheckStatus::Fail)
                          : CheckStatus::ReportOnly;
}

void run_forecaster_collapse(const ExperimentConfig& c, CheckReport& out) {
  const Model competitor = parse_model_field(c, "competitor");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const Model data_law = parse_model_field(c, "data_law");
  const Index t_max = parse_n(c, "t_max");
  const std::size_t reps = parse_reps(c);
  const SupermartingaleReport report = as_config("$", [&] {
    return forecaster_collapse_check(competitor, mix, data_law, t_max, reps,
                                     c.master_seed);
  });

  out.results["median_terminal"] = report.median_terminal;
  out.results["paths_ending_negative"] = report.paths_ending_negative;
  out.results["reps"] = report.reps;
  out.results["t_max"] = report.t_max;
  out.results["max_over_paths"] = report.max_over_paths;
  out.results["terminal"] = report.terminal;

  CheckReport::Table increments;
  increments.name = "increments";
  increments.columns = {"t", "mean_increment", "se_increment"};
  for (std::size_t t = 0; t < report.mean_increment.size(); ++t) {
    increments.rows.push_back({static_cast<Real>(t + 1),
                               report.mean_increment[t],
                               report.se_increment[t]});
  }
  out.tables.push_back(std::move(increments));
  CheckReport::Table terminals;
  terminals.name = "terminal";
  terminals.columns = {"path", "terminal"};
  for (std::size_t i = 0; i < report.terminal.size(); ++i) {
    terminals.rows.push_back({static_cast<Real>(i), report.terminal[i]});
  }
  out.tables.push_back(std::move(terminals));

  bool any_assert = false;
  bool all_pass = true;
  if (bool_or(c.raw, "require_all_terminal_negative", "$", false)) {
    any_assert = true;
    const bool pass = report.paths_ending_negative == report.reps;
    out.results["all_terminal_negative"] =
        json{{"pass", pass},
             {"decision_rule", "terminal log ratio < 0 on every path"}};
    all_pass = all_pass && pass;
  }
  if (c.raw.contains("median_below")) {
    any_assert = true;
    const Real threshold = require_real(c.raw, "median_below", "$");
    const bool pass = report.median_terminal < threshold;
    out.results["median_check"] =
        json{{"threshold", threshold},
             {"median", report.median_terminal},
             {"pass", pass},
             {"decision_rule", "median terminal log ratio < threshold"}};
    all_pass = all_pass && pass;
  }
  out.status = any_assert ? (all_pass ? CheckStatus::Pass : CheckStatus::Fail)
                          : CheckStatus::ReportOnly;
}

void run_eprocess_trace(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const Alternative alt = parse_alt_field(c, "alt");
  const Model truth = parse_model_field(c, "truth");
  const StoppingRule rule =
      parse_stopping(require_field(c.raw, "stopping", "$"), "stopping");
  const std::int64_t paths = int_or(c.raw, "paths", "$", 1);
  if (paths < 1 || paths > 10000) fail("$.paths", "must lie in [1, 10000]");

  json rows = json::array();
  for (std::int64_t p = 0; p < paths; ++p) {
    const EProcessTrace trace = as_config("$", [&] {
      return run_eprocess(null_model, alt, truth, rule,
                          derive_seed(c.master_seed,
                                      static_cast<std::uint64_t>(p)));
    });
    rows.push_back(json{
        {"path", p},
        {"stop_time", trace.stop_time},
        {"stop_reason", trace.stop_reason == StopReason::ThresholdCrossed
                            ? "threshold_crossed"
                            : "horizon_reached"},
        {"final_log_b10",
         trace.log_b10.empty() ? 0.0 : trace.log_b10.back()}});
    CheckReport::Table table;
    table.name = "trace_" + std::to_string(p);
    table.columns = {"t", "log_b"};
    for (std::size_t t = 0; t < trace.log_b10.size(); ++t) {
      table.rows.push_back({static_cast<Real>(t + 1), trace.log_b10[t]});
    }
    out.tables.push_back(std::move(table));
  }
  out.results["paths"] = rows;
  out.status = CheckStatus::ReportOnly;
}

void run_three_level(const ExperimentConfig& c, CheckReport& out) {
  const Model null_model = parse_model_field(c, "null");
  const Model simple_alt = parse_model_field(c, "simple_alt");
  const MixtureAlternative mix = parse_mixture_field(c, "alt");
  const Index n = parse_n(c);
  const Method method = parse_method_field(c);
  const std::vector<Real> levels = parse_levels(c);

  bool all_pass = true;
  json simple = json::array();
  json mixture = json::array();
  for (Real beta : levels) {
    const BoundReport bs = as_config("$", [&] {
      return markov_bound_check(EValueSpec{null_model, simple_alt, n},
                                Direction::ForAlt, beta, method);
    });
    all_pass = all_pass && bs.pass;
    simple.push_back(bound_json(bs));
    const BoundReport bm = as_config("$", [&] {
      return composite_type2_check(null_model, mix, n, beta, method);
    });
    all_pass = all_pass && bm.pass;
    mixture.push_back(bound_json(bm));
  }

  // Rate row: how fast the Type II certificate accumulates per observation.
  json rate;
  rate["n"] = n;
  rate["kl"] = kl_divergence(simple_alt, null_model);
  const Estimate est = as_config("$", [&] {
    return expected_log_ratio(simple_alt, null_model, mix, n, method);
  });
  rate["expected_log_ratio"] = est.value;
  rate["std_error"] = est.std_error;
  rate["per_observation"] = est.value / static_cast<Real>(n);
  if (!std::holds_alternative<GridPrior>(mix.prior)) {
    const ExpansionPrediction pred =
        expansion_prediction(simple_alt, null_model, mix, n);
    rate["predicted"] = pred.total;
  }

  out.results["simple"] = simple;
  out.results["mixture"] = mixture;
  out.results["rate"] = rate;
  out.results["method"] = method_name(method);
  set_status(out, all_pass);
}

using Runner = std::function<void(const ExperimentConfig&, CheckReport&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r = {
      {"unit_moment", run_unit_moment},
      {"dual_markov", run_dual_markov},
      {"markov_bound", run_markov_bound},
      {"bayes_risk", run_bayes_risk},
      {"mixture_certification", run_mixture_certification},
      {"composite_type2", run_composite_type2},
      {"pointwise_type2", run_pointwise_type2},
      {"expansion", run_expansion},
      {"redundancy_growth", run_redundancy_growth},
      {"stepwise_moments", run_stepwise_moments},
      {"optional_stopping", run_optional_stopping},
      {"kl_rate", run_kl_rate},
      {"forecaster_collapse", run_forecaster_collapse},
      {"eprocess_trace", run_eprocess_trace},
      {"three_level", run_three_level},
  };
  return r;
}

}  // namespace

CheckReport run(const ExperimentConfig& config) {
  const auto it = registry().find(config.check);
  if (it == registry().end()) {
    std::string names;
    for (const std::string& name : known_checks()) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw ConfigError("config error at $.check: unknown check '" +
                      config.check + "' (known: " + names + ")");
  }
  CheckReport out;
  out.check = config.check;
  out.seed = config.master_seed;
  out.config_echo = config.raw;
  const auto start = std::chrono::steady_clock::now();
  it->second(config, out);
  const auto stop = std::chrono::steady_clock::now();
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return out;
}

std::vector<std::string> known_checks() {
  std::vector<std::string> names;
  names.reserve(registry().size());
  for (const auto& [name, runner] : registry()) names.push_back(name);
  return names;
}

const std::map<std::string, std::vector<std::string>>& subcommand_checks() {
  static const std::map<std::string, std::vector<std::string>> map = {
      {"verify-markov", {"unit_moment", "dual_markov", "markov_bound"}},
      {"bayes-risk", {"bayes_risk"}},
      {"composite",
       {"mixture_certification", "composite_type2", "pointwise_type2",
        "three_level"}},
      {"redundancy", {"expansion", "redundancy_growth"}},
      {"sequential",
       {"stepwise_moments", "optional_stopping", "kl_rate",
        "forecaster_collapse", "eprocess_trace"}},
  };
  return map;
}

int exit_code(CheckStatus status) {
  return status == CheckStatus::Fail ? 1 : 0;
}

}  // namespace evd
