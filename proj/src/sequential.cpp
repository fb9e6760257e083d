#include "evd/sequential.hpp"

#include "evd/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evd {

namespace {

[[noreturn]] void bad_seq(const std::string& what) {
  throw std::invalid_argument("sequential: " + what);
}

void check_pair(const Model& null_model, const Alternative& alt) {
  validate(null_model);
  validate(alt);
  if (alternative_family(alt) != null_model.family ||
      alternative_dim(alt) != null_model.dim()) {
    bad_seq("null and alternative must share family and dimension");
  }
}

/// Streams the cumulative log B10 along one sampled path, calling
/// visit(t, log_b10_t, x_t) after each observation. Returns the number of
/// steps taken (visit returning false stops the walk early).
template <typename Visit>
Index walk_path(const Model& null_model, const Alternative& alt,
                const Model& truth, Index t_max, Stream& stream,
                Visit&& visit) {
  std::optional<PrefixMarginal> marginal;
  const Model* point_alt = std::get_if<Model>(&alt);
  if (point_alt == nullptr) {
    marginal.emplace(std::get<MixtureAlternative>(alt));
  }
  Real null_log = 0.0;
  Real alt_log = 0.0;
  for (Index t = 1; t <= t_max; ++t) {
    const Vector x = sample_row(truth, stream);
    null_log += log_density_row(null_model, x);
    if (point_alt != nullptr) {
      alt_log += log_density_row(*point_alt, x);
    } else {
      alt_log += marginal->append(x);
    }
    if (!visit(t, alt_log - null_log, x)) return t;
  }
  return t_max;
}

}  // namespace

StoppingRule StoppingRule::first_crossing(Real alpha, Index horizon_cap) {
  StoppingRule rule;
  rule.kind = Kind::FirstCrossing;
  rule.alpha = alpha;
  rule.horizon_cap = horizon_cap;
  validate(rule);
  return rule;
}

StoppingRule StoppingRule::fixed_horizon(Index horizon_cap) {
  StoppingRule rule;
  rule.kind = Kind::FixedHorizon;
  rule.horizon_cap = horizon_cap;
  validate(rule);
  return rule;
}

void validate(const StoppingRule& rule) {
  if (rule.horizon_cap < 1) bad_seq("horizon cap must be positive");
  if (rule.kind == StoppingRule::Kind::FirstCrossing &&
      !(rule.alpha > 0.0 && rule.alpha < 1.0)) {
    bad_seq("crossing level alpha must lie in (0, 1)");
  }
}

EProcessTrace run_eprocess(const Model& null_model, const Alternative& alt,
                           const Model& truth, const StoppingRule& rule,
                           Seed seed) {
  check_pair(null_model, alt);
  validate(truth);
  if (truth.family != null_model.family || truth.dim() != null_model.dim()) {
    bad_seq("data law must share the family and dimension");
  }
  validate(rule);

  const Real crossing =
      rule.kind == StoppingRule::Kind::FirstCrossing
          ? -std::log(rule.alpha)
          : std::numeric_limits<Real>::infinity();

  EProcessTrace trace;
  trace.log_b10.reserve(static_cast<std::size_t>(rule.horizon_cap));
  std::vector<Vector> rows;
  rows.reserve(static_cast<std::size_t>(rule.horizon_cap));

  Stream stream(seed);
  trace.stop_reason = StopReason::HorizonReached;
  trace.stop_time = walk_path(
      null_model, alt, truth, rule.horizon_cap, stream,
      [&](Index /*t*/, Real log_b, const Vector& x) {
        trace.log_b10.push_back(log_b);
        rows.push_back(x);
        if (log_b >= crossing) {
          trace.stop_reason = StopReason::ThresholdCrossed;
          return false;
        }
        return true;
      });

  trace.observations.obs.resize(static_cast<Index>(rows.size()),
                                null_model.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    trace.observations.obs.row(static_cast<Index>(i)) = rows[i].transpose();
  }
  return trace;
}

std::vector<StepwiseMomentRow> stepwise_moment_check(const Model& null_model,
                                                     const Alternative& alt,
                                                     Index t_max,
                                                     const Method& method) {
  check_pair(null_model, alt);
  if (t_max < 1) bad_seq("t_max must be positive");
  std::vector<StepwiseMomentRow> rows;
  rows.reserve(static_cast<std::size_t>(t_max));
  for (Index t = 1; t <= t_max; ++t) {
    EValueSpec spec{null_model, alt, t};
    Method step_method = method;
    if (auto* mc = std::get_if<MonteCarlo>(&step_method)) {
      mc->seed = derive_seed(mc->seed, static_cast<std::uint64_t>(t));
    }
    StepwiseMomentRow row;
    row.t = t;
    row.for_null = unit_moment_check(spec, Direction::ForNull, step_method);
    row.for_alt = unit_moment_check(spec, Direction::ForAlt, step_method);
    rows.push_back(std::move(row));
  }
  return rows;
}

MomentReport one_step_moment_check(const Model& null_model, const Model& alt,
                                   int quadrature_nodes) {
  validate(null_model);
  validate(alt);
  if (alt.family != null_model.family || alt.dim() != null_model.dim()) {
    bad_seq("null and alternative must share family and dimension");
  }
  MomentReport report;
  report.direction = Direction::ForNull;
  report.exact = true;
  report.std_error = 0.0;
  report.decision_rule = "|mean - 1| <= 1e-8";

  // E_null[B10(x)] = integral of p_alt; integrate the alternative density
  // per coordinate (the product law factorizes).
  switch (null_model.family) {
    case Family::Bernoulli: {
      const Real p1 = alt.theta[0];
      report.mean = p1 + (1.0 - p1);  // two-point sum, exact
      report.count = 2;
      break;
    }
    case Family::GaussianKnownVar: {
      const QuadratureNodes base = gauss_legendre(quadrature_nodes);
      Real log_total = 0.0;
      for (Index j = 0; j < alt.dim(); ++j) {
        const Real sd = std::sqrt(alt.sigma2);
        const QuadratureNodes rule = map_to_interval(
            base, alt.theta[j] - 10.0 * sd, alt.theta[j] + 10.0 * sd);
        Model marginal1 = Model::gaussian(Vector::Constant(1, alt.theta[j]),
                                          alt.sigma2);
        NeumaierSum acc;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
          const Vector x = Vector::Constant(1, rule.x[i]);
          acc.add(rule.w[i] * std::exp(log_density_row(marginal1, x)));
        }
        log_total += std::log(acc.value());
      }
      report.mean = std::exp(log_total);
      report.count = static_cast<std::size_t>(quadrature_nodes) *
                     static_cast<std::size_t>(alt.dim());
      break;
    }
    case Family::Exponential: {
      const Real rate = alt.theta[0];
      const QuadratureNodes rule =
          map_to_interval(gauss_legendre(quadrature_nodes), 0.0, 50.0 / rate);
      NeumaierSum acc;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const Vector x = Vector::Constant(1, rule.x[i]);
        acc.add(rule.w[i] * std::exp(log_density_row(alt, x)));
      }
      report.mean = acc.value();
      report.count = static_cast<std::size_t>(quadrature_nodes);
      break;
    }
  }
  report.pass = std::abs(report.mean - 1.0) <= 1e-8;
  return report;
}

BoundReport optional_stopping_check(const Model& null_model,
                                    const Alternative& alt, Real alpha,
                                    Index t_max, std::size_t reps, Seed seed) {
  check_pair(null_model, alt);
  if (!(alpha > 0.0 && alpha < 1.0)) bad_seq("alpha must lie in (0, 1)");
  if (t_max < 1) bad_seq("t_max must be positive");
  if (reps == 0) bad_seq("need at least one path");

  const Real crossing = -std::log(alpha);
  std::uint64_t crossed = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    Stream stream = Stream::substream(seed, i);
    walk_path(null_model, alt, null_model, t_max, stream,
              [&](Index, Real log_b, const Vector&) {
                if (log_b >= crossing) {
                  ++crossed;
                  return false;  // the sup already exceeded the threshold
                }
                return true;
              });
  }

  BoundReport report;
  report.direction = Direction::ForNull;
  report.level = alpha;
  report.threshold = 1.0 / alpha;
  report.estimate = static_cast<Real>(crossed) / static_cast<Real>(reps);
  report.ci_upper = binomial_upper_confidence(crossed, reps, kMcBoundConfidence);
  report.exact = false;
  report.count = reps;
  report.decision_rule =
      "clopper-pearson 99% upper limit of sup-crossing frequency <= alpha";
  report.pass = report.ci_upper <= alpha;
  return report;
}

RateReport kl_rate_check(const Model& null_model, const Model& alt,
                         Index t_max, std::size_t reps, Seed seed,
                         std::vector<Index> checkpoints) {
  check_pair(null_model, Alternative{alt});
  if (t_max < 1) bad_seq("t_max must be positive");
  if (reps < 2) bad_seq("need at least two paths");
  if (checkpoints.empty()) {
    for (Index c : {t_max / 4, t_max / 2, (3 * t_max) / 4, t_max}) {
      if (c >= 1) checkpoints.push_back(c);
    }
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());
  for (Index c : checkpoints) {
    if (c < 1 || c > t_max) bad_seq("checkpoints must lie in [1, t_max]");
  }

  const Real kl = kl_divergence(alt, null_model);
  const Real band = 0.1 * kl;
  std::vector<MeanAccumulator> acc(checkpoints.size());
  std::size_t within = 0;

  for (std::size_t i = 0; i < reps; ++i) {
    Stream stream = Stream::substream(seed, i);
    std::size_t next = 0;
    walk_path(null_model, Alternative{alt}, alt, t_max, stream,
              [&](Index t, Real log_b, const Vector&) {
                if (next < checkpoints.size() && t == checkpoints[next]) {
                  const Real rate = log_b / static_cast<Real>(t);
                  acc[next].add(rate);
                  if (t == t_max && std::abs(rate - kl) <= band) ++within;
                  ++next;
                }
                return true;
              });
  }

  RateReport report;
  report.target_kl = kl;
  report.band_halfwidth = band;
  report.reps = reps;
  report.t_max = t_max;
  report.within_band_fraction =
      static_cast<Real>(within) / static_cast<Real>(reps);
  report.checkpoints.reserve(checkpoints.size());
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    report.checkpoints.push_back(
        RateCheckpoint{checkpoints[c], acc[c].mean(), acc[c].std_error()});
  }
  return report;
}

SupermartingaleReport forecaster_collapse_check(const Model& competitor,
                                                const MixtureAlternative& mix,
                                                const Model& data_law,
                                                Index t_max, std::size_t reps,
                                                Seed seed) {
  validate(competitor);
  validate(mix);
  validate(data_law);
  if (competitor.family != mix.family || data_law.family != mix.family) {
    bad_seq("competitor, mixture and data law must share one family");
  }
  if (competitor.dim() != mix.dim() || data_law.dim() != mix.dim()) {
    bad_seq("competitor, mixture and data law must agree on dimension");
  }
  if (!in_support(mix, data_law.theta)) {
    bad_seq("data law parameter must lie in the prior's support");
  }
  if (t_max < 1) bad_seq("t_max must be positive");
  if (reps < 2) bad_seq("need at least two paths");

  std::vector<MeanAccumulator> inc(static_cast<std::size_t>(t_max));
  SupermartingaleReport report;
  report.reps = reps;
  report.t_max = t_max;
  report.terminal.reserve(reps);
  report.max_over_paths = -std::numeric_limits<Real>::infinity();

  for (std::size_t i = 0; i < reps; ++i) {
    Stream stream = Stream::substream(seed, i);
    PrefixMarginal prefix(mix);
    Real log_q = 0.0;
    Real ratio = 0.0;
    Real running_max = -std::numeric_limits<Real>::infinity();
    for (Index t = 1; t <= t_max; ++t) {
      const Vector x = sample_row(data_law, stream);
      log_q += log_density_row(competitor, x);
      prefix.append(x);
      const Real new_ratio = log_q - prefix.log_marginal();
      inc[static_cast<std::size_t>(t - 1)].add(new_ratio - ratio);
      ratio = new_ratio;
      running_max = std::max(running_max, ratio);
    }
    report.terminal.push_back(ratio);
    report.max_over_paths = std::max(report.max_over_paths, running_max);
    if (ratio < 0.0) ++report.paths_ending_negative;
  }

  report.mean_increment.reserve(inc.size());
  report.se_increment.reserve(inc.size());
  for (const MeanAccumulator& a : inc) {
    report.mean_increment.push_back(a.mean());
    report.se_increment.push_back(a.std_error());
  }
  std::vector<Real> sorted = report.terminal;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  report.median_terminal = sorted.size() % 2 == 1
                               ? sorted[mid]
                               : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return report;
}

}  // namespace evd
