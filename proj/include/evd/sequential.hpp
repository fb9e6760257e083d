#pragma once

#include "evd/composite.hpp"
#include "evd/evidence.hpp"
#include "evd/method.hpp"
#include "evd/models.hpp"
#include "evd/types.hpp"

#include <optional>
#include <vector>

namespace evd {

/// When to stop a sequential run. FirstCrossing stops as soon as
/// B10 >= 1/alpha (i.e. log B10 >= -log alpha); FixedHorizon always runs to
/// the cap. Both stop at `horizon_cap` at the latest.
struct StoppingRule {
  enum class Kind { FirstCrossing, FixedHorizon };
  Kind kind = Kind::FixedHorizon;
  Real alpha = 0.05;
  Index horizon_cap = 1000;

  static StoppingRule first_crossing(Real alpha, Index horizon_cap);
  static StoppingRule fixed_horizon(Index horizon_cap);
};

void validate(const StoppingRule& rule);

enum class StopReason { ThresholdCrossed, HorizonReached };

/// One sequential likelihood-ratio path: cumulative log B10 after each
/// observation, the data that produced it, and why it stopped.
struct EProcessTrace {
  std::vector<Real> log_b10;  // log_b10[t-1] = log B10(x^t)
  Dataset observations;
  Index stop_time = 0;
  StopReason stop_reason = StopReason::HorizonReached;
};

/// Run one trace with data drawn from `truth`. The alternative may be a
/// point model or a mixture (whose prefix marginal updates in O(1) per step).
EProcessTrace run_eprocess(const Model& null_model, const Alternative& alt,
                           const Model& truth, const StoppingRule& rule,
                           Seed seed);

struct StepwiseMomentRow {
  Index t = 0;
  MomentReport for_null;  // E_null[B10(x^t)] = 1
  MomentReport for_alt;   // E_cert[B01(x^t)] = 1
};

/// Unit-moment checks of the e-process at every time 1..t_max.
std::vector<StepwiseMomentRow> stepwise_moment_check(const Model& null_model,
                                                     const Alternative& alt,
                                                     Index t_max,
                                                     const Method& method);

/// One-step analytic moment: E_null[B10(x)] evaluated by an exact two-point
/// sum (Bernoulli) or Gauss-Legendre quadrature (continuous families).
MomentReport one_step_moment_check(const Model& null_model, const Model& alt,
                                   int quadrature_nodes = 512);

/// Ville / optional-stopping check: fraction of null-generated paths whose
/// running maximum of B10 ever reaches 1/alpha within t_max steps. Passes
/// when the one-sided 99% Clopper-Pearson upper limit is <= alpha.
BoundReport optional_stopping_check(const Model& null_model,
                                    const Alternative& alt, Real alpha,
                                    Index t_max, std::size_t reps, Seed seed);

struct RateCheckpoint {
  Index t = 0;
  Real mean_rate = 0.0;  // average over paths of (1/t) log B10(x^t)
  Real se_rate = 0.0;
};

struct RateReport {
  std::vector<RateCheckpoint> checkpoints;
  Real target_kl = 0.0;        // KL(alt || null)
  Real band_halfwidth = 0.0;   // 0.1 * KL
  Real within_band_fraction = 0.0;  // paths with |rate - KL| <= band at t_max
  std::size_t reps = 0;
  Index t_max = 0;
};

/// Strong-law check of the evidence-accumulation rate under the point
/// alternative: (1/t) log B10 should settle near KL(alt || null).
RateReport kl_rate_check(const Model& null_model, const Model& alt,
                         Index t_max, std::size_t reps, Seed seed,
                         std::vector<Index> checkpoints = {});

struct SupermartingaleReport {
  std::vector<Real> mean_increment;  // per step, averaged over paths
  std::vector<Real> se_increment;
  std::vector<Real> terminal;        // per path: log Q/R at t_max
  Real median_terminal = 0.0;
  Real max_over_paths = 0.0;         // largest running max of log Q/R seen
  std::size_t paths_ending_negative = 0;
  std::size_t reps = 0;
  Index t_max = 0;
};

/// Competing-forecaster check: for data drawn from a point theta in the
/// prior's support, log Q(x^t)/R(x^t) - the cumulative log score advantage
/// of the point competitor Q over the mixture forecaster R - has
/// nonpositive expected increments and collapses almost surely.
SupermartingaleReport forecaster_collapse_check(const Model& competitor,
                                                const MixtureAlternative& mix,
                                                const Model& data_law,
                                                Index t_max, std::size_t reps,
                                                Seed seed);

}  // namespace evd
