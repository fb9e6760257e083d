#include "evd/decision.hpp"

#include "evd/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evd {

namespace {

[[noreturn]] void bad_decision(const std::string& what) {
  throw std::invalid_argument("decision: " + what);
}

bool rejects(Real log_b10, Real log_threshold, TiePolicy tie) {
  return tie == TiePolicy::RejectOnTie ? log_b10 >= log_threshold
                                       : log_b10 > log_threshold;
}

struct Atom {
  Real log_lr = 0.0;
  Real p0 = 0.0;  // null mass on the atom
  Real p1 = 0.0;  // alternative (marginal) mass on the atom
};

}  // namespace

void validate(const RiskSpec& spec) {
  if (!(spec.pi0 > 0.0) || !(spec.pi1 > 0.0)) {
    bad_decision("prior weights must be strictly positive");
  }
  if (std::abs(spec.pi0 + spec.pi1 - 1.0) > 1e-12) {
    bad_decision("prior weights must sum to 1");
  }
  if (!(spec.cost_type1 > 0.0) || !(spec.cost_type2 > 0.0)) {
    bad_decision("error costs must be strictly positive");
  }
}

Real optimal_threshold(const RiskSpec& spec) {
  validate(spec);
  return spec.pi0 * spec.cost_type1 / (spec.pi1 * spec.cost_type2);
}

ErrorRates error_rates(const EValueSpec& spec, const ThresholdRule& rule,
                       const Method& method) {
  validate(spec);
  if (!(rule.threshold > 0.0) || !std::isfinite(rule.threshold)) {
    bad_decision("threshold must be positive and finite");
  }
  const Real log_t = std::log(rule.threshold);

  if (const auto* en = std::get_if<Enumerate>(&method)) {
    NeumaierSum alpha;
    NeumaierSum beta;
    for_each_outcome(spec.null_model.family, spec.n,
                     [&](const Dataset& x) {
                       const Real lb = log_bayes_factor(spec, x);
                       if (rejects(lb, log_t, rule.tie)) {
                         alpha.add(std::exp(log_density(spec.null_model, x)));
                       } else {
                         beta.add(std::exp(alternative_log_density(spec.alt, x)));
                       }
                     },
                     en->cap);
    return ErrorRates{alpha.value(), beta.value()};
  }

  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.reps == 0) bad_decision("monte carlo needs at least one replicate");
  std::uint64_t reject_null = 0;
  std::uint64_t accept_alt = 0;
  for (std::size_t i = 0; i < mc.reps; ++i) {
    // Null replicates use substreams [0, reps), alternative replicates
    // [reps, 2*reps), so the two estimates are independent.
    Stream null_stream = Stream::substream(mc.seed, i);
    const Dataset x0 = sample(spec.null_model, null_stream, spec.n);
    if (rejects(log_bayes_factor(spec, x0), log_t, rule.tie)) ++reject_null;

    Stream alt_stream = Stream::substream(mc.seed, mc.reps + i);
    const Dataset x1 = sample_alternative(spec.alt, alt_stream, spec.n);
    if (!rejects(log_bayes_factor(spec, x1), log_t, rule.tie)) ++accept_alt;
  }
  const Real reps = static_cast<Real>(mc.reps);
  return ErrorRates{static_cast<Real>(reject_null) / reps,
                    static_cast<Real>(accept_alt) / reps};
}

Real bayes_risk(const RiskSpec& spec, const ErrorRates& rates) {
  validate(spec);
  return spec.pi0 * spec.cost_type1 * rates.alpha +
         spec.pi1 * spec.cost_type2 * rates.beta;
}

bool ArgminInterval::contains(Real t) const {
  if (!(t > 0.0)) return false;
  if (lo == hi && !lo_is_zero && !hi_unbounded) return t == lo;  // grid point
  const bool above = lo_is_zero || t > lo;
  const bool below = hi_unbounded || t <= hi;
  return above && below;
}

bool RiskCurve::argmin_contains(Real t) const {
  return std::any_of(argmin.begin(), argmin.end(),
                     [&](const ArgminInterval& iv) { return iv.contains(t); });
}

RiskCurve threshold_sweep(const EValueSpec& spec, const RiskSpec& risk,
                          const Method& method, TiePolicy tie) {
  validate(spec);
  validate(risk);
  const auto* en = std::get_if<Enumerate>(&method);
  if (en == nullptr) {
    bad_decision("threshold_sweep requires enumeration; "
                 "use threshold_sweep_grid for monte carlo");
  }

  // Gather the exact likelihood-ratio distribution under both hypotheses.
  std::vector<std::pair<Real, std::pair<Real, Real>>> outcomes;
  for_each_outcome(spec.null_model.family, spec.n,
                   [&](const Dataset& x) {
                     outcomes.emplace_back(
                         log_bayes_factor(spec, x),
                         std::make_pair(
                             std::exp(log_density(spec.null_model, x)),
                             std::exp(alternative_log_density(spec.alt, x))));
                   },
                   en->cap);
  std::sort(outcomes.begin(), outcomes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Bernoulli log densities are computed from sufficient statistics, so
  // outcomes sharing an atom carry bit-identical log ratios and exact
  // equality grouping is sound.
  std::vector<Atom> atoms;
  for (const auto& [lb, mass] : outcomes) {
    if (atoms.empty() || atoms.back().log_lr != lb) {
      atoms.push_back(Atom{lb, 0.0, 0.0});
    }
    atoms.back().p0 += mass.first;
    atoms.back().p1 += mass.second;
  }
  const std::size_t k_atoms = atoms.size();

  // suffix_p0[d] = P_null(atom index >= d); prefix_p1[d] = P_alt(index < d).
  // Decision d rejects exactly the atoms with index >= d, d in [0, k_atoms].
  std::vector<Real> suffix_p0(k_atoms + 1, 0.0);
  std::vector<Real> prefix_p1(k_atoms + 1, 0.0);
  {
    NeumaierSum acc;
    for (std::size_t d = k_atoms; d-- > 0;) {
      acc.add(atoms[d].p0);
      suffix_p0[d] = acc.value();
    }
  }
  {
    NeumaierSum acc;
    for (std::size_t d = 0; d < k_atoms; ++d) {
      acc.add(atoms[d].p1);
      prefix_p1[d + 1] = acc.value();
    }
  }

  const auto decision_risk = [&](std::size_t d) {
    return bayes_risk(risk, ErrorRates{suffix_p0[d], prefix_p1[d]});
  };

  // Sweep thresholds in log space: every atom, midpoints of consecutive
  // atoms, and sentinels beyond both ends. Each sweep point maps to the
  // decision index it induces under the tie policy.
  struct SweepPoint {
    Real log_t;
    std::size_t decision;
  };
  std::vector<SweepPoint> sweep;
  sweep.reserve(2 * k_atoms + 2);
  sweep.push_back({atoms.front().log_lr - kLn2, 0});
  for (std::size_t k = 0; k < k_atoms; ++k) {
    const std::size_t at_atom = tie == TiePolicy::RejectOnTie ? k : k + 1;
    sweep.push_back({atoms[k].log_lr, at_atom});
    if (k + 1 < k_atoms) {
      const Real log_mid =
          log_sum_exp(atoms[k].log_lr, atoms[k + 1].log_lr) - kLn2;
      sweep.push_back({log_mid, k + 1});
    }
  }
  sweep.push_back({atoms.back().log_lr + kLn2, k_atoms});

  RiskCurve curve;
  curve.atoms.reserve(k_atoms);
  for (const Atom& a : atoms) curve.atoms.push_back(std::exp(a.log_lr));
  curve.points.reserve(sweep.size());
  Real min_risk = std::numeric_limits<Real>::infinity();
  for (const SweepPoint& sp : sweep) {
    RiskPoint pt;
    pt.log_threshold = sp.log_t;
    pt.threshold = std::exp(sp.log_t);
    pt.alpha = suffix_p0[sp.decision];
    pt.beta = prefix_p1[sp.decision];
    pt.risk = decision_risk(sp.decision);
    min_risk = std::min(min_risk, pt.risk);
    curve.points.push_back(pt);
  }
  curve.min_risk = min_risk;

  // Collect the risk-minimizing decisions and convert consecutive runs into
  // threshold intervals: decision d corresponds to (atom_{d-1}, atom_d]
  // under RejectOnTie (with the obvious unbounded forms at the ends).
  std::vector<std::size_t> best;
  for (std::size_t d = 0; d <= k_atoms; ++d) {
    if (decision_risk(d) == min_risk) best.push_back(d);
  }
  for (std::size_t i = 0; i < best.size();) {
    std::size_t j = i;
    while (j + 1 < best.size() && best[j + 1] == best[j] + 1) ++j;
    ArgminInterval iv;
    if (best[i] == 0) {
      iv.lo_is_zero = true;
    } else {
      iv.lo = std::exp(atoms[best[i] - 1].log_lr);
    }
    if (best[j] == k_atoms) {
      iv.hi_unbounded = true;
      iv.hi = std::numeric_limits<Real>::infinity();
    } else {
      iv.hi = std::exp(atoms[best[j]].log_lr);
    }
    curve.argmin.push_back(iv);
    i = j + 1;
  }
  return curve;
}

RiskCurve threshold_sweep_grid(const EValueSpec& spec, const RiskSpec& risk,
                               const std::vector<Real>& thresholds,
                               const MonteCarlo& mc, TiePolicy tie) {
  validate(spec);
  validate(risk);
  if (thresholds.empty()) bad_decision("threshold grid is empty");
  for (Real t : thresholds) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      bad_decision("grid thresholds must be positive and finite");
    }
  }
  if (mc.reps == 0) bad_decision("monte carlo needs at least one replicate");

  std::vector<Real> null_lb;
  std::vector<Real> alt_lb;
  null_lb.reserve(mc.reps);
  alt_lb.reserve(mc.reps);
  for (std::size_t i = 0; i < mc.reps; ++i) {
    Stream null_stream = Stream::substream(mc.seed, i);
    null_lb.push_back(
        log_bayes_factor(spec, sample(spec.null_model, null_stream, spec.n)));
    Stream alt_stream = Stream::substream(mc.seed, mc.reps + i);
    alt_lb.push_back(
        log_bayes_factor(spec, sample_alternative(spec.alt, alt_stream, spec.n)));
  }

  RiskCurve curve;
  curve.points.reserve(thresholds.size());
  Real min_risk = std::numeric_limits<Real>::infinity();
  for (Real t : thresholds) {
    const Real log_t = std::log(t);
    std::uint64_t reject_null = 0;
    std::uint64_t accept_alt = 0;
    for (Real lb : null_lb) {
      if (rejects(lb, log_t, tie)) ++reject_null;
    }
    for (Real lb : alt_lb) {
      if (!rejects(lb, log_t, tie)) ++accept_alt;
    }
    RiskPoint pt;
    pt.threshold = t;
    pt.log_threshold = log_t;
    pt.alpha = static_cast<Real>(reject_null) / static_cast<Real>(mc.reps);
    pt.beta = static_cast<Real>(accept_alt) / static_cast<Real>(mc.reps);
    pt.risk = bayes_risk(risk, ErrorRates{pt.alpha, pt.beta});
    min_risk = std::min(min_risk, pt.risk);
    curve.points.push_back(pt);
  }
  curve.min_risk = min_risk;
  for (const RiskPoint& pt : curve.points) {
    if (pt.risk == min_risk) {
      ArgminInterval iv;
      iv.lo = pt.threshold;
      iv.hi = pt.threshold;
      curve.argmin.push_back(iv);
    }
  }
  return curve;
}

}  // namespace evd
