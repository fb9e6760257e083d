#include "evd/evidence.hpp"

#include "evd/numeric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace evd {

namespace {

[[noreturn]] void bad_evidence(const std::string& what) {
  throw std::invalid_argument("evidence: " + what);
}

}  // namespace

Real alternative_log_density(const Alternative& alt, const Dataset& data) {
  if (const auto* m = std::get_if<Model>(&alt)) return log_density(*m, data);
  return marginal_log_likelihood(std::get<MixtureAlternative>(alt), data);
}

Family alternative_family(const Alternative& alt) {
  if (const auto* m = std::get_if<Model>(&alt)) return m->family;
  return std::get<MixtureAlternative>(alt).family;
}

Index alternative_dim(const Alternative& alt) {
  if (const auto* m = std::get_if<Model>(&alt)) return m->dim();
  return std::get<MixtureAlternative>(alt).dim();
}

void validate(const Alternative& alt) {
  if (const auto* m = std::get_if<Model>(&alt)) {
    validate(*m);
  } else {
    validate(std::get<MixtureAlternative>(alt));
  }
}

Dataset sample_alternative(const Alternative& alt, Stream& stream, Index n) {
  if (const auto* m = std::get_if<Model>(&alt)) return sample(*m, stream, n);
  return sample_hierarchical(std::get<MixtureAlternative>(alt), stream, n);
}

Certifier Certifier::null_measure(Model m) {
  validate(m);
  Certifier c;
  c.kind_ = Kind::Null;
  c.model_ = std::move(m);
  return c;
}

Certifier Certifier::simple_alt(Model m) {
  validate(m);
  Certifier c;
  c.kind_ = Kind::SimpleAlt;
  c.model_ = std::move(m);
  return c;
}

Certifier Certifier::mixture_alt(MixtureAlternative mix) {
  validate(mix);
  Certifier c;
  c.kind_ = Kind::MixtureAlt;
  c.mixture_ = std::move(mix);
  return c;
}

const Model& Certifier::model() const {
  if (!model_) bad_evidence("certifier holds a mixture, not a point model");
  return *model_;
}

const MixtureAlternative& Certifier::mixture() const {
  if (!mixture_) bad_evidence("certifier holds a point model, not a mixture");
  return *mixture_;
}

Real Certifier::log_weight(const Dataset& data) const {
  if (model_) return log_density(*model_, data);
  return marginal_log_likelihood(*mixture_, data);
}

Dataset Certifier::sample(Stream& stream, Index n) const {
  if (model_) return evd::sample(*model_, stream, n);
  return sample_hierarchical(*mixture_, stream, n);
}

Family Certifier::family() const {
  return model_ ? model_->family : mixture_->family;
}

std::string evidence_label_name(EvidenceLabel label) {
  return label == EvidenceLabel::B10 ? "B10" : "B01";
}

CertifiedEValue::CertifiedEValue(Real log_value, EvidenceLabel label,
                                 Certifier certifier)
    : log_value_(log_value), label_(label), certifier_(std::move(certifier)) {}

CertifiedEValue CertifiedEValue::make(Real log_value, EvidenceLabel label,
                                      Certifier certifier) {
  if (std::isnan(log_value)) bad_evidence("log value must not be NaN");
  const bool null_cert = certifier.kind() == Certifier::Kind::Null;
  if (label == EvidenceLabel::B10 && !null_cert) {
    bad_evidence("B10 is an e-value under the null measure only; "
                 "an alternative certifier pairs with B01");
  }
  if (label == EvidenceLabel::B01 && null_cert) {
    bad_evidence("B01 is an e-value under the alternative measure only; "
                 "a null certifier pairs with B10");
  }
  return CertifiedEValue(log_value, label, std::move(certifier));
}

Real CertifiedEValue::value() const { return std::exp(log_value_); }

Direction CertifiedEValue::controls() const {
  return label_ == EvidenceLabel::B10 ? Direction::ForNull : Direction::ForAlt;
}

void validate(const EValueSpec& spec) {
  validate(spec.null_model);
  validate(spec.alt);
  if (spec.n < 1) bad_evidence("sample size must be positive");
  if (alternative_family(spec.alt) != spec.null_model.family) {
    bad_evidence("null and alternative must share a sample space");
  }
  if (alternative_dim(spec.alt) != spec.null_model.dim()) {
    bad_evidence("null and alternative must agree on dimension");
  }
  if (const auto* m = std::get_if<Model>(&spec.alt)) {
    if (m->family == Family::GaussianKnownVar &&
        m->sigma2 != spec.null_model.sigma2) {
      bad_evidence("point alternative must share the known variance");
    }
  } else {
    const auto& mix = std::get<MixtureAlternative>(spec.alt);
    if (mix.family == Family::GaussianKnownVar &&
        mix.sigma2 != spec.null_model.sigma2) {
      bad_evidence("mixture alternative must share the known variance");
    }
  }
}

Real log_bayes_factor(const EValueSpec& spec, const Dataset& data) {
  return alternative_log_density(spec.alt, data) -
         log_density(spec.null_model, data);
}

CertifiedEValue certify(const EValueSpec& spec, const Dataset& data,
                        Direction direction) {
  validate(spec);
  const Real log_b10 = log_bayes_factor(spec, data);
  if (direction == Direction::ForNull) {
    return CertifiedEValue::make(log_b10, EvidenceLabel::B10,
                                 Certifier::null_measure(spec.null_model));
  }
  Certifier cert =
      std::holds_alternative<Model>(spec.alt)
          ? Certifier::simple_alt(std::get<Model>(spec.alt))
          : Certifier::mixture_alt(std::get<MixtureAlternative>(spec.alt));
  return CertifiedEValue::make(-log_b10, EvidenceLabel::B01, std::move(cert));
}

namespace {

Certifier certifying_measure(const EValueSpec& spec, Direction direction) {
  if (direction == Direction::ForNull) {
    return Certifier::null_measure(spec.null_model);
  }
  if (std::holds_alternative<Model>(spec.alt)) {
    return Certifier::simple_alt(std::get<Model>(spec.alt));
  }
  return Certifier::mixture_alt(std::get<MixtureAlternative>(spec.alt));
}

// Signed log e-value for the direction: +log B10 for ForNull, -log B10
// (= log B01) for ForAlt.
Real directed_log_value(const EValueSpec& spec, Direction direction,
                        const Dataset& data) {
  const Real log_b10 = log_bayes_factor(spec, data);
  return direction == Direction::ForNull ? log_b10 : -log_b10;
}

}  // namespace

MomentReport unit_moment_check(const EValueSpec& spec, Direction direction,
                               const Method& method) {
  validate(spec);
  const Certifier cert = certifying_measure(spec, direction);
  MomentReport report;
  report.direction = direction;

  if (const auto* en = std::get_if<Enumerate>(&method)) {
    NeumaierSum acc;
    std::size_t outcomes = 0;
    for_each_outcome(spec.null_model.family, spec.n,
                     [&](const Dataset& x) {
                       const Real lw = cert.log_weight(x);
                       const Real lv = directed_log_value(spec, direction, x);
                       acc.add(std::exp(lw + lv));
                       ++outcomes;
                     },
                     en->cap);
    report.mean = acc.value();
    report.std_error = 0.0;
    report.exact = true;
    report.count = outcomes;
    report.decision_rule = "|mean - 1| <= 1e-10";
    report.pass = std::abs(report.mean - 1.0) <= kExactMomentTol;
    return report;
  }

  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.reps < 2) bad_evidence("monte carlo needs at least two replicates");
  MeanAccumulator acc;
  for (std::size_t i = 0; i < mc.reps; ++i) {
    Stream stream = Stream::substream(mc.seed, i);
    const Dataset x = cert.sample(stream, spec.n);
    acc.add(std::exp(directed_log_value(spec, direction, x)));
  }
  report.mean = acc.mean();
  report.std_error = acc.std_error();
  report.exact = false;
  report.count = mc.reps;
  report.decision_rule = "|mean - 1| <= 4 * std_error";
  report.pass =
      std::abs(report.mean - 1.0) <= kMcMomentSigmas * report.std_error;
  return report;
}

BoundReport markov_bound_check(const EValueSpec& spec, Direction direction,
                               Real level, const Method& method) {
  validate(spec);
  if (!(level > 0.0 && level < 1.0)) {
    bad_evidence("bound level must lie in (0, 1)");
  }
  const Certifier cert = certifying_measure(spec, direction);
  // value >= 1/level  <=>  log_value >= -log(level); in log space the
  // comparison is exact for ties and +inf values.
  const Real log_threshold = -std::log(level);

  BoundReport report;
  report.direction = direction;
  report.level = level;
  report.threshold = 1.0 / level;

  if (const auto* en = std::get_if<Enumerate>(&method)) {
    NeumaierSum prob;
    std::size_t outcomes = 0;
    for_each_outcome(spec.null_model.family, spec.n,
                     [&](const Dataset& x) {
                       if (directed_log_value(spec, direction, x) >=
                           log_threshold) {
                         prob.add(std::exp(cert.log_weight(x)));
                       }
                       ++outcomes;
                     },
                     en->cap);
    report.estimate = prob.value();
    report.ci_upper = report.estimate;
    report.exact = true;
    report.count = outcomes;
    report.decision_rule = "exact P(value >= 1/level) <= level";
    report.pass = report.estimate <= level;
    return report;
  }

  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.reps == 0) bad_evidence("monte carlo needs at least one replicate");
  std::uint64_t exceed = 0;
  for (std::size_t i = 0; i < mc.reps; ++i) {
    Stream stream = Stream::substream(mc.seed, i);
    const Dataset x = cert.sample(stream, spec.n);
    if (directed_log_value(spec, direction, x) >= log_threshold) ++exceed;
  }
  report.estimate = static_cast<Real>(exceed) / static_cast<Real>(mc.reps);
  report.ci_upper =
      binomial_upper_confidence(exceed, mc.reps, kMcBoundConfidence);
  report.exact = false;
  report.count = mc.reps;
  report.decision_rule = "clopper-pearson 99% upper limit <= level";
  report.pass = report.ci_upper <= level;
  return report;
}

std::vector<BoundReport> markov_bound_checks(const EValueSpec& spec,
                                             Direction direction,
                                             const std::vector<Real>& levels,
                                             const Method& method) {
  std::vector<BoundReport> reports;
  reports.reserve(levels.size());
  for (Real level : levels) {
    reports.push_back(markov_bound_check(spec, direction, level, method));
  }
  return reports;
}

MomentReport mixture_certification_check(const Model& null_model,
                                         const MixtureAlternative& mix,
                                         Index n, const Method& method) {
  return unit_moment_check(EValueSpec{null_model, mix, n}, Direction::ForAlt,
                           method);
}

BoundReport composite_type2_check(const Model& null_model,
                                  const MixtureAlternative& mix, Index n,
                                  Real beta_level, const Method& method) {
  return markov_bound_check(EValueSpec{null_model, mix, n}, Direction::ForAlt,
                            beta_level, method);
}

BoundReport pointwise_type2_exceedance(const Model& null_model,
                                       const MixtureAlternative& mix,
                                       const Vector& theta, Index n,
                                       Real beta_level, const Method& method) {
  validate(null_model);
  validate(mix);
  if (!in_support(mix, theta)) {
    bad_evidence("pointwise theta must lie in the prior's support");
  }
  if (!(beta_level > 0.0 && beta_level < 1.0)) {
    bad_evidence("bound level must lie in (0, 1)");
  }
  const Model data_law = model_at(mix, theta);
  validate(data_law);
  const EValueSpec spec{null_model, mix, n};
  validate(spec);
  // P_theta(log B01 >= -log beta), with B01 = p0 / m1 as in the mixture
  // check, but probability taken under the fixed component P_theta.
  const Real log_threshold = -std::log(beta_level);

  BoundReport report;
  report.direction = Direction::ForAlt;
  report.level = beta_level;
  report.threshold = 1.0 / beta_level;

  if (const auto* en = std::get_if<Enumerate>(&method)) {
    NeumaierSum prob;
    std::size_t outcomes = 0;
    for_each_outcome(null_model.family, n,
                     [&](const Dataset& x) {
                       if (-log_bayes_factor(spec, x) >= log_threshold) {
                         prob.add(std::exp(log_density(data_law, x)));
                       }
                       ++outcomes;
                     },
                     en->cap);
    report.estimate = prob.value();
    report.ci_upper = report.estimate;
    report.exact = true;
    report.count = outcomes;
  } else {
    const auto& mc = std::get<MonteCarlo>(method);
    if (mc.reps == 0) bad_evidence("monte carlo needs at least one replicate");
    std::uint64_t exceed = 0;
    for (std::size_t i = 0; i < mc.reps; ++i) {
      Stream stream = Stream::substream(mc.seed, i);
      const Dataset x = sample(data_law, stream, n);
      if (-log_bayes_factor(spec, x) >= log_threshold) ++exceed;
    }
    report.estimate = static_cast<Real>(exceed) / static_cast<Real>(mc.reps);
    report.ci_upper =
        binomial_upper_confidence(exceed, mc.reps, kMcBoundConfidence);
    report.exact = false;
    report.count = mc.reps;
  }
  report.decision_rule =
      "informational: fixed-theta exceedance vs the mixture-level bound";
  report.pass = report.estimate <= beta_level;
  return report;
}

std::string method_name(const Method& m) {
  return std::holds_alternative<Enumerate>(m) ? "enumerate" : "monte_carlo";
}

std::string direction_name(Direction d) {
  return d == Direction::ForNull ? "for_null" : "for_alt";
}

Direction direction_from_name(const std::string& name) {
  if (name == "for_null") return Direction::ForNull;
  if (name == "for_alt") return Direction::ForAlt;
  throw std::invalid_argument("evidence: unknown direction '" + name + "'");
}

}  // namespace evd
