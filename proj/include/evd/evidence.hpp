#pragma once

#include "evd/composite.hpp"
#include "evd/method.hpp"
#include "evd/models.hpp"
#include "evd/types.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace evd {

/// The alternative hypothesis: either a simple point model or a prior
/// mixture over the family.
using Alternative = std::variant<Model, MixtureAlternative>;

Real alternative_log_density(const Alternative& alt, const Dataset& data);
Family alternative_family(const Alternative& alt);
Index alternative_dim(const Alternative& alt);
void validate(const Alternative& alt);

/// Draw data under the alternative (hierarchically for mixtures).
Dataset sample_alternative(const Alternative& alt, Stream& stream, Index n);

/// The measure under which an e-value's unit-mean property is certified.
class Certifier {
 public:
  enum class Kind { Null, SimpleAlt, MixtureAlt };

  static Certifier null_measure(Model m);
  static Certifier simple_alt(Model m);
  static Certifier mixture_alt(MixtureAlternative mix);

  Kind kind() const { return kind_; }
  const Model& model() const;                    // Null / SimpleAlt
  const MixtureAlternative& mixture() const;     // MixtureAlt

  /// Joint log mass/density of `data` under the certifying measure
  /// (marginal likelihood for mixtures).
  Real log_weight(const Dataset& data) const;

  Dataset sample(Stream& stream, Index n) const;
  Family family() const;

 private:
  Kind kind_ = Kind::Null;
  std::optional<Model> model_;
  std::optional<MixtureAlternative> mixture_;
};

/// Which Bayes factor orientation a value represents: B10 = p1/p0 (evidence
/// against the null), B01 = p0/m1 (evidence for the null).
enum class EvidenceLabel { B10, B01 };

std::string evidence_label_name(EvidenceLabel label);

/// An e-value stored in log space together with the measure certifying its
/// unit mean. Construction enforces the label/certifier pairing: B10 is an
/// e-value under the null, B01 under the (possibly mixture) alternative, and
/// any other combination is rejected.
class CertifiedEValue {
 public:
  static CertifiedEValue make(Real log_value, EvidenceLabel label,
                              Certifier certifier);

  Real log_value() const { return log_value_; }
  Real value() const;  // exp(log_value); may overflow to +inf, which is fine
  EvidenceLabel label() const { return label_; }
  const Certifier& certifier() const { return certifier_; }

  /// The error rate this e-value's Markov bound controls.
  Direction controls() const;

 private:
  CertifiedEValue(Real log_value, EvidenceLabel label, Certifier certifier);

  Real log_value_;
  EvidenceLabel label_;
  Certifier certifier_;
};

/// A fully specified testing problem at sample size n.
struct EValueSpec {
  Model null_model;
  Alternative alt;
  Index n = 1;
};

void validate(const EValueSpec& spec);

/// log B10(x^n) (= -log B01) under the given null/alternative pairing;
/// mixture alternatives use the marginal likelihood.
Real log_bayes_factor(const EValueSpec& spec, const Dataset& data);

/// Certify the likelihood-ratio e-value on concrete data in the requested
/// direction. ForNull yields B10 certified by the null; ForAlt yields B01
/// certified by the (mixture) alternative.
CertifiedEValue certify(const EValueSpec& spec, const Dataset& data,
                        Direction direction);

/// Checks E[B10] = 1 under the null (ForNull) or E[B01] = 1 under the
/// alternative's certifying measure (ForAlt). Enumeration passes when
/// |mean - 1| <= 1e-10; Monte Carlo when |mean - 1| <= 4 standard errors.
MomentReport unit_moment_check(const EValueSpec& spec, Direction direction,
                               const Method& method);

/// Checks the Markov tail bound at `level`: P_cert(value >= 1/level) <=
/// level, with the comparison done in log space so ties and infinite values
/// count as exceedances. Enumeration compares the exact probability;
/// Monte Carlo requires the one-sided 99% Clopper-Pearson upper limit of the
/// exceedance count to stay at or below `level`.
BoundReport markov_bound_check(const EValueSpec& spec, Direction direction,
                               Real level, const Method& method);

std::vector<BoundReport> markov_bound_checks(const EValueSpec& spec,
                                             Direction direction,
                                             const std::vector<Real>& levels,
                                             const Method& method);

/// E_{pi1}[B01] = 1 under the mixture experiment (theta ~ pi1, then data);
/// Monte Carlo draws are hierarchical.
MomentReport mixture_certification_check(const Model& null_model,
                                         const MixtureAlternative& mix,
                                         Index n, const Method& method);

/// Mixture-level Type II bound: P_{pi1}(B01 >= 1/beta) <= beta.
BoundReport composite_type2_check(const Model& null_model,
                                  const MixtureAlternative& mix, Index n,
                                  Real beta_level, const Method& method);

/// Exceedance of the same event under a FIXED parameter in the prior's
/// support: P_theta(B01 >= 1/beta). The mixture bound does not constrain
/// this quantity, so the report is informational; `pass` records whether
/// the pointwise probability happened to stay within beta.
BoundReport pointwise_type2_exceedance(const Model& null_model,
                                       const MixtureAlternative& mix,
                                       const Vector& theta, Index n,
                                       Real beta_level, const Method& method);

}  // namespace evd
