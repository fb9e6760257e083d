#pragma once

#include "evd/enumeration.hpp"
#include "evd/types.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace evd {

/// Exhaustive evaluation over a finite outcome space.
struct Enumerate {
  std::uint64_t cap = kDefaultEnumerationCap;
};

/// Seeded simulation; replicate i draws from Stream::substream(seed, i).
struct MonteCarlo {
  std::size_t reps = 100000;
  Seed seed = 0;
};

using Method = std::variant<Enumerate, MonteCarlo>;

std::string method_name(const Method& m);

/// Which error a certified e-value controls: ForNull means the certifying
/// measure is the null (Type I control via B10), ForAlt means it is the
/// alternative (Type II control via B01).
enum class Direction { ForNull, ForAlt };

std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name);

/// Result of a unit-moment check E[value] = 1 under the certifying measure.
struct MomentReport {
  Direction direction = Direction::ForNull;
  Real mean = 0.0;       // estimate of the certified expectation
  Real std_error = 0.0;  // 0 for exact methods
  bool exact = false;    // true for enumeration / closed-form evaluation
  std::size_t count = 0; // outcomes enumerated or replicates drawn
  bool pass = false;
  std::string decision_rule;
};

/// Result of a tail-bound check P(value >= 1/level) <= level.
struct BoundReport {
  Direction direction = Direction::ForNull;
  Real level = 0.0;      // alpha or beta
  Real threshold = 0.0;  // 1/level
  Real estimate = 0.0;   // exceedance probability (exact or MC point estimate)
  Real ci_upper = 0.0;   // equals estimate when exact; one-sided 99% upper limit for MC
  bool exact = false;
  std::size_t count = 0;
  bool pass = false;
  std::string decision_rule;
};

inline constexpr Real kExactMomentTol = 1e-10;
inline constexpr Real kMcMomentSigmas = 4.0;
inline constexpr Real kMcBoundConfidence = 0.99;

}  // namespace evd
