#pragma once

#include "evd/models.hpp"
#include "evd/types.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace evd {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1u << 20;

/// Raised when an exhaustive enumeration would exceed the configured cap on
/// |sample space|^n outcomes.
struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number of length-n outcomes for a finite-sample-space family. Throws
/// std::invalid_argument for families with uncountable sample spaces and
/// EnumerationCapError when the count exceeds `cap`.
std::uint64_t enumeration_size(Family family, Index n,
                               std::uint64_t cap = kDefaultEnumerationCap);

/// Visit every outcome x^n exactly once, in lexicographic bit order, reusing
/// one Dataset buffer. The visitor may evaluate any model's log density on
/// the outcome; summing exp(log_density) over all outcomes is exactly 1 up
/// to rounding, which the tests assert.
void for_each_outcome(Family family, Index n,
                      const std::function<void(const Dataset&)>& visit,
                      std::uint64_t cap = kDefaultEnumerationCap);

/// Self-check: total probability mass of the enumeration under `m`.
Real enumeration_total_mass(const Model& m, Index n,
                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace evd
