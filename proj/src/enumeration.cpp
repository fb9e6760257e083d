#include "evd/enumeration.hpp"

#include "evd/numeric.hpp"

#include <cmath>
#include <string>

namespace evd {

std::uint64_t enumeration_size(Family family, Index n, std::uint64_t cap) {
  if (n < 1) throw std::invalid_argument("enumeration: n must be positive");
  if (family != Family::Bernoulli) {
    throw std::invalid_argument(
        "enumeration: family '" + family_name(family) +
        "' has an uncountable sample space; use a Monte Carlo method");
  }
  if (static_cast<std::uint64_t>(n) >= 63 ||
      (std::uint64_t{1} << n) > cap) {
    throw EnumerationCapError(
        "enumeration: 2^" + std::to_string(n) + " outcomes exceed the cap of " +
        std::to_string(cap));
  }
  return std::uint64_t{1} << n;
}

void for_each_outcome(Family family, Index n,
                      const std::function<void(const Dataset&)>& visit,
                      std::uint64_t cap) {
  const std::uint64_t total = enumeration_size(family, n, cap);
  Dataset data;
  data.obs.resize(n, 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (Index i = 0; i < n; ++i) {
      data.obs(i, 0) = static_cast<Real>((idx >> i) & 1u);
    }
    visit(data);
  }
}

Real enumeration_total_mass(const Model& m, Index n, std::uint64_t cap) {
  NeumaierSum total;
  for_each_outcome(m.family, n,
                   [&](const Dataset& x) { total.add(std::exp(log_density(m, x))); },
                   cap);
  return total.value();
}

}  // namespace evd
