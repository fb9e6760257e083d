#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace evd {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using Seed = std::uint64_t;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evd
