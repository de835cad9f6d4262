// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace mosur {

/// Unscrambled Sobol points in [0,1)^d (Joe-Kuo direction numbers), starting
/// with the origin.
class SobolSequence {
 public:
  static constexpr int kMaxDimension = 16;

  explicit SobolSequence(int dimension);

  int dimension() const { return dimension_; }
  Eigen::VectorXd next();

 private:
  int dimension_;
  std::uint64_t index_ = 0;
  std::vector<std::array<std::uint32_t, 32>> directions_;
  std::vector<std::uint32_t> state_;
};

/// First `n` points, one per row.
Eigen::MatrixXd sobol_points(int n, int dimension);

}  // namespace mosur
