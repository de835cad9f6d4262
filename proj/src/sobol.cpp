// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/sobol.hpp"

#include <bit>

#include "mosur/error.hpp"

namespace mosur {

namespace {

struct Primitive {
  int degree;
  std::uint32_t coefficients;
  std::array<std::uint32_t, 6> initial;
};

// new-joe-kuo-6.21201, dimensions 2..16
constexpr std::array<Primitive, SobolSequence::kMaxDimension - 1> kTable{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
}};

}  // namespace

SobolSequence::SobolSequence(int dimension)
    : dimension_(dimension), directions_(static_cast<std::size_t>(dimension)),
      state_(static_cast<std::size_t>(dimension), 0u) {
  require(dimension >= 1 && dimension <= kMaxDimension,
          "sobol: dimension must be in [1, 16]");
  for (int i = 0; i < 32; ++i) directions_[0][i] = 1u << (31 - i);
  for (int d = 1; d < dimension; ++d) {
    const Primitive& p = kTable[static_cast<std::size_t>(d - 1)];
    auto& v = directions_[static_cast<std::size_t>(d)];
    const int s = p.degree;
    for (int i = 0; i < s; ++i) v[i] = p.initial[i] << (31 - i);
    for (int i = s; i < 32; ++i) {
      std::uint32_t next = v[i - s] ^ (v[i - s] >> s);
      for (int k = 1; k < s; ++k) {
        if ((p.coefficients >> (s - 1 - k)) & 1u) next ^= v[i - k];
      }
      v[i] = next;
    }
  }
}

Eigen::VectorXd SobolSequence::next() {
  constexpr double scale = 1.0 / 4294967296.0;
  Eigen::VectorXd x(dimension_);
  for (int d = 0; d < dimension_; ++d) x[d] = state_[static_cast<std::size_t>(d)] * scale;
  require(index_ < (std::uint64_t{1} << 32) - 1, "sobol: sequence exhausted");
  const int c = std::countr_one(index_);
  for (int d = 0; d < dimension_; ++d) {
    state_[static_cast<std::size_t>(d)] ^= directions_[static_cast<std::size_t>(d)][c];
  }
  ++index_;
  return x;
}

Eigen::MatrixXd sobol_points(int n, int dimension) {
  require(n >= 0, "sobol: negative count");
  SobolSequence seq(dimension);
  Eigen::MatrixXd out(n, dimension);
  for (int i = 0; i < n; ++i) out.row(i) = seq.next().transpose();
  return out;
}

}  // namespace mosur
