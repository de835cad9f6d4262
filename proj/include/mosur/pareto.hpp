// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "mosur/gp.hpp"

namespace mosur {

/// Weak domination under minimization: a_k <= b_k for every k.
bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
               const Eigen::Ref<const Eigen::VectorXd>& b);

/// Mutually non-dominated objective vectors, one row per point. For two
/// objectives the rows are sorted by the first objective ascending (and hence
/// the second descending).
struct ParetoState {
  Eigen::MatrixXd values;
  std::vector<Eigen::Index> source;  // row index into the archive

  Eigen::Index size() const { return values.rows(); }
  Eigen::Index objectives() const { return values.cols(); }
};

/// Points of `archive` (one row per observation) not weakly dominated by a
/// different point; of several identical points the first is kept.
ParetoState extract_front(const Eigen::MatrixXd& archive);

inline constexpr std::size_t kMaxCells = 1'000'000;

/// Partition of objective space into (m+1)^q boxes whose edges are the front
/// values in each objective. Intervals are (lo, hi], the lowest starting at
/// -inf and the highest ending at +inf. Cells are numbered in mixed radix,
/// objective 0 varying fastest.
class Tessellation {
 public:
  explicit Tessellation(const ParetoState& front);

  const ParetoState& front() const { return front_; }
  int objectives() const { return q_; }
  int intervals() const { return radix_; }
  std::size_t cell_count() const { return cells_; }

  /// [-inf, sorted front values..., +inf]
  const std::vector<double>& breakpoints(int k) const { return breaks_[k]; }
  int interval(std::size_t cell, int k) const;
  double lower(std::size_t cell, int k) const { return breaks_[k][interval(cell, k)]; }
  double upper(std::size_t cell, int k) const { return breaks_[k][interval(cell, k) + 1]; }

  /// Some front point is <= the lower corner in every objective.
  bool dominated(std::size_t cell) const { return dominated_[cell] != 0; }
  const std::vector<std::size_t>& nondominated_cells() const { return nondominated_; }

 private:
  ParetoState front_;
  int q_;
  int radix_;
  std::size_t cells_;
  std::vector<std::vector<double>> breaks_;
  std::vector<char> dominated_;
  std::vector<std::size_t> nondominated_;
};

/// P[Y in interval i] for every interval of `breaks`.
std::vector<double> interval_probabilities(const Marginal& m, const std::vector<double>& breaks);

/// prod_k P[Y_k in the k-th interval of `cell`], objectives independent.
double cell_probability(const std::vector<Marginal>& marginals, const Tessellation& tess,
                        std::size_t cell);

/// Probability that the objective vector at a point lies in a non-dominated
/// cell.
double nondominated_probability(const std::vector<Marginal>& marginals,
                                const Tessellation& tess);

/// Weighted sum of non-dominated probabilities. `marginals[k][l]` is the
/// marginal of objective k at integration point l.
double excursion_volume(const std::vector<std::vector<Marginal>>& marginals,
                        const std::vector<double>& weights, const Tessellation& tess);

/// Single-objective form: weighted sum of P[Y(x_l) <= threshold].
double excursion_volume(const std::vector<Marginal>& marginals,
                        const std::vector<double>& weights, double threshold);

}  // namespace mosur
