// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mosur/gp.hpp"
#include "mosur/pareto.hpp"
#include "mosur/prob_update.hpp"

namespace mosur {

/// Fixed integration points over the design domain with weights summing to 1.
struct IntegrationGrid {
  Eigen::MatrixXd points;
  std::vector<double> weights;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }

  /// First `n` Sobol points in [0,1)^d, equal weights.
  static IntegrationGrid sobol(int n, int dimension);
  /// Given points, equal weights.
  static IntegrationGrid uniform(Eigen::MatrixXd points);
};

/// 1000 points for d <= 2, 2000 otherwise.
int default_integration_size(int dimension);

struct CriterionValue {
  double eev = 0.0;        // expected excursion volume after observing x+
  double reduction = 0.0;  // ev_n - eev
};

/// E[max(0, y_min - Y(x))].
double expected_improvement(const Marginal& m, double y_min);
double expected_improvement(const GpPosterior& post, double y_min,
                            const Eigen::Ref<const Eigen::VectorXd>& x);

/// Per-objective quantities at the integration points, computed once per
/// posterior.
class GridProjection {
 public:
  GridProjection(const GpPosterior& post, const IntegrationGrid& grid);

  const GpPosterior& posterior() const { return *post_; }
  const Marginal& marginal(Eigen::Index l) const { return marginals_[static_cast<std::size_t>(l)]; }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  /// Pair geometry of grid point l against the projected candidate.
  PairGeometry pair(Eigen::Index l, const Projection& cand, const Marginal& cand_marginal,
                    const Eigen::Ref<const Eigen::VectorXd>& x_plus) const;

 private:
  const GpPosterior* post_;
  const IntegrationGrid* grid_;
  Eigen::MatrixXd columns_;  // grid points, one per column
  std::vector<Projection> projections_;
  std::vector<Marginal> marginals_;
};

Marginal marginal_of(const GpPosterior& post, const Projection& p);

/// Single-objective expected excursion volume below y_min. The posterior and
/// grid must outlive the criterion.
class SingleObjectiveCriterion {
 public:
  SingleObjectiveCriterion(const GpPosterior& post, const IntegrationGrid& grid, double y_min);

  double ev() const { return ev_; }
  CriterionValue evaluate(const Eigen::Ref<const Eigen::VectorXd>& x_plus) const;

 private:
  const IntegrationGrid* grid_;
  GridProjection cache_;
  double y_min_;
  double ev_;
  std::vector<Eigen::Index> active_;
};

/// Multi-objective expected excursion volume behind the Pareto front.
/// Objectives are independent; one posterior per objective. Posteriors and
/// grid must outlive the criterion.
class MultiObjectiveCriterion {
 public:
  enum class Path { automatic, general, fast2d };

  MultiObjectiveCriterion(const std::vector<GpPosterior>& posts, const IntegrationGrid& grid,
                          const ParetoState& front);

  double ev() const { return ev_; }
  const Tessellation& tessellation() const { return tess_; }
  CriterionValue evaluate(const Eigen::Ref<const Eigen::VectorXd>& x_plus,
                          Path path = Path::automatic) const;

 private:
  double general_integrand(const std::vector<PairGeometry>& g,
                           const std::vector<std::vector<double>>& cand_cells) const;
  double fast2d_integrand(const std::vector<PairGeometry>& g) const;

  const IntegrationGrid* grid_;
  std::vector<GridProjection> caches_;
  Tessellation tess_;
  double ev_;
  std::vector<Eigen::Index> active_;
};

struct CellTerms {
  double b = 0.0;
  double d = 0.0;
};

/// b_ij and d_ij for objective k: the probability that Y+ falls in the k-th
/// interval of cell i and Y in that of cell j, and the part of it where Y+ < Y.
CellTerms pair_cell_terms(const PairGeometry& g, const Tessellation& tess, int k,
                          std::size_t cell_i, std::size_t cell_j);

/// Probability that Y+ lands in cell i and Y lands in cell j without being
/// dominated by Y+. One geometry per objective.
double p_ij(const std::vector<PairGeometry>& g, const Tessellation& tess, std::size_t cell_i,
            std::size_t cell_j);

CriterionValue eev_single(const GpPosterior& post, const IntegrationGrid& grid, double y_min,
                          const Eigen::Ref<const Eigen::VectorXd>& x_plus);
CriterionValue eev_multi(const std::vector<GpPosterior>& posts, const IntegrationGrid& grid,
                         const ParetoState& front, const Eigen::Ref<const Eigen::VectorXd>& x_plus);
CriterionValue eev_multi_fast2d(const std::vector<GpPosterior>& posts,
                                const IntegrationGrid& grid, const ParetoState& front,
                                const Eigen::Ref<const Eigen::VectorXd>& x_plus);

}  // namespace mosur
