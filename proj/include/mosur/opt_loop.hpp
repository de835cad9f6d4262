// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mosur/criteria.hpp"
#include "mosur/error.hpp"
#include "mosur/gp.hpp"
#include "mosur/pareto.hpp"

namespace mosur {

enum class Strategy { sur, ei_scalarized, random };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Finite optimization problem: objective values known at every grid point.
struct GridProblem {
  Eigen::MatrixXd points;  // one candidate per row, in [0,1]^d
  Eigen::MatrixXd values;  // one row per candidate, one column per objective

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
  Eigen::Index objectives() const { return values.cols(); }
};

struct RunConfig {
  int n_initial = 4;
  int n_iterations = 10;
  Strategy strategy = Strategy::sur;
  /// Integration points; 0 picks the default for the dimension.
  int integration_size = 0;
  std::uint64_t design_seed = 0;
  std::uint64_t candidate_seed = 0;
  /// Per-objective kernels; when set and refit_hyperparameters is false the
  /// hyperparameters stay fixed.
  std::optional<std::vector<KernelSpec>> known_covariance;
  bool refit_hyperparameters = false;
  /// Family used when hyperparameters are estimated.
  KernelFamily family = KernelFamily::matern52;
  /// Restrict the search to these problem rows; empty means all.
  std::vector<Eigen::Index> candidate_subset;
  /// Record wall-clock time per iteration (otherwise 0, for reproducible
  /// traces).
  bool record_timing = true;
  /// Tchebycheff augmentation for the scalarized baseline.
  double scalarization_rho = 0.05;
};

struct TraceRecord {
  int iteration = 0;          // 0 for the initial design
  Eigen::Index candidate = 0; // problem row
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double eev = std::numeric_limits<double>::quiet_NaN();
  double reduction = std::numeric_limits<double>::quiet_NaN();
  double ev = 0.0;  // excursion volume after this observation's update
  double wall_ms = 0.0;
};

struct RunTrace {
  int dimension = 0;
  int objectives = 0;
  std::vector<TraceRecord> records;
  /// Set when the run stopped early; records hold everything up to then.
  std::optional<Error> error;

  /// Objective values observed up to and including `iteration`.
  Eigen::MatrixXd archive(int iteration) const;
  int last_iteration() const;
};

/// `n_initial` distinct rows of `pool`, drawn without replacement.
std::vector<Eigen::Index> initial_design(const std::vector<Eigen::Index>& pool, int n_initial,
                                         std::uint64_t seed);

/// Pool entries neither observed nor numerically known to any model.
std::vector<Eigen::Index> eligible_candidates(const std::vector<GpPosterior>& posts,
                                              const Eigen::MatrixXd& points,
                                              const std::vector<Eigen::Index>& pool,
                                              const std::vector<Eigen::Index>& observed);

struct Selection {
  Eigen::Index candidate = -1;
  CriterionValue value;
};

/// Minimizes the expected excursion volume over `eligible` rows of
/// `points`. `archive` holds the observed objective vectors. Ties go to the
/// earliest entry of `eligible`.
Selection select_next(const std::vector<GpPosterior>& posts, const Eigen::MatrixXd& archive,
                      const IntegrationGrid& grid, const Eigen::MatrixXd& points,
                      const std::vector<Eigen::Index>& eligible);

RunTrace run(const RunConfig& config, const GridProblem& problem);

}  // namespace mosur
