// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mosur {

enum class KernelFamily { matern32, matern52, squared_exponential };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Stationary anisotropic covariance kernel.
struct KernelSpec {
  KernelFamily family = KernelFamily::matern52;
  double variance = 1.0;
  std::vector<double> ranges;

  void validate() const;
  std::size_t dimension() const { return ranges.size(); }
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2);

/// Ordered list of trend functions f_1..f_p.
class TrendBasis {
 public:
  using Function = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

  static TrendBasis constant();
  /// 1, x_1, ..., x_d.
  static TrendBasis linear(std::size_t dimension);

  TrendBasis(std::string name, std::vector<Function> functions);

  std::size_t size() const { return functions_.size(); }
  const std::string& name() const { return name_; }
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  std::string name_;
  std::vector<Function> functions_;
};

/// Observation locations (one row per point) and the observed values.
struct Design {
  Eigen::MatrixXd points;
  Eigen::VectorXd values;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
};

struct Prediction {
  double mean;
  double var;
};

/// Predictive mean and standard deviation, with `deterministic` set when the
/// variance is below the model's duplicate tolerance. Deterministic marginals
/// are treated as point masses by every probability computation.
struct Marginal {
  double mean = 0.0;
  double sd = 0.0;
  bool deterministic = false;

  /// (t - mean) / sd, or +/-inf for a point mass (t >= mean maps to +inf).
  double standardize(double t) const;
  /// P[Y <= t].
  double prob_below(double t) const;
};

/// Per-point quantities from which posterior covariances are assembled:
/// whitened kernel vector and whitened trend residual.
struct Projection {
  Eigen::VectorXd kernel_part;  // L^{-1} k_n(x)
  Eigen::VectorXd trend_part;   // R^{-1} (f(x) - F^T K^{-1} k_n(x))
  double mean = 0.0;
  double var = 0.0;
};

/// Universal-kriging posterior. Immutable once fitted.
class GpPosterior {
 public:
  const Design& design() const { return design_; }
  const KernelSpec& kernel() const { return kernel_; }
  const TrendBasis& trend() const { return trend_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  /// Absolute nugget that was added to the diagonal of K_n.
  double nugget() const { return nugget_; }

  /// Variance under which a point counts as already observed.
  double duplicate_tolerance() const;

  Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Marginal marginal(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double posterior_cov(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& x2) const;

  Projection project(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Covariance of two projected points.
  double covariance(const Projection& a, const Eigen::Ref<const Eigen::VectorXd>& xa,
                    const Projection& b, const Eigen::Ref<const Eigen::VectorXd>& xb) const;
  /// Posterior variance of Y(xa) - Y(xb); exactly zero when xa == xb.
  double difference_variance(const Projection& a,
                             const Eigen::Ref<const Eigen::VectorXd>& xa,
                             const Projection& b,
                             const Eigen::Ref<const Eigen::VectorXd>& xb) const;

 private:
  friend GpPosterior fit(Design design, KernelSpec kernel, TrendBasis trend);

  GpPosterior(Design design, KernelSpec kernel, TrendBasis trend);

  Design design_;
  KernelSpec kernel_;
  TrendBasis trend_;
  double nugget_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol_k_;
  Eigen::MatrixXd whitened_trend_;  // L^{-1} F
  Eigen::LLT<Eigen::MatrixXd> chol_trend_;  // F^T K^{-1} F = R R^T
  Eigen::VectorXd beta_;
  Eigen::VectorXd whitened_residual_;  // L^{-1} (y - F beta)
};

/// Fits the kriging model. Throws Error(model_fit) if K_n cannot be factored
/// even after nugget escalation, Error(invalid_argument) for inconsistent
/// inputs.
GpPosterior fit(Design design, KernelSpec kernel,
                TrendBasis trend = TrendBasis::constant());

/// Posterior after observing y_new at x_new (refit on the augmented design).
/// Throws Error(duplicate_point) when x_new is already (numerically) known.
GpPosterior update(const GpPosterior& post,
                   const Eigen::Ref<const Eigen::VectorXd>& x_new, double y_new);

/// One-point update of the predictive moments at `x` without refitting:
///   m' = m + c(x, x_new) / s^2(x_new) * (y_new - m(x_new))
///   s'^2 = s^2 - c(x, x_new)^2 / s^2(x_new)
/// with the model nugget added to s^2(x_new), so that the result agrees with
/// `update` (which carries the nugget on the new diagonal entry too).
Prediction update_moments(const GpPosterior& post,
                          const Eigen::Ref<const Eigen::VectorXd>& x_new,
                          double y_new, const Eigen::Ref<const Eigen::VectorXd>& x);

/// The update above with the y-independent pieces precomputed, for callers
/// that apply many hypothetical observations at the same (x_new, x).
class MomentUpdater {
 public:
  MomentUpdater(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                const Eigen::Ref<const Eigen::VectorXd>& x);
  MomentUpdater(const Prediction& at_new, const Prediction& at_x, double cov,
                double nugget = 0.0);

  Prediction operator()(double y_new) const {
    return {mean_ + gain_ * (y_new - mean_new_), var_};
  }

 private:
  double mean_;
  double mean_new_;
  double gain_;
  double var_;
};

struct EstimationOptions {
  /// Multiplied by the sample variance of the observations.
  std::pair<double, double> variance_factor{1e-3, 1e3};
  /// Multiplied by `domain_width`.
  std::pair<double, double> range_factor{1e-2, 10.0};
  double domain_width = 1.0;
  /// Absolute bounds; override the factors when set.
  std::optional<std::pair<double, double>> variance_bounds;
  std::optional<std::pair<double, double>> range_bounds;
  int starts = 5;
  int evaluations_per_start = 200;
  std::uint64_t seed = 0;
};

struct EstimationResult {
  KernelSpec kernel;
  double log_likelihood = 0.0;
  /// Set when every start failed and the bound midpoint was returned.
  bool fallback = false;
};

/// Maximum-likelihood kernel parameters (variance profiled out) by multi-start
/// Nelder-Mead in log-range space within the configured bounds.
EstimationResult estimate_hyperparameters(const Design& design, KernelFamily family,
                                          const TrendBasis& trend = TrendBasis::constant(),
                                          const EstimationOptions& options = {});

inline constexpr Eigen::Index kMaxSampleGrid = 5000;

/// `n_paths` independent draws from N(0, K_grid + nugget I); one row per draw.
Eigen::MatrixXd sample_paths(const KernelSpec& kernel, const Eigen::MatrixXd& grid,
                             int n_paths, std::uint64_t seed);

/// Cholesky of `k` with the nugget schedule shared by fit and sample_paths.
/// Returns the factor and the absolute nugget used.
std::pair<Eigen::LLT<Eigen::MatrixXd>, double> regularized_cholesky(Eigen::MatrixXd k,
                                                                    double variance);

}  // namespace mosur
