// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/gp.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "mosur/error.hpp"
#include "mosur/stats.hpp"

namespace mosur {

namespace {

constexpr double kInitialNugget = 1e-10;
constexpr double kMaxNugget = 1e-4;
constexpr double kDuplicateTolerance = 1e-9;

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::matern32:
      return "matern32";
    case KernelFamily::matern52:
      return "matern52";
    case KernelFamily::squared_exponential:
      return "squared_exponential";
  }
  fail(ErrorCode::internal, "unknown kernel family");
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "matern32") return KernelFamily::matern32;
  if (name == "matern52") return KernelFamily::matern52;
  if (name == "squared_exponential" || name == "gauss") {
    return KernelFamily::squared_exponential;
  }
  fail(ErrorCode::invalid_argument, "unknown kernel family '" + name + "'");
}

void KernelSpec::validate() const {
  require(std::isfinite(variance) && variance > 0.0,
          "kernel variance must be positive");
  require(!ranges.empty(), "kernel needs at least one range");
  for (double r : ranges) {
    require(std::isfinite(r) && r > 0.0, "kernel ranges must be positive");
  }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x2) {
  const auto d = static_cast<Eigen::Index>(spec.ranges.size());
  require(x.size() == d && x2.size() == d, "kernel_eval: dimension mismatch");
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double t = (x[j] - x2[j]) / spec.ranges[j];
    r2 += t * t;
  }
  switch (spec.family) {
    case KernelFamily::matern32: {
      const double s = std::sqrt(3.0 * r2);
      return spec.variance * (1.0 + s) * std::exp(-s);
    }
    case KernelFamily::matern52: {
      const double s = std::sqrt(5.0 * r2);
      return spec.variance * (1.0 + s + 5.0 * r2 / 3.0) * std::exp(-s);
    }
    case KernelFamily::squared_exponential:
      return spec.variance * std::exp(-0.5 * r2);
  }
  fail(ErrorCode::internal, "unknown kernel family");
}

TrendBasis TrendBasis::constant() {
  return TrendBasis("constant",
                    {[](const Eigen::Ref<const Eigen::VectorXd>&) { return 1.0; }});
}

TrendBasis TrendBasis::linear(std::size_t dimension) {
  std::vector<Function> fns;
  fns.emplace_back([](const Eigen::Ref<const Eigen::VectorXd>&) { return 1.0; });
  for (std::size_t j = 0; j < dimension; ++j) {
    fns.emplace_back([j](const Eigen::Ref<const Eigen::VectorXd>& x) {
      return x[static_cast<Eigen::Index>(j)];
    });
  }
  return TrendBasis("linear", std::move(fns));
}

TrendBasis::TrendBasis(std::string name, std::vector<Function> functions)
    : name_(std::move(name)), functions_(std::move(functions)) {
  require(!functions_.empty(), "trend basis needs at least one function");
}

Eigen::VectorXd TrendBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(functions_.size()));
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = functions_[i](x);
  }
  return out;
}

double Marginal::standardize(double t) const {
  if (deterministic) return t >= mean ? kInf : -kInf;
  return (t - mean) / sd;
}

double Marginal::prob_below(double t) const { return norm_cdf(standardize(t)); }

std::pair<Eigen::LLT<Eigen::MatrixXd>, double> regularized_cholesky(Eigen::MatrixXd k,
                                                                    double variance) {
  for (double ratio = kInitialNugget; ratio <= kMaxNugget * (1 + 1e-9); ratio *= 10) {
    const double nugget = ratio * variance;
    Eigen::MatrixXd kk = k;
    kk.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(kk);
    if (llt.info() == Eigen::Success &&
        llt.matrixLLT().diagonal().array().isFinite().all() &&
        (llt.matrixLLT().diagonal().array() > 0).all()) {
      return {std::move(llt), nugget};
    }
  }
  fail(ErrorCode::model_fit, "covariance matrix not positive definite after nugget escalation");
}

namespace {

Eigen::MatrixXd covariance_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = kernel.variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) =
          kernel_eval(kernel, points.row(i).transpose(), points.row(j).transpose());
    }
  }
  return k;
}

}  // namespace

GpPosterior::GpPosterior(Design design, KernelSpec kernel, TrendBasis trend)
    : design_(std::move(design)), kernel_(std::move(kernel)), trend_(std::move(trend)) {
  kernel_.validate();
  const Eigen::Index n = design_.size();
  const auto p = static_cast<Eigen::Index>(trend_.size());
  require(n >= 1, "fit: empty design");
  require(design_.values.size() == n, "fit: point/value count mismatch");
  require(design_.dimension() == static_cast<Eigen::Index>(kernel_.dimension()),
          "fit: kernel dimension does not match design");
  require(n >= p, "fit: fewer observations than trend functions");
  require(design_.points.allFinite() && design_.values.allFinite(),
          "fit: non-finite design entries");

  Eigen::MatrixXd k = covariance_matrix(kernel_, design_.points);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (kernel_.variance - k(i, j) < 0.5 * kDuplicateTolerance * kernel_.variance) {
        fail(ErrorCode::duplicate_point, "fit: design points " + std::to_string(j) +
                                             " and " + std::to_string(i) +
                                             " coincide");
      }
    }
  }
  auto [llt, nugget] = regularized_cholesky(std::move(k), kernel_.variance);
  chol_k_ = std::move(llt);
  nugget_ = nugget;

  Eigen::MatrixXd f(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.row(i) = trend_.evaluate(design_.points.row(i).transpose()).transpose();
  }
  whitened_trend_ = chol_k_.matrixL().solve(f);
  chol_trend_.compute(whitened_trend_.transpose() * whitened_trend_);
  if (chol_trend_.info() != Eigen::Success) {
    fail(ErrorCode::model_fit, "fit: trend regression matrix is rank deficient");
  }
  const Eigen::VectorXd white_y = chol_k_.matrixL().solve(design_.values);
  beta_ = chol_trend_.solve(whitened_trend_.transpose() * white_y);
  whitened_residual_ = white_y - whitened_trend_ * beta_;
}

GpPosterior fit(Design design, KernelSpec kernel, TrendBasis trend) {
  return GpPosterior(std::move(design), std::move(kernel), std::move(trend));
}

double GpPosterior::duplicate_tolerance() const {
  return std::max(kDuplicateTolerance * kernel_.variance, 10.0 * nugget_);
}

Projection GpPosterior::project(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require(x.size() == design_.dimension(), "predict: dimension mismatch");
  const Eigen::Index n = design_.size();
  Eigen::VectorXd kx(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kx[i] = kernel_eval(kernel_, x, design_.points.row(i).transpose());
  }
  Projection out;
  out.kernel_part = chol_k_.matrixL().solve(kx);
  const Eigen::VectorXd residual =
      trend_.evaluate(x) - whitened_trend_.transpose() * out.kernel_part;
  out.trend_part = chol_trend_.matrixL().solve(residual);
  out.mean = trend_.evaluate(x).dot(beta_) + out.kernel_part.dot(whitened_residual_);
  out.var = std::max(0.0, kernel_.variance - out.kernel_part.squaredNorm() +
                              out.trend_part.squaredNorm());
  return out;
}

Prediction GpPosterior::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Projection p = project(x);
  return {p.mean, p.var};
}

Marginal GpPosterior::marginal(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Prediction p = predict(x);
  const bool det = p.var < duplicate_tolerance();
  return {p.mean, det ? 0.0 : std::sqrt(p.var), det};
}

double GpPosterior::covariance(const Projection& a, const Eigen::Ref<const Eigen::VectorXd>& xa,
                               const Projection& b,
                               const Eigen::Ref<const Eigen::VectorXd>& xb) const {
  return kernel_eval(kernel_, xa, xb) - a.kernel_part.dot(b.kernel_part) +
         a.trend_part.dot(b.trend_part);
}

double GpPosterior::difference_variance(const Projection& a,
                                        const Eigen::Ref<const Eigen::VectorXd>& xa,
                                        const Projection& b,
                                        const Eigen::Ref<const Eigen::VectorXd>& xb) const {
  const double prior = 2.0 * (kernel_.variance - kernel_eval(kernel_, xa, xb));
  const double v = prior - (a.kernel_part - b.kernel_part).squaredNorm() +
                   (a.trend_part - b.trend_part).squaredNorm();
  return std::max(0.0, v);
}

double GpPosterior::posterior_cov(const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Eigen::Ref<const Eigen::VectorXd>& x2) const {
  return covariance(project(x), x, project(x2), x2);
}

GpPosterior update(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                   double y_new) {
  const Prediction at_new = post.predict(x_new);
  if (at_new.var < post.duplicate_tolerance()) {
    fail(ErrorCode::duplicate_point, "update: point already observed");
  }
  Design d = post.design();
  const Eigen::Index n = d.size();
  d.points.conservativeResize(n + 1, Eigen::NoChange);
  d.points.row(n) = x_new.transpose();
  d.values.conservativeResize(n + 1);
  d.values[n] = y_new;
  return fit(std::move(d), post.kernel(), post.trend());
}

MomentUpdater::MomentUpdater(const Prediction& at_new, const Prediction& at_x, double cov,
                             double nugget)
    : mean_(at_x.mean), mean_new_(at_new.mean) {
  require(nugget >= 0.0, "update_moments: negative nugget");
  const double denom = at_new.var + nugget;
  require(denom > 0.0, "update_moments: zero variance at the new point");
  gain_ = cov / denom;
  var_ = std::max(0.0, at_x.var - cov * cov / denom);
}

MomentUpdater::MomentUpdater(const GpPosterior& post,
                             const Eigen::Ref<const Eigen::VectorXd>& x_new,
                             const Eigen::Ref<const Eigen::VectorXd>& x)
    : MomentUpdater(post.predict(x_new), post.predict(x), post.posterior_cov(x, x_new),
                    post.nugget()) {}

Prediction update_moments(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x_new,
                          double y_new, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return MomentUpdater(post, x_new, x)(y_new);
}

// ---------------------------------------------------------------------------
// Hyperparameter estimation

namespace {

struct LikelihoodProblem {
  const Design* design;
  KernelFamily family;
  const TrendBasis* trend;
  Eigen::MatrixXd f;
  double log_range_lo, log_range_hi;
  double variance_lo, variance_hi;
  int evaluations = 0;

  KernelSpec spec_for(const double* log_ranges, std::size_t d, double variance) const {
    KernelSpec s;
    s.family = family;
    s.variance = variance;
    s.ranges.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      s.ranges[j] = std::exp(std::clamp(log_ranges[j], log_range_lo, log_range_hi));
    }
    return s;
  }

  // Negative concentrated log-likelihood; the variance is profiled out and
  // clamped to its bounds. Writes the profiled variance to `variance_out`.
  double negative_log_likelihood(const double* log_ranges, double* variance_out) const {
    const auto d = static_cast<std::size_t>(design->dimension());
    KernelSpec corr = spec_for(log_ranges, d, 1.0);
    const Eigen::MatrixXd r = covariance_matrix(corr, design->points);
    try {
      auto [llt, nugget] = regularized_cholesky(r, 1.0);
      (void)nugget;
      const Eigen::MatrixXd g = llt.matrixL().solve(f);
      Eigen::LLT<Eigen::MatrixXd> m(g.transpose() * g);
      if (m.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      const Eigen::VectorXd wy = llt.matrixL().solve(design->values);
      const Eigen::VectorXd beta = m.solve(g.transpose() * wy);
      const double q = (wy - g * beta).squaredNorm();
      const double n = static_cast<double>(design->size());
      const double variance = std::clamp(q / n, variance_lo, variance_hi);
      const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      if (variance_out) *variance_out = variance;
      return 0.5 * (n * std::log(variance) + log_det + q / variance);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }
};

double gsl_objective(const gsl_vector* v, void* params) {
  auto* problem = static_cast<LikelihoodProblem*>(params);
  ++problem->evaluations;
  const double value = problem->negative_log_likelihood(v->data, nullptr);
  return std::isfinite(value) ? value : 1e300;
}

}  // namespace

EstimationResult estimate_hyperparameters(const Design& design, KernelFamily family,
                                          const TrendBasis& trend,
                                          const EstimationOptions& options) {
  const Eigen::Index n = design.size();
  const auto p = static_cast<Eigen::Index>(trend.size());
  require(n >= p + 2, "estimate_hyperparameters: need at least p + 2 observations");
  require(design.values.size() == n, "estimate_hyperparameters: point/value count mismatch");
  const auto d = static_cast<std::size_t>(design.dimension());

  const double mean = design.values.mean();
  const double sample_var =
      (design.values.array() - mean).square().sum() / static_cast<double>(n - 1);
  const double scale = std::max(sample_var, 1e-12);

  LikelihoodProblem problem{&design, family, &trend, Eigen::MatrixXd(n, p), 0, 0, 0, 0};
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.f.row(i) = trend.evaluate(design.points.row(i).transpose()).transpose();
  }
  const auto [vlo, vhi] = options.variance_bounds.value_or(
      std::pair{options.variance_factor.first * scale, options.variance_factor.second * scale});
  const auto [rlo, rhi] = options.range_bounds.value_or(
      std::pair{options.range_factor.first * options.domain_width,
                options.range_factor.second * options.domain_width});
  require(vlo > 0 && vhi >= vlo && rlo > 0 && rhi >= rlo,
          "estimate_hyperparameters: invalid bounds");
  problem.variance_lo = vlo;
  problem.variance_hi = vhi;
  problem.log_range_lo = std::log(rlo);
  problem.log_range_hi = std::log(rhi);

  const double width = problem.log_range_hi - problem.log_range_lo;
  std::vector<double> best_x(d, 0.5 * (problem.log_range_lo + problem.log_range_hi));
  double best_value = std::numeric_limits<double>::infinity();

  if (width <= 0.0) {
    best_value = problem.negative_log_likelihood(best_x.data(), nullptr);
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> start(problem.log_range_lo, problem.log_range_hi);
    gsl_set_error_handler_off();
    gsl_multimin_function fn{&gsl_objective, d, &problem};
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(d),
                                                              &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(d),
                                                                 &gsl_vector_free);
    gsl_vector_set_all(step.get(), 0.15 * width);

    for (int s = 0; s < options.starts; ++s) {
      for (std::size_t j = 0; j < d; ++j) {
        gsl_vector_set(x.get(), j, s == 0 ? best_x[j] : start(rng));
      }
      std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>
          minimizer(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, d),
                    &gsl_multimin_fminimizer_free);
      problem.evaluations = 0;
      if (gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get()) !=
          GSL_SUCCESS) {
        continue;
      }
      while (problem.evaluations < options.evaluations_per_start) {
        if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), 1e-6) ==
            GSL_SUCCESS) {
          break;
        }
      }
      const double value = minimizer->fval;
      if (value < 1e300 && value < best_value) {
        best_value = value;
        for (std::size_t j = 0; j < d; ++j) {
          best_x[j] = std::clamp(gsl_vector_get(minimizer->x, j), problem.log_range_lo,
                                 problem.log_range_hi);
        }
      }
    }
  }

  EstimationResult result;
  double variance = std::sqrt(vlo * vhi);
  if (!std::isfinite(best_value) || best_value >= 1e300) {
    std::fill(best_x.begin(), best_x.end(),
              0.5 * (problem.log_range_lo + problem.log_range_hi));
    result.fallback = true;
    result.log_likelihood = -std::numeric_limits<double>::infinity();
  } else {
    problem.negative_log_likelihood(best_x.data(), &variance);
    result.log_likelihood = -best_value;
  }
  result.kernel = problem.spec_for(best_x.data(), d, variance);
  return result;
}

Eigen::MatrixXd sample_paths(const KernelSpec& kernel, const Eigen::MatrixXd& grid,
                             int n_paths, std::uint64_t seed) {
  kernel.validate();
  require(n_paths >= 0, "sample_paths: negative path count");
  require(grid.cols() == static_cast<Eigen::Index>(kernel.dimension()),
          "sample_paths: grid dimension does not match kernel");
  if (grid.rows() > kMaxSampleGrid) {
    fail(ErrorCode::capacity, "sample_paths: grid larger than " +
                                  std::to_string(kMaxSampleGrid) + " points");
  }
  auto [llt, nugget] = regularized_cholesky(covariance_matrix(kernel, grid), kernel.variance);
  (void)nugget;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(grid.rows(), n_paths);
  for (int p = 0; p < n_paths; ++p) {
    for (Eigen::Index i = 0; i < grid.rows(); ++i) z(i, p) = normal(rng);
  }
  return (llt.matrixL() * z).transpose();
}

}  // namespace mosur
