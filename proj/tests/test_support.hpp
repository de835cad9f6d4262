// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

// Independent reference computations used as oracles by the unit and
// acceptance tests. Nothing here calls into the library's numerical paths.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace mosur::testing {

/// Standard normal CDF by adaptive quadrature of the density.
double normal_cdf_by_quadrature(double u);

/// P[U <= h, V <= k] by adaptive Gauss-Kronrod quadrature of
/// phi(x) * Phi((k - rho x) / sqrt(1 - rho^2)) over x in (-inf, h].
double bvn_by_quadrature(double h, double k, double rho);

/// Matern / squared-exponential kernels written out directly.
double reference_kernel(int family, double variance,
                        const std::vector<double>& ranges,
                        const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Universal kriging evaluated with explicit dense inverses, straight from
/// the textbook mean/covariance expressions, in extended precision. `nugget`
/// is added to the diagonal of the observation covariance.
class DenseKriging {
 public:
  using Basis = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  DenseKriging(Eigen::MatrixXd points, Eigen::VectorXd values, int family,
               double variance, std::vector<double> ranges, Basis basis,
               double nugget);

  double mean(const Eigen::VectorXd& x) const;
  double cov(const Eigen::VectorXd& x, const Eigen::VectorXd& x2) const;
  double var(const Eigen::VectorXd& x) const { return cov(x, x); }

 private:
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

  VectorL kvec(const Eigen::VectorXd& x) const;
  VectorL basis_at(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd points_;
  VectorL values_;
  int family_;
  double variance_;
  std::vector<double> ranges_;
  Basis basis_;
  MatrixL k_inv_;
  MatrixL f_;
  MatrixL ftkf_inv_;
  VectorL beta_;
};

/// Mean and standard error of a sample.
struct SampleSummary {
  double mean;
  double std_error;
};
SampleSummary summarize(const std::vector<double>& sample);

}  // namespace mosur::testing
