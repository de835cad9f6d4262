// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "random_models.hpp"

#include <cmath>

namespace mosur::testing {

Eigen::VectorXd random_point(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = u(rng);
  return x;
}

Eigen::MatrixXd random_points(std::mt19937_64& rng, int n, int d) {
  Eigen::MatrixXd p(n, d);
  for (int i = 0; i < n; ++i) p.row(i) = random_point(rng, d).transpose();
  return p;
}

GpPosterior random_posterior(std::mt19937_64& rng, int n, int d, KernelFamily family,
                             double variance) {
  std::uniform_real_distribution<double> range(0.2, 0.5);
  KernelSpec k;
  k.family = family;
  k.variance = variance;
  for (int j = 0; j < d; ++j) k.ranges.push_back(range(rng) * std::sqrt(static_cast<double>(d)));
  Design design{random_points(rng, n, d), Eigen::VectorXd()};
  design.values = sample_paths(k, design.points, 1, rng()).row(0).transpose();
  return fit(std::move(design), std::move(k));
}

MultiModel random_multi_model(std::mt19937_64& rng, int n, int d, int q, KernelFamily family) {
  std::uniform_real_distribution<double> range(0.2, 0.5);
  const Eigen::MatrixXd points = random_points(rng, n, d);
  MultiModel out;
  out.archive.resize(n, q);
  for (int k = 0; k < q; ++k) {
    KernelSpec ks;
    ks.family = family;
    ks.variance = 1.0;
    for (int j = 0; j < d; ++j) ks.ranges.push_back(range(rng) * std::sqrt(static_cast<double>(d)));
    Design design{points, sample_paths(ks, points, 1, rng()).row(0).transpose()};
    out.archive.col(k) = design.values;
    out.posts.push_back(fit(std::move(design), std::move(ks)));
  }
  return out;
}

}  // namespace mosur::testing
