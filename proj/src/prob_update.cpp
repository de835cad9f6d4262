// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/prob_update.hpp"

#include <cmath>

namespace mosur {

namespace {

constexpr double kCoincidentTolerance = 1e-12;

}  // namespace

PairGeometry make_pair_geometry(const Marginal& target, const Marginal& candidate, double cov,
                                double diff_var, double variance) {
  PairGeometry g;
  g.target = target;
  g.candidate = candidate;
  g.coincident = diff_var <= kCoincidentTolerance * variance;
  if (!target.deterministic && !candidate.deterministic) {
    g.rho = Correlation::clamped(cov / (target.sd * candidate.sd));
  }
  if (candidate.deterministic || g.coincident) return g;
  if (target.deterministic) {
    // Y - Y+ reduces to m(x) - Y+
    g.eta = (candidate.mean - target.mean) / candidate.sd;
    g.nu = Correlation(-1.0);
    return g;
  }
  const double diff_sd = std::sqrt(diff_var);
  g.eta = (candidate.mean - target.mean) / diff_sd;
  g.nu = Correlation::clamped((cov - candidate.sd * candidate.sd) / (candidate.sd * diff_sd));
  return g;
}

PairGeometry pair_geometry(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& x_plus) {
  const Projection p = post.project(x);
  const Projection pp = post.project(x_plus);
  const double tol = post.duplicate_tolerance();
  auto marginal = [tol](const Projection& pr) {
    const bool det = pr.var < tol;
    return Marginal{pr.mean, det ? 0.0 : std::sqrt(pr.var), det};
  };
  return make_pair_geometry(marginal(p), marginal(pp), post.covariance(p, x, pp, x_plus),
                            post.difference_variance(p, x, pp, x_plus),
                            post.kernel().variance);
}

double q_prob(const PairGeometry& g, double b, double a) {
  return bvn_cdf(g.candidate.standardize(b), g.target.standardize(a), g.rho);
}

double r_prob(const PairGeometry& g, double b, double a) {
  return bvn_cdf(-g.candidate.standardize(b), g.target.standardize(a),
                 Correlation(-g.rho.value()));
}

double h_prob(const PairGeometry& g, double b) {
  if (g.candidate.deterministic) {
    return g.candidate.mean <= b ? g.target.prob_below(g.candidate.mean) : 0.0;
  }
  const double b_bar = g.candidate.standardize(b);
  if (g.coincident) return norm_cdf(b_bar);
  return bvn_cdf(b_bar, g.eta, g.nu);
}

PairLink make_link(const PairGeometry& g, double a, double b) {
  PairLink l;
  l.geometry = g;
  l.a = a;
  l.b = b;
  l.a_tilde = g.target.standardize(a);
  l.b_bar = g.candidate.standardize(b);
  return l;
}

PairLink link_coefficients(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& x_plus, double a, double b) {
  return make_link(pair_geometry(post, x, x_plus), a, b);
}

}  // namespace mosur
