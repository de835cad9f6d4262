// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include "mosur/gp.hpp"
#include "mosur/stats.hpp"

namespace mosur {

/// Joint posterior geometry of a target point x and a candidate x+, without
/// thresholds. Y is the response at x, Y+ the response at x+.
struct PairGeometry {
  Marginal target;
  Marginal candidate;
  Correlation rho{0.0};  // corr(Y, Y+)
  double eta = 0.0;      // (m(x+) - m(x)) / sd(Y - Y+)
  Correlation nu{0.0};   // corr(Y+, Y - Y+)
  bool coincident = false;
};

/// `cov` = c_n(x, x+), `diff_var` = Var[Y - Y+]; `variance` is the kernel
/// variance used for relative tolerances.
PairGeometry make_pair_geometry(const Marginal& target, const Marginal& candidate, double cov,
                                double diff_var, double variance);

PairGeometry pair_geometry(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& x_plus);

/// P[Y+ <= b, Y <= a]: expected future probability of {Y(x) <= a} on {Y+ <= b}.
double q_prob(const PairGeometry& g, double b, double a);
/// P[Y+ >= b, Y <= a].
double r_prob(const PairGeometry& g, double b, double a);
/// P[Y+ <= b, Y <= Y+]: expected future probability of {Y(x) <= Y+} on {Y+ <= b}.
double h_prob(const PairGeometry& g, double b);

/// Geometry plus the two thresholds, standardized.
struct PairLink {
  PairGeometry geometry;
  double a = 0.0;
  double b = 0.0;
  double a_tilde = 0.0;  // (a - m(x)) / s(x)
  double b_bar = 0.0;    // (b - m(x+)) / s(x+)

  bool target_deterministic() const { return geometry.target.deterministic; }
  bool candidate_deterministic() const { return geometry.candidate.deterministic; }
  bool coincident() const { return geometry.coincident; }
};

PairLink link_coefficients(const GpPosterior& post, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const Eigen::Ref<const Eigen::VectorXd>& x_plus, double a, double b);
PairLink make_link(const PairGeometry& g, double a, double b);

inline double q_prob(const PairLink& l) { return q_prob(l.geometry, l.b, l.a); }
inline double r_prob(const PairLink& l) { return r_prob(l.geometry, l.b, l.a); }
inline double h_prob(const PairLink& l) { return h_prob(l.geometry, l.b); }

}  // namespace mosur
