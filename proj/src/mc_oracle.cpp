// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/mc_oracle.hpp"

#include <fmt/format.h>
#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <cmath>

#include "mosur/error.hpp"
#include "mosur/pareto.hpp"
#include "mosur/prob_update.hpp"
#include "mosur/stats.hpp"

namespace mosur {

namespace {

// Welford accumulator.
class Accumulator {
 public:
  void add(double v) {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
  }
  OracleEstimate estimate(std::uint64_t seed) const {
    const double var = n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    return {mean_, std::sqrt(var / static_cast<double>(n_)), n_, seed};
  }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Standard normal restricted to (a, b], by inversion on the tail nearer the
// interval so that far-tail intervals keep their precision.
double truncated_normal(double a, double b, double u) {
  double x;
  if (a >= 0.0) {
    const double qa = norm_cdf(-a), qb = norm_cdf(-b);
    x = gsl_cdf_ugaussian_Qinv(qb + u * (qa - qb));
  } else {
    const double pa = norm_cdf(a), pb = norm_cdf(b);
    x = gsl_cdf_ugaussian_Pinv(pa + u * (pb - pa));
  }
  return std::clamp(x, a, b);
}

// Updated variances below this (relative to the kernel variance) are rounding
// noise; anything larger keeps its exact conditional law.
constexpr double kUpdatedVarianceFloor = 1e-12;

double variance_floor(const GpPosterior& post) {
  return kUpdatedVarianceFloor * post.kernel().variance;
}

Marginal updated_marginal(const Prediction& p, double tolerance) {
  const bool det = p.var < tolerance;
  return {p.mean, det ? 0.0 : std::sqrt(p.var), det};
}

}  // namespace

PairEstimates mc_pair_expectations(const GpPosterior& post,
                                   const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_plus, double a,
                                   double b, long n_draws, std::uint64_t seed) {
  require(n_draws >= kMinOracleDraws, "oracle: at least 1000 draws required");
  const Prediction at_new = post.predict(x_plus);
  const Prediction at_x = post.predict(x);
  const double tol = post.duplicate_tolerance();
  Accumulator q, r, h;
  if (at_new.var < tol) {
    const double y = at_new.mean;
    const Marginal m = updated_marginal(at_x, tol);
    q.add(y <= b ? m.prob_below(a) : 0.0);
    r.add(y >= b ? m.prob_below(a) : 0.0);
    h.add(y <= b ? m.prob_below(y) : 0.0);
    return {q.estimate(seed), r.estimate(seed), h.estimate(seed)};
  }
  const MomentUpdater upd(at_new, at_x, post.posterior_cov(x, x_plus));
  const double floor = variance_floor(post);
  // a target already known stays fixed
  const bool target_known = at_x.var < tol;
  const double sd = std::sqrt(at_new.var);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  for (long i = 0; i < n_draws; ++i) {
    const double y = at_new.mean + sd * z(rng);
    const Marginal m = target_known ? updated_marginal(at_x, tol) : updated_marginal(upd(y), floor);
    const double pa = m.prob_below(a);
    q.add(y <= b ? pa : 0.0);
    r.add(y >= b ? pa : 0.0);
    h.add(y <= b ? m.prob_below(y) : 0.0);
  }
  return {q.estimate(seed), r.estimate(seed), h.estimate(seed)};
}

OracleEstimate mc_eev(const std::vector<GpPosterior>& posts, const IntegrationGrid& grid,
                      const Eigen::MatrixXd& archive,
                      const Eigen::Ref<const Eigen::VectorXd>& x_plus, long n_draws,
                      std::uint64_t seed) {
  require(n_draws >= kMinOracleDraws, "oracle: at least 1000 draws required");
  const auto q = static_cast<Eigen::Index>(posts.size());
  require(q >= 1 && archive.cols() == q, "oracle: archive columns must match the models");
  const auto n_grid = static_cast<std::size_t>(grid.size());

  std::vector<Prediction> at_new;
  std::vector<std::vector<MomentUpdater>> updaters(posts.size());
  std::vector<std::vector<Marginal>> current(posts.size());
  bool all_det = true;
  for (std::size_t k = 0; k < posts.size(); ++k) {
    const GpPosterior& post = posts[k];
    at_new.push_back(post.predict(x_plus));
    const bool det = at_new.back().var < post.duplicate_tolerance();
    all_det = all_det && det;
    const Projection pc = post.project(x_plus);
    for (std::size_t l = 0; l < n_grid; ++l) {
      const Eigen::VectorXd x = grid.points.row(static_cast<Eigen::Index>(l)).transpose();
      const Projection px = post.project(x);
      current[k].push_back(marginal_of(post, px));
      // a known candidate leaves the model unchanged
      updaters[k].push_back(det ? MomentUpdater({0.0, 1.0}, {px.mean, px.var}, 0.0)
                                : MomentUpdater({pc.mean, pc.var}, {px.mean, px.var},
                                                post.covariance(px, x, pc, x_plus)));
    }
  }

  Eigen::MatrixXd augmented(archive.rows() + 1, q);
  augmented.topRows(archive.rows()) = archive;
  std::vector<std::vector<Marginal>> next(posts.size(), std::vector<Marginal>(n_grid));
  Accumulator acc;

  // Control variate: the updated probabilities integrated over the current
  // front have expectation ev_n exactly. Their difference from the new volume
  // vanishes unless the drawn vector is non-dominated, so Y+ is drawn from
  // the non-dominated cells only and the mean is weighted by their mass.
  const Tessellation current_tess(extract_front(archive));
  const double ev_n = excursion_volume(current, grid.weights, current_tess);

  auto volume_change = [&](const Eigen::VectorXd& y) {
    augmented.row(archive.rows()) = y.transpose();
    const Tessellation tess(extract_front(augmented));
    for (std::size_t k = 0; k < posts.size(); ++k) {
      const double floor = variance_floor(posts[k]);
      for (std::size_t l = 0; l < n_grid; ++l) {
        next[k][l] = current[k][l].deterministic
                         ? current[k][l]
                         : updated_marginal(updaters[k][l](y[static_cast<Eigen::Index>(k)]), floor);
      }
    }
    return excursion_volume(next, grid.weights, tess) -
           excursion_volume(next, grid.weights, current_tess);
  };

  std::vector<Marginal> cand;
  for (std::size_t k = 0; k < posts.size(); ++k) {
    cand.push_back(updated_marginal(at_new[k], posts[k].duplicate_tolerance()));
  }
  const auto& cells = current_tess.nondominated_cells();
  std::vector<double> mass;
  double p_nd = 0.0;
  for (const std::size_t cell : cells) {
    mass.push_back(cell_probability(cand, current_tess, cell));
    p_nd += mass.back();
  }

  Eigen::VectorXd y(q);
  if (all_det) {
    for (Eigen::Index k = 0; k < q; ++k) y[k] = at_new[static_cast<std::size_t>(k)].mean;
    return {ev_n + volume_change(y), 0.0, 1, seed};
  }
  if (p_nd <= 0.0) return {ev_n, 0.0, n_draws, seed};

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(mass.begin(), mass.end());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (long i = 0; i < n_draws; ++i) {
    const std::size_t cell = cells[pick(rng)];
    for (Eigen::Index k = 0; k < q; ++k) {
      const Marginal& m = cand[static_cast<std::size_t>(k)];
      const int ki = static_cast<int>(k);
      if (m.deterministic) {
        y[k] = m.mean;
      } else {
        const double lo = m.standardize(current_tess.lower(cell, ki));
        const double hi = m.standardize(current_tess.upper(cell, ki));
        y[k] = m.mean + m.sd * truncated_normal(lo, hi, unif(rng));
      }
    }
    acc.add(volume_change(y));
  }
  OracleEstimate est = acc.estimate(seed);
  est.mean = ev_n + p_nd * est.mean;
  est.std_error *= p_nd;
  return est;
}

GpPosterior random_gp_configuration(std::mt19937_64& rng, int n, int d, KernelFamily family) {
  require(n >= 1 && d >= 1, "random configuration: need n >= 1 and d >= 1");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  KernelSpec k;
  k.family = family;
  k.variance = 1.0;
  for (int j = 0; j < d; ++j) {
    k.ranges.push_back((0.2 + 0.3 * u(rng)) * std::sqrt(static_cast<double>(d)));
  }
  Design design;
  design.points.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) design.points(i, j) = u(rng);
  design.values = sample_paths(k, design.points, 1, rng()).row(0).transpose();
  return fit(std::move(design), std::move(k));
}

bool within_three_se(double closed_form, const OracleEstimate& est) {
  return std::abs(closed_form - est.mean) <= 3.0 * est.std_error + 1e-12;
}

bool OracleSuiteReport::passed() const {
  for (const auto& g : groups) {
    if (g.violations > g.allowed) return false;
  }
  return true;
}

OracleSuite oracle_suite_from_string(const std::string& name) {
  if (name == "all") return OracleSuite::all;
  if (name == "prob") return OracleSuite::prob;
  if (name == "eev") return OracleSuite::eev;
  fail(ErrorCode::invalid_argument, "unknown oracle suite '" + name + "'");
}

namespace {

Eigen::VectorXd uniform_point(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = u(rng);
  return x;
}

void record(OracleSuiteReport& report, OracleSuiteReport::Group& group, std::string name,
            double closed, const OracleEstimate& est) {
  OracleCheck c{std::move(name), closed, est, within_three_se(closed, est)};
  ++group.cases;
  group.violations += c.within ? 0 : 1;
  report.checks.push_back(std::move(c));
}

void prob_suite(OracleSuiteReport& report, long n_draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  OracleSuiteReport::Group gq{"q", 0, 0, 2}, gr{"r", 0, 0, 2}, gh{"h", 0, 0, 2};
  const int dims[] = {1, 2, 6};
  for (int c = 0; c < 50; ++c) {
    const int d = dims[c % 3];
    const auto fam = c % 2 ? KernelFamily::matern32 : KernelFamily::matern52;
    const int n = 3 + static_cast<int>(rng() % 13);
    const GpPosterior post = random_gp_configuration(rng, n, d, fam);
    const Eigen::VectorXd x = uniform_point(rng, d), xp = uniform_point(rng, d);
    const Prediction px = post.predict(x), pp = post.predict(xp);
    const double a = px.mean + std::sqrt(px.var) * z(rng);
    const double b = pp.mean + std::sqrt(pp.var) * z(rng);
    const PairLink link = link_coefficients(post, x, xp, a, b);
    const PairEstimates est = mc_pair_expectations(post, x, xp, a, b, n_draws, seed + 1 + c);
    record(report, gq, fmt::format("q[{}]", c), q_prob(link), est.q);
    record(report, gr, fmt::format("r[{}]", c), r_prob(link), est.r);
    record(report, gh, fmt::format("h[{}]", c), h_prob(link), est.h);
  }
  report.groups.push_back(gq);
  report.groups.push_back(gr);
  report.groups.push_back(gh);
}

void eev_suite(OracleSuiteReport& report, long n_draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  OracleSuiteReport::Group gs{"eev_single", 0, 0, 0}, gm{"eev_multi", 0, 0, 0};
  for (int c = 0; c < 10; ++c) {
    const int d = 1 + c % 2;
    const GpPosterior post = random_gp_configuration(rng, 4 + c % 5, d, KernelFamily::matern52);
    const IntegrationGrid grid = IntegrationGrid::sobol(64, d);
    const double y_min = post.design().values.minCoeff();
    const Eigen::VectorXd xp = uniform_point(rng, d);
    const CriterionValue cv = eev_single(post, grid, y_min, xp);
    const OracleEstimate est = mc_eev({post}, grid, post.design().values, xp, n_draws,
                                      seed + 100 + c);
    record(report, gs, fmt::format("eev_single[{}]", c), cv.eev, est);
  }
  for (int c = 0; c < 10; ++c) {
    const int d = 1 + c % 2;
    const int n = 3 + c % 6;
    const GpPosterior first = random_gp_configuration(rng, n, d, KernelFamily::matern52);
    // second objective on the same design
    KernelSpec k2 = first.kernel();
    Design d2{first.design().points,
              sample_paths(k2, first.design().points, 1, rng()).row(0).transpose()};
    const std::vector<GpPosterior> posts{first, fit(std::move(d2), k2)};
    Eigen::MatrixXd archive(n, 2);
    archive.col(0) = posts[0].design().values;
    archive.col(1) = posts[1].design().values;
    const IntegrationGrid grid = IntegrationGrid::sobol(64, d);
    const Eigen::VectorXd xp = uniform_point(rng, d);
    const CriterionValue cv = eev_multi(posts, grid, extract_front(archive), xp);
    const OracleEstimate est = mc_eev(posts, grid, archive, xp, n_draws, seed + 200 + c);
    record(report, gm, fmt::format("eev_multi[{}]", c), cv.eev, est);
  }
  report.groups.push_back(gs);
  report.groups.push_back(gm);
}

}  // namespace

OracleSuiteReport run_oracle_suite(OracleSuite suite, long n_draws, std::uint64_t seed) {
  require(n_draws >= kMinOracleDraws, "oracle: at least 1000 draws required");
  OracleSuiteReport report;
  if (suite == OracleSuite::all || suite == OracleSuite::prob) prob_suite(report, n_draws, seed);
  if (suite == OracleSuite::all || suite == OracleSuite::eev) eev_suite(report, n_draws, seed);
  return report;
}

}  // namespace mosur
