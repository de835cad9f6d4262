// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/criteria.hpp"

#include <cmath>

#include "mosur/error.hpp"
#include "mosur/sobol.hpp"
#include "mosur/stats.hpp"

namespace mosur {

namespace {

// Grid points whose current excursion probability is below this cannot
// contribute more than it to the expected future volume.
constexpr double kGridSkip = 1e-13;
// Candidate cells with less mass than this are skipped in the cell sums.
constexpr double kCellSkip = 1e-12;

// q and h evaluated at every pair of breakpoints of one objective.
class PairTable {
 public:
  PairTable(const PairGeometry& g, const std::vector<double>& breaks)
      : n_(breaks.size()), breaks_(&breaks), q_(n_ * n_), h_(n_) {
    for (std::size_t a = 0; a < n_; ++a) {
      h_[a] = h_prob(g, breaks[a]);
      for (std::size_t b = 0; b < n_; ++b) q_[a * n_ + b] = q_prob(g, breaks[a], breaks[b]);
    }
  }

  // intervals ia (candidate) and ja (target), each spanning breaks [i, i+1]
  CellTerms terms(int ia, int ja) const {
    const auto i = static_cast<std::size_t>(ia), j = static_cast<std::size_t>(ja);
    CellTerms t;
    t.b = q(i + 1, j + 1) - q(i + 1, j) - q(i, j + 1) + q(i, j);
    const auto& br = *breaks_;
    if (br[i] >= br[j + 1]) {
      t.d = 0.0;
    } else if (br[i + 1] <= br[j]) {
      t.d = t.b;
    } else if (br[i] == br[j] && br[i + 1] == br[j + 1]) {
      t.d = q(i + 1, j + 1) - h_[i + 1] + h_[i] - q(i, j + 1);
    } else {
      fail(ErrorCode::internal, "cell intervals overlap without coinciding");
    }
    return t;
  }

 private:
  double q(std::size_t a, std::size_t b) const { return q_[a * n_ + b]; }

  std::size_t n_;
  const std::vector<double>* breaks_;
  std::vector<double> q_;
  std::vector<double> h_;
};

}  // namespace

IntegrationGrid IntegrationGrid::sobol(int n, int dimension) {
  require(n >= 1, "integration grid: need at least one point");
  return uniform(sobol_points(n, dimension));
}

IntegrationGrid IntegrationGrid::uniform(Eigen::MatrixXd points) {
  require(points.rows() >= 1, "integration grid: need at least one point");
  IntegrationGrid g;
  g.weights.assign(static_cast<std::size_t>(points.rows()),
                   1.0 / static_cast<double>(points.rows()));
  g.points = std::move(points);
  return g;
}

int default_integration_size(int dimension) { return dimension <= 2 ? 1000 : 2000; }

double expected_improvement(const Marginal& m, double y_min) {
  if (m.deterministic) return std::max(0.0, y_min - m.mean);
  const double u = (y_min - m.mean) / m.sd;
  return m.sd * (u * norm_cdf(u) + norm_pdf(u));
}

double expected_improvement(const GpPosterior& post, double y_min,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  return expected_improvement(post.marginal(x), y_min);
}

Marginal marginal_of(const GpPosterior& post, const Projection& p) {
  const bool det = p.var < post.duplicate_tolerance();
  return {p.mean, det ? 0.0 : std::sqrt(p.var), det};
}

GridProjection::GridProjection(const GpPosterior& post, const IntegrationGrid& grid)
    : post_(&post), grid_(&grid), columns_(grid.points.transpose()) {
  require(grid.dimension() == post.design().dimension(),
          "integration grid dimension does not match the model");
  projections_.reserve(static_cast<std::size_t>(grid.size()));
  marginals_.reserve(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index l = 0; l < grid.size(); ++l) {
    projections_.push_back(post.project(grid.points.row(l).transpose()));
    marginals_.push_back(marginal_of(post, projections_.back()));
  }
}

PairGeometry GridProjection::pair(Eigen::Index l, const Projection& cand,
                                  const Marginal& cand_marginal,
                                  const Eigen::Ref<const Eigen::VectorXd>& x_plus) const {
  const auto& p = projections_[static_cast<std::size_t>(l)];
  const auto x = columns_.col(l);
  return make_pair_geometry(marginals_[static_cast<std::size_t>(l)], cand_marginal,
                            post_->covariance(p, x, cand, x_plus),
                            post_->difference_variance(p, x, cand, x_plus),
                            post_->kernel().variance);
}

SingleObjectiveCriterion::SingleObjectiveCriterion(const GpPosterior& post,
                                                   const IntegrationGrid& grid, double y_min)
    : grid_(&grid), cache_(post, grid), y_min_(y_min) {
  ev_ = excursion_volume(cache_.marginals(), grid.weights, y_min);
  for (Eigen::Index l = 0; l < grid.size(); ++l) {
    if (cache_.marginal(l).prob_below(y_min) >= kGridSkip) active_.push_back(l);
  }
}

CriterionValue SingleObjectiveCriterion::evaluate(
    const Eigen::Ref<const Eigen::VectorXd>& x_plus) const {
  const GpPosterior& post = cache_.posterior();
  const Projection cand = post.project(x_plus);
  const Marginal cm = marginal_of(post, cand);
  if (cm.deterministic) return {ev_, 0.0};
  double eev = 0.0;
  for (Eigen::Index l : active_) {
    const PairGeometry g = cache_.pair(l, cand, cm, x_plus);
    eev += grid_->weights[static_cast<std::size_t>(l)] *
           (h_prob(g, y_min_) + r_prob(g, y_min_, y_min_));
  }
  return {eev, ev_ - eev};
}

MultiObjectiveCriterion::MultiObjectiveCriterion(const std::vector<GpPosterior>& posts,
                                                 const IntegrationGrid& grid,
                                                 const ParetoState& front)
    : grid_(&grid), tess_(front) {
  require(static_cast<Eigen::Index>(posts.size()) == front.objectives(),
          "criterion: one posterior per objective required");
  for (const auto& p : posts) caches_.emplace_back(p, grid);
  std::vector<Marginal> at(posts.size());
  ev_ = 0.0;
  for (Eigen::Index l = 0; l < grid.size(); ++l) {
    for (std::size_t k = 0; k < posts.size(); ++k) at[k] = caches_[k].marginal(l);
    const double nd = nondominated_probability(at, tess_);
    ev_ += grid.weights[static_cast<std::size_t>(l)] * nd;
    if (nd >= kGridSkip) active_.push_back(l);
  }
}

double MultiObjectiveCriterion::general_integrand(
    const std::vector<PairGeometry>& g, const std::vector<std::vector<double>>& cand_cells) const {
  const int q = tess_.objectives();
  std::vector<PairTable> tables;
  tables.reserve(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) tables.emplace_back(g[static_cast<std::size_t>(k)], tess_.breakpoints(k));
  double total = 0.0;
  for (std::size_t i = 0; i < tess_.cell_count(); ++i) {
    double mass = 1.0;
    for (int k = 0; k < q; ++k) {
      mass *= cand_cells[static_cast<std::size_t>(k)][static_cast<std::size_t>(tess_.interval(i, k))];
    }
    if (mass < kCellSkip) continue;
    for (std::size_t j : tess_.nondominated_cells()) {
      double pb = 1.0, pd = 1.0;
      for (int k = 0; k < q; ++k) {
        const CellTerms t = tables[static_cast<std::size_t>(k)].terms(tess_.interval(i, k),
                                                                      tess_.interval(j, k));
        pb *= t.b;
        pd *= t.d;
      }
      total += pb - pd;
    }
  }
  return total;
}

double MultiObjectiveCriterion::fast2d_integrand(const std::vector<PairGeometry>& g) const {
  // E[ND_{n+1}(x)] = ND_n(x) - P[Y in ND_n, Y+ < Y in both objectives], with
  // the second term split over the staircase columns and
  // G_k(t) = P[Y+_k < Y_k <= t] = q(t,t) - h(t).
  const ParetoState& f = tess_.front();
  const Eigen::Index m = f.size();
  auto big_g = [](const PairGeometry& pg, double t) { return q_prob(pg, t, t) - h_prob(pg, t); };
  std::vector<Marginal> at{g[0].target, g[1].target};
  double removed = 0.0;
  double g1_prev = 0.0;
  for (Eigen::Index j = 0; j <= m; ++j) {
    const double g1 = big_g(g[0], j < m ? f.values(j, 0) : kInf);
    const double g2 = big_g(g[1], j > 0 ? f.values(j - 1, 1) : kInf);
    removed += (g1 - g1_prev) * g2;
    g1_prev = g1;
  }
  return nondominated_probability(at, tess_) - removed;
}

CriterionValue MultiObjectiveCriterion::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x_plus,
                                                 Path path) const {
  const int q = tess_.objectives();
  if (path == Path::automatic) path = q == 2 ? Path::fast2d : Path::general;
  require(path != Path::fast2d || q == 2, "fast two-objective path needs two objectives");

  std::vector<Projection> cand;
  std::vector<Marginal> cm;
  bool all_deterministic = true;
  for (const auto& c : caches_) {
    cand.push_back(c.posterior().project(x_plus));
    cm.push_back(marginal_of(c.posterior(), cand.back()));
    all_deterministic = all_deterministic && cm.back().deterministic;
  }
  if (all_deterministic) return {ev_, 0.0};

  std::vector<std::vector<double>> cand_cells;
  if (path == Path::general) {
    for (int k = 0; k < q; ++k) {
      cand_cells.push_back(interval_probabilities(cm[static_cast<std::size_t>(k)],
                                                  tess_.breakpoints(k)));
    }
  }
  std::vector<PairGeometry> g(static_cast<std::size_t>(q));
  double eev = 0.0;
  for (Eigen::Index l : active_) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] = caches_[k].pair(l, cand[k], cm[k], x_plus);
    }
    const double v = path == Path::general ? general_integrand(g, cand_cells) : fast2d_integrand(g);
    eev += grid_->weights[static_cast<std::size_t>(l)] * v;
  }
  return {eev, ev_ - eev};
}

CellTerms pair_cell_terms(const PairGeometry& g, const Tessellation& tess, int k,
                          std::size_t cell_i, std::size_t cell_j) {
  require(k >= 0 && k < tess.objectives(), "pair_cell_terms: objective out of range");
  const PairTable table(g, tess.breakpoints(k));
  return table.terms(tess.interval(cell_i, k), tess.interval(cell_j, k));
}

double p_ij(const std::vector<PairGeometry>& g, const Tessellation& tess, std::size_t cell_i,
            std::size_t cell_j) {
  require(static_cast<int>(g.size()) == tess.objectives(), "p_ij: one geometry per objective");
  double pb = 1.0, pd = 1.0;
  for (int k = 0; k < tess.objectives(); ++k) {
    const CellTerms t = pair_cell_terms(g[static_cast<std::size_t>(k)], tess, k, cell_i, cell_j);
    pb *= t.b;
    pd *= t.d;
  }
  return pb - pd;
}

CriterionValue eev_single(const GpPosterior& post, const IntegrationGrid& grid, double y_min,
                          const Eigen::Ref<const Eigen::VectorXd>& x_plus) {
  return SingleObjectiveCriterion(post, grid, y_min).evaluate(x_plus);
}

CriterionValue eev_multi(const std::vector<GpPosterior>& posts, const IntegrationGrid& grid,
                         const ParetoState& front,
                         const Eigen::Ref<const Eigen::VectorXd>& x_plus) {
  return MultiObjectiveCriterion(posts, grid, front)
      .evaluate(x_plus, MultiObjectiveCriterion::Path::general);
}

CriterionValue eev_multi_fast2d(const std::vector<GpPosterior>& posts,
                                const IntegrationGrid& grid, const ParetoState& front,
                                const Eigen::Ref<const Eigen::VectorXd>& x_plus) {
  return MultiObjectiveCriterion(posts, grid, front)
      .evaluate(x_plus, MultiObjectiveCriterion::Path::fast2d);
}

}  // namespace mosur
