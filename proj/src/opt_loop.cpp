// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/opt_loop.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <numeric>
#include <random>
#include <set>

namespace mosur {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::sur:
      return "sur";
    case Strategy::ei_scalarized:
      return "ei_scalarized";
    case Strategy::random:
      return "random";
  }
  fail(ErrorCode::internal, "unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "sur") return Strategy::sur;
  if (name == "ei_scalarized") return Strategy::ei_scalarized;
  if (name == "random") return Strategy::random;
  fail(ErrorCode::invalid_argument, "unknown strategy '" + name + "'");
}

Eigen::MatrixXd RunTrace::archive(int iteration) const {
  Eigen::MatrixXd out(0, objectives);
  for (const auto& r : records) {
    if (r.iteration > iteration) break;
    out.conservativeResize(out.rows() + 1, Eigen::NoChange);
    out.row(out.rows() - 1) = r.y.transpose();
  }
  return out;
}

int RunTrace::last_iteration() const { return records.empty() ? 0 : records.back().iteration; }

std::vector<Eigen::Index> initial_design(const std::vector<Eigen::Index>& pool, int n_initial,
                                         std::uint64_t seed) {
  require(!pool.empty(), "initial design: empty candidate set");
  require(n_initial >= 0 && static_cast<std::size_t>(n_initial) <= pool.size(),
          "initial design: more points requested than candidates");
  std::vector<Eigen::Index> p = pool;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_initial); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, p.size() - 1);
    std::swap(p[i], p[pick(rng)]);
  }
  p.resize(static_cast<std::size_t>(n_initial));
  return p;
}

std::vector<Eigen::Index> eligible_candidates(const std::vector<GpPosterior>& posts,
                                              const Eigen::MatrixXd& points,
                                              const std::vector<Eigen::Index>& pool,
                                              const std::vector<Eigen::Index>& observed) {
  const std::set<Eigen::Index> seen(observed.begin(), observed.end());
  std::vector<Eigen::Index> out;
  for (Eigen::Index i : pool) {
    if (seen.count(i)) continue;
    bool known = false;
    for (const auto& p : posts) {
      known = known || p.predict(points.row(i).transpose()).var < p.duplicate_tolerance();
    }
    if (!known) out.push_back(i);
  }
  return out;
}

namespace {

class Evaluator {
 public:
  Evaluator(const std::vector<GpPosterior>& posts, const Eigen::MatrixXd& archive,
            const IntegrationGrid& grid) {
    if (posts.size() == 1) {
      single_.emplace(posts[0], grid, archive.col(0).minCoeff());
    } else {
      multi_.emplace(posts, grid, extract_front(archive));
    }
  }

  double ev() const { return single_ ? single_->ev() : multi_->ev(); }
  CriterionValue evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return single_ ? single_->evaluate(x) : multi_->evaluate(x);
  }

 private:
  std::optional<SingleObjectiveCriterion> single_;
  std::optional<MultiObjectiveCriterion> multi_;
};

Selection argmin(const Evaluator& eval, const Eigen::MatrixXd& points,
                 const std::vector<Eigen::Index>& eligible) {
  require(!eligible.empty(), "select: no eligible candidate left");
  Selection best;
  for (Eigen::Index i : eligible) {
    const CriterionValue v = eval.evaluate(points.row(i).transpose());
    if (best.candidate < 0 || v.eev < best.value.eev) best = {i, v};
  }
  return best;
}

}  // namespace

Selection select_next(const std::vector<GpPosterior>& posts, const Eigen::MatrixXd& archive,
                      const IntegrationGrid& grid, const Eigen::MatrixXd& points,
                      const std::vector<Eigen::Index>& eligible) {
  require(!posts.empty() && archive.cols() == static_cast<Eigen::Index>(posts.size()),
          "select: archive columns must match the models");
  const Evaluator eval(posts, archive, grid);
  return argmin(eval, points, eligible);
}

namespace {

struct ModelState {
  std::vector<GpPosterior> posts;
  std::unique_ptr<Evaluator> eval;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::uint64_t out = 0;
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

GpPosterior fit_objective(const RunConfig& config, Design design, int k, int iteration) {
  const bool fixed = config.known_covariance && !config.refit_hyperparameters;
  if (fixed) return fit(std::move(design), (*config.known_covariance)[static_cast<std::size_t>(k)]);
  EstimationOptions opt;
  opt.seed = mix(config.design_seed, static_cast<std::uint64_t>(iteration) * 16 + static_cast<std::uint64_t>(k));
  const KernelFamily family = config.known_covariance
                                  ? (*config.known_covariance)[static_cast<std::size_t>(k)].family
                                  : config.family;
  const EstimationResult est = estimate_hyperparameters(design, family, TrendBasis::constant(), opt);
  return fit(std::move(design), est.kernel);
}

ModelState build_models(const RunConfig& config, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                        const IntegrationGrid& grid, int iteration) {
  ModelState s;
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    s.posts.push_back(fit_objective(config, Design{x, y.col(k)}, static_cast<int>(k), iteration));
  }
  s.eval = std::make_unique<Evaluator>(s.posts, y, grid);
  return s;
}

Eigen::Index pick_scalarized(const RunConfig& config, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y, const Eigen::MatrixXd& points,
                             const std::vector<Eigen::Index>& eligible, std::mt19937_64& rng,
                             int iteration) {
  const Eigen::Index q = y.cols();
  // uniform weight on the simplex
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(q);
  for (Eigen::Index k = 0; k < q; ++k) w[k] = e(rng);
  w /= w.sum();
  const Eigen::RowVectorXd lo = y.colwise().minCoeff();
  Eigen::RowVectorXd span = y.colwise().maxCoeff() - lo;
  for (Eigen::Index k = 0; k < q; ++k) {
    if (!(span[k] > 0.0)) span[k] = 1.0;
  }
  Eigen::VectorXd s(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const Eigen::ArrayXd f = ((y.row(i) - lo).array() / span.array()).transpose() * w.array();
    s[i] = f.maxCoeff() + config.scalarization_rho * f.sum();
  }
  Design design{x, s};
  EstimationOptions opt;
  opt.seed = mix(config.candidate_seed, static_cast<std::uint64_t>(iteration));
  const KernelFamily family =
      config.known_covariance ? config.known_covariance->front().family : config.family;
  const auto est = estimate_hyperparameters(design, family, TrendBasis::constant(), opt);
  const GpPosterior post = fit(std::move(design), est.kernel);
  const double best = s.minCoeff();
  Eigen::Index choice = -1;
  double top = -1.0;
  for (Eigen::Index i : eligible) {
    const double ei = expected_improvement(post, best, points.row(i).transpose());
    if (ei > top) {
      top = ei;
      choice = i;
    }
  }
  return choice;
}

}  // namespace

RunTrace run(const RunConfig& config, const GridProblem& problem) {
  const Eigen::Index q = problem.objectives();
  const Eigen::Index d = problem.dimension();
  require(problem.size() > 0 && q >= 1 && problem.values.rows() == problem.size(),
          "run: problem has no candidates or mismatched values");
  require(config.n_initial >= 2, "run: at least two initial observations required");
  require(config.n_iterations >= 0, "run: negative iteration count");
  if (config.known_covariance) {
    require(static_cast<Eigen::Index>(config.known_covariance->size()) == q,
            "run: one known kernel per objective required");
  }
  std::vector<Eigen::Index> pool = config.candidate_subset;
  if (pool.empty()) {
    pool.resize(static_cast<std::size_t>(problem.size()));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  }
  for (Eigen::Index i : pool) require(i >= 0 && i < problem.size(), "run: subset index out of range");

  const int n_int = config.integration_size > 0 ? config.integration_size
                                                 : default_integration_size(static_cast<int>(d));
  const IntegrationGrid grid = IntegrationGrid::sobol(n_int, static_cast<int>(d));

  RunTrace trace;
  trace.dimension = static_cast<int>(d);
  trace.objectives = static_cast<int>(q);

  using clock = std::chrono::steady_clock;
  auto elapsed_ms = [&](clock::time_point t0) {
    return config.record_timing
               ? std::chrono::duration<double, std::milli>(clock::now() - t0).count()
               : 0.0;
  };

  std::vector<Eigen::Index> observed = initial_design(pool, config.n_initial, config.design_seed);
  Eigen::MatrixXd x(0, d), y(0, q);
  auto observe = [&](Eigen::Index i) {
    x.conservativeResize(x.rows() + 1, Eigen::NoChange);
    y.conservativeResize(y.rows() + 1, Eigen::NoChange);
    x.row(x.rows() - 1) = problem.points.row(i);
    y.row(y.rows() - 1) = problem.values.row(i);
  };

  try {
    auto t0 = clock::now();
    for (Eigen::Index i : observed) observe(i);
    ModelState state = build_models(config, x, y, grid, 0);
    const double ev0 = state.eval->ev();
    const double init_ms = elapsed_ms(t0);
    for (std::size_t r = 0; r < observed.size(); ++r) {
      TraceRecord rec;
      rec.iteration = 0;
      rec.candidate = observed[r];
      rec.x = x.row(static_cast<Eigen::Index>(r)).transpose();
      rec.y = y.row(static_cast<Eigen::Index>(r)).transpose();
      rec.ev = ev0;
      rec.wall_ms = r + 1 == observed.size() ? init_ms : 0.0;
      trace.records.push_back(rec);
    }

    std::mt19937_64 rng(config.candidate_seed);
    for (int it = 1; it <= config.n_iterations; ++it) {
      t0 = clock::now();
      const auto eligible = eligible_candidates(state.posts, problem.points, pool, observed);
      require(!eligible.empty(), "run: no eligible candidate left");
      Selection sel;
      switch (config.strategy) {
        case Strategy::sur:
          sel = argmin(*state.eval, problem.points, eligible);
          break;
        case Strategy::random: {
          std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
          sel.candidate = eligible[pick(rng)];
          sel.value = state.eval->evaluate(problem.points.row(sel.candidate).transpose());
          break;
        }
        case Strategy::ei_scalarized:
          sel.candidate = pick_scalarized(config, x, y, problem.points, eligible, rng, it);
          sel.value = state.eval->evaluate(problem.points.row(sel.candidate).transpose());
          break;
      }
      observed.push_back(sel.candidate);
      observe(sel.candidate);
      state = build_models(config, x, y, grid, it);

      TraceRecord rec;
      rec.iteration = it;
      rec.candidate = sel.candidate;
      rec.x = x.row(x.rows() - 1).transpose();
      rec.y = y.row(y.rows() - 1).transpose();
      rec.eev = sel.value.eev;
      rec.reduction = sel.value.reduction;
      rec.ev = state.eval->ev();
      rec.wall_ms = elapsed_ms(t0);
      trace.records.push_back(rec);
    }
  } catch (const Error& e) {
    trace.error = e;
  }
  return trace;
}

}  // namespace mosur
