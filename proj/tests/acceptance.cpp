// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mosur/bench.hpp"
#include "mosur/criteria.hpp"
#include "mosur/mc_oracle.hpp"
#include "mosur/opt_loop.hpp"
#include "mosur/pareto.hpp"
#include "mosur/prob_update.hpp"
#include "mosur/stats.hpp"
#include "test_support.hpp"

namespace mosur {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd uniform_point(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = u(rng);
  return x;
}

// Two independent objectives observed on one random design.
std::vector<GpPosterior> bi_objective(std::mt19937_64& rng, int n, int d, KernelFamily family) {
  const GpPosterior first = random_gp_configuration(rng, n, d, family);
  const KernelSpec k = first.kernel();
  Design second{first.design().points,
                sample_paths(k, first.design().points, 1, rng()).row(0).transpose()};
  return {first, fit(std::move(second), k)};
}

Eigen::MatrixXd archive_of(const std::vector<GpPosterior>& posts) {
  Eigen::MatrixXd a(posts[0].design().size(), static_cast<Eigen::Index>(posts.size()));
  for (std::size_t k = 0; k < posts.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = posts[k].design().values;
  }
  return a;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> n_dist(3, 15);
  std::normal_distribution<double> z;
  const int dims[] = {1, 2, 6};
  int ok_q = 0, ok_r = 0, ok_h = 0;
  double worst_identity = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int d = dims[c % 3];
    const auto fam = (c / 3) % 2 ? KernelFamily::matern32 : KernelFamily::matern52;
    const GpPosterior post = random_gp_configuration(rng, n_dist(rng), d, fam);
    const Eigen::VectorXd x = uniform_point(rng, d), xp = uniform_point(rng, d);
    const Prediction px = post.predict(x), pp = post.predict(xp);
    const double a = px.mean + std::sqrt(px.var) * z(rng);
    const double b = pp.mean + std::sqrt(pp.var) * z(rng);
    const PairLink link = link_coefficients(post, x, xp, a, b);
    const PairEstimates est = mc_pair_expectations(post, x, xp, a, b, 200000, 5000 + c);
    ok_q += within_three_se(q_prob(link), est.q);
    ok_r += within_three_se(r_prob(link), est.r);
    ok_h += within_three_se(h_prob(link), est.h);
    worst_identity = std::max(worst_identity,
                              std::abs(q_prob(link) + r_prob(link) - norm_cdf(link.a_tilde)));
  }
  const double secs = seconds_since(t0);
  return {ok_q >= 48 && ok_r >= 48 && ok_h >= 48 && worst_identity <= 1e-12 && secs < 120.0,
          fmt::format("within 3 SE: q {}/50, r {}/50, h {}/50 (need 48); max |q+r-Phi(a~)| = {:.2e}; "
                      "{:.1f} s (target < 120 s)",
                      ok_q, ok_r, ok_h, worst_identity, secs)};
}

Outcome criterion2() {
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      for (int r = 0; r < 9; ++r) {
        const double h = -4.0 + 0.4 * i, k = -4.0 + 0.4 * j;
        const double rho = -0.99 + 1.98 * r / 8.0;
        worst = std::max(worst, std::abs(bvn_cdf(h, k, Correlation(rho)) -
                                         testing::bvn_by_quadrature(h, k, rho)));
      }
    }
  }
  double sheppard = 0.0;
  for (int r = 0; r < 9; ++r) {
    const double rho = -0.99 + 1.98 * r / 8.0;
    sheppard = std::max(sheppard, std::abs(bvn_cdf(0.0, 0.0, Correlation(rho)) -
                                           (0.25 + std::asin(rho) / (2.0 * M_PI))));
  }
  sheppard = std::max(sheppard, std::abs(bvn_cdf(0.0, 0.0, Correlation(0.5)) - 1.0 / 3.0));
  return {worst <= 1e-10 && sheppard <= 1e-14,
          fmt::format("max error vs quadrature on 21x21x9 grid = {:.2e} (<= 1e-10); "
                      "max Sheppard deviation = {:.2e}",
                      worst, sheppard)};
}

Outcome criterion3() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> n_dist(3, 12);
  int within = 0;
  double min_reduction = kInf;
  for (int c = 0; c < 20; ++c) {
    const int d = 1 + c % 2;
    const auto fam = c % 3 ? KernelFamily::matern52 : KernelFamily::matern32;
    const GpPosterior post = random_gp_configuration(rng, n_dist(rng), d, fam);
    const IntegrationGrid grid = IntegrationGrid::sobol(128, d);
    const double y_min = post.design().values.minCoeff();
    const Eigen::VectorXd xp = uniform_point(rng, d);
    const CriterionValue cv = eev_single(post, grid, y_min, xp);
    const OracleEstimate est = mc_eev({post}, grid, post.design().values, xp, 200000, 7000 + c);
    within += within_three_se(cv.eev, est);
    min_reduction = std::min(min_reduction, cv.reduction);
  }
  return {within == 20 && min_reduction >= -1e-9,
          fmt::format("within 3 SE of MC (2e5 draws): {}/20; min reduction = {:.3e}", within,
                      min_reduction)};
}

Outcome criterion4() {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> n_dist(3, 15);
  int within = 0;
  std::set<Eigen::Index> sizes;
  for (int c = 0; c < 20; ++c) {
    const int d = 1 + c % 2;
    const Eigen::Index target = 1 + c % 8;
    std::vector<GpPosterior> posts;
    ParetoState front;
    // aim for a spread of front sizes in [1, 8]
    for (int attempt = 0; attempt < 400; ++attempt) {
      posts = bi_objective(rng, n_dist(rng), d, KernelFamily::matern52);
      front = extract_front(archive_of(posts));
      if (front.size() == target || (attempt >= 200 && front.size() <= 8)) break;
    }
    sizes.insert(front.size());
    const IntegrationGrid grid = IntegrationGrid::sobol(64, d);
    const Eigen::VectorXd xp = uniform_point(rng, d);
    const CriterionValue cv = eev_multi(posts, grid, front, xp);
    const OracleEstimate est = mc_eev(posts, grid, archive_of(posts), xp, 20000, 9000 + c);
    within += within_three_se(cv.eev, est);
  }
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const int d = 1 + c % 3;
    const auto posts = bi_objective(rng, n_dist(rng), d,
                                    c % 2 ? KernelFamily::matern32 : KernelFamily::matern52);
    const IntegrationGrid grid = IntegrationGrid::sobol(32, d);
    const ParetoState front = extract_front(archive_of(posts));
    const Eigen::VectorXd xp = uniform_point(rng, d);
    worst = std::max(worst, std::abs(eev_multi_fast2d(posts, grid, front, xp).eev -
                                     eev_multi(posts, grid, front, xp).eev));
  }
  return {within == 20 && worst <= 1e-9 && *sizes.rbegin() <= 8,
          fmt::format("within 3 SE of full-pipeline MC (2e4 draws): {}/20, front sizes {}..{} "
                      "({} distinct); max |fast2d - general| over 100 cases = {:.2e}",
                      within, *sizes.begin(), *sizes.rbegin(), sizes.size(), worst)};
}

Outcome criterion5() {
  std::mt19937_64 rng(505);
  const double c = 100.0, shift = -5.0;
  double worst = 0.0;
  int same_argmin = 0;
  const int cases = 10;
  for (int rep = 0; rep < cases; ++rep) {
    const int d = 1 + rep % 2;
    const auto posts = bi_objective(rng, 5 + rep % 6, d, KernelFamily::matern52);
    Eigen::MatrixXd archive = archive_of(posts);
    KernelSpec k = posts[0].kernel();
    k.variance *= c * c;
    Design scaled{posts[0].design().points, c * posts[0].design().values.array() + shift};
    const std::vector<GpPosterior> rescaled{fit(std::move(scaled), k), posts[1]};
    Eigen::MatrixXd archive2 = archive;
    archive2.col(0) = c * archive.col(0).array() + shift;
    const IntegrationGrid grid = IntegrationGrid::sobol(256, d);
    const MultiObjectiveCriterion before(posts, grid, extract_front(archive));
    const MultiObjectiveCriterion after(rescaled, grid, extract_front(archive2));
    Eigen::Index best_before = -1, best_after = -1;
    double v_before = kInf, v_after = kInf;
    for (int i = 0; i < 40; ++i) {
      const Eigen::VectorXd x = uniform_point(rng, d);
      const double e1 = before.evaluate(x).eev, e2 = after.evaluate(x).eev;
      worst = std::max(worst, std::abs(e1 - e2) / std::max(std::abs(e1), 1e-300));
      if (e1 < v_before) {
        v_before = e1;
        best_before = i;
      }
      if (e2 < v_after) {
        v_after = e2;
        best_after = i;
      }
    }
    same_argmin += best_before == best_after;
  }
  return {worst < 1e-9 && same_argmin == cases,
          fmt::format("affine rescaling (c=100, d=-5): max relative eev change = {:.2e} over {} "
                      "candidates; argmin unchanged in {}/{} cases",
                      worst, 40 * cases, same_argmin, cases)};
}

struct ProtocolRun {
  RunTrace trace;
  double seconds = 0.0;
};

ProtocolRun timed_run(const RunConfig& config, const GridProblem& problem) {
  const auto t0 = Clock::now();
  ProtocolRun r;
  r.trace = run(config, problem);
  r.seconds = seconds_since(t0);
  return r;
}

Outcome criterion6() {
  const ProblemSpec spec = gen_problem(ProblemKind::paper_1d, 1);
  const IndicatorSettings settings = default_indicator_settings(spec);
  BenchConfig bench;
  bench.n_initial = 4;
  bench.n_iterations = 10;
  bench.known_covariance = true;
  std::vector<double> hv[2], eps[2];
  double slowest = 0.0;
  int errors = 0, ev_dropped = 0;
  const Strategy strategies[] = {Strategy::sur, Strategy::random};
  for (int s = 0; s < 2; ++s) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ProtocolRun r = timed_run(bench_run_config(bench, spec, strategies[s], seed), spec.problem());
      errors += r.trace.error.has_value();
      const auto rows = compute_indicators(r.trace, spec, settings);
      hv[s].push_back(rows.back().hypervolume);
      eps[s].push_back(rows.back().epsilon);
      if (s == 0) {
        slowest = std::max(slowest, r.seconds);
        ev_dropped += r.trace.records.back().ev < r.trace.records.front().ev;
      }
    }
  }
  const double hv_sur = median(hv[0]), hv_rand = median(hv[1]);
  const double eps_sur = median(eps[0]), eps_rand = median(eps[1]);
  return {errors == 0 && hv_sur > hv_rand && eps_sur < eps_rand && slowest < 30.0,
          fmt::format("20 seeds, final medians: hypervolume SUR {:.5f} vs random {:.5f}; epsilon "
                      "SUR {:.5f} vs random {:.5f}; slowest SUR run {:.1f} s (< 30 s); ev lower "
                      "at the end in {}/20 SUR runs; {} runs stopped early",
                      hv_sur, hv_rand, eps_sur, eps_rand, slowest, ev_dropped, errors)};
}

Outcome criterion7() {
  const ProblemSpec spec = gen_problem(ProblemKind::paper_6d, 1);
  BenchConfig bench;
  bench.n_initial = 10;
  bench.n_iterations = 40;
  bench.candidates = 500;
  bench.known_covariance = true;
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const ProtocolRun r = timed_run(bench_run_config(bench, spec, Strategy::sur, seed), spec.problem());
    const double ev0 = r.trace.records.front().ev, ev1 = r.trace.records.back().ev;
    const bool good = !r.trace.error && r.trace.last_iteration() == 40 && ev1 < ev0 &&
                      r.seconds < 600.0;
    ok = ok && good;
    detail += fmt::format("{}seed {}: {:.0f} s, ev {:.4g} -> {:.4g}{}", seed == 1 ? "" : "; ", seed,
                          r.seconds, ev0, ev1, r.trace.error ? " (stopped early)" : "");
  }
  return {ok, detail + " (limit 600 s per seed)"};
}

std::vector<bool> brute_front_mask(const Eigen::MatrixXd& v) {
  // keep i unless some j dominates it strictly somewhere, or equals it with j < i
  std::vector<bool> keep(static_cast<std::size_t>(v.rows()), true);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.rows(); ++j) {
      if (i == j) continue;
      const bool weak = (v.row(j).array() <= v.row(i).array()).all();
      const bool equal = (v.row(j).array() == v.row(i).array()).all();
      if ((weak && !equal) || (equal && j < i)) keep[static_cast<std::size_t>(i)] = false;
    }
  }
  return keep;
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> n_dist(1, 60), q_dist(2, 3), level(0, 5);
  int front_ok = 0;
  for (int c = 0; c < 200; ++c) {
    const int n = n_dist(rng), q = c < 100 ? 2 : q_dist(rng);
    Eigen::MatrixXd v(n, q);
    // coarse levels force ties and duplicates
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < q; ++k) v(i, k) = c % 2 ? level(rng) : std::normal_distribution<double>()(rng);
    const ParetoState f = extract_front(v);
    const auto keep = brute_front_mask(v);
    std::set<Eigen::Index> expected, got(f.source.begin(), f.source.end());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (keep[static_cast<std::size_t>(i)]) expected.insert(i);
    }
    bool same = expected == got && static_cast<std::size_t>(f.size()) == expected.size();
    for (Eigen::Index r = 0; same && r < f.size(); ++r) {
      same = f.values.row(r) == v.row(f.source[static_cast<std::size_t>(r)]);
    }
    front_ok += same;
  }

  int tess_ok = 0;
  double worst_sum = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int q = 2 + c % 2, d = 1 + c % 3;
    std::vector<GpPosterior> posts;
    const GpPosterior first = random_gp_configuration(rng, 4 + c % 10, d, KernelFamily::matern52);
    posts.push_back(first);
    for (int k = 1; k < q; ++k) {
      Design dk{first.design().points,
                sample_paths(first.kernel(), first.design().points, 1, rng()).row(0).transpose()};
      posts.push_back(fit(std::move(dk), first.kernel()));
    }
    const ParetoState front = extract_front(archive_of(posts));
    const Tessellation tess(front);
    const auto m = static_cast<std::size_t>(front.size());
    std::size_t expected_cells = 1;
    for (int k = 0; k < q; ++k) expected_cells *= m + 1;
    std::vector<Marginal> at;
    const Eigen::VectorXd x = uniform_point(rng, d);
    for (const auto& p : posts) at.push_back(p.marginal(x));
    double total = 0.0;
    for (std::size_t cell = 0; cell < tess.cell_count(); ++cell) total += cell_probability(at, tess, cell);
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    tess_ok += tess.cell_count() == expected_cells && std::abs(total - 1.0) <= 1e-10;
  }
  return {front_ok == 200 && tess_ok == 50,
          fmt::format("extract_front = brute force in {}/200 instances; cell count (m+1)^q and "
                      "probabilities summing to 1 in {}/50 models (max |sum-1| = {:.2e})",
                      front_ok, tess_ok, worst_sum)};
}

Outcome criterion9() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> n_dist(3, 15);
  std::normal_distribution<double> z;
  const int dims[] = {1, 2, 6};
  double worst_mean = 0.0, worst_var = 0.0, worst_increase = -kInf;
  for (int c = 0; c < 50; ++c) {
    const int d = dims[c % 3];
    const auto fam = c % 2 ? KernelFamily::matern32 : KernelFamily::matern52;
    const GpPosterior post = random_gp_configuration(rng, n_dist(rng), d, fam);
    const double var0 = post.kernel().variance;
    const Eigen::VectorXd xn = uniform_point(rng, d);
    const Prediction at_new = post.predict(xn);
    const double yn = at_new.mean + std::sqrt(at_new.var) * z(rng);
    const GpPosterior refit = update(post, xn, yn);
    for (int i = 0; i < 200; ++i) {
      const Eigen::VectorXd x = uniform_point(rng, d);
      const Prediction cheap = update_moments(post, xn, yn, x);
      const Prediction full = refit.predict(x);
      const Prediction before = post.predict(x);
      worst_mean = std::max(worst_mean, std::abs(cheap.mean - full.mean) /
                                            std::max(std::abs(full.mean), std::sqrt(var0)));
      worst_var = std::max(worst_var, std::abs(cheap.var - full.var) / std::max(full.var, var0));
      worst_increase = std::max({worst_increase, (cheap.var - before.var) / var0,
                                 (full.var - before.var) / var0});
    }
  }
  return {worst_mean <= 1e-6 && worst_var <= 1e-6 && worst_increase <= 1e-12,
          fmt::format("update_moments vs refit on 50 cases x 200 probes: max relative error mean "
                      "{:.2e}, variance {:.2e} (<= 1e-6); max (s2_new - s2_old)/sigma2 = {:.2e}",
                      worst_mean, worst_var, worst_increase)};
}

}  // namespace
}  // namespace mosur

int main(int argc, char** argv) {
  using namespace mosur;
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    if (!selected.empty() && !selected.count(c)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %d %s: %s [%.1f s]\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
