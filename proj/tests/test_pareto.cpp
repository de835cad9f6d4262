// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mosur/error.hpp"
#include "mosur/pareto.hpp"
#include "mosur/stats.hpp"
#include "test_support.hpp"

namespace mosur {
namespace {

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()),
                    static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Indices kept by the definition, checked pair by pair.
std::set<Eigen::Index> brute_front(const Eigen::MatrixXd& y) {
  std::set<Eigen::Index> out;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    bool removed = false;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      if (i == j) continue;
      bool le = true, equal = true;
      for (Eigen::Index k = 0; k < y.cols(); ++k) {
        le = le && y(j, k) <= y(i, k);
        equal = equal && y(j, k) == y(i, k);
      }
      if (le && (!equal || j < i)) removed = true;
    }
    if (!removed) out.insert(i);
  }
  return out;
}

Eigen::MatrixXd random_archive(std::mt19937_64& rng, int n, int q, bool rounded) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd y(n, q);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < q; ++k) y(i, k) = rounded ? std::round(3 * z(rng)) : z(rng);
  return y;
}

std::vector<Marginal> random_marginals(std::mt19937_64& rng, int q) {
  std::normal_distribution<double> z;
  std::vector<Marginal> m;
  for (int k = 0; k < q; ++k) m.push_back({z(rng), std::exp(0.5 * z(rng)), false});
  return m;
}

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(Eigen::Vector2d(1, 2), Eigen::Vector2d(2, 3)));
  EXPECT_FALSE(dominates(Eigen::Vector2d(1, 3), Eigen::Vector2d(2, 2)));
  EXPECT_TRUE(dominates(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 3)));
  EXPECT_THROW(dominates(Eigen::Vector2d(1, 3), Eigen::Vector3d(1, 3, 4)), Error);
}

TEST(ExtractFront, Examples) {
  const auto f = extract_front(rows({{1, 2}, {2, 1}, {3, 3}}));
  ASSERT_EQ(f.size(), 2);
  EXPECT_EQ(f.values.row(0), Eigen::RowVector2d(1, 2));
  EXPECT_EQ(f.values.row(1), Eigen::RowVector2d(2, 1));
  EXPECT_EQ(extract_front(rows({{4, 5}})).size(), 1);
  EXPECT_THROW(extract_front(Eigen::MatrixXd(0, 2)), Error);
}

TEST(ExtractFront, TiesKeepFirstObserved) {
  const auto f = extract_front(rows({{3, 1}, {1, 2}, {1, 2}, {1, 4}, {2, 2}}));
  ASSERT_EQ(f.size(), 2);
  EXPECT_EQ(f.source, (std::vector<Eigen::Index>{1, 0}));
  const auto g = extract_front(rows({{1, 2, 3}, {1, 2, 3}, {0, 5, 5}}));
  EXPECT_EQ(g.source, (std::vector<Eigen::Index>{0, 2}));
}

TEST(ExtractFront, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const int q = rep % 4 == 3 ? 3 : 2;
    const int n = 1 + static_cast<int>(rng() % 500);
    const Eigen::MatrixXd y = random_archive(rng, n, q, rep % 2 == 0);
    const auto f = extract_front(y);
    const std::set<Eigen::Index> got(f.source.begin(), f.source.end());
    EXPECT_EQ(got, brute_front(y));
    EXPECT_EQ(got.size(), f.source.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) EXPECT_EQ(f.values.row(i), y.row(f.source[i]));
    if (q == 2) {
      for (Eigen::Index i = 1; i < f.size(); ++i) {
        EXPECT_LT(f.values(i - 1, 0), f.values(i, 0));
        EXPECT_GT(f.values(i - 1, 1), f.values(i, 1));
      }
    }
  }
}

TEST(Tessellation, CellCounts) {
  const auto f4 = extract_front(rows({{0, 4}, {1, 3}, {2, 1}, {3, 0}}));
  EXPECT_EQ(Tessellation(f4).cell_count(), 25u);
  const Tessellation t1(extract_front(rows({{0, 0}})));
  EXPECT_EQ(t1.cell_count(), 4u);
  ASSERT_EQ(t1.nondominated_cells().size(), 3u);
  // the upper-right quadrant is cell (1,1) = 3
  EXPECT_TRUE(t1.dominated(3));
  EXPECT_EQ(t1.lower(3, 0), 0.0);
  EXPECT_EQ(t1.upper(3, 1), kInf);
  std::mt19937_64 rng(2);
  const auto f3 = extract_front(random_archive(rng, 30, 3, false));
  const Tessellation t3(f3);
  EXPECT_EQ(t3.cell_count(), static_cast<std::size_t>(std::pow(f3.size() + 1, 3)));
}

TEST(Tessellation, EmptyFrontIsOneCell) {
  ParetoState empty;
  empty.values.resize(0, 2);
  const Tessellation t(empty);
  ASSERT_EQ(t.cell_count(), 1u);
  EXPECT_FALSE(t.dominated(0));
  std::mt19937_64 rng(1);
  EXPECT_DOUBLE_EQ(cell_probability(random_marginals(rng, 2), t, 0), 1.0);
}

TEST(Tessellation, DominatedFlagsMatchCornerTest) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const int q = 2 + rep % 2;
    const auto f = extract_front(random_archive(rng, 12, q, false));
    const Tessellation t(f);
    std::size_t dominated = 0;
    for (std::size_t c = 0; c < t.cell_count(); ++c) {
      Eigen::VectorXd corner(q);
      for (int k = 0; k < q; ++k) corner[k] = t.lower(c, k);
      bool expect = false;
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        expect = expect || dominates(f.values.row(i).transpose(), corner);
      }
      EXPECT_EQ(t.dominated(c), expect);
      dominated += t.dominated(c);
    }
    EXPECT_EQ(dominated + t.nondominated_cells().size(), t.cell_count());
    if (q == 2) {
      // staircase: m+1 columns, column j holds j+1 non-dominated cells
      const std::size_t m = static_cast<std::size_t>(f.size());
      EXPECT_EQ(t.nondominated_cells().size(), (m + 1) * (m + 2) / 2);
    }
  }
}

TEST(Tessellation, CapacityGuard) {
  std::mt19937_64 rng(3);
  ParetoState f;
  f.values = Eigen::MatrixXd::Random(10, 6);
  try {
    Tessellation t(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::capacity);
  }
}

TEST(CellProbability, SingleOriginFront) {
  const Tessellation t(extract_front(rows({{0, 0}})));
  const std::vector<Marginal> std2{{0, 1, false}, {0, 1, false}};
  EXPECT_NEAR(cell_probability(std2, t, 3), 0.25, 1e-15);
  EXPECT_NEAR(nondominated_probability(std2, t), 0.75, 1e-15);
}

TEST(CellProbability, PartitionOfUnity) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const int q = 2 + rep % 2;
    const auto f = extract_front(random_archive(rng, 15, q, false));
    const Tessellation t(f);
    const auto m = random_marginals(rng, q);
    double total = 0.0, dominated = 0.0;
    for (std::size_t c = 0; c < t.cell_count(); ++c) {
      const double p = cell_probability(m, t, c);
      EXPECT_GE(p, 0.0);
      total += p;
      if (t.dominated(c)) dominated += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_NEAR(nondominated_probability(m, t), 1.0 - dominated, 1e-12);
  }
}

TEST(CellProbability, MatchesMonteCarlo) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  const auto f = extract_front(random_archive(rng, 10, 2, false));
  const Tessellation t(f);
  const auto m = random_marginals(rng, 2);
  std::size_t cell = 0;
  for (std::size_t c = 0; c < t.cell_count(); ++c) {
    if (cell_probability(m, t, c) > cell_probability(m, t, cell)) cell = c;
  }
  const int draws = 100000;
  std::vector<double> in(draws), nd(draws);
  for (int i = 0; i < draws; ++i) {
    const Eigen::Vector2d y(m[0].mean + m[0].sd * z(rng), m[1].mean + m[1].sd * z(rng));
    bool inside = true;
    for (int k = 0; k < 2; ++k) inside = inside && t.lower(cell, k) < y[k] && y[k] <= t.upper(cell, k);
    in[i] = inside;
    bool dom = false;
    for (Eigen::Index j = 0; j < f.size(); ++j) {
      dom = dom || (f.values.row(j).transpose().array() < y.array()).all();
    }
    nd[i] = !dom;
  }
  const auto s = testing::summarize(in);
  EXPECT_LE(std::abs(cell_probability(m, t, cell) - s.mean), 3 * s.std_error);
  const auto s2 = testing::summarize(nd);
  EXPECT_LE(std::abs(nondominated_probability(m, t) - s2.mean), 3 * s2.std_error);
}

TEST(NondominatedProbability, FarBelowFrontIsZero) {
  const Tessellation t(extract_front(rows({{-50, -40}, {-45, -60}})));
  const std::vector<Marginal> m{{0, 1, false}, {0, 1, false}};
  EXPECT_LT(nondominated_probability(m, t), 1e-100);
}

TEST(NondominatedProbability, DeterministicMarginals) {
  const Tessellation t(extract_front(rows({{0, 2}, {1, 1}, {2, 0}})));
  // strictly dominated in both objectives
  EXPECT_EQ(nondominated_probability({{1.5, 0, true}, {1.5, 0, true}}, t), 0.0);
  // on the front
  EXPECT_EQ(nondominated_probability({{1, 0, true}, {1, 0, true}}, t), 1.0);
  // weakly but not strictly dominated
  EXPECT_EQ(nondominated_probability({{1, 0, true}, {1.5, 0, true}}, t), 1.0);
}

TEST(NondominatedProbability, AddingFrontPointsNeverIncreasesIt) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 30; ++rep) {
    const int q = 2 + rep % 2;
    Eigen::MatrixXd archive = random_archive(rng, 8, q, false);
    const Tessellation before(extract_front(archive));
    archive.conservativeResize(archive.rows() + 1, Eigen::NoChange);
    for (int k = 0; k < q; ++k) archive(archive.rows() - 1, k) = z(rng) - 1.0;
    const Tessellation after(extract_front(archive));
    for (int probe = 0; probe < 50; ++probe) {
      const auto m = random_marginals(rng, q);
      EXPECT_LE(nondominated_probability(m, after), nondominated_probability(m, before) + 1e-14);
    }
  }
}

TEST(ExcursionVolume, SingleObjectiveLimits) {
  const std::vector<Marginal> m{{0.1, 1, false}, {-0.4, 0.5, false}, {1, 0, true}};
  const std::vector<double> w{0.25, 0.25, 0.5};
  EXPECT_EQ(excursion_volume(m, w, -kInf), 0.0);
  EXPECT_DOUBLE_EQ(excursion_volume(m, w, kInf), 1.0);
}

TEST(ExcursionVolume, OneObjectiveTessellationMatchesThreshold) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd archive = random_archive(rng, 9, 1, false);
  const Tessellation t(extract_front(archive));
  std::vector<Marginal> m;
  std::vector<double> w;
  for (int l = 0; l < 40; ++l) {
    m.push_back(random_marginals(rng, 1)[0]);
    w.push_back(1.0 / 40);
  }
  EXPECT_NEAR(excursion_volume(std::vector<std::vector<Marginal>>{m}, w, t),
              excursion_volume(m, w, archive.minCoeff()), 1e-15);
}

}  // namespace
}  // namespace mosur
