// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mosur/error.hpp"
#include "mosur/stats.hpp"

namespace mosur {

bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
               const Eigen::Ref<const Eigen::VectorXd>& b) {
  require(a.size() == b.size(), "dominates: length mismatch");
  return (a.array() <= b.array()).all();
}

namespace {

ParetoState take_rows(const Eigen::MatrixXd& archive, const std::vector<Eigen::Index>& rows) {
  ParetoState s;
  s.values.resize(static_cast<Eigen::Index>(rows.size()), archive.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s.values.row(static_cast<Eigen::Index>(i)) = archive.row(rows[i]);
  }
  s.source = rows;
  return s;
}

ParetoState front_2d(const Eigen::MatrixXd& y) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (y(a, 0) != y(b, 0)) return y(a, 0) < y(b, 0);
    if (y(a, 1) != y(b, 1)) return y(a, 1) < y(b, 1);
    return a < b;
  });
  std::vector<Eigen::Index> keep;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i : order) {
    if (y(i, 1) < best) {
      keep.push_back(i);
      best = y(i, 1);
    }
  }
  return take_rows(y, keep);
}

}  // namespace

ParetoState extract_front(const Eigen::MatrixXd& archive) {
  require(archive.rows() > 0, "extract_front: empty archive");
  require(archive.cols() > 0, "extract_front: no objectives");
  require(archive.allFinite(), "extract_front: non-finite objective value");
  if (archive.cols() == 2) return front_2d(archive);

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < archive.rows(); ++i) {
    bool out = false;
    for (Eigen::Index j = 0; j < archive.rows() && !out; ++j) {
      if (j == i || !dominates(archive.row(j).transpose(), archive.row(i).transpose())) continue;
      out = archive.row(j) != archive.row(i) || j < i;
    }
    if (!out) keep.push_back(i);
  }
  return take_rows(archive, keep);
}

Tessellation::Tessellation(const ParetoState& front)
    : front_(front),
      q_(static_cast<int>(front.objectives())),
      radix_(static_cast<int>(front.size()) + 1) {
  require(q_ >= 1, "tessellation: no objectives");
  double count = std::pow(static_cast<double>(radix_), q_);
  if (count > static_cast<double>(kMaxCells)) {
    fail(ErrorCode::capacity, "tessellation: " + std::to_string(radix_) + "^" +
                                  std::to_string(q_) + " cells exceeds the limit");
  }
  cells_ = static_cast<std::size_t>(count);

  breaks_.resize(static_cast<std::size_t>(q_));
  for (int k = 0; k < q_; ++k) {
    auto& b = breaks_[static_cast<std::size_t>(k)];
    b.push_back(-kInf);
    for (Eigen::Index i = 0; i < front_.size(); ++i) b.push_back(front_.values(i, k));
    std::sort(b.begin() + 1, b.end());
    b.push_back(kInf);
  }

  dominated_.assign(cells_, 0);
  for (std::size_t c = 0; c < cells_; ++c) {
    for (Eigen::Index i = 0; i < front_.size() && !dominated_[c]; ++i) {
      bool all = true;
      for (int k = 0; k < q_ && all; ++k) all = front_.values(i, k) <= lower(c, k);
      dominated_[c] = all;
    }
    if (!dominated_[c]) nondominated_.push_back(c);
  }
}

int Tessellation::interval(std::size_t cell, int k) const {
  for (int j = 0; j < k; ++j) cell /= static_cast<std::size_t>(radix_);
  return static_cast<int>(cell % static_cast<std::size_t>(radix_));
}

std::vector<double> interval_probabilities(const Marginal& m, const std::vector<double>& breaks) {
  std::vector<double> out(breaks.size() - 1);
  double prev = m.prob_below(breaks[0]);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double next = m.prob_below(breaks[i + 1]);
    out[i] = std::max(0.0, next - prev);
    prev = next;
  }
  return out;
}

double cell_probability(const std::vector<Marginal>& marginals, const Tessellation& tess,
                        std::size_t cell) {
  require(static_cast<int>(marginals.size()) == tess.objectives(),
          "cell_probability: one marginal per objective required");
  require(cell < tess.cell_count(), "cell_probability: cell index out of range");
  double p = 1.0;
  for (int k = 0; k < tess.objectives(); ++k) {
    const Marginal& m = marginals[static_cast<std::size_t>(k)];
    p *= std::max(0.0, m.prob_below(tess.upper(cell, k)) - m.prob_below(tess.lower(cell, k)));
  }
  return p;
}

double nondominated_probability(const std::vector<Marginal>& marginals,
                                const Tessellation& tess) {
  require(static_cast<int>(marginals.size()) == tess.objectives(),
          "nondominated_probability: one marginal per objective required");
  const ParetoState& f = tess.front();
  if (tess.objectives() == 2) {
    // staircase: column j spans (y_j, y_{j+1}] in the first objective and is
    // non-dominated below y_j in the second
    const Marginal& m1 = marginals[0];
    const Marginal& m2 = marginals[1];
    double total = 0.0;
    double lo = 0.0;
    for (Eigen::Index j = 0; j <= f.size(); ++j) {
      const double hi = j < f.size() ? m1.prob_below(f.values(j, 0)) : 1.0;
      const double ceiling = j == 0 ? 1.0 : m2.prob_below(f.values(j - 1, 1));
      total += std::max(0.0, hi - lo) * ceiling;
      lo = hi;
    }
    return total;
  }
  std::vector<std::vector<double>> probs;
  for (int k = 0; k < tess.objectives(); ++k) {
    probs.push_back(interval_probabilities(marginals[static_cast<std::size_t>(k)],
                                           tess.breakpoints(k)));
  }
  double total = 0.0;
  for (std::size_t c : tess.nondominated_cells()) {
    double p = 1.0;
    for (int k = 0; k < tess.objectives() && p > 0.0; ++k) {
      p *= probs[static_cast<std::size_t>(k)][static_cast<std::size_t>(tess.interval(c, k))];
    }
    total += p;
  }
  return total;
}

double excursion_volume(const std::vector<std::vector<Marginal>>& marginals,
                        const std::vector<double>& weights, const Tessellation& tess) {
  require(static_cast<int>(marginals.size()) == tess.objectives(),
          "excursion_volume: one marginal set per objective required");
  for (const auto& m : marginals) {
    require(m.size() == weights.size(), "excursion_volume: size mismatch");
  }
  std::vector<Marginal> at(marginals.size());
  double total = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t k = 0; k < marginals.size(); ++k) at[k] = marginals[k][l];
    total += weights[l] * nondominated_probability(at, tess);
  }
  return total;
}

double excursion_volume(const std::vector<Marginal>& marginals,
                        const std::vector<double>& weights, double threshold) {
  require(marginals.size() == weights.size(), "excursion_volume: size mismatch");
  double total = 0.0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    total += weights[l] * marginals[l].prob_below(threshold);
  }
  return total;
}

}  // namespace mosur
