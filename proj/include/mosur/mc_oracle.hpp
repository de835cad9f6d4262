// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

// Brute-force Monte-Carlo counterparts of the closed-form probabilities and
// criteria. Used for validation only.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mosur/criteria.hpp"
#include "mosur/gp.hpp"

namespace mosur {

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_draws = 0;
  std::uint64_t seed = 0;
};

struct PairEstimates {
  OracleEstimate q;  // E[P_{n+1}(x, a) 1{Y+ <= b}]
  OracleEstimate r;  // E[P_{n+1}(x, a) 1{Y+ >= b}]
  OracleEstimate h;  // E[P_{n+1}(x, Y+) 1{Y+ <= b}]
};

inline constexpr long kMinOracleDraws = 1000;

PairEstimates mc_pair_expectations(const GpPosterior& post,
                                   const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& x_plus, double a,
                                   double b, long n_draws, std::uint64_t seed);

/// Expected excursion volume after observing x+, by simulation. `archive`
/// holds the observed objective vectors (one row per observation, one column
/// per posterior). Each draw updates every model on the grid, re-extracts the
/// front including the drawn vector, and integrates the new excursion
/// probability. The same probabilities integrated over the current front
/// serve as a control variate with known mean ev_n; since the two agree
/// whenever the drawn vector is dominated, draws are restricted to the
/// non-dominated cells and weighted by their probability.
OracleEstimate mc_eev(const std::vector<GpPosterior>& posts, const IntegrationGrid& grid,
                      const Eigen::MatrixXd& archive,
                      const Eigen::Ref<const Eigen::VectorXd>& x_plus, long n_draws,
                      std::uint64_t seed);

/// Posterior conditioned on n uniform points in [0,1]^d whose values are a
/// draw from the prior; ranges uniform in [0.2, 0.5] * sqrt(d).
GpPosterior random_gp_configuration(std::mt19937_64& rng, int n, int d, KernelFamily family);

struct OracleCheck {
  std::string name;
  double closed_form = 0.0;
  OracleEstimate estimate;
  bool within = false;  // |closed - mean| <= 3 SE (+1e-12)
};

struct OracleSuiteReport {
  std::vector<OracleCheck> checks;
  /// Per group: violations found and allowed.
  struct Group {
    std::string name;
    int cases = 0;
    int violations = 0;
    int allowed = 0;
  };
  std::vector<Group> groups;
  bool passed() const;
};

enum class OracleSuite { all, prob, eev };
OracleSuite oracle_suite_from_string(const std::string& name);

/// prob: 50 random configurations, q/r/h each allowed 2 violations.
/// eev: 10 single-objective and 10 bi-objective cases, no violation allowed.
OracleSuiteReport run_oracle_suite(OracleSuite suite, long n_draws, std::uint64_t seed);

/// |closed - est| <= 3 SE + 1e-12.
bool within_three_se(double closed_form, const OracleEstimate& est);

}  // namespace mosur
