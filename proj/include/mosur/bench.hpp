// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mosur/gp.hpp"
#include "mosur/opt_loop.hpp"
#include "mosur/pareto.hpp"

namespace mosur {

enum class ProblemKind { paper_1d, paper_6d, custom };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

inline constexpr const char* kProblemSchema = "mosur.problem/1";

/// Test problem: a finite grid and the objective values at every grid point.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::custom;
  std::uint64_t seed = 0;
  /// "regular", "sobol" or "explicit".
  std::string grid_generator = "explicit";
  Eigen::MatrixXd points;  // grid, one point per row
  std::vector<KernelSpec> kernels;  // one per objective
  Eigen::MatrixXd values;  // grid size x q
  Eigen::MatrixXd true_front;

  Eigen::Index dimension() const { return points.cols(); }
  Eigen::Index objectives() const { return values.cols(); }
  GridProblem problem() const { return {points, values}; }
  /// Throws Error(invalid_argument) when shapes or ranges are inconsistent.
  void validate() const;
};

/// paper_1d: 300-point regular grid on [0,1], two Matern-3/2 draws with
/// variance 1 and range 0.2. paper_6d: 2000 Sobol points in [0,1]^6, two
/// Matern-5/2 draws with variance 1 and ranges sqrt(6)/6.
ProblemSpec gen_problem(ProblemKind kind, std::uint64_t seed);

/// Draws `kernels.size()` independent objectives on an explicit grid.
ProblemSpec gen_custom_problem(const Eigen::MatrixXd& points, const std::vector<KernelSpec>& kernels,
                               std::uint64_t seed);

std::string problem_to_json(const ProblemSpec& spec);
ProblemSpec problem_from_json(const std::string& text);
void write_problem(const ProblemSpec& spec, const std::filesystem::path& path);
ProblemSpec read_problem(const std::filesystem::path& path);

// Indicators (minimization).

struct HypervolumeResult {
  double value = 0.0;
  /// Points that do not weakly dominate the reference and were left out.
  int excluded = 0;
};

/// Two-objective hypervolume by a sorted staircase sweep.
HypervolumeResult hypervolume(const Eigen::MatrixXd& points, const Eigen::VectorXd& reference);

/// Smallest eps such that every truth point is weakly dominated by some
/// approximation point shifted by -eps.
double epsilon_indicator(const Eigen::MatrixXd& approx, const Eigen::MatrixXd& truth);

/// Mean over weights of the best weighted Tchebycheff distance to `utopian`.
double r2_indicator(const Eigen::MatrixXd& approx, const Eigen::MatrixXd& weights,
                    const Eigen::VectorXd& utopian);

/// `n` evenly spaced weights (w, 1 - w), w from 0 to 1.
Eigen::MatrixXd weight_fan(int n = 101);

struct IndicatorSettings {
  Eigen::VectorXd reference;  // hypervolume reference point
  Eigen::VectorXd utopian;
  Eigen::MatrixXd weights;
};

/// Reference = max of the true front + 10% of its range, utopian = min - 10%,
/// 101-weight fan.
IndicatorSettings default_indicator_settings(const ProblemSpec& spec);

struct IndicatorRow {
  int iteration = 0;
  double hypervolume = 0.0;
  double epsilon = 0.0;
  double r2 = 0.0;
  int excluded = 0;
};

/// One row per iteration, computed on the archive observed so far.
std::vector<IndicatorRow> compute_indicators(const RunTrace& trace, const ProblemSpec& spec,
                                             const IndicatorSettings& settings);

// Text formats.

std::string trace_to_csv(const RunTrace& trace);
RunTrace trace_from_csv(const std::string& text);
std::string indicators_to_csv(const std::vector<IndicatorRow>& rows,
                              const IndicatorSettings& settings);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Benchmark protocol read from a JSON document.
struct BenchConfig {
  std::optional<ProblemKind> problem_kind;
  std::uint64_t problem_seed = 0;
  std::optional<std::filesystem::path> problem_file;
  std::vector<Strategy> strategies{Strategy::sur, Strategy::random};
  std::vector<std::uint64_t> seeds;
  int n_initial = 4;
  int n_iterations = 10;
  int integration_size = 0;
  /// Random subset of the grid used as candidates (0 = whole grid), drawn
  /// per run seed.
  int candidates = 0;
  bool known_covariance = true;
  KernelFamily family = KernelFamily::matern52;
  bool timing = false;
};

/// Throws Error(parse) with "line L: ..." diagnostics.
BenchConfig parse_bench_config(const std::string& text);

std::string trace_file_name(Strategy s, std::uint64_t seed);
std::string indicator_file_name(Strategy s, std::uint64_t seed);

/// RunConfig for one (strategy, seed) of a benchmark.
RunConfig bench_run_config(const BenchConfig& config, const ProblemSpec& spec, Strategy s,
                           std::uint64_t seed);

struct BenchOutcome {
  std::vector<std::filesystem::path> files;
  /// Runs that stopped early, as "strategy seed: message".
  std::vector<std::string> failures;
};

/// Runs every strategy x seed, writing traces, indicator reports and
/// summary.json into `out_dir`.
BenchOutcome run_benchmark(const BenchConfig& config, const std::filesystem::path& out_dir);

}  // namespace mosur
