// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

// Command-line front end; talks to the library through the C interface only.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "mosur/mosur.h"

namespace {

struct ProblemDeleter {
  void operator()(mosur_problem* p) const { mosur_problem_free(p); }
};
struct TraceDeleter {
  void operator()(mosur_trace* t) const { mosur_trace_free(t); }
};
struct StringDeleter {
  void operator()(char* s) const { mosur_string_free(s); }
};
using ProblemPtr = std::unique_ptr<mosur_problem, ProblemDeleter>;
using TracePtr = std::unique_ptr<mosur_trace, TraceDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

constexpr int kExitFailure = 1;  // check failed or run stopped early
constexpr int kExitError = 2;

int report(mosur_status s, const std::string& context) {
  std::fprintf(stderr, "mosur: %s: %s (%s)\n", context.c_str(), mosur_last_error(),
               mosur_status_name(s));
  return kExitError;
}

ProblemPtr load_problem(const std::string& path, mosur_status& s) {
  mosur_problem* p = nullptr;
  s = mosur_problem_load(path.c_str(), &p);
  return ProblemPtr(p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiobjective SUR optimization toolkit"};
  app.require_subcommand(1);

  std::string kind, out, problem_path, strategy = "sur", trace_path, suite = "all", config;
  std::uint64_t seed = 0;
  int init = 4, iters = 10, integration = 0, candidates = 0;
  long draws = 200000;
  bool estimate = false, timing = false;

  auto* gen = app.add_subcommand("gen", "Generate a test problem");
  gen->add_option("--kind", kind, "Problem kind")
      ->required()
      ->check(CLI::IsMember({"paper_1d", "paper_6d"}));
  gen->add_option("--seed", seed, "Realization seed")->required();
  gen->add_option("--out", out, "Output problem file")->required();

  auto* run = app.add_subcommand("run", "Run one optimization");
  run->add_option("--problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);
  run->add_option("--strategy", strategy, "Sampling strategy")
      ->check(CLI::IsMember({"sur", "ei_scalarized", "random"}));
  run->add_option("--init", init, "Initial design size")->check(CLI::PositiveNumber);
  run->add_option("--iters", iters, "Iterations")->check(CLI::NonNegativeNumber);
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--integration", integration, "Integration points (0 = default)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--candidates", candidates, "Random candidate subset size (0 = whole grid)")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--estimate", estimate, "Estimate hyperparameters instead of using the problem kernels");
  run->add_flag("--timing", timing, "Record wall-clock time per iteration");
  run->add_option("--out", out, "Output directory")->required();

  auto* ind = app.add_subcommand("indicators", "Quality indicators of a trace");
  ind->add_option("--trace", trace_path, "Trace CSV")->required()->check(CLI::ExistingFile);
  ind->add_option("--problem", problem_path, "Problem file")->required()->check(CLI::ExistingFile);
  ind->add_option("--out", out, "Output CSV")->required();

  auto* oracle = app.add_subcommand("oracle-check", "Monte-Carlo check of the closed forms");
  oracle->add_option("--suite", suite, "Check group")->check(CLI::IsMember({"all", "prob", "eev"}));
  oracle->add_option("--draws", draws, "Draws per estimate")->check(CLI::Range(1000L, 100000000L));
  oracle->add_option("--seed", seed, "Random seed");

  auto* bench = app.add_subcommand("bench", "Run a benchmark protocol");
  bench->add_option("--config", config, "Benchmark JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    mosur_problem* raw = nullptr;
    mosur_status s = mosur_problem_generate(kind.c_str(), seed, &raw);
    ProblemPtr p(raw);
    if (s != MOSUR_OK) return report(s, "gen");
    if ((s = mosur_problem_save(p.get(), out.c_str())) != MOSUR_OK) return report(s, "gen");
    size_t n = 0, d = 0, q = 0;
    mosur_problem_shape(p.get(), &n, &d, &q);
    std::printf("wrote %s: %zu points, d=%zu, q=%zu\n", out.c_str(), n, d, q);
    return 0;
  }

  if (run->parsed()) {
    mosur_status s;
    ProblemPtr p = load_problem(problem_path, s);
    if (s != MOSUR_OK) return report(s, problem_path);
    mosur_run_options opt;
    mosur_run_options_init(&opt);
    opt.n_initial = init;
    opt.n_iterations = iters;
    opt.strategy = strategy.c_str();
    opt.integration_size = integration;
    opt.seed = seed;
    opt.candidates = candidates;
    opt.known_covariance = estimate ? 0 : 1;
    opt.record_timing = timing ? 1 : 0;
    mosur_trace* raw = nullptr;
    const mosur_status rs = mosur_run(p.get(), &opt, &raw);
    TracePtr t(raw);
    const std::string run_error = rs == MOSUR_OK ? "" : mosur_last_error();
    if (!t) return report(rs, "run");
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    const std::string path = (std::filesystem::path(out) / "trace.csv").string();
    if ((s = mosur_trace_save(t.get(), path.c_str())) != MOSUR_OK) return report(s, "run");
    size_t records = 0;
    int last = 0;
    mosur_trace_size(t.get(), &records, &last);
    double ev0 = 0, ev1 = 0;
    mosur_trace_record(t.get(), 0, nullptr, nullptr, nullptr, &ev0);
    mosur_trace_record(t.get(), records - 1, nullptr, nullptr, nullptr, &ev1);
    std::printf("wrote %s: %zu observations, %d iterations, ev %.6g -> %.6g\n", path.c_str(),
                records, last, ev0, ev1);
    if (rs != MOSUR_OK) {
      std::fprintf(stderr, "mosur: run stopped early: %s (%s)\n", run_error.c_str(),
                   mosur_status_name(rs));
      return kExitFailure;
    }
    return 0;
  }

  if (ind->parsed()) {
    mosur_status s;
    ProblemPtr p = load_problem(problem_path, s);
    if (s != MOSUR_OK) return report(s, problem_path);
    mosur_trace* raw = nullptr;
    s = mosur_trace_load(trace_path.c_str(), &raw);
    TracePtr t(raw);
    if (s != MOSUR_OK) return report(s, trace_path);
    if ((s = mosur_indicators_write(t.get(), p.get(), out.c_str())) != MOSUR_OK) {
      return report(s, "indicators");
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
  }

  if (oracle->parsed()) {
    int passed = 0;
    char* raw = nullptr;
    const mosur_status s = mosur_oracle_check(suite.c_str(), draws, seed, &passed, &raw);
    StringPtr text(raw);
    if (s != MOSUR_OK) return report(s, "oracle-check");
    std::fputs(text.get(), stdout);
    std::printf("%s\n", passed ? "PASS" : "FAIL");
    return passed ? 0 : kExitFailure;
  }

  if (bench->parsed()) {
    char* raw = nullptr;
    const mosur_status s = mosur_bench(config.c_str(), out.c_str(), &raw);
    StringPtr text(raw);
    if (s != MOSUR_OK) return report(s, config);
    std::fputs(text.get(), stdout);
    return 0;
  }
  return kExitError;
}
