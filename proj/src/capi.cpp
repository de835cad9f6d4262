// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/mosur.h"

#include <fmt/format.h>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "mosur/bench.hpp"
#include "mosur/criteria.hpp"
#include "mosur/error.hpp"
#include "mosur/mc_oracle.hpp"
#include "mosur/opt_loop.hpp"
#include "mosur/stats.hpp"

struct mosur_gp {
  mosur::GpPosterior post;
};

struct mosur_problem {
  mosur::ProblemSpec spec;
};

struct mosur_trace {
  mosur::RunTrace trace;
};

namespace {

using mosur::ErrorCode;

static_assert(static_cast<int>(ErrorCode::invalid_argument) == MOSUR_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::internal) == MOSUR_INTERNAL);

thread_local std::string last_error;

mosur_status record(mosur_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
mosur_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return MOSUR_OK;
  } catch (const mosur::Error& e) {
    return record(static_cast<mosur_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(MOSUR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return record(MOSUR_INTERNAL, e.what());
  } catch (...) {
    return record(MOSUR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* name) {
  mosur::require(p != nullptr, std::string(name) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mosur_last_error(void) { return last_error.c_str(); }

const char* mosur_status_name(mosur_status status) {
  switch (status) {
    case MOSUR_OK:
      return "ok";
    case MOSUR_INVALID_ARGUMENT:
      return "invalid_argument";
    case MOSUR_MODEL_FIT:
      return "model_fit";
    case MOSUR_DUPLICATE_POINT:
      return "duplicate_point";
    case MOSUR_IO:
      return "io";
    case MOSUR_PARSE:
      return "parse";
    case MOSUR_CAPACITY:
      return "capacity";
    case MOSUR_ORACLE_VIOLATION:
      return "oracle_violation";
    case MOSUR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* mosur_version(void) { return "0.1.0"; }

void mosur_string_free(char* s) { std::free(s); }

mosur_status mosur_bvn_cdf(double h, double k, double rho, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = mosur::bvn_cdf(h, k, mosur::Correlation(rho));
  });
}

mosur_status mosur_gp_fit(const double* x, size_t n, size_t d, const double* y, const char* family,
                          double variance, const double* ranges, mosur_gp** out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(family, "family");
    need(ranges, "ranges");
    need(out, "out");
    *out = nullptr;
    mosur::require(n >= 1 && d >= 1, "gp_fit: empty design");
    const auto rows = static_cast<Eigen::Index>(n), cols = static_cast<Eigen::Index>(d);
    mosur::Design design{
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            x, rows, cols),
        Eigen::Map<const Eigen::VectorXd>(y, rows)};
    mosur::KernelSpec kernel{mosur::kernel_family_from_string(family), variance,
                             std::vector<double>(ranges, ranges + d)};
    *out = new mosur_gp{mosur::fit(std::move(design), std::move(kernel))};
  });
}

mosur_status mosur_gp_predict(const mosur_gp* gp, const double* x, double* mean, double* var) {
  return guarded([&] {
    need(gp, "gp");
    need(x, "x");
    const auto p = gp->post.predict(
        Eigen::Map<const Eigen::VectorXd>(x, gp->post.design().dimension()));
    if (mean) *mean = p.mean;
    if (var) *var = p.var;
  });
}

void mosur_gp_free(mosur_gp* gp) { delete gp; }

mosur_status mosur_eev(const mosur_gp* const* gps, size_t q, const double* archive,
                       size_t n_archive, size_t integration, const double* x_plus, double* eev,
                       double* reduction) {
  return guarded([&] {
    need(gps, "gps");
    need(archive, "archive");
    need(x_plus, "x_plus");
    mosur::require(q >= 1 && n_archive >= 1, "eev: need models and observations");
    std::vector<mosur::GpPosterior> posts;
    for (size_t k = 0; k < q; ++k) {
      need(gps[k], "gps[k]");
      posts.push_back(gps[k]->post);
    }
    const auto d = posts[0].design().dimension();
    const auto grid = mosur::IntegrationGrid::sobol(
        integration ? static_cast<int>(integration)
                    : mosur::default_integration_size(static_cast<int>(d)),
        static_cast<int>(d));
    const Eigen::MatrixXd values =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            archive, static_cast<Eigen::Index>(n_archive), static_cast<Eigen::Index>(q));
    const Eigen::Map<const Eigen::VectorXd> xp(x_plus, d);
    const mosur::CriterionValue v =
        q == 1 ? mosur::eev_single(posts[0], grid, values.col(0).minCoeff(), xp)
               : mosur::MultiObjectiveCriterion(posts, grid, mosur::extract_front(values)).evaluate(xp);
    if (eev) *eev = v.eev;
    if (reduction) *reduction = v.reduction;
  });
}

mosur_status mosur_problem_generate(const char* kind, uint64_t seed, mosur_problem** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    *out = nullptr;
    *out = new mosur_problem{mosur::gen_problem(mosur::problem_kind_from_string(kind), seed)};
  });
}

mosur_status mosur_problem_load(const char* path, mosur_problem** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new mosur_problem{mosur::read_problem(path)};
  });
}

mosur_status mosur_problem_save(const mosur_problem* problem, const char* path) {
  return guarded([&] {
    need(problem, "problem");
    need(path, "path");
    mosur::write_problem(problem->spec, path);
  });
}

mosur_status mosur_problem_shape(const mosur_problem* problem, size_t* points, size_t* dimension,
                                 size_t* objectives) {
  return guarded([&] {
    need(problem, "problem");
    if (points) *points = static_cast<size_t>(problem->spec.points.rows());
    if (dimension) *dimension = static_cast<size_t>(problem->spec.dimension());
    if (objectives) *objectives = static_cast<size_t>(problem->spec.objectives());
  });
}

void mosur_problem_free(mosur_problem* problem) { delete problem; }

void mosur_run_options_init(mosur_run_options* options) {
  if (!options) return;
  options->n_initial = 4;
  options->n_iterations = 10;
  options->strategy = "sur";
  options->integration_size = 0;
  options->seed = 0;
  options->candidates = 0;
  options->known_covariance = 1;
  options->record_timing = 0;
}

mosur_status mosur_run(const mosur_problem* problem, const mosur_run_options* options,
                       mosur_trace** out) {
  mosur_status status = guarded([&] {
    need(problem, "problem");
    need(options, "options");
    need(options->strategy, "options->strategy");
    need(out, "out");
    *out = nullptr;
    mosur::BenchConfig bench;
    bench.n_initial = options->n_initial;
    bench.n_iterations = options->n_iterations;
    bench.integration_size = options->integration_size;
    bench.candidates = options->candidates;
    bench.known_covariance = options->known_covariance != 0;
    bench.timing = options->record_timing != 0;
    mosur::require(options->integration_size >= 0 && options->candidates >= 0,
                   "run: negative size");
    const auto strategy = mosur::strategy_from_string(options->strategy);
    const auto config = mosur::bench_run_config(bench, problem->spec, strategy, options->seed);
    *out = new mosur_trace{mosur::run(config, problem->spec.problem())};
  });
  if (status == MOSUR_OK && (*out)->trace.error) {
    const auto& e = *(*out)->trace.error;
    status = record(static_cast<mosur_status>(e.code()), e.what());
  }
  return status;
}

mosur_status mosur_trace_save(const mosur_trace* trace, const char* path) {
  return guarded([&] {
    need(trace, "trace");
    need(path, "path");
    mosur::write_text(path, mosur::trace_to_csv(trace->trace));
  });
}

mosur_status mosur_trace_load(const char* path, mosur_trace** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new mosur_trace{mosur::trace_from_csv(mosur::read_text(path))};
  });
}

mosur_status mosur_trace_size(const mosur_trace* trace, size_t* records, int* last_iteration) {
  return guarded([&] {
    need(trace, "trace");
    if (records) *records = trace->trace.records.size();
    if (last_iteration) *last_iteration = trace->trace.last_iteration();
  });
}

mosur_status mosur_trace_record(const mosur_trace* trace, size_t index, int* iteration,
                                double* eev, double* reduction, double* ev) {
  return guarded([&] {
    need(trace, "trace");
    mosur::require(index < trace->trace.records.size(), "trace: record index out of range");
    const auto& r = trace->trace.records[index];
    if (iteration) *iteration = r.iteration;
    if (eev) *eev = r.eev;
    if (reduction) *reduction = r.reduction;
    if (ev) *ev = r.ev;
  });
}

void mosur_trace_free(mosur_trace* trace) { delete trace; }

mosur_status mosur_indicators_write(const mosur_trace* trace, const mosur_problem* problem,
                                    const char* path) {
  return guarded([&] {
    need(trace, "trace");
    need(problem, "problem");
    need(path, "path");
    const auto settings = mosur::default_indicator_settings(problem->spec);
    mosur::require(trace->trace.dimension == problem->spec.dimension(),
                   "indicators: trace and problem dimensions differ");
    const auto rows = mosur::compute_indicators(trace->trace, problem->spec, settings);
    mosur::write_text(path, mosur::indicators_to_csv(rows, settings));
  });
}

mosur_status mosur_oracle_check(const char* suite, long draws, uint64_t seed, int* passed,
                                char** report) {
  return guarded([&] {
    need(suite, "suite");
    need(passed, "passed");
    if (report) *report = nullptr;
    const auto r = mosur::run_oracle_suite(mosur::oracle_suite_from_string(suite), draws, seed);
    *passed = r.passed() ? 1 : 0;
    if (!report) return;
    std::string text;
    for (const auto& c : r.checks) {
      if (c.within) continue;
      text += fmt::format("outside 3 SE: {} closed={:.10g} mc={:.10g} se={:.3g}\n", c.name,
                          c.closed_form, c.estimate.mean, c.estimate.std_error);
    }
    for (const auto& g : r.groups) {
      text += fmt::format("{}: {} cases, {} outside 3 SE (allowed {}) {}\n", g.name, g.cases,
                          g.violations, g.allowed, g.violations <= g.allowed ? "ok" : "VIOLATION");
    }
    *report = copy_string(text);
  });
}

mosur_status mosur_bench(const char* config_path, const char* out_dir, char** report) {
  return guarded([&] {
    need(config_path, "config_path");
    need(out_dir, "out_dir");
    if (report) *report = nullptr;
    const auto config = mosur::parse_bench_config(mosur::read_text(config_path));
    const auto outcome = mosur::run_benchmark(config, out_dir);
    if (!report) return;
    std::string text;
    for (const auto& f : outcome.files) text += "wrote " + f.string() + "\n";
    for (const auto& f : outcome.failures) text += "stopped early: " + f + "\n";
    *report = copy_string(text);
  });
}

}  // extern "C"
