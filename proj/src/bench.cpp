// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#include "mosur/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mosur/error.hpp"
#include "mosur/sobol.hpp"

namespace mosur {

using Json = nlohmann::ordered_json;

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::paper_1d:
      return "paper_1d";
    case ProblemKind::paper_6d:
      return "paper_6d";
    case ProblemKind::custom:
      return "custom";
  }
  fail(ErrorCode::internal, "unknown problem kind");
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "paper_1d") return ProblemKind::paper_1d;
  if (name == "paper_6d") return ProblemKind::paper_6d;
  if (name == "custom") return ProblemKind::custom;
  fail(ErrorCode::invalid_argument, "unknown problem kind '" + name + "'");
}

void ProblemSpec::validate() const {
  require(points.rows() > 0 && points.cols() > 0, "problem: empty grid");
  require(values.rows() == points.rows(), "problem: one value row per grid point required");
  require(values.cols() >= 1, "problem: no objectives");
  require(static_cast<Eigen::Index>(kernels.size()) == values.cols(),
          "problem: one kernel per objective required");
  for (const auto& k : kernels) {
    k.validate();
    require(static_cast<Eigen::Index>(k.dimension()) == points.cols(),
            "problem: kernel dimension does not match the grid");
  }
  require((points.array() >= 0.0).all() && (points.array() <= 1.0).all(),
          "problem: grid points must lie in [0,1]^d");
  require(values.allFinite(), "problem: non-finite objective value");
  require(true_front.cols() == values.cols(), "problem: true front has the wrong width");
}

ProblemSpec gen_custom_problem(const Eigen::MatrixXd& points, const std::vector<KernelSpec>& kernels,
                               std::uint64_t seed) {
  require(!kernels.empty(), "gen: at least one objective required");
  ProblemSpec spec;
  spec.seed = seed;
  spec.points = points;
  spec.kernels = kernels;
  spec.values.resize(points.rows(), static_cast<Eigen::Index>(kernels.size()));
  // objectives sharing a kernel are drawn together from one factorization
  std::size_t k = 0;
  std::uint64_t stream = seed;
  while (k < kernels.size()) {
    std::size_t end = k + 1;
    while (end < kernels.size() && kernels[end].family == kernels[k].family &&
           kernels[end].variance == kernels[k].variance && kernels[end].ranges == kernels[k].ranges) {
      ++end;
    }
    const Eigen::MatrixXd draws =
        sample_paths(kernels[k], points, static_cast<int>(end - k), stream++);
    for (std::size_t j = k; j < end; ++j) {
      spec.values.col(static_cast<Eigen::Index>(j)) = draws.row(static_cast<Eigen::Index>(j - k)).transpose();
    }
    k = end;
  }
  spec.true_front = extract_front(spec.values).values;
  return spec;
}

ProblemSpec gen_problem(ProblemKind kind, std::uint64_t seed) {
  ProblemSpec spec;
  switch (kind) {
    case ProblemKind::paper_1d: {
      const int n = 300;
      Eigen::MatrixXd grid(n, 1);
      for (int i = 0; i < n; ++i) grid(i, 0) = static_cast<double>(i) / (n - 1);
      const KernelSpec k{KernelFamily::matern32, 1.0, {0.2}};
      spec = gen_custom_problem(grid, {k, k}, seed);
      spec.grid_generator = "regular";
      break;
    }
    case ProblemKind::paper_6d: {
      const KernelSpec k{KernelFamily::matern52, 1.0, std::vector<double>(6, std::sqrt(6.0) / 6.0)};
      spec = gen_custom_problem(sobol_points(2000, 6), {k, k}, seed);
      spec.grid_generator = "sobol";
      break;
    }
    case ProblemKind::custom:
      fail(ErrorCode::invalid_argument, "gen: custom problems need an explicit grid and kernels");
  }
  spec.kind = kind;
  return spec;
}

namespace {

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd json_matrix(const Json& rows, Eigen::Index cols, const char* what) {
  if (!rows.is_array()) fail(ErrorCode::parse, fmt::format("problem: '{}' must be an array", what));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(ErrorCode::parse, fmt::format("problem: row {} of '{}' must have {} entries", i, what, cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!row[static_cast<std::size_t>(j)].is_number()) {
        fail(ErrorCode::parse, fmt::format("problem: non-numeric entry in '{}'", what));
      }
      m(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

}  // namespace

std::string problem_to_json(const ProblemSpec& spec) {
  Json j;
  j["schema"] = kProblemSchema;
  j["kind"] = to_string(spec.kind);
  j["seed"] = spec.seed;
  j["dimension"] = spec.dimension();
  j["objectives"] = spec.objectives();
  j["grid"] = {{"generator", spec.grid_generator},
               {"size", spec.points.rows()},
               {"points", matrix_json(spec.points)}};
  Json kernels = Json::array();
  for (const auto& k : spec.kernels) {
    kernels.push_back({{"family", to_string(k.family)}, {"variance", k.variance}, {"ranges", k.ranges}});
  }
  j["kernels"] = std::move(kernels);
  j["values"] = matrix_json(spec.values);
  j["true_front"] = matrix_json(spec.true_front);
  return j.dump() + "\n";
}

ProblemSpec problem_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::parse, std::string("problem: ") + e.what());
  }
  try {
    if (j.value("schema", "") != kProblemSchema) {
      fail(ErrorCode::parse, fmt::format("problem: expected schema '{}'", kProblemSchema));
    }
    ProblemSpec spec;
    spec.kind = problem_kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    const auto d = j.at("dimension").get<Eigen::Index>();
    const auto q = j.at("objectives").get<Eigen::Index>();
    if (d < 1 || q < 1) fail(ErrorCode::parse, "problem: dimension and objectives must be positive");
    const Json& grid = j.at("grid");
    spec.grid_generator = grid.at("generator").get<std::string>();
    spec.points = json_matrix(grid.at("points"), d, "grid.points");
    for (const Json& k : j.at("kernels")) {
      spec.kernels.push_back({kernel_family_from_string(k.at("family").get<std::string>()),
                              k.at("variance").get<double>(),
                              k.at("ranges").get<std::vector<double>>()});
    }
    spec.values = json_matrix(j.at("values"), q, "values");
    spec.true_front = json_matrix(j.at("true_front"), q, "true_front");
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    fail(ErrorCode::parse, std::string("problem: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    fail(ErrorCode::parse, e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) fail(ErrorCode::io, "write failed for " + path.string());
}

void write_problem(const ProblemSpec& spec, const std::filesystem::path& path) {
  write_text(path, problem_to_json(spec));
}

ProblemSpec read_problem(const std::filesystem::path& path) {
  return problem_from_json(read_text(path));
}

HypervolumeResult hypervolume(const Eigen::MatrixXd& points, const Eigen::VectorXd& reference) {
  require(points.cols() == 2 && reference.size() == 2, "hypervolume: two objectives only");
  std::vector<std::pair<double, double>> kept;
  HypervolumeResult out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (points(i, 0) <= reference[0] && points(i, 1) <= reference[1]) {
      kept.emplace_back(points(i, 0), points(i, 1));
    } else {
      ++out.excluded;
    }
  }
  std::sort(kept.begin(), kept.end());
  double ceiling = reference[1];
  for (const auto& [a, b] : kept) {
    if (b < ceiling) {
      out.value += (reference[0] - a) * (ceiling - b);
      ceiling = b;
    }
  }
  return out;
}

double epsilon_indicator(const Eigen::MatrixXd& approx, const Eigen::MatrixXd& truth) {
  require(approx.rows() > 0 && truth.rows() > 0, "epsilon: empty set");
  require(approx.cols() == truth.cols(), "epsilon: objective counts differ");
  double eps = -kInf;
  for (Eigen::Index t = 0; t < truth.rows(); ++t) {
    double best = kInf;
    for (Eigen::Index a = 0; a < approx.rows(); ++a) {
      best = std::min(best, (approx.row(a) - truth.row(t)).maxCoeff());
    }
    eps = std::max(eps, best);
  }
  return eps;
}

double r2_indicator(const Eigen::MatrixXd& approx, const Eigen::MatrixXd& weights,
                    const Eigen::VectorXd& utopian) {
  require(approx.rows() > 0, "r2: empty approximation set");
  require(weights.rows() > 0 && weights.cols() == approx.cols() &&
              utopian.size() == approx.cols(),
          "r2: weights and utopian point must match the objectives");
  for (Eigen::Index w = 0; w < weights.rows(); ++w) {
    require((weights.row(w).array() >= 0.0).all() && std::abs(weights.row(w).sum() - 1.0) < 1e-12,
            "r2: weights must be nonnegative and sum to one");
  }
  double total = 0.0;
  for (Eigen::Index w = 0; w < weights.rows(); ++w) {
    double best = kInf;
    for (Eigen::Index a = 0; a < approx.rows(); ++a) {
      const Eigen::ArrayXd gap = (approx.row(a) - utopian.transpose()).array().abs().transpose();
      best = std::min(best, (weights.row(w).transpose().array() * gap).maxCoeff());
    }
    total += best;
  }
  return total / static_cast<double>(weights.rows());
}

Eigen::MatrixXd weight_fan(int n) {
  require(n >= 2, "weight fan: need at least two weights");
  Eigen::MatrixXd w(n, 2);
  for (int i = 0; i < n; ++i) {
    w(i, 0) = static_cast<double>(i) / (n - 1);
    w(i, 1) = 1.0 - w(i, 0);
  }
  return w;
}

IndicatorSettings default_indicator_settings(const ProblemSpec& spec) {
  require(spec.true_front.rows() > 0, "indicators: problem has no true front");
  const Eigen::VectorXd hi = spec.true_front.colwise().maxCoeff().transpose();
  const Eigen::VectorXd lo = spec.true_front.colwise().minCoeff().transpose();
  const Eigen::VectorXd span = hi - lo;
  IndicatorSettings s;
  s.reference = hi + 0.1 * span;
  s.utopian = lo - 0.1 * span;
  if (spec.objectives() == 2) s.weights = weight_fan(101);
  return s;
}

std::vector<IndicatorRow> compute_indicators(const RunTrace& trace, const ProblemSpec& spec,
                                             const IndicatorSettings& settings) {
  require(trace.objectives == spec.objectives(), "indicators: trace and problem objectives differ");
  std::vector<IndicatorRow> rows;
  if (trace.records.empty()) return rows;
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it <= trace.last_iteration(); ++it) {
    const Eigen::MatrixXd front = extract_front(trace.archive(it)).values;
    IndicatorRow r;
    r.iteration = it;
    if (front.cols() == 2) {
      const HypervolumeResult hv = hypervolume(front, settings.reference);
      r.hypervolume = hv.value;
      r.excluded = hv.excluded;
    } else {
      r.hypervolume = nan;
    }
    r.epsilon = epsilon_indicator(front, spec.true_front);
    r.r2 = settings.weights.rows() > 0 ? r2_indicator(front, settings.weights, settings.utopian) : nan;
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream s(line);
  while (std::getline(s, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    fail(ErrorCode::parse, fmt::format("line {}: '{}' is not a number", line, s));
  }
  return v;
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = "iter";
  for (int i = 1; i <= trace.dimension; ++i) out += fmt::format(",x{}", i);
  for (int i = 1; i <= trace.objectives; ++i) out += fmt::format(",y{}", i);
  out += ",eev,reduction,ev,wall_ms\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.iteration);
    for (Eigen::Index i = 0; i < r.x.size(); ++i) out += "," + num(r.x[i]);
    for (Eigen::Index i = 0; i < r.y.size(); ++i) out += "," + num(r.y[i]);
    out += fmt::format(",{},{},{},{}\n", num(r.eev), num(r.reduction), num(r.ev), num(r.wall_ms));
  }
  return out;
}

RunTrace trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse, "trace: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split(line, ',');
  RunTrace trace;
  for (const auto& h : head) {
    if (h.size() > 1 && h[0] == 'x') ++trace.dimension;
    if (h.size() > 1 && h[0] == 'y') ++trace.objectives;
  }
  std::vector<std::string> expected{"iter"};
  for (int i = 1; i <= trace.dimension; ++i) expected.push_back(fmt::format("x{}", i));
  for (int i = 1; i <= trace.objectives; ++i) expected.push_back(fmt::format("y{}", i));
  for (const char* c : {"eev", "reduction", "ev", "wall_ms"}) expected.emplace_back(c);
  if (head != expected || trace.dimension < 1 || trace.objectives < 1) {
    fail(ErrorCode::parse, "line 1: trace header must be iter,x1..,y1..,eev,reduction,ev,wall_ms");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != expected.size()) {
      fail(ErrorCode::parse, fmt::format("line {}: expected {} fields, found {}", lineno,
                                         expected.size(), f.size()));
    }
    TraceRecord r;
    const double it = parse_number(f[0], lineno);
    if (it < 0 || it != std::floor(it)) fail(ErrorCode::parse, fmt::format("line {}: bad iteration", lineno));
    r.iteration = static_cast<int>(it);
    if (!trace.records.empty() && r.iteration < trace.records.back().iteration) {
      fail(ErrorCode::parse, fmt::format("line {}: iterations must not decrease", lineno));
    }
    r.candidate = -1;
    std::size_t c = 1;
    r.x.resize(trace.dimension);
    for (int i = 0; i < trace.dimension; ++i) r.x[i] = parse_number(f[c++], lineno);
    r.y.resize(trace.objectives);
    for (int i = 0; i < trace.objectives; ++i) r.y[i] = parse_number(f[c++], lineno);
    r.eev = parse_number(f[c++], lineno);
    r.reduction = parse_number(f[c++], lineno);
    r.ev = parse_number(f[c++], lineno);
    r.wall_ms = parse_number(f[c++], lineno);
    trace.records.push_back(std::move(r));
  }
  return trace;
}

std::string indicators_to_csv(const std::vector<IndicatorRow>& rows,
                              const IndicatorSettings& settings) {
  std::string out = "iter,hypervolume,epsilon,r2,hv_excluded";
  for (Eigen::Index k = 0; k < settings.reference.size(); ++k) out += fmt::format(",hv_ref_{}", k + 1);
  out += ",r2_weights\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}", r.iteration, num(r.hypervolume), num(r.epsilon), num(r.r2),
                       r.excluded);
    for (Eigen::Index k = 0; k < settings.reference.size(); ++k) out += "," + num(settings.reference[k]);
    out += fmt::format(",{}\n", settings.weights.rows());
  }
  return out;
}

namespace {

std::size_t line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

// Line of the first occurrence of "key" in the document (1 if absent).
std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_at(text, pos);
}

}  // namespace

BenchConfig parse_bench_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::parse, fmt::format("line {}: invalid JSON ({})", line_at(text, e.byte ? e.byte - 1 : 0),
                                       e.what()));
  }
  auto bad = [&](const std::string& key, const std::string& msg) -> void {
    fail(ErrorCode::parse, fmt::format("line {}: {}", line_of_key(text, key), msg));
  };
  if (!j.is_object()) fail(ErrorCode::parse, "line 1: config must be a JSON object");

  static const std::set<std::string> known{"problem", "strategies", "seeds", "num_seeds",
                                           "init", "iters", "integration", "candidates",
                                           "known_covariance", "family", "timing"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) bad(key, "unknown key '" + key + "'");
  }
  auto integer = [&](const char* key, int lo, int fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j[key];
    if (!v.is_number_integer() || v.get<long long>() < lo || v.get<long long>() > 1'000'000) {
      bad(key, fmt::format("'{}' must be an integer >= {}", key, lo));
    }
    return v.get<int>();
  };
  auto boolean = [&](const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) bad(key, fmt::format("'{}' must be true or false", key));
    return j[key].get<bool>();
  };

  BenchConfig c;
  if (!j.contains("problem")) fail(ErrorCode::parse, "line 1: missing 'problem'");
  const Json& p = j["problem"];
  if (!p.is_object()) bad("problem", "'problem' must be an object with 'kind' or 'file'");
  for (const auto& [key, value] : p.items()) {
    if (key != "kind" && key != "seed" && key != "file") bad(key, "unknown problem key '" + key + "'");
  }
  if (p.contains("kind") == p.contains("file")) {
    bad("problem", "'problem' needs exactly one of 'kind' or 'file'");
  }
  if (p.contains("file")) {
    if (!p["file"].is_string()) bad("file", "'file' must be a string");
    c.problem_file = p["file"].get<std::string>();
  } else {
    if (!p["kind"].is_string()) bad("kind", "'kind' must be a string");
    const auto kind = p["kind"].get<std::string>();
    if (kind != "paper_1d" && kind != "paper_6d") bad("kind", "kind must be paper_1d or paper_6d");
    c.problem_kind = problem_kind_from_string(kind);
    if (p.contains("seed")) {
      if (!p["seed"].is_number_unsigned()) bad("seed", "'seed' must be a nonnegative integer");
      c.problem_seed = p["seed"].get<std::uint64_t>();
    }
  }

  if (j.contains("strategies")) {
    const Json& s = j["strategies"];
    if (!s.is_array() || s.empty()) bad("strategies", "'strategies' must be a nonempty array");
    c.strategies.clear();
    for (const Json& v : s) {
      if (!v.is_string()) bad("strategies", "strategy names must be strings");
      try {
        c.strategies.push_back(strategy_from_string(v.get<std::string>()));
      } catch (const Error& e) {
        bad("strategies", e.what());
      }
    }
  }

  if (j.contains("seeds") && j.contains("num_seeds")) bad("num_seeds", "give 'seeds' or 'num_seeds', not both");
  if (j.contains("seeds")) {
    const Json& s = j["seeds"];
    if (!s.is_array() || s.empty()) bad("seeds", "'seeds' must be a nonempty array");
    for (const Json& v : s) {
      if (!v.is_number_unsigned()) bad("seeds", "seeds must be nonnegative integers");
      c.seeds.push_back(v.get<std::uint64_t>());
    }
  } else {
    const int n = integer("num_seeds", 1, 1);
    for (int i = 1; i <= n; ++i) c.seeds.push_back(static_cast<std::uint64_t>(i));
  }

  c.n_initial = integer("init", 2, c.n_initial);
  c.n_iterations = integer("iters", 0, c.n_iterations);
  c.integration_size = integer("integration", 0, c.integration_size);
  c.candidates = integer("candidates", 0, c.candidates);
  c.known_covariance = boolean("known_covariance", c.known_covariance);
  c.timing = boolean("timing", c.timing);
  if (j.contains("family")) {
    try {
      c.family = kernel_family_from_string(j["family"].get<std::string>());
    } catch (const std::exception& e) {
      bad("family", e.what());
    }
  }
  if (c.candidates > 0 && c.candidates < c.n_initial + c.n_iterations) {
    bad("candidates", "'candidates' must cover init + iters");
  }
  return c;
}

std::string trace_file_name(Strategy s, std::uint64_t seed) {
  return fmt::format("trace_{}_seed{}.csv", to_string(s), seed);
}

std::string indicator_file_name(Strategy s, std::uint64_t seed) {
  return fmt::format("indicators_{}_seed{}.csv", to_string(s), seed);
}

RunConfig bench_run_config(const BenchConfig& config, const ProblemSpec& spec, Strategy s,
                           std::uint64_t seed) {
  RunConfig r;
  r.n_initial = config.n_initial;
  r.n_iterations = config.n_iterations;
  r.strategy = s;
  r.integration_size = config.integration_size;
  r.design_seed = seed;
  r.candidate_seed = seed ^ 0x9e3779b97f4a7c15ULL;
  if (config.known_covariance) r.known_covariance = spec.kernels;
  r.family = config.family;
  r.record_timing = config.timing;
  if (config.candidates > 0 && config.candidates < spec.points.rows()) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(spec.points.rows()));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    r.candidate_subset = initial_design(all, config.candidates, seed ^ 0x5bd1e995ULL);
    std::sort(r.candidate_subset.begin(), r.candidate_subset.end());
  }
  return r;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchOutcome run_benchmark(const BenchConfig& config, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + out_dir.string() + ": " + ec.message());

  const ProblemSpec spec =
      config.problem_file ? read_problem(*config.problem_file)
                          : gen_problem(*config.problem_kind, config.problem_seed);
  const IndicatorSettings settings = default_indicator_settings(spec);
  const GridProblem problem = spec.problem();

  BenchOutcome outcome;
  const auto problem_path = out_dir / "problem.json";
  write_problem(spec, problem_path);
  outcome.files.push_back(problem_path);

  Json strategies = Json::object();
  for (Strategy s : config.strategies) {
    // per-iteration values across seeds
    std::map<int, std::vector<double>> hv, eps, r2, ev;
    Json finals = Json::array();
    int failed = 0;
    for (std::uint64_t seed : config.seeds) {
      const RunTrace trace = run(bench_run_config(config, spec, s, seed), problem);
      if (trace.error) {
        ++failed;
        outcome.failures.push_back(fmt::format("{} {}: {}", to_string(s), seed, trace.error->what()));
      }
      const auto rows = compute_indicators(trace, spec, settings);
      const auto tp = out_dir / trace_file_name(s, seed);
      const auto ip = out_dir / indicator_file_name(s, seed);
      write_text(tp, trace_to_csv(trace));
      write_text(ip, indicators_to_csv(rows, settings));
      outcome.files.push_back(tp);
      outcome.files.push_back(ip);
      for (const auto& r : rows) {
        hv[r.iteration].push_back(r.hypervolume);
        eps[r.iteration].push_back(r.epsilon);
        r2[r.iteration].push_back(r.r2);
      }
      std::map<int, double> last_ev;
      for (const auto& rec : trace.records) last_ev[rec.iteration] = rec.ev;
      for (const auto& [it, v] : last_ev) ev[it].push_back(v);
      Json f = {{"seed", seed}, {"completed", !trace.error}};
      if (!rows.empty()) {
        f["hypervolume"] = rows.back().hypervolume;
        f["epsilon"] = rows.back().epsilon;
        f["r2"] = rows.back().r2;
        f["ev"] = trace.records.back().ev;
      }
      finals.push_back(std::move(f));
    }
    auto medians = [](const std::map<int, std::vector<double>>& m) {
      Json a = Json::array();
      for (const auto& [it, v] : m) a.push_back(median(v));
      return a;
    };
    strategies[to_string(s)] = {{"median_hypervolume", medians(hv)},
                                {"median_epsilon", medians(eps)},
                                {"median_r2", medians(r2)},
                                {"median_ev", medians(ev)},
                                {"failed_runs", failed},
                                {"final", std::move(finals)}};
  }

  Json summary;
  summary["schema"] = "mosur.summary/1";
  summary["problem"] = {{"kind", to_string(spec.kind)}, {"seed", spec.seed}};
  summary["seeds"] = config.seeds;
  summary["init"] = config.n_initial;
  summary["iters"] = config.n_iterations;
  summary["hv_reference"] = std::vector<double>(settings.reference.data(),
                                                settings.reference.data() + settings.reference.size());
  summary["utopian"] = std::vector<double>(settings.utopian.data(),
                                           settings.utopian.data() + settings.utopian.size());
  summary["r2_weights"] = settings.weights.rows();
  summary["strategies"] = std::move(strategies);
  const auto sp = out_dir / "summary.json";
  write_text(sp, summary.dump(2) + "\n");
  outcome.files.push_back(sp);
  return outcome;
}

}  // namespace mosur
