#include "tadi/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>
#include <variant>

#include "tadi/adi.hpp"
#include "tadi/directions.hpp"
#include "tadi/matrix_market.hpp"
#include "tadi/oracle.hpp"
#include "tadi/problem.hpp"
#include "tadi/shifts.hpp"
#include "tadi/trace.hpp"

namespace tadi {

namespace {

namespace fs = std::filesystem;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Index to_index(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw InputError("config: key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("config: key '" + key + "': expected a non-negative integer, got '" + value +
                     "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("config: key '" + key + "': expected a number, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw InputError("config: key '" + key + "': expected a boolean, got '" + value + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& key_table() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"problem.source", [](RunConfig& c, const std::string&, const std::string& v) { c.source = v; }},
      {"problem.arithmetic",
       [](RunConfig& c, const std::string&, const std::string& v) { c.arithmetic = v; }},
      {"problem.n", [](RunConfig& c, const std::string& k, const std::string& v) { c.n = to_index(k, v); }},
      {"problem.m", [](RunConfig& c, const std::string& k, const std::string& v) { c.m = to_index(k, v); }},
      {"problem.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); }},
      {"problem.real_min",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.real_min = to_double(k, v); }},
      {"problem.real_max",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.real_max = to_double(k, v); }},
      {"problem.imag_bound",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.imag_bound = to_double(k, v); }},
      {"problem.complex_fraction",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.complex_fraction = to_double(k, v);
       }},
      {"problem.r_negative",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.r_negative = to_index(k, v); }},
      {"problem.augment_rank",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.augment_rank = to_index(k, v); }},
      {"problem.a", [](RunConfig& c, const std::string&, const std::string& v) { c.path_a = v; }},
      {"problem.e", [](RunConfig& c, const std::string&, const std::string& v) { c.path_e = v; }},
      {"problem.b", [](RunConfig& c, const std::string&, const std::string& v) { c.path_b = v; }},
      {"problem.r", [](RunConfig& c, const std::string&, const std::string& v) { c.path_r = v; }},
      {"solver.variant",
       [](RunConfig& c, const std::string&, const std::string& v) { c.variant = v; }},
      {"solver.tol",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.tol = to_double(k, v); }},
      {"solver.max_cols",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.max_cols = to_index(k, v); }},
      {"solver.norm", [](RunConfig& c, const std::string&, const std::string& v) { c.norm = v; }},
      {"solver.steps_per_shift",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.steps_per_shift = to_index(k, v);
       }},
      {"solver.rank_trunc_tol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.rank_trunc_tol = to_double(k, v);
       }},
      {"solver.dense_threshold",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dense_threshold = to_index(k, v);
       }},
      {"shifts.source",
       [](RunConfig& c, const std::string&, const std::string& v) { c.shift_source = v; }},
      {"shifts.ell",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.ell = to_index(k, v); }},
      {"shifts.k_max",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.k_max = to_index(k, v); }},
      {"shifts.sketch_rank",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.sketch_rank = to_index(k, v); }},
      {"shifts.fixed",
       [](RunConfig& c, const std::string&, const std::string& v) { c.fixed_shifts = v; }},
      {"directions.strategy",
       [](RunConfig& c, const std::string&, const std::string& v) { c.strategy = v; }},
      {"directions.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.direction_seed = to_u64(k, v);
       }},
      {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
      {"output.prefix",
       [](RunConfig& c, const std::string&, const std::string& v) { c.prefix = v; }},
      {"output.write_factors",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.write_factors = to_bool(k, v);
       }},
      {"output.repeat",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.repeat = to_index(k, v); }},
  };
  return table;
}

NormKind parse_norm_kind(const std::string& name) {
  if (name == "spectral") return NormKind::Spectral;
  if (name == "frobenius") return NormKind::Frobenius;
  throw InputError("solver.norm must be 'spectral' or 'frobenius', got '" + name + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InputError(message);
}

int status_exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return kExitConverged;
    case RunStatus::MaxColumnsReached:
      return kExitNotConverged;
    default:
      return kExitNumericalFailure;
  }
}

template <class Scalar>
void augment_synthetic(LyapunovProblem<Scalar>& p, const RunConfig& cfg) {
  Rng rng(cfg.seed + 1000003);
  const Index r = cfg.augment_rank;
  DenseMatrix<Scalar> F = random_normal_matrix<Scalar>(rng, p.n(), r);
  DenseMatrix<Scalar> C = DenseMatrix<Scalar>::Zero(r, r);
  for (Index i = 0; i < r; ++i) C(i, i) = Scalar(i % 2 == 0 ? 1.0 : -1.0);
  p = augment_constant_term(p, F, C);
}

AnyProblem build_problem(const RunConfig& cfg) {
  if (cfg.source == "files") {
    ProblemPaths paths;
    paths.a = cfg.path_a;
    paths.e = cfg.path_e;
    paths.b = cfg.path_b;
    paths.r = cfg.path_r;
    AnyProblem p = load_problem(paths);
    if (cfg.arithmetic == "real" && std::holds_alternative<LyapunovProblem<Complex>>(p)) {
      throw InputError("problem.arithmetic=real but the input files hold complex data");
    }
    if (cfg.arithmetic == "complex" && std::holds_alternative<LyapunovProblem<double>>(p)) {
      p = std::get<LyapunovProblem<double>>(p).to_complex();
    }
    return p;
  }
  SpectrumSpec spec;
  spec.real_min = cfg.real_min;
  spec.real_max = cfg.real_max;
  spec.imag_bound = cfg.imag_bound;
  spec.complex_fraction = cfg.complex_fraction;
  spec.seed = cfg.seed;
  const Index r_neg = cfg.r_negative < 0 ? cfg.m / 2 : cfg.r_negative;
  AnyProblem p = cfg.arithmetic == "complex"
                     ? AnyProblem(synth_problem<Complex>(cfg.n, cfg.m, spec, r_neg))
                     : AnyProblem(synth_problem<double>(cfg.n, cfg.m, spec, r_neg));
  if (cfg.augment_rank > 0) {
    std::visit([&cfg](auto& prob) { augment_synthetic(prob, cfg); }, p);
  }
  return p;
}

template <class Scalar>
RunResult<Scalar> run_variant(const RunConfig& cfg, const LyapunovProblem<Scalar>& p) {
  RunOptions<Scalar> opt;
  opt.tol = cfg.tol;
  opt.max_cols = cfg.max_cols;
  opt.norm = parse_norm_kind(cfg.norm);
  opt.space_capacity = cfg.k_max;
  opt.rank_trunc_tol = cfg.rank_trunc_tol;
  opt.steps_per_shift = cfg.steps_per_shift;
  opt.dense_threshold = cfg.dense_threshold;

  std::unique_ptr<ShiftSource<Scalar>> shifts;
  if (cfg.shift_source == "fixed") {
    shifts = std::make_unique<FixedShiftSource<Scalar>>(parse_shift_list(cfg.fixed_shifts));
  } else {
    shifts = std::make_unique<ProjectionShiftSource<Scalar>>(p, static_cast<int>(cfg.ell),
                                                             cfg.sketch_rank);
  }
  if (cfg.variant == "tangential") {
    StrategyDirectionSource<Scalar> dirs(parse_direction_strategy(cfg.strategy),
                                         cfg.direction_seed);
    return run_tangential_adi(p, *shifts, dirs, opt);
  }
  return run_block_adi(p, *shifts, opt);
}

template <class Scalar>
void write_dfactor_file(const std::string& path, const LdlFactors<Scalar>& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << "# tadi-dfactor v1\n";
  out << "order " << f.cols() << "\n";
  out << "blocks";
  for (Index w : f.step_widths) out << " " << w;
  out << "\n";
  Index offset = 0;
  for (std::size_t b = 0; b < f.step_widths.size(); ++b) {
    const Index w = f.step_widths[b];
    out << "block " << b << " " << w << "\n";
    for (Index i = 0; i < w; ++i) {
      for (Index j = 0; j < w; ++j) {
        if (j > 0) out << " ";
        const Scalar v = f.D(offset + i, offset + j);
        if constexpr (is_complex_v<Scalar>) {
          out << fmt_g17(v.real()) << " " << fmt_g17(v.imag());
        } else {
          out << fmt_g17(v);
        }
      }
      out << "\n";
    }
    offset += w;
  }
  if (!out) throw InputError("failed while writing " + path);
}

template <class Scalar>
void write_summary_file(const std::string& path, const RunConfig& cfg,
                        const LyapunovProblem<Scalar>& p, const RunResult<Scalar>& r) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << "status=" << run_status_name(r.status) << "\n";
  out << "exit_code=" << status_exit_code(r.status) << "\n";
  out << "variant=" << cfg.variant << "\n";
  out << "strategy=" << (cfg.variant == "tangential" ? cfg.strategy : "-") << "\n";
  out << "arithmetic=" << (is_complex_v<Scalar> ? "complex" : "real") << "\n";
  out << "n=" << p.n() << "\n";
  out << "m=" << p.m() << "\n";
  out << "columns=" << r.factors.cols() << "\n";
  out << "iterations=" << r.trace.rows.size() << "\n";
  out << "solves=" << r.solves << "\n";
  out << "initial_norm=" << fmt_g17(r.trace.initial_norm) << "\n";
  out << "final_residual=" << fmt_g17(r.final_residual) << "\n";
  const double seconds = r.trace.rows.empty() ? 0.0 : r.trace.rows.back().seconds;
  out << "seconds=" << fmt_g17(seconds) << "\n";
  if (!r.message.empty()) out << "message=" << r.message << "\n";
  if (!out) throw InputError("failed while writing " + path);
}

template <class Scalar>
int solve_one(const RunConfig& cfg, const LyapunovProblem<Scalar>& p, std::ostream& out) {
  const RunResult<Scalar> result = run_variant(cfg, p);
  const std::string dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  const std::string trace_path = (fs::path(dir) / (cfg.prefix + "_trace.csv")).string();
  write_trace_csv_file(trace_path, result.trace);
  write_summary_file((fs::path(dir) / (cfg.prefix + "_summary.txt")).string(), cfg, p, result);
  if (cfg.write_factors) {
    write_matrix_market_array((fs::path(dir) / (cfg.prefix + "_L.mtx")).string(), result.factors.L);
    write_dfactor_file((fs::path(dir) / (cfg.prefix + "_D.txt")).string(), result.factors);
  }
  out << "[solve] status=" << run_status_name(result.status) << " columns="
      << result.factors.cols() << " iterations=" << result.trace.rows.size()
      << " solves=" << result.solves << " final_residual=" << fmt_g17(result.final_residual)
      << " trace=" << trace_path << "\n";
  if (!result.message.empty()) out << "[solve] note: " << result.message << "\n";
  return status_exit_code(result.status);
}

template <class Scalar>
int oracle_one(const RunConfig& cfg, const LyapunovProblem<Scalar>& p, std::ostream& out) {
  const DenseMatrix<Scalar> X = dense_lyap_solve(p);
  const RunResult<Scalar> result = run_variant(cfg, p);
  const double err = relative_factor_error(result.factors, X);
  const std::string dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  const std::string path = (fs::path(dir) / (cfg.prefix + "_oracle.txt")).string();
  {
    std::ofstream f(path);
    if (!f) throw InputError("cannot open " + path + " for writing");
    f << "status=" << run_status_name(result.status) << "\n";
    f << "n=" << p.n() << "\n";
    f << "variant=" << cfg.variant << "\n";
    f << "columns=" << result.factors.cols() << "\n";
    f << "final_residual=" << fmt_g17(result.final_residual) << "\n";
    f << "relative_error=" << fmt_g17(err) << "\n";
  }
  out << "[oracle] status=" << run_status_name(result.status) << " columns="
      << result.factors.cols() << " final_residual=" << fmt_g17(result.final_residual)
      << " relative_error=" << fmt_g17(err) << "\n";
  return status_exit_code(result.status);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : key_table()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, setter] : key_table()) {
    if (name == key) {
      setter(cfg, key, value);
      return;
    }
  }
  throw InputError("config: unknown key '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config: " + path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(cfg, key, value);
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void validate_config(const RunConfig& cfg) {
  require(cfg.source == "synthetic" || cfg.source == "files",
          "problem.source must be 'synthetic' or 'files'");
  require(cfg.arithmetic == "auto" || cfg.arithmetic == "real" || cfg.arithmetic == "complex",
          "problem.arithmetic must be 'auto', 'real' or 'complex'");
  if (cfg.source == "synthetic") {
    require(cfg.n >= 1, "problem.n must be at least 1");
    require(cfg.m >= 1, "problem.m must be at least 1");
    require(cfg.r_negative <= cfg.m, "problem.r_negative cannot exceed problem.m");
    require(cfg.augment_rank >= 0, "problem.augment_rank cannot be negative");
  } else {
    require(!cfg.path_a.empty() && !cfg.path_b.empty(),
            "problem.source=files needs problem.a and problem.b");
  }
  require(cfg.variant == "block" || cfg.variant == "tangential",
          "solver.variant must be 'block' or 'tangential'");
  require(cfg.tol > 0.0, "solver.tol must be positive");
  require(cfg.max_cols >= 0, "solver.max_cols cannot be negative");
  require(cfg.steps_per_shift >= 1, "solver.steps_per_shift must be at least 1");
  require(cfg.dense_threshold >= 0, "solver.dense_threshold cannot be negative");
  parse_norm_kind(cfg.norm);
  require(cfg.shift_source == "projection" || cfg.shift_source == "fixed",
          "shifts.source must be 'projection' or 'fixed'");
  require(cfg.ell >= 1, "shifts.ell must be at least 1");
  require(cfg.k_max >= 0, "shifts.k_max cannot be negative");
  require(cfg.sketch_rank >= 1, "shifts.sketch_rank must be at least 1");
  if (cfg.shift_source == "fixed") {
    require(!cfg.fixed_shifts.empty(), "shifts.source=fixed needs shifts.fixed");
    parse_shift_list(cfg.fixed_shifts);
  }
  if (cfg.variant == "tangential") parse_direction_strategy(cfg.strategy);
  require(cfg.repeat >= 1, "output.repeat must be at least 1");
  require(!cfg.prefix.empty(), "output.prefix cannot be empty");
}

std::vector<Complex> parse_shift_list(const std::string& text) {
  std::vector<Complex> shifts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InputError("shifts.fixed: empty entry in '" + text + "'");
    const auto colon = item.find(':');
    const std::string re_s = colon == std::string::npos ? item : item.substr(0, colon);
    const std::string im_s = colon == std::string::npos ? "0" : item.substr(colon + 1);
    const double re = to_double("shifts.fixed", trim(re_s));
    const double im = to_double("shifts.fixed", trim(im_s));
    if (!(re < 0.0)) {
      throw InputError("shifts.fixed: shift " + item + " must have negative real part");
    }
    shifts.emplace_back(re, im);
    if (im != 0.0) shifts.emplace_back(re, -im);  // conjugate partner for real-mode pools
  }
  if (shifts.empty()) throw InputError("shifts.fixed: no shifts in '" + text + "'");
  return shifts;
}

std::string resolve_out_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* env = std::getenv("TADI_OUT_DIR");
  if (env != nullptr && env[0] != '\0') return env;
  return ".";
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  int worst = kExitConverged;
  for (Index rep = 0; rep < cfg.repeat; ++rep) {
    RunConfig c = cfg;
    c.repeat = 1;
    if (cfg.repeat > 1) {
      c.seed = cfg.seed + static_cast<std::uint64_t>(rep);
      c.prefix = cfg.prefix + "_r" + std::to_string(rep);
      out << "[solve] repeat " << rep << " seed=" << c.seed << "\n";
    }
    const AnyProblem problem = build_problem(c);
    const int code =
        std::visit([&c, &out](const auto& p) { return solve_one(c, p, out); }, problem);
    worst = std::max(worst, code);
  }
  return worst;
}

int run_oracle(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  const AnyProblem problem = build_problem(cfg);
  return std::visit([&cfg, &out](const auto& p) { return oracle_one(cfg, p, out); }, problem);
}

int run_gen(const RunConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  require(cfg.source == "synthetic", "gen: only synthetic problems can be generated");
  const AnyProblem problem = build_problem(cfg);
  const std::string dir = resolve_out_dir(cfg);
  std::visit([&](const auto& p) { save_problem(p, dir, cfg.prefix + "_"); }, problem);
  out << "[gen] wrote " << (fs::path(dir) / (cfg.prefix + "_{A,E,B,R}.mtx")).string() << "\n";
  return kExitConverged;
}

int run_compare(const std::vector<std::string>& trace_paths, std::ostream& out) {
  if (trace_paths.size() < 2) throw InputError("compare: need at least two trace files");
  std::vector<ConvergenceTrace> traces;
  traces.reserve(trace_paths.size());
  for (const auto& p : trace_paths) traces.push_back(read_trace_csv_file(p));

  out << "trace  iterations  columns  final_residual  file\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const double final_res = t.rows.empty() ? 1.0 : t.rows.back().normalized_residual;
    const Index cols = t.rows.empty() ? 0 : t.rows.back().columns;
    out << std::left << std::setw(7) << i << std::setw(12) << t.rows.size() << std::setw(9)
        << cols << std::setw(26) << fmt_g17(final_res) << trace_paths[i] << "\n";
  }

  // columns needed to reach each residual level, plus ratios against trace 0
  static const double kLevels[] = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
  out << "\nlevel     ";
  for (std::size_t i = 0; i < traces.size(); ++i) out << std::setw(10) << ("cols[" + std::to_string(i) + "]");
  for (std::size_t i = 1; i < traces.size(); ++i) out << std::setw(12) << ("ratio[" + std::to_string(i) + "/0]");
  out << "\n";
  for (const double level : kLevels) {
    char lvl[32];
    std::snprintf(lvl, sizeof(lvl), "%-10.0e", level);
    out << lvl;
    std::vector<Index> cols(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
      cols[i] = traces[i].columns_to_reach(level);
      if (cols[i] < 0) {
        out << std::setw(10) << "-";
      } else {
        out << std::setw(10) << cols[i];
      }
    }
    for (std::size_t i = 1; i < traces.size(); ++i) {
      if (cols[0] > 0 && cols[i] > 0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", static_cast<double>(cols[i]) / cols[0]);
        out << std::setw(12) << buf;
      } else {
        out << std::setw(12) << "-";
      }
    }
    out << "\n";
  }
  return kExitConverged;
}

}  // namespace tadi
