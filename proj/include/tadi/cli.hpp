#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tadi/types.hpp"

namespace tadi {

// Full run description. Every field maps 1:1 to a config-file key (flat
// key=value with section prefixes) and to a command-line flag of the same name.
struct RunConfig {
  // problem.*
  std::string source = "synthetic";    // synthetic | files
  std::string arithmetic = "auto";     // auto | real | complex
  Index n = 100;
  Index m = 4;
  std::uint64_t seed = 1;
  double real_min = -10.0;
  double real_max = -0.5;
  double imag_bound = 5.0;
  double complex_fraction = 0.5;
  Index r_negative = -1;  // negative eigenvalues of synthetic R; -1: m/2
  Index augment_rank = 0;  // extra constant-term columns with alternating-sign center
  std::string path_a, path_e, path_b, path_r;  // files source; e/r optional

  // solver.*
  std::string variant = "block";  // block | tangential
  double tol = 1e-12;
  Index max_cols = 0;  // 0: 20*m
  std::string norm = "spectral";
  Index steps_per_shift = 1;
  double rank_trunc_tol = kRankTruncateTol;
  Index dense_threshold = kDenseSolveThreshold;

  // shifts.*
  std::string shift_source = "projection";  // projection | fixed
  Index ell = 8;
  Index k_max = 0;  // projection space capacity; 0: 4*m
  Index sketch_rank = 32;
  std::string fixed_shifts;  // "re:im,re:im,..." (conjugates of complex entries implied)

  // directions.*
  std::string strategy = "projected";
  std::uint64_t direction_seed = 7;

  // output.*
  std::string out_dir;  // empty: $TADI_OUT_DIR, else "."
  std::string prefix = "run";
  bool write_factors = false;
  Index repeat = 1;
};

// All recognized keys, in documentation order.
const std::vector<std::string>& config_keys();

// One key=value assignment; unknown key or unparsable value -> InputError.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value file, '#' starts a comment, blank lines ignored.
void load_config_file(RunConfig& cfg, const std::string& path);

void validate_config(const RunConfig& cfg);

// "re:im,re:im,..." -> shift list; complex entries get their conjugate partner
// appended so real-mode pools stay well formed.
std::vector<Complex> parse_shift_list(const std::string& text);

std::string resolve_out_dir(const RunConfig& cfg);

inline constexpr int kExitConverged = 0;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitInputError = 3;
inline constexpr int kExitNumericalFailure = 4;

int run_solve(const RunConfig& cfg, std::ostream& out);
int run_oracle(const RunConfig& cfg, std::ostream& out);
int run_gen(const RunConfig& cfg, std::ostream& out);
int run_compare(const std::vector<std::string>& trace_paths, std::ostream& out);

}  // namespace tadi
