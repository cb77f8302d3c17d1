#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tadi/types.hpp"

namespace tadi {

inline constexpr const char* kTraceHeader = "# tadi-trace v1";

struct TraceRow {
  Index iteration = 0;  // 1-based; a conjugate pair counts as one iteration
  Index columns = 0;    // cumulative width of L
  Complex shift{0.0, 0.0};
  int direction_index = -1;  // 1-based eigendirection, -1 when not applicable
  double normalized_residual = 0.0;
  long solves = 0;  // cumulative shifted solves
  double seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;
  std::vector<std::vector<Complex>> shift_pools;
  std::vector<std::pair<Index, std::string>> events;  // (iteration, note)
  double initial_norm = 0.0;

  bool reached(double level) const {
    for (const auto& r : rows) {
      if (r.normalized_residual <= level) return true;
    }
    return false;
  }

  // columns of the first row at or below the level
  Index columns_to_reach(double level) const {
    for (const auto& r : rows) {
      if (r.normalized_residual <= level) return r.columns;
    }
    return -1;
  }

  Index iterations_to_reach(double level) const {
    for (const auto& r : rows) {
      if (r.normalized_residual <= level) return r.iteration;
    }
    return -1;
  }
};

// Identical runs serialize byte-identically except for the seconds column.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_trace_csv_file(const std::string& path, const ConvergenceTrace& trace);

ConvergenceTrace read_trace_csv(std::istream& in, const std::string& context);
ConvergenceTrace read_trace_csv_file(const std::string& path);

}  // namespace tadi
