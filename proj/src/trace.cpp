#include "tadi/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tadi {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << kTraceHeader << '\n';
  out << "# initial_norm " << fmt(trace.initial_norm) << '\n';
  for (std::size_t p = 0; p < trace.shift_pools.size(); ++p) {
    out << "# pool " << (p + 1) << ':';
    for (const Complex& s : trace.shift_pools[p]) {
      out << ' ' << fmt(s.real()) << (s.imag() < 0 ? "" : "+") << fmt(s.imag()) << 'i';
    }
    out << '\n';
  }
  for (const auto& ev : trace.events) {
    out << "# event iter " << ev.first << ": " << ev.second << '\n';
  }
  out << "iteration,columns,shift_re,shift_im,direction_index,residual,solves,seconds\n";
  for (const TraceRow& r : trace.rows) {
    out << r.iteration << ',' << r.columns << ',' << fmt(r.shift.real()) << ','
        << fmt(r.shift.imag()) << ',' << r.direction_index << ',' << fmt(r.normalized_residual)
        << ',' << r.solves << ',' << fmt(r.seconds) << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open file for writing");
  write_trace_csv(out, trace);
  if (!out) throw InputError(path + ": write failed");
}

namespace {

// "-1.5+2.25i" / "-3-0i"; the writer always spells the sign of the
// imaginary part
Complex parse_pool_shift(const std::string& token, const std::string& context) {
  const std::size_t iv = token.rfind('i');
  if (iv == std::string::npos || iv + 1 != token.size()) {
    throw InputError(context + ": malformed pool shift '" + token + "'");
  }
  std::size_t split = std::string::npos;
  for (std::size_t k = token.size() - 1; k > 0; --k) {
    const char c = token[k];
    if ((c == '+' || c == '-') && token[k - 1] != 'e' && token[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    throw InputError(context + ": malformed pool shift '" + token + "'");
  }
  try {
    const double re = std::stod(token.substr(0, split));
    const double im = std::stod(token.substr(split, iv - split));
    return {re, im};
  } catch (const std::exception&) {
    throw InputError(context + ": malformed pool shift '" + token + "'");
  }
}

}  // namespace

ConvergenceTrace read_trace_csv(std::istream& in, const std::string& context) {
  ConvergenceTrace trace;
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw InputError(context + ": not a tadi-trace v1 file");
  }
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream cs(line);
      std::string hash, word;
      cs >> hash >> word;
      if (word == "initial_norm") {
        cs >> trace.initial_norm;
      } else if (word == "pool") {
        std::string skip;
        cs >> skip;  // "<index>:"
        std::vector<Complex> pool;
        std::string token;
        while (cs >> token) pool.push_back(parse_pool_shift(token, context));
        trace.shift_pools.push_back(std::move(pool));
      } else if (word == "event") {
        std::string iter_word;
        Index iter = 0;
        char colon = 0;
        cs >> iter_word >> iter >> colon;
        std::string note;
        std::getline(cs, note);
        if (!note.empty() && note.front() == ' ') note.erase(note.begin());
        trace.events.emplace_back(iter, std::move(note));
      }
      continue;
    }
    if (!header_seen) {
      // column header line
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    TraceRow r;
    char c = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> r.iteration >> c >> r.columns >> c >> re >> c >> im >> c >> r.direction_index >>
          c >> r.normalized_residual >> c >> r.solves >> c >> r.seconds)) {
      throw InputError(context + ": malformed trace row '" + line + "'");
    }
    r.shift = Complex(re, im);
    trace.rows.push_back(r);
  }
  return trace;
}

ConvergenceTrace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return read_trace_csv(in, path);
}

}  // namespace tadi
