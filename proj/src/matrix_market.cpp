#include "tadi/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tadi {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

std::string fmt_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '%') continue;
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (!blank) return true;
  }
  return false;
}

}  // namespace

MatrixMarketData read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");

  std::string banner;
  if (!std::getline(in, banner)) fail(path, "empty file");
  std::istringstream bs(lower(banner));
  std::string tag, object, format, field, symmetry;
  bs >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") fail(path, "not a Matrix Market matrix file");
  if (format != "coordinate" && format != "array") fail(path, "unsupported format '" + format + "'");
  if (field != "real" && field != "integer" && field != "complex") {
    fail(path, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" &&
      symmetry != "skew-symmetric") {
    fail(path, "unsupported symmetry '" + symmetry + "'");
  }

  MatrixMarketData data;
  data.coordinate = format == "coordinate";
  data.complex_field = field == "complex";

  std::string line;
  if (!next_data_line(in, line)) fail(path, "missing size line");
  std::istringstream sz(line);
  Index nnz = 0;
  if (data.coordinate) {
    if (!(sz >> data.rows >> data.cols >> nnz)) fail(path, "malformed size line");
  } else {
    if (!(sz >> data.rows >> data.cols)) fail(path, "malformed size line");
    nnz = data.rows * data.cols;
  }
  if (data.rows < 0 || data.cols < 0) fail(path, "negative dimensions");

  const bool mirror = symmetry != "general";
  const double mirror_sign = symmetry == "skew-symmetric" ? -1.0 : 1.0;
  const bool mirror_conj = symmetry == "hermitian";
  data.entries.reserve(static_cast<std::size_t>(mirror ? 2 * nnz : nnz));

  auto push = [&](Index i, Index j, Complex v) {
    if (i < 0 || i >= data.rows || j < 0 || j >= data.cols) fail(path, "entry index out of range");
    data.entries.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    if (mirror && i != j) {
      Complex mv = mirror_conj ? std::conj(v) : v;
      data.entries.emplace_back(static_cast<int>(j), static_cast<int>(i), mirror_sign * mv);
    }
  };

  if (data.coordinate) {
    for (Index k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) fail(path, "fewer entries than the size line promises");
      std::istringstream es(line);
      Index i = 0, j = 0;
      double re = 0.0, im = 0.0;
      if (!(es >> i >> j >> re)) fail(path, "malformed coordinate entry");
      if (data.complex_field && !(es >> im)) fail(path, "missing imaginary part");
      push(i - 1, j - 1, Complex(re, im));
    }
  } else {
    if (symmetry == "skew-symmetric") fail(path, "skew-symmetric array files are not supported");
    // array data is column-major; symmetric files store the lower triangle only
    Index i = 0, j = 0;
    Index count = 0;
    const Index expected = mirror ? data.rows * (data.rows + 1) / 2 : nnz;
    while (count < expected) {
      if (!next_data_line(in, line)) fail(path, "fewer entries than the header promises");
      std::istringstream es(line);
      double re = 0.0, im = 0.0;
      while (es >> re) {
        if (data.complex_field && !(es >> im)) fail(path, "missing imaginary part");
        if (count >= expected) fail(path, "more entries than the header promises");
        push(i, j, Complex(re, im));
        ++count;
        ++i;
        if (i >= data.rows) {
          ++j;
          i = mirror ? j : 0;
        }
      }
    }
  }
  return data;
}

Eigen::MatrixXcd to_dense_complex(const MatrixMarketData& data) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(data.rows, data.cols);
  for (const auto& t : data.entries) {
    M(t.row(), t.col()) += t.value();
  }
  return M;
}

Eigen::MatrixXd to_dense_real(const MatrixMarketData& data, const std::string& context) {
  if (data.complex_field) {
    throw InputError(context + ": complex data where real was required");
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(data.rows, data.cols);
  for (const auto& t : data.entries) {
    M(t.row(), t.col()) += t.value().real();
  }
  return M;
}

Eigen::SparseMatrix<Complex> to_sparse_complex(const MatrixMarketData& data) {
  Eigen::SparseMatrix<Complex> M(data.rows, data.cols);
  M.setFromTriplets(data.entries.begin(), data.entries.end());
  M.makeCompressed();
  return M;
}

Eigen::SparseMatrix<double> to_sparse_real(const MatrixMarketData& data, const std::string& context) {
  if (data.complex_field) {
    throw InputError(context + ": complex data where real was required");
  }
  std::vector<Eigen::Triplet<double>> real_entries;
  real_entries.reserve(data.entries.size());
  for (const auto& t : data.entries) {
    real_entries.emplace_back(t.row(), t.col(), t.value().real());
  }
  Eigen::SparseMatrix<double> M(data.rows, data.cols);
  M.setFromTriplets(real_entries.begin(), real_entries.end());
  M.makeCompressed();
  return M;
}

namespace {

template <class Scalar>
void write_coordinate(const std::string& path, const Eigen::SparseMatrix<Scalar>& M) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  const bool cplx = is_complex_v<Scalar>;
  out << "%%MatrixMarket matrix coordinate " << (cplx ? "complex" : "real") << " general\n";
  out << M.rows() << ' ' << M.cols() << ' ' << M.nonZeros() << '\n';
  for (int k = 0; k < M.outerSize(); ++k) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(M, k); it; ++it) {
      out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ';
      if constexpr (is_complex_v<Scalar>) {
        out << fmt_value(it.value().real()) << ' ' << fmt_value(it.value().imag()) << '\n';
      } else {
        out << fmt_value(it.value()) << '\n';
      }
    }
  }
  if (!out) fail(path, "write failed");
}

template <class Scalar>
void write_array(const std::string& path, const Eigen::Ref<const DenseMatrix<Scalar>>& M) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  const bool cplx = is_complex_v<Scalar>;
  out << "%%MatrixMarket matrix array " << (cplx ? "complex" : "real") << " general\n";
  out << M.rows() << ' ' << M.cols() << '\n';
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      if constexpr (is_complex_v<Scalar>) {
        out << fmt_value(M(i, j).real()) << ' ' << fmt_value(M(i, j).imag()) << '\n';
      } else {
        out << fmt_value(M(i, j)) << '\n';
      }
    }
  }
  if (!out) fail(path, "write failed");
}

}  // namespace

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& M) {
  write_coordinate(path, M);
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<Complex>& M) {
  write_coordinate(path, M);
}

void write_matrix_market_array(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& M) {
  write_array<double>(path, M);
}

void write_matrix_market_array(const std::string& path, const Eigen::Ref<const Eigen::MatrixXcd>& M) {
  write_array<Complex>(path, M);
}

}  // namespace tadi
