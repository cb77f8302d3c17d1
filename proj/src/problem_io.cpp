#include <filesystem>

#include "tadi/matrix_market.hpp"
#include "tadi/problem.hpp"

namespace tadi {

namespace {

// A and E keep sparse storage when the file is coordinate; B and R go dense.
template <class Scalar>
CoefficientOperator<Scalar> to_operator(const MatrixMarketData& data, const std::string& context) {
  if (data.rows != data.cols) {
    throw InputError(context + ": coefficient matrix must be square");
  }
  if constexpr (is_complex_v<Scalar>) {
    if (data.coordinate) return CoefficientOperator<Scalar>(to_sparse_complex(data));
    return CoefficientOperator<Scalar>(to_dense_complex(data));
  } else {
    if (data.coordinate) return CoefficientOperator<Scalar>(to_sparse_real(data, context));
    return CoefficientOperator<Scalar>(to_dense_real(data, context));
  }
}

template <class Scalar>
DenseMatrix<Scalar> to_dense_matrix(const MatrixMarketData& data, const std::string& context) {
  if constexpr (is_complex_v<Scalar>) {
    return to_dense_complex(data);
  } else {
    return to_dense_real(data, context);
  }
}

template <class Scalar>
LyapunovProblem<Scalar> assemble(const ProblemPaths& paths, const MatrixMarketData& a,
                                 const std::optional<MatrixMarketData>& e,
                                 const MatrixMarketData& b,
                                 const std::optional<MatrixMarketData>& r) {
  CoefficientOperator<Scalar> A = to_operator<Scalar>(a, paths.a);
  const Index n = A.size();
  CoefficientOperator<Scalar> E =
      e ? to_operator<Scalar>(*e, paths.e) : CoefficientOperator<Scalar>::identity(n);
  if (E.size() != n) {
    throw InputError(paths.e + ": E order differs from A");
  }
  DenseMatrix<Scalar> B = to_dense_matrix<Scalar>(b, paths.b);
  if (B.rows() != n) {
    throw InputError(paths.b + ": B height differs from A order");
  }
  const Index m = B.cols();
  DenseMatrix<Scalar> R =
      r ? to_dense_matrix<Scalar>(*r, paths.r) : DenseMatrix<Scalar>(DenseMatrix<Scalar>::Identity(m, m));
  if (R.rows() != m || R.cols() != m) {
    throw InputError(paths.r + ": R order differs from B width");
  }
  std::string name = std::filesystem::path(paths.a).stem().string();
  return LyapunovProblem<Scalar>{std::move(A), std::move(E), std::move(B), std::move(R),
                                 std::move(name)};
}

}  // namespace

AnyProblem load_problem(const ProblemPaths& paths) {
  if (paths.a.empty() || paths.b.empty()) {
    throw InputError("load_problem: A and B files are required");
  }
  MatrixMarketData a = read_matrix_market(paths.a);
  std::optional<MatrixMarketData> e;
  if (!paths.e.empty()) e = read_matrix_market(paths.e);
  MatrixMarketData b = read_matrix_market(paths.b);
  std::optional<MatrixMarketData> r;
  if (!paths.r.empty()) r = read_matrix_market(paths.r);

  const bool complex_problem = a.complex_field || (e && e->complex_field) || b.complex_field ||
                               (r && r->complex_field);
  if (complex_problem) {
    return assemble<Complex>(paths, a, e, b, r);
  }
  return assemble<double>(paths, a, e, b, r);
}

template <class Scalar>
void save_problem(const LyapunovProblem<Scalar>& p, const std::string& dir,
                  const std::string& prefix) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = [&](const char* stem) { return (fs::path(dir) / (prefix + stem)).string(); };
  if (p.A.is_sparse()) {
    write_matrix_market(path("A.mtx"), p.A.sparse_matrix());
  } else {
    write_matrix_market_array(path("A.mtx"), p.A.dense_matrix());
  }
  if (p.E.is_sparse()) {
    write_matrix_market(path("E.mtx"), p.E.sparse_matrix());
  } else {
    write_matrix_market_array(path("E.mtx"), p.E.dense_matrix());
  }
  write_matrix_market_array(path("B.mtx"), p.B);
  write_matrix_market_array(path("R.mtx"), p.R);
}

template void save_problem<double>(const LyapunovProblem<double>&, const std::string&,
                                   const std::string&);
template void save_problem<Complex>(const LyapunovProblem<Complex>&, const std::string&,
                                    const std::string&);

}  // namespace tadi
