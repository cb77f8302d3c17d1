#include "tadi/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace tadi {

namespace {

template <class Scalar>
DenseMatrix<Scalar> orthonormal_basis_impl(const Eigen::Ref<const DenseMatrix<Scalar>>& cols,
                                           double drop_tol) {
  if (drop_tol < 0.0) {
    throw InputError("orthonormal_basis: drop_tol must be nonnegative");
  }
  if (cols.cols() == 0) {
    return DenseMatrix<Scalar>(cols.rows(), 0);
  }
  Eigen::ColPivHouseholderQR<DenseMatrix<Scalar>> qr;
  qr.setThreshold(drop_tol);
  qr.compute(cols);
  const Index r = qr.rank();
  if (r == 0) {
    return DenseMatrix<Scalar>(cols.rows(), 0);
  }
  DenseMatrix<Scalar> q = qr.householderQ() * DenseMatrix<Scalar>::Identity(cols.rows(), r);
  return q;
}

void check_small_dense(Index rows, Index cols, const char* who) {
  if (rows != cols) {
    throw InputError(std::string(who) + ": matrix must be square");
  }
  if (rows > kSmallDenseCap) {
    throw InputError(std::string(who) + ": order exceeds the small dense cap");
  }
}

void sort_pencil_eigenvalues(std::vector<GeneralizedEigenvalue>& ev) {
  std::sort(ev.begin(), ev.end(), [](const GeneralizedEigenvalue& a, const GeneralizedEigenvalue& b) {
    if (a.infinite != b.infinite) return !a.infinite;
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
}

template <class Scalar>
HermitianEigen<Scalar> hermitian_eig_impl(const Eigen::Ref<const DenseMatrix<Scalar>>& M) {
  check_small_dense(M.rows(), M.cols(), "hermitian_eig");
  if (hermitian_deviation(M) > kHermitianRelTol) {
    throw InputError("hermitian_eig: input is not Hermitian to tolerance");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(M);
  if (es.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver failed to converge");
  }
  const Eigen::VectorXd& vals = es.eigenvalues();
  const Index k = vals.size();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(vals[a]);
    const double mb = std::abs(vals[b]);
    if (ma != mb) return ma > mb;
    if ((vals[a] > 0.0) != (vals[b] > 0.0)) return vals[a] > 0.0;
    return a < b;
  });
  HermitianEigen<Scalar> out;
  out.values.resize(k);
  out.vectors.resize(M.rows(), k);
  for (Index i = 0; i < k; ++i) {
    out.values[i] = vals[order[static_cast<std::size_t>(i)]];
    out.vectors.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd orthonormal_basis(const Eigen::Ref<const Eigen::MatrixXd>& cols, double drop_tol) {
  return orthonormal_basis_impl<double>(cols, drop_tol);
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::Ref<const Eigen::MatrixXcd>& cols, double drop_tol) {
  return orthonormal_basis_impl<Complex>(cols, drop_tol);
}

std::vector<GeneralizedEigenvalue> pencil_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                                      const Eigen::Ref<const Eigen::MatrixXd>& E) {
  check_small_dense(A.rows(), A.cols(), "pencil_eigenvalues");
  if (E.rows() != A.rows() || E.cols() != A.cols()) {
    throw InputError("pencil_eigenvalues: A and E sizes differ");
  }
  std::vector<GeneralizedEigenvalue> out;
  if (A.rows() == 0) return out;
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.setMaxIterations(80 * static_cast<int>(A.rows()));
  ges.compute(A, E, false);
  if (ges.info() != Eigen::Success) {
    throw NumericalError("pencil_eigenvalues: QZ iteration failed");
  }
  const auto& alphas = ges.alphas();
  const auto& betas = ges.betas();
  out.reserve(static_cast<std::size_t>(A.rows()));
  for (Index i = 0; i < A.rows(); ++i) {
    const double beta_mag = std::abs(betas[i]);
    const double alpha_mag = std::abs(alphas[i]);
    GeneralizedEigenvalue ge;
    // the (alpha, beta) pair carries an arbitrary joint scale; compare within the pair
    ge.infinite = beta_mag <= 1e-14 * (alpha_mag + beta_mag) || beta_mag == 0.0;
    if (!ge.infinite) ge.value = alphas[i] / betas[i];
    out.push_back(ge);
  }
  sort_pencil_eigenvalues(out);
  return out;
}

std::vector<GeneralizedEigenvalue> pencil_eigenvalues(const Eigen::Ref<const Eigen::MatrixXcd>& A,
                                                      const Eigen::Ref<const Eigen::MatrixXcd>& E) {
  check_small_dense(A.rows(), A.cols(), "pencil_eigenvalues");
  if (E.rows() != A.rows() || E.cols() != A.cols()) {
    throw InputError("pencil_eigenvalues: A and E sizes differ");
  }
  std::vector<GeneralizedEigenvalue> out;
  const Index n = A.rows();
  if (n == 0) return out;

  // No complex QZ available; reduce through a probe point sigma that keeps
  // A - sigma E invertible, then eig((A - sigma E)^-1 E) and map back.
  const double scale_a = A.norm();
  const double scale_e = E.norm();
  const double sigma_scale = scale_e > 0.0 ? std::max(1.0, scale_a / scale_e) : 1.0;
  const Complex probes[] = {{1.0, 0.0}, {1.1, 0.9}, {-0.7, 1.3}, {2.3, -1.1}, {3.7, 0.4}};

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  Complex sigma;
  bool found = false;
  for (const Complex& p : probes) {
    sigma = p * sigma_scale;
    Eigen::MatrixXcd shifted = A - sigma * E;
    lu.compute(shifted);
    if (lu.rcond() > 1e-12) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw NumericalError("pencil_eigenvalues: pencil appears singular");
  }

  Eigen::MatrixXcd M = lu.solve(E);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("pencil_eigenvalues: eigensolver failed to converge");
  }
  const double mu_scale = std::max(M.norm(), 1e-300);
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Complex mu = es.eigenvalues()[i];
    GeneralizedEigenvalue ge;
    ge.infinite = std::abs(mu) <= 1e-13 * mu_scale;
    if (!ge.infinite) ge.value = sigma + 1.0 / mu;
    out.push_back(ge);
  }
  sort_pencil_eigenvalues(out);
  return out;
}

HermitianEigen<double> hermitian_eig(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  return hermitian_eig_impl<double>(M);
}

HermitianEigen<Complex> hermitian_eig(const Eigen::Ref<const Eigen::MatrixXcd>& M) {
  return hermitian_eig_impl<Complex>(M);
}

double hermitian_deviation(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  const double denom = std::max(M.norm(), 1e-300);
  return (M - M.transpose()).norm() / denom;
}

double hermitian_deviation(const Eigen::Ref<const Eigen::MatrixXcd>& M) {
  const double denom = std::max(M.norm(), 1e-300);
  return (M - M.adjoint()).norm() / denom;
}

}  // namespace tadi
