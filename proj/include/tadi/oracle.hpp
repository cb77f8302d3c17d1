#pragma once

#include <Eigen/Eigenvalues>

#include "tadi/factors.hpp"
#include "tadi/problem.hpp"
#include "tadi/types.hpp"

namespace tadi {

namespace detail {

// Hermitian spectral norm (max |eigenvalue|).
template <class Scalar>
double hermitian_norm2(const DenseMatrix<Scalar>& H) {
  if (H.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <class Scalar>
DenseMatrix<Scalar> constant_term(const LyapunovProblem<Scalar>& p) {
  DenseMatrix<Scalar> G = p.B * p.R * p.B.adjoint();
  return ((G + G.adjoint()) / 2.0).eval();
}

template <class Scalar>
double oracle_residual(const LyapunovProblem<Scalar>& p, const DenseMatrix<Scalar>& X) {
  const DenseMatrix<Scalar> Ad = p.A.to_dense();
  const DenseMatrix<Scalar> Ed = p.E.to_dense();
  DenseMatrix<Scalar> Rm = Ad * X * Ed.adjoint() + Ed * X * Ad.adjoint() + constant_term(p);
  Rm = ((Rm + Rm.adjoint()) / 2.0).eval();
  return hermitian_norm2<Scalar>(Rm);
}

}  // namespace detail

// Dense solve of A X E^H + E X A^H + B R B^H = 0 via reduction to
// F X + X F^H + C = 0 (F = E^-1 A) and a Schur back-substitution.
// Self-checks its own residual and refuses to return a bad X.
template <class Scalar>
DenseMatrix<Scalar> dense_lyap_solve(const LyapunovProblem<Scalar>& p) {
  const Index n = p.n();
  if (n > kOracleCap) throw InputError("dense_lyap_solve: problem exceeds the dense oracle cap");
  if (n == 0) return DenseMatrix<Scalar>(0, 0);

  Eigen::PartialPivLU<DenseMatrix<Scalar>> elu(p.E.to_dense());
  if (!(elu.rcond() > 1e-14)) throw NumericalError("dense_lyap_solve: E is numerically singular");
  const DenseMatrix<Complex> F = elu.solve(p.A.to_dense()).template cast<Complex>();
  const DenseMatrix<Complex> Binv = elu.solve(p.B).template cast<Complex>();
  DenseMatrix<Complex> C = Binv * p.R.template cast<Complex>() * Binv.adjoint();
  C = ((C + C.adjoint()) / 2.0).eval();

  Eigen::ComplexSchur<DenseMatrix<Complex>> schur(F, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("dense_lyap_solve: Schur decomposition failed");
  }
  const DenseMatrix<Complex>& T = schur.matrixT();
  const DenseMatrix<Complex>& U = schur.matrixU();
  const DenseMatrix<Complex> Ct = U.adjoint() * C * U;

  // T Y + Y T^H + Ct = 0, columns right to left; each column needs one
  // shifted upper-triangular solve.
  DenseMatrix<Complex> Y(n, n);
  for (Index k = n - 1; k >= 0; --k) {
    DenseVector<Complex> rhs = -Ct.col(k);
    for (Index j = k + 1; j < n; ++j) rhs -= std::conj(T(k, j)) * Y.col(j);
    DenseMatrix<Complex> Tk = T;
    Tk.diagonal().array() += std::conj(T(k, k));
    Y.col(k) = Tk.template triangularView<Eigen::Upper>().solve(rhs);
  }
  DenseMatrix<Complex> Xc = U * Y * U.adjoint();
  Xc = ((Xc + Xc.adjoint()) / 2.0).eval();

  DenseMatrix<Scalar> X;
  if constexpr (is_complex_v<Scalar>) {
    X = std::move(Xc);
  } else {
    X = Xc.real();
  }

  const double rhs_norm = detail::hermitian_norm2<Scalar>(detail::constant_term(p));
  const double res = detail::oracle_residual(p, X);
  if (!(res <= 1e-10 * rhs_norm)) {
    throw NumericalError("dense_lyap_solve: self-check failed, residual " + std::to_string(res) +
                         " exceeds tolerance");
  }
  return X;
}

// Independent cross-check route through the n^2 x n^2 linear system; only for
// tiny problems.
template <class Scalar>
DenseMatrix<Scalar> dense_lyap_solve_kron(const LyapunovProblem<Scalar>& p) {
  const Index n = p.n();
  if (n > 20) throw InputError("dense_lyap_solve_kron: only intended for n <= 20");
  if (n == 0) return DenseMatrix<Scalar>(0, 0);
  const DenseMatrix<Scalar> Ad = p.A.to_dense();
  const DenseMatrix<Scalar> Ed = p.E.to_dense();
  const DenseMatrix<Scalar> C = detail::constant_term(p);

  // vec(A X E^H + E X A^H) = (conj(E) (x) A + conj(A) (x) E) vec(X)
  DenseMatrix<Scalar> K = DenseMatrix<Scalar>::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Scalar e_ij, a_ij;
      if constexpr (is_complex_v<Scalar>) {
        e_ij = std::conj(Ed(i, j));
        a_ij = std::conj(Ad(i, j));
      } else {
        e_ij = Ed(i, j);
        a_ij = Ad(i, j);
      }
      K.block(i * n, j * n, n, n) += e_ij * Ad + a_ij * Ed;
    }
  }
  const Eigen::Map<const DenseVector<Scalar>> c_vec(C.data(), n * n);
  Eigen::PartialPivLU<DenseMatrix<Scalar>> lu(std::move(K));
  if (!(lu.rcond() > 1e-14)) {
    throw NumericalError("dense_lyap_solve_kron: Lyapunov operator is numerically singular");
  }
  DenseVector<Scalar> x_vec = lu.solve((-c_vec).eval());
  DenseMatrix<Scalar> X = Eigen::Map<DenseMatrix<Scalar>>(x_vec.data(), n, n);
  X = ((X + X.adjoint()) / 2.0).eval();
  return X;
}

// || L D L^H - X ||_F / ||X||_F
template <class Scalar>
double relative_factor_error(const LdlFactors<Scalar>& factors, const DenseMatrix<Scalar>& X) {
  if (factors.rows() != X.rows() || X.rows() != X.cols()) {
    throw InputError("relative_factor_error: dimension mismatch between factors and X");
  }
  const double denom = X.norm();
  if (denom == 0.0) return factors.reconstruct().norm() == 0.0 ? 0.0 : 1.0;
  return (factors.reconstruct() - X).norm() / denom;
}

}  // namespace tadi
