#pragma once

#include <Eigen/Dense>

#include "tadi/problem.hpp"
#include "tadi/types.hpp"

namespace tadi {

enum class NormKind { Spectral, Frobenius };

// Norm of W R W^H without forming it: the nonzero eigenvalues of W R W^H are
// those of the small product (W^H W) R, so an m x m eigensolve suffices.
template <class Scalar>
double residual_norm(const Eigen::Ref<const DenseMatrix<Scalar>>& W,
                     const Eigen::Ref<const DenseMatrix<Scalar>>& R,
                     NormKind kind = NormKind::Spectral) {
  if (W.cols() != R.rows() || R.rows() != R.cols()) {
    throw InputError("residual_norm: W width must match R order");
  }
  const Index m = R.rows();
  if (m == 0 || W.rows() == 0) return 0.0;
  DenseMatrix<Scalar> small = (W.adjoint() * W) * R;
  Eigen::VectorXcd eigs;
  if constexpr (is_complex_v<Scalar>) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(small, false);
    if (es.info() != Eigen::Success) throw NumericalError("residual_norm: eigensolver failed");
    eigs = es.eigenvalues();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(small, false);
    if (es.info() != Eigen::Success) throw NumericalError("residual_norm: eigensolver failed");
    eigs = es.eigenvalues();
  }
  if (kind == NormKind::Spectral) {
    return eigs.cwiseAbs().maxCoeff();
  }
  return eigs.norm();
}

// ||Z M Z^H||_2 for thin Z via its triangular QR factor: equals ||Y M Y^H||_2
// with Y the R-factor, a Hermitian eigenproblem of order min(n, cols(Z)).
template <class Scalar>
double compressed_outer_norm(DenseMatrix<Scalar> Z, const DenseMatrix<Scalar>& M) {
  if (Z.cols() != M.rows() || M.rows() != M.cols()) {
    throw InputError("compressed_outer_norm: middle block size mismatch");
  }
  if (Z.cols() == 0 || Z.rows() == 0) return 0.0;
  const Index p = Z.cols();
  const Index q = std::min(Z.rows(), p);
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(std::move(Z));
  DenseMatrix<Scalar> Y = qr.matrixQR().topRows(q).template triangularView<Eigen::Upper>();
  DenseMatrix<Scalar> H = Y * M * Y.adjoint();
  H = (H + DenseMatrix<Scalar>(H.adjoint())) * Scalar(0.5);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("compressed_outer_norm: eigensolver failed");
  if (es.eigenvalues().size() == 0) return 0.0;
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Spectral norm of A (L D L^H) E^H + E (L D L^H) A^H + B R B^H, assembled from
// the thin blocks [A L, E L, B] only; the n x n residual never exists.
template <class Scalar>
double explicit_residual_norm(const LyapunovProblem<Scalar>& p, const DenseMatrix<Scalar>& L,
                              const DenseMatrix<Scalar>& D) {
  const Index k = L.cols();
  if (D.rows() != k || D.cols() != k) {
    throw InputError("explicit_residual_norm: D order must match L width");
  }
  if (k > 0 && L.rows() != p.n()) {
    throw InputError("explicit_residual_norm: L height differs from the problem order");
  }
  const Index m = p.m();
  DenseMatrix<Scalar> Z(p.n(), 2 * k + m);
  if (k > 0) {
    Z.leftCols(k) = p.A.apply(L);
    Z.middleCols(k, k) = p.E.apply(L);
  }
  Z.rightCols(m) = p.B;
  DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(2 * k + m, 2 * k + m);
  if (k > 0) {
    M.block(0, k, k, k) = D;
    M.block(k, 0, k, k) = D;
  }
  M.bottomRightCorner(m, m) = p.R;
  return compressed_outer_norm(std::move(Z), M);
}

}  // namespace tadi
