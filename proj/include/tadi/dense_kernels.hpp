#pragma once

#include <vector>

#include "tadi/types.hpp"

namespace tadi {

// Orthonormal basis of the column span. Directions whose relative contribution
// falls below drop_tol are dropped, so the result may have fewer columns than
// the input. An all-zero input yields an n x 0 matrix.
Eigen::MatrixXd orthonormal_basis(const Eigen::Ref<const Eigen::MatrixXd>& cols,
                                  double drop_tol = kDefaultDropTol);
Eigen::MatrixXcd orthonormal_basis(const Eigen::Ref<const Eigen::MatrixXcd>& cols,
                                   double drop_tol = kDefaultDropTol);

struct GeneralizedEigenvalue {
  Complex value{0.0, 0.0};  // meaningless when infinite
  bool infinite = false;
};

// All k eigenvalues of the pencil lambda*E - A (k x k dense, k <= kSmallDenseCap).
// Finite ones come first, sorted by (Re, Im); infinite ones are flagged.
// Real inputs go through real QZ, so conjugate pairs are exact.
std::vector<GeneralizedEigenvalue> pencil_eigenvalues(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& E);
std::vector<GeneralizedEigenvalue> pencil_eigenvalues(
    const Eigen::Ref<const Eigen::MatrixXcd>& A,
    const Eigen::Ref<const Eigen::MatrixXcd>& E);

template <class Scalar>
struct HermitianEigen {
  DenseMatrix<Scalar> vectors;  // unitary, one eigenvector per column
  Eigen::VectorXd values;       // ordered by descending |value|, positive first on ties
};

// Eigendecomposition of a Hermitian matrix. Inputs further than
// kHermitianRelTol from Hermitian are rejected.
HermitianEigen<double> hermitian_eig(const Eigen::Ref<const Eigen::MatrixXd>& M);
HermitianEigen<Complex> hermitian_eig(const Eigen::Ref<const Eigen::MatrixXcd>& M);

double hermitian_deviation(const Eigen::Ref<const Eigen::MatrixXd>& M);
double hermitian_deviation(const Eigen::Ref<const Eigen::MatrixXcd>& M);

}  // namespace tadi
