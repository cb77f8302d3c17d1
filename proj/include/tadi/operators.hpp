#pragma once

#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "tadi/types.hpp"

namespace tadi {

// Square coefficient matrix with either sparse or dense storage.
template <class Scalar>
class CoefficientOperator {
 public:
  using Dense = DenseMatrix<Scalar>;
  using Sparse = Eigen::SparseMatrix<Scalar>;

  explicit CoefficientOperator(Dense M) : n_(M.rows()) {
    if (M.rows() != M.cols()) {
      throw InputError("CoefficientOperator: matrix must be square");
    }
    dense_ = std::move(M);
  }

  explicit CoefficientOperator(Sparse M) : n_(M.rows()) {
    if (M.rows() != M.cols()) {
      throw InputError("CoefficientOperator: matrix must be square");
    }
    M.makeCompressed();
    sparse_ = std::move(M);
  }

  static CoefficientOperator identity(Index n) {
    Sparse eye(n, n);
    eye.setIdentity();
    return CoefficientOperator(std::move(eye));
  }

  Index size() const { return n_; }
  bool is_sparse() const { return sparse_.has_value(); }

  Dense apply(const Eigen::Ref<const Dense>& X) const {
    if (X.rows() != n_) {
      throw InputError("CoefficientOperator: operand height mismatch");
    }
    if (sparse_) return *sparse_ * X;
    return *dense_ * X;
  }

  Dense to_dense() const {
    if (sparse_) return Dense(*sparse_);
    return *dense_;
  }

  const Sparse& sparse_matrix() const {
    if (!sparse_) throw InputError("CoefficientOperator: no sparse storage");
    return *sparse_;
  }

  const Dense& dense_matrix() const {
    if (!dense_) throw InputError("CoefficientOperator: no dense storage");
    return *dense_;
  }

 private:
  Index n_ = 0;
  std::optional<Dense> dense_;
  std::optional<Sparse> sparse_;
};

namespace detail {

template <class To, class From>
DenseMatrix<To> cast_dense(const DenseMatrix<From>& M) {
  return M.template cast<To>();
}

template <class To, class From>
Eigen::SparseMatrix<To> cast_sparse(const Eigen::SparseMatrix<From>& M) {
  return M.template cast<To>();
}

}  // namespace detail

// One factorization of A + alpha*E, reused for every solve at that shift.
// Scalar is the factorization scalar: complex shifts over real operators
// factor in complex arithmetic, real shifts stay in real arithmetic so the
// results carry no imaginary part at all.
template <class Scalar>
class ShiftedSystem {
 public:
  using Dense = DenseMatrix<Scalar>;
  using Sparse = Eigen::SparseMatrix<Scalar>;

  template <class OpScalar>
  ShiftedSystem(const CoefficientOperator<OpScalar>& A, const CoefficientOperator<OpScalar>& E,
                Complex shift, Index dense_threshold = kDenseSolveThreshold)
      : shift_(shift), n_(A.size()) {
    static_assert(is_complex_v<Scalar> || !is_complex_v<OpScalar>,
                  "real factorization cannot hold complex operators");
    if (E.size() != n_) {
      throw InputError("ShiftedSystem: A and E sizes differ");
    }
    if (!(shift.real() < 0.0)) {
      throw InputError("ShiftedSystem: shift must have negative real part");
    }
    if constexpr (!is_complex_v<Scalar>) {
      if (shift.imag() != 0.0) {
        throw InputError("ShiftedSystem: complex shift needs a complex factorization");
      }
    }
    const bool use_dense = n_ < dense_threshold || (!A.is_sparse() && !E.is_sparse());
    const Scalar a = scalar_shift(shift);
    if (use_dense) {
      Dense M = detail::cast_dense<Scalar>(A.to_dense()) + a * detail::cast_dense<Scalar>(E.to_dense());
      dense_lu_ = std::make_unique<Eigen::PartialPivLU<Dense>>(std::move(M));
      if (!(dense_lu_->rcond() > 1e-15)) {
        throw SingularShiftError("ShiftedSystem: A + alpha*E is singular to working precision");
      }
    } else {
      Sparse M = to_sparse_cast(A) + Sparse(a * to_sparse_cast(E));
      M.makeCompressed();
      sparse_lu_ = std::make_unique<Eigen::SparseLU<Sparse>>();
      sparse_lu_->compute(M);
      if (sparse_lu_->info() != Eigen::Success) {
        throw SingularShiftError("ShiftedSystem: sparse factorization of A + alpha*E failed");
      }
    }
  }

  Dense solve(const Eigen::Ref<const Dense>& rhs) const {
    if (rhs.rows() != n_) {
      throw InputError("ShiftedSystem: right-hand side height mismatch");
    }
    if (dense_lu_) return dense_lu_->solve(rhs);
    return sparse_lu_->solve(rhs);
  }

  Complex shift() const { return shift_; }
  Index size() const { return n_; }

 private:
  static Scalar scalar_shift(Complex shift) {
    if constexpr (is_complex_v<Scalar>) {
      return shift;
    } else {
      return shift.real();
    }
  }

  template <class OpScalar>
  static Sparse to_sparse_cast(const CoefficientOperator<OpScalar>& op) {
    if (op.is_sparse()) {
      if constexpr (std::is_same_v<OpScalar, Scalar>) {
        return op.sparse_matrix();
      } else {
        return detail::cast_sparse<Scalar>(op.sparse_matrix());
      }
    }
    return detail::cast_dense<Scalar>(op.to_dense()).sparseView();
  }

  Complex shift_;
  Index n_ = 0;
  std::unique_ptr<Eigen::PartialPivLU<Dense>> dense_lu_;
  std::unique_ptr<Eigen::SparseLU<Sparse>> sparse_lu_;
};

inline Eigen::MatrixXd solve_shifted(const CoefficientOperator<double>& A,
                                     const CoefficientOperator<double>& E, double alpha,
                                     const Eigen::Ref<const Eigen::MatrixXd>& rhs) {
  return ShiftedSystem<double>(A, E, Complex(alpha, 0.0)).solve(rhs);
}

template <class OpScalar>
Eigen::MatrixXcd solve_shifted(const CoefficientOperator<OpScalar>& A,
                               const CoefficientOperator<OpScalar>& E, Complex alpha,
                               const Eigen::Ref<const Eigen::MatrixXcd>& rhs) {
  return ShiftedSystem<Complex>(A, E, alpha).solve(rhs);
}

}  // namespace tadi
