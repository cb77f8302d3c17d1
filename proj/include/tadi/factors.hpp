#pragma once

#include <vector>

#include "tadi/types.hpp"

namespace tadi {

// X ~= L D L^H. D is Hermitian block diagonal; step_widths records how many
// columns each iteration contributed.
template <class Scalar>
struct LdlFactors {
  DenseMatrix<Scalar> L;
  DenseMatrix<Scalar> D;
  std::vector<Index> step_widths;

  Index rows() const { return L.rows(); }
  Index cols() const { return L.cols(); }

  void append(const Eigen::Ref<const DenseMatrix<Scalar>>& new_cols,
              const Eigen::Ref<const DenseMatrix<Scalar>>& new_block) {
    const Index w = new_cols.cols();
    if (new_block.rows() != w || new_block.cols() != w) {
      throw InputError("LdlFactors: diagonal block must match the new column count");
    }
    if (cols() == 0) {
      L = new_cols;
      D = new_block;
    } else {
      if (new_cols.rows() != rows()) {
        throw InputError("LdlFactors: new columns have the wrong height");
      }
      const Index k = cols();
      L.conservativeResize(Eigen::NoChange, k + w);
      L.rightCols(w) = new_cols;
      D.conservativeResize(k + w, k + w);
      D.block(0, k, k, w).setZero();
      D.block(k, 0, w, k).setZero();
      D.bottomRightCorner(w, w) = new_block;
    }
    step_widths.push_back(w);
  }

  // n x n product; intended for desk-scale checks only
  DenseMatrix<Scalar> reconstruct() const {
    if (cols() == 0) return DenseMatrix<Scalar>::Zero(rows(), rows());
    return L * D * L.adjoint();
  }
};

}  // namespace tadi
