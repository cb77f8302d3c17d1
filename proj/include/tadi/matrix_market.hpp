#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tadi/types.hpp"

namespace tadi {

// Raw Matrix Market contents; conversion to a concrete matrix type happens on top.
struct MatrixMarketData {
  Index rows = 0;
  Index cols = 0;
  bool complex_field = false;
  bool coordinate = false;
  std::vector<Eigen::Triplet<Complex>> entries;  // symmetry already expanded
};

MatrixMarketData read_matrix_market(const std::string& path);

Eigen::MatrixXd to_dense_real(const MatrixMarketData& data, const std::string& context);
Eigen::MatrixXcd to_dense_complex(const MatrixMarketData& data);
Eigen::SparseMatrix<double> to_sparse_real(const MatrixMarketData& data, const std::string& context);
Eigen::SparseMatrix<Complex> to_sparse_complex(const MatrixMarketData& data);

// Writers emit 17 significant digits so values round-trip bit-identically.
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& M);
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<Complex>& M);
void write_matrix_market_array(const std::string& path, const Eigen::Ref<const Eigen::MatrixXd>& M);
void write_matrix_market_array(const std::string& path, const Eigen::Ref<const Eigen::MatrixXcd>& M);

}  // namespace tadi
