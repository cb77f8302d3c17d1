#pragma once

#include <deque>
#include <optional>
#include <vector>

#include <Eigen/SVD>

#include "tadi/dense_kernels.hpp"
#include "tadi/problem.hpp"
#include "tadi/types.hpp"

namespace tadi {

// Ordered shift batch. In real mode complex entries come as adjacent conjugate
// pairs, Im > 0 first, and next() hands out the pair's representative once.
struct ShiftPool {
  std::vector<Complex> shifts;
  bool real_mode = false;
  std::size_t cursor = 0;

  bool exhausted() const { return cursor >= shifts.size(); }

  Complex next() {
    if (exhausted()) throw NoValidShiftsError("ShiftPool: pool exhausted");
    Complex s = shifts[cursor];
    if (real_mode && s.imag() != 0.0) {
      if (cursor + 1 >= shifts.size() || shifts[cursor + 1] != std::conj(s)) {
        throw InputError("ShiftPool: conjugate partner missing in real mode");
      }
      cursor += 2;
    } else {
      cursor += 1;
    }
    return s;
  }
};

// Ring buffer over the most recent update columns; shared by shift generation
// and the projected direction heuristic.
template <class Scalar>
class ProjectionSpace {
 public:
  explicit ProjectionSpace(Index capacity) : capacity_(capacity) {
    if (capacity <= 0) throw InputError("ProjectionSpace: capacity must be positive");
  }

  void push(const Eigen::Ref<const DenseMatrix<Scalar>>& new_cols) {
    for (Index j = 0; j < new_cols.cols(); ++j) {
      cols_.push_back(new_cols.col(j));
      if (static_cast<Index>(cols_.size()) > capacity_) cols_.pop_front();
    }
  }

  bool empty() const { return cols_.empty(); }
  Index count() const { return static_cast<Index>(cols_.size()); }
  Index capacity() const { return capacity_; }

  DenseMatrix<Scalar> matrix() const {
    if (cols_.empty()) return DenseMatrix<Scalar>(0, 0);
    DenseMatrix<Scalar> M(cols_.front().size(), count());
    for (Index j = 0; j < count(); ++j) M.col(j) = cols_[static_cast<std::size_t>(j)];
    return M;
  }

 private:
  Index capacity_;
  std::deque<DenseVector<Scalar>> cols_;
};

// Subset of ell candidates minimizing the worst ADI amplification over the
// whole candidate set. Exhaustive up to 12 candidates, greedy beyond.
std::vector<Complex> minimax_select(const std::vector<Complex>& candidates, int ell);

namespace detail {

// left-half-plane filter + real-mode handling shared by the shift routines
ShiftPool select_pool_from_ritz(const std::vector<GeneralizedEigenvalue>& ritz, int ell,
                                bool real_mode);

}  // namespace detail

// Ritz values of the pencil projected onto the orthonormalized space, filtered
// to the open left half-plane, reduced by minimax_select.
template <class Scalar>
ShiftPool projection_shifts(const ProjectionSpace<Scalar>& space,
                            const CoefficientOperator<Scalar>& A,
                            const CoefficientOperator<Scalar>& E, int ell) {
  if (space.empty()) throw NoValidShiftsError("projection_shifts: projection space is empty");
  const DenseMatrix<Scalar> U = orthonormal_basis(space.matrix(), kDefaultDropTol);
  if (U.cols() == 0) throw NoValidShiftsError("projection_shifts: projection space is degenerate");
  const DenseMatrix<Scalar> Ah = U.adjoint() * A.apply(U);
  const DenseMatrix<Scalar> Eh = U.adjoint() * E.apply(U);
  const auto ritz = pencil_eigenvalues(Ah, Eh);
  return detail::select_pool_from_ritz(ritz, ell, !is_complex_v<Scalar>);
}

// Bootstrap pool before any iterate exists: project onto B's dominant
// directions (all of them for small m, a leading singular block otherwise).
template <class Scalar>
ShiftPool initial_shifts(const LyapunovProblem<Scalar>& p, int ell, Index sketch_rank = 32) {
  if (sketch_rank <= 0) throw InputError("initial_shifts: sketch_rank must be positive");
  DenseMatrix<Scalar> basis_input;
  if (p.m() <= sketch_rank) {
    basis_input = p.B;
  } else {
    Eigen::BDCSVD<DenseMatrix<Scalar>> svd(p.B, Eigen::ComputeThinU);
    basis_input = svd.matrixU().leftCols(std::min<Index>(sketch_rank, svd.matrixU().cols()));
  }
  const DenseMatrix<Scalar> U = orthonormal_basis(basis_input, kDefaultDropTol);
  if (U.cols() == 0) throw NoValidShiftsError("initial_shifts: B spans nothing");
  const DenseMatrix<Scalar> Ah = U.adjoint() * p.A.apply(U);
  const DenseMatrix<Scalar> Eh = U.adjoint() * p.E.apply(U);
  const auto ritz = pencil_eigenvalues(Ah, Eh);
  return detail::select_pool_from_ritz(ritz, ell, !is_complex_v<Scalar>);
}

// Hands the run loop its next batch of shifts.
template <class Scalar>
class ShiftSource {
 public:
  virtual ~ShiftSource() = default;
  virtual ShiftPool next_pool(const ProjectionSpace<Scalar>& space) = 0;
};

template <class Scalar>
class ProjectionShiftSource final : public ShiftSource<Scalar> {
 public:
  ProjectionShiftSource(const LyapunovProblem<Scalar>& problem, int ell, Index sketch_rank = 32)
      : problem_(&problem), ell_(ell), sketch_rank_(sketch_rank) {
    if (ell <= 0) throw InputError("ProjectionShiftSource: ell must be positive");
  }

  ShiftPool next_pool(const ProjectionSpace<Scalar>& space) override {
    if (space.empty()) {
      return initial_shifts(*problem_, ell_, sketch_rank_);
    }
    return projection_shifts(space, problem_->A, problem_->E, ell_);
  }

 private:
  const LyapunovProblem<Scalar>* problem_;
  int ell_;
  Index sketch_rank_;
};

// Static pool, reissued on every request (classic cyclic reuse).
template <class Scalar>
class FixedShiftSource final : public ShiftSource<Scalar> {
 public:
  explicit FixedShiftSource(std::vector<Complex> shifts) : shifts_(std::move(shifts)) {
    if (shifts_.empty()) throw InputError("FixedShiftSource: empty shift list");
    for (const Complex& s : shifts_) {
      if (!(s.real() < 0.0)) throw InputError("FixedShiftSource: shifts must have Re < 0");
    }
  }

  ShiftPool next_pool(const ProjectionSpace<Scalar>&) override {
    ShiftPool pool;
    pool.shifts = shifts_;
    pool.real_mode = !is_complex_v<Scalar>;
    return pool;
  }

 private:
  std::vector<Complex> shifts_;
};

}  // namespace tadi
