#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tadi/dense_kernels.hpp"
#include "tadi/rng.hpp"
#include "tadi/shifts.hpp"
#include "tadi/types.hpp"

namespace tadi {

// Eigendecomposition of the (truncated) center matrix R: the admissible
// tangential directions. Ordered by descending |value|.
template <class Scalar>
struct EigenDirections {
  DenseMatrix<Scalar> vectors;
  Eigen::VectorXd values;

  Index count() const { return vectors.cols(); }
};

template <class Scalar>
EigenDirections<Scalar> eigen_directions(const DenseMatrix<Scalar>& R) {
  HermitianEigen<Scalar> eig = hermitian_eig(R);
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] == 0.0) {
      throw InputError("eigen_directions: R is singular; rank_truncate it first");
    }
  }
  return EigenDirections<Scalar>{std::move(eig.vectors), std::move(eig.values)};
}

template <class Scalar>
struct DirectionChoice {
  DenseVector<Scalar> t;
  int index = -1;  // 1-based eigendirection, -1 for free directions
};

// Everything a strategy may look at when choosing the direction for one step.
template <class Scalar>
struct DirectionQuery {
  Complex shift;
  const DenseMatrix<Scalar>* W = nullptr;
  const EigenDirections<Scalar>* directions = nullptr;
  const ProjectionSpace<Scalar>* space = nullptr;
  const CoefficientOperator<Scalar>* A = nullptr;
  const CoefficientOperator<Scalar>* E = nullptr;
  // column norms of (A + shift E)^-1 * rhs, sharing the step's factorization
  std::function<Eigen::VectorXd(const DenseMatrix<Scalar>&)> resolvent_col_norms;
  Index step_counter = 0;
  std::vector<std::pair<Index, std::string>>* events = nullptr;
  Index iteration = 0;
};

namespace detail {

inline int argmax_lowest_index(const Eigen::VectorXd& scores) {
  int best = 0;
  for (int i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace detail

// Scores every eigendirection by the norm of the would-be update column.
template <class Scalar>
DirectionChoice<Scalar> select_full(const DirectionQuery<Scalar>& q) {
  const auto& dirs = *q.directions;
  const Eigen::VectorXd scores = q.resolvent_col_norms(*q.W * dirs.vectors);
  const int p = detail::argmax_lowest_index(scores);
  return {dirs.vectors.col(p), p + 1};
}

// Same scoring on the pencil projected onto the shared update space; one small
// factorization instead of a large one. Falls back to the residual heuristic
// when the space is empty or the projected system is unusable.
template <class Scalar>
DirectionChoice<Scalar> select_residual(const DirectionQuery<Scalar>& q);

template <class Scalar>
DirectionChoice<Scalar> select_projected(const DirectionQuery<Scalar>& q) {
  const auto& dirs = *q.directions;
  auto fall_back = [&](const char* why) {
    if (q.events) q.events->emplace_back(q.iteration, std::string("projected heuristic: ") + why);
    return select_residual(q);
  };
  if (q.space == nullptr || q.space->empty()) {
    return fall_back("empty projection space, residual fallback");
  }
  const DenseMatrix<Scalar> U = orthonormal_basis(q.space->matrix(), kDefaultDropTol);
  if (U.cols() == 0) return fall_back("degenerate projection space, residual fallback");
  const DenseMatrix<Scalar> Ah = U.adjoint() * q.A->apply(U);
  const DenseMatrix<Scalar> Eh = U.adjoint() * q.E->apply(U);
  const DenseMatrix<Scalar> Wh = U.adjoint() * (*q.W * dirs.vectors);

  Eigen::VectorXd scores;
  if (!is_complex_v<Scalar> && q.shift.imag() != 0.0) {
    const Eigen::MatrixXcd M = Ah.template cast<Complex>() + q.shift * Eh.template cast<Complex>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    if (!(lu.rcond() > 1e-14)) return fall_back("projected system singular, residual fallback");
    scores = lu.solve(Wh.template cast<Complex>()).colwise().norm().transpose();
  } else {
    DenseMatrix<Scalar> M = Ah;
    if constexpr (is_complex_v<Scalar>) {
      M += q.shift * Eh;
    } else {
      M += q.shift.real() * Eh;
    }
    Eigen::PartialPivLU<DenseMatrix<Scalar>> lu(M);
    if (!(lu.rcond() > 1e-14)) return fall_back("projected system singular, residual fallback");
    scores = lu.solve(Wh).colwise().norm().transpose();
  }
  const int p = detail::argmax_lowest_index(scores);
  return {dirs.vectors.col(p), p + 1};
}

// Cheapest heuristic: how strongly each direction still shows in the residual.
template <class Scalar>
DirectionChoice<Scalar> select_residual(const DirectionQuery<Scalar>& q) {
  const auto& dirs = *q.directions;
  const Eigen::VectorXd scores = (*q.W * dirs.vectors).colwise().norm().transpose();
  const int p = detail::argmax_lowest_index(scores);
  return {dirs.vectors.col(p), p + 1};
}

template <class Scalar>
DirectionChoice<Scalar> select_cyclic(Index step_counter, const EigenDirections<Scalar>& dirs) {
  const int p = static_cast<int>(step_counter % dirs.count());
  return {dirs.vectors.col(p), p + 1};
}

enum class DirectionStrategy { Full, Projected, Residual, Cyclic, Random };

DirectionStrategy parse_direction_strategy(const std::string& name);
std::string direction_strategy_name(DirectionStrategy s);

template <class Scalar>
class DirectionSource {
 public:
  virtual ~DirectionSource() = default;
  virtual DirectionChoice<Scalar> select(const DirectionQuery<Scalar>& q) = 0;
};

// Random unit vectors are not eigendirections of R; with indefinite R they can
// and do make the iteration diverge. Kept for exactly that demonstration.
template <class Scalar>
class StrategyDirectionSource final : public DirectionSource<Scalar> {
 public:
  explicit StrategyDirectionSource(DirectionStrategy strategy, std::uint64_t seed = 0)
      : strategy_(strategy), rng_(seed) {}

  DirectionChoice<Scalar> select(const DirectionQuery<Scalar>& q) override {
    switch (strategy_) {
      case DirectionStrategy::Full:
        return select_full(q);
      case DirectionStrategy::Projected:
        return select_projected(q);
      case DirectionStrategy::Residual:
        return select_residual(q);
      case DirectionStrategy::Cyclic:
        return select_cyclic(q.step_counter, *q.directions);
      case DirectionStrategy::Random:
        break;
    }
    const Index m = q.directions->count();
    DenseVector<Scalar> t = random_normal_matrix<Scalar>(rng_, m, 1);
    const double nrm = t.norm();
    if (nrm == 0.0) t.setOnes();
    t /= t.norm();
    return {std::move(t), -1};
  }

 private:
  DirectionStrategy strategy_;
  Rng rng_;
};

}  // namespace tadi
