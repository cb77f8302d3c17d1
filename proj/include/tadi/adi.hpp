#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "tadi/directions.hpp"
#include "tadi/factors.hpp"
#include "tadi/operators.hpp"
#include "tadi/problem.hpp"
#include "tadi/residual.hpp"
#include "tadi/shifts.hpp"
#include "tadi/trace.hpp"
#include "tadi/types.hpp"

namespace tadi {

// Prefactored dense Hermitian center matrix, for R^-1 t products.
template <class Scalar>
class CenterSolver {
 public:
  explicit CenterSolver(DenseMatrix<Scalar> R) {
    if (R.rows() != R.cols()) throw InputError("CenterSolver: R must be square");
    norm1_ = R.cwiseAbs().colwise().sum().maxCoeff();
    lu_.compute(std::move(R));
    if (!(lu_.rcond() > 1e-14)) {
      throw InputError("CenterSolver: R is singular to working precision; rank_truncate first");
    }
  }

  DenseVector<Scalar> solve(const DenseVector<Scalar>& t) const { return lu_.solve(t); }

  // ~ ||R^-1||_1, from the factorization's condition estimate
  double inverse_norm_estimate() const { return 1.0 / (lu_.rcond() * norm1_); }

 private:
  Eigen::PartialPivLU<DenseMatrix<Scalar>> lu_;
  double norm1_ = 0.0;
};

template <class Scalar>
struct StepUpdate {
  DenseMatrix<Scalar> new_cols;   // appended to L
  DenseMatrix<Scalar> new_block;  // appended to D's diagonal
  DenseMatrix<Scalar> W_next;
  long solves = 1;
};

// One block step at a single shift. Works in real arithmetic when Scalar is
// real (the shift is then required to be real by the ShiftedSystem type).
template <class Scalar>
StepUpdate<Scalar> block_step(const CoefficientOperator<Scalar>& E, const DenseMatrix<Scalar>& R,
                              const ShiftedSystem<Scalar>& sys, const DenseMatrix<Scalar>& W) {
  if (W.cols() != R.rows()) throw InputError("block_step: W width must match R order");
  const double two_re = 2.0 * sys.shift().real();
  DenseMatrix<Scalar> V = sys.solve(W);
  StepUpdate<Scalar> out;
  out.W_next = W - two_re * E.apply(V);
  out.new_block = -two_re * R;
  out.new_cols = std::move(V);
  return out;
}

// Conjugate-pair block step: one complex solve, two real column blocks, and
// the residual factor stays real.
inline StepUpdate<double> block_pair_step(const CoefficientOperator<double>& E,
                                          const Eigen::MatrixXd& R,
                                          const ShiftedSystem<Complex>& sys,
                                          const Eigen::MatrixXd& W) {
  const Complex alpha = sys.shift();
  if (alpha.imag() == 0.0) {
    throw InputError("block_pair_step: real shift must be routed to block_step");
  }
  if (W.cols() != R.rows()) throw InputError("block_pair_step: W width must match R order");
  const double re = alpha.real();
  const double delta = re / alpha.imag();
  const Eigen::MatrixXcd V = sys.solve(W.cast<Complex>());
  const Eigen::MatrixXd Vim = V.imag();
  const Eigen::MatrixXd combo = V.real() + delta * Vim;
  const Index m = W.cols();
  StepUpdate<double> out;
  out.new_cols.resize(W.rows(), 2 * m);
  out.new_cols.leftCols(m) = std::sqrt(2.0) * combo;
  out.new_cols.rightCols(m) = std::sqrt(2.0 * (delta * delta + 1.0)) * Vim;
  out.new_block = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  out.new_block.topLeftCorner(m, m) = -2.0 * re * R;
  out.new_block.bottomRightCorner(m, m) = -2.0 * re * R;
  out.W_next = W - 4.0 * re * E.apply(combo);
  return out;
}

namespace detail {

template <class Scalar>
void check_direction(const DenseVector<Scalar>& t, Index m) {
  if (t.size() != m) throw InputError("tangential step: direction length must match W width");
  if (t.norm() == 0.0) throw InputError("tangential step: direction is zero");
}

// t^H R^-1 t with the isotropy guard; eigenvector mode short-circuits to 1/s.
template <class Scalar>
std::pair<double, DenseVector<Scalar>> center_weight(const CenterSolver<Scalar>& center,
                                                     const DenseVector<Scalar>& t,
                                                     std::optional<double> eigenvalue) {
  if (eigenvalue) {
    if (*eigenvalue == 0.0) throw InputError("tangential step: zero eigenvalue direction");
    return {1.0 / *eigenvalue, t / *eigenvalue};
  }
  DenseVector<Scalar> g = center.solve(t);
  Complex theta_c;
  if constexpr (is_complex_v<Scalar>) {
    theta_c = t.dot(g);
  } else {
    theta_c = Complex(t.dot(g), 0.0);
  }
  const double floor = kIsotropyTol * t.squaredNorm() * center.inverse_norm_estimate();
  if (std::abs(theta_c) < floor) {
    throw IsotropicDirectionError("tangential step: direction is isotropic for this R");
  }
  return {theta_c.real(), std::move(g)};
}

}  // namespace detail

// One rank-1 tangential step. With `eigenvalue` set, t is a unit eigenvector
// of R and the update avoids R^-1 entirely.
template <class Scalar>
StepUpdate<Scalar> tangential_step(const CoefficientOperator<Scalar>& E,
                                   const CenterSolver<Scalar>& center,
                                   const ShiftedSystem<Scalar>& sys,
                                   const DenseMatrix<Scalar>& W, const DenseVector<Scalar>& t,
                                   std::optional<double> eigenvalue = std::nullopt) {
  detail::check_direction(t, W.cols());
  const double two_re = 2.0 * sys.shift().real();
  const auto [theta, g] = detail::center_weight(center, t, eigenvalue);
  DenseVector<Scalar> v = sys.solve(W * t);
  StepUpdate<Scalar> out;
  out.W_next = W - (two_re / theta) * (E.apply(v) * g.adjoint());
  out.new_block = DenseMatrix<Scalar>::Constant(1, 1, Scalar(-two_re / theta));
  out.new_cols = std::move(v);
  return out;
}

// Conjugate-pair tangential step; the direction is chosen once for the pair.
inline StepUpdate<double> tangential_pair_step(const CoefficientOperator<double>& E,
                                               const CenterSolver<double>& center,
                                               const ShiftedSystem<Complex>& sys,
                                               const Eigen::MatrixXd& W, const Eigen::VectorXd& t,
                                               std::optional<double> eigenvalue = std::nullopt) {
  const Complex alpha = sys.shift();
  if (alpha.imag() == 0.0) {
    throw InputError("tangential_pair_step: real shift must be routed to tangential_step");
  }
  detail::check_direction(t, W.cols());
  const double re = alpha.real();
  const double delta = re / alpha.imag();
  const auto [theta, g] = detail::center_weight(center, t, eigenvalue);
  const Eigen::VectorXcd v = sys.solve((W * t).cast<Complex>());
  const Eigen::VectorXd vim = v.imag();
  const Eigen::VectorXd combo = v.real() + delta * vim;
  const double d = -2.0 * re / theta;
  StepUpdate<double> out;
  out.new_cols.resize(W.rows(), 2);
  out.new_cols.col(0) = std::sqrt(2.0) * combo;
  out.new_cols.col(1) = std::sqrt(2.0 * (delta * delta + 1.0)) * vim;
  out.new_block = Eigen::MatrixXd::Zero(2, 2);
  out.new_block(0, 0) = d;
  out.new_block(1, 1) = d;
  out.W_next = W - (4.0 * re / theta) * (E.apply(combo) * g.transpose());
  return out;
}

enum class RunStatus {
  Converged,
  MaxColumnsReached,
  NoValidShifts,
  IsotropicDirection,
  SingularShift,
};

inline std::string run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxColumnsReached: return "max_columns_reached";
    case RunStatus::NoValidShifts: return "no_valid_shifts";
    case RunStatus::IsotropicDirection: return "isotropic_direction";
    case RunStatus::SingularShift: return "singular_shift";
  }
  return "unknown";
}

template <class Scalar>
struct RunOptions {
  double tol = 1e-12;
  Index max_cols = 0;        // 0: 20 * m
  NormKind norm = NormKind::Spectral;
  Index space_capacity = 0;  // 0: 4 * m
  // eigenvalues of R below rank_trunc_tol * max|s| are dropped up front;
  // nonpositive disables truncation (block variant only)
  double rank_trunc_tol = kRankTruncateTol;
  Index steps_per_shift = 1;  // hold each shift for this many tangential steps
  Index dense_threshold = kDenseSolveThreshold;
  std::function<void(const TraceRow&, const LdlFactors<Scalar>&, const DenseMatrix<Scalar>&)>
      on_step;
};

template <class Scalar>
struct RunResult {
  LdlFactors<Scalar> factors;
  ConvergenceTrace trace;
  RunStatus status = RunStatus::MaxColumnsReached;
  std::string message;
  double final_residual = 1.0;  // normalized
  long solves = 0;

  bool converged() const { return status == RunStatus::Converged; }
};

namespace detail {

template <class SysScalar, class Scalar>
Eigen::VectorXd resolvent_col_norms(const ShiftedSystem<SysScalar>& sys,
                                    const DenseMatrix<Scalar>& rhs) {
  if constexpr (std::is_same_v<SysScalar, Scalar>) {
    return sys.solve(rhs).colwise().norm().transpose();
  } else {
    return sys.solve(rhs.template cast<SysScalar>()).colwise().norm().transpose();
  }
}

template <class Scalar>
RunResult<Scalar> run_adi_loop(const LyapunovProblem<Scalar>& problem,
                               ShiftSource<Scalar>& shift_source,
                               DirectionSource<Scalar>* direction_source,
                               const RunOptions<Scalar>& opt) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&t_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };
  if (!(opt.tol > 0.0)) throw InputError("run: tol must be positive");
  const bool tangential = direction_source != nullptr;

  double trunc_tol = opt.rank_trunc_tol;
  if (tangential && trunc_tol <= 0.0) trunc_tol = kRankTruncateTol;
  DenseMatrix<Scalar> Bh;
  DenseMatrix<Scalar> Rh;
  if (trunc_tol > 0.0) {
    TruncatedTerm<Scalar> term = rank_truncate(problem.B, problem.R, trunc_tol);
    Bh = std::move(term.B);
    Rh = std::move(term.R);
  } else {
    Bh = problem.B;
    Rh = problem.R;
  }
  const Index n = problem.n();
  const Index m = Bh.cols();
  if (m == 0) throw InputError("run: constant term vanished entirely");

  const Index max_cols = opt.max_cols > 0 ? opt.max_cols : 20 * m;
  const Index cap = opt.space_capacity > 0 ? opt.space_capacity : 4 * m;
  const Index reps = opt.steps_per_shift > 0 ? opt.steps_per_shift : 1;

  RunResult<Scalar> out;
  out.factors.L = DenseMatrix<Scalar>(n, 0);
  out.factors.D = DenseMatrix<Scalar>(0, 0);

  EigenDirections<Scalar> dirs;
  std::optional<CenterSolver<Scalar>> center;
  if (tangential) {
    dirs = eigen_directions(Rh);
    center.emplace(Rh);
  }

  DenseMatrix<Scalar> W = Bh;
  const double norm0 = residual_norm<Scalar>(W, Rh, opt.norm);
  out.trace.initial_norm = norm0;
  if (norm0 == 0.0) {
    out.status = RunStatus::Converged;
    out.final_residual = 0.0;
    return out;
  }

  ProjectionSpace<Scalar> space(cap);
  ShiftPool pool;
  std::optional<ShiftPool> last_pool;
  double res_rel = 1.0;
  long solves = 0;
  Index iter = 0;
  Index step_counter = 0;
  Index reps_left = 0;
  Complex current_shift;
  // factorizations persist while the shift repeats
  std::optional<ShiftedSystem<double>> real_sys;
  std::optional<ShiftedSystem<Complex>> complex_sys;

  const auto finish = [&](RunStatus status, std::string message) {
    out.status = status;
    out.message = std::move(message);
    out.final_residual = res_rel;
    out.solves = solves;
  };

  while (res_rel > opt.tol && out.factors.cols() < max_cols) {
    if (reps_left == 0) {
      if (pool.exhausted()) {
        try {
          pool = shift_source.next_pool(space);
          if (pool.shifts.empty()) {
            throw NoValidShiftsError("shift source returned an empty pool");
          }
          last_pool = pool;
          out.trace.shift_pools.push_back(pool.shifts);
        } catch (const NoValidShiftsError& e) {
          if (last_pool) {
            pool = *last_pool;
            pool.cursor = 0;
            out.trace.events.emplace_back(iter + 1,
                                          std::string("shift regeneration failed (") + e.what() +
                                              "), reusing previous pool");
          } else {
            finish(RunStatus::NoValidShifts, e.what());
            return out;
          }
        }
      }
      current_shift = pool.next();
      reps_left = reps;
    }
    --reps_left;
    const Complex alpha = current_shift;

    int dir_index = -1;
    try {
      StepUpdate<Scalar> upd;
      const auto run_tangential = [&](auto& sys) {
        DirectionQuery<Scalar> q;
        q.shift = alpha;
        q.W = &W;
        q.directions = &dirs;
        q.space = &space;
        q.A = &problem.A;
        q.E = &problem.E;
        q.step_counter = step_counter;
        q.events = &out.trace.events;
        q.iteration = iter + 1;
        q.resolvent_col_norms = [&sys](const DenseMatrix<Scalar>& rhs) {
          return resolvent_col_norms(sys, rhs);
        };
        DirectionChoice<Scalar> choice = direction_source->select(q);
        dir_index = choice.index;
        std::optional<double> s;
        if (choice.index >= 1) s = dirs.values[choice.index - 1];
        using SysScalar = typename std::decay_t<decltype(sys)>::Dense::Scalar;
        if constexpr (!is_complex_v<Scalar> && is_complex_v<SysScalar>) {
          return tangential_pair_step(problem.E, *center, sys, W, choice.t, s);
        } else {
          return tangential_step(problem.E, *center, sys, W, choice.t, s);
        }
      };

      if constexpr (!is_complex_v<Scalar>) {
        if (alpha.imag() == 0.0) {
          if (!real_sys || real_sys->shift() != alpha) {
            real_sys.emplace(problem.A, problem.E, alpha, opt.dense_threshold);
          }
          upd = tangential ? run_tangential(*real_sys) : block_step(problem.E, Rh, *real_sys, W);
        } else {
          if (!complex_sys || complex_sys->shift() != alpha) {
            complex_sys.emplace(problem.A, problem.E, alpha, opt.dense_threshold);
          }
          upd = tangential ? run_tangential(*complex_sys)
                           : block_pair_step(problem.E, Rh, *complex_sys, W);
        }
      } else {
        if (!complex_sys || complex_sys->shift() != alpha) {
          complex_sys.emplace(problem.A, problem.E, alpha, opt.dense_threshold);
        }
        upd = tangential ? run_tangential(*complex_sys) : block_step(problem.E, Rh, *complex_sys, W);
      }

      out.factors.append(upd.new_cols, upd.new_block);
      space.push(upd.new_cols);
      W = std::move(upd.W_next);
      solves += upd.solves;
      res_rel = residual_norm<Scalar>(W, Rh, opt.norm) / norm0;
    } catch (const SingularShiftError& e) {
      finish(RunStatus::SingularShift, e.what());
      return out;
    } catch (const IsotropicDirectionError& e) {
      finish(RunStatus::IsotropicDirection, e.what());
      return out;
    }

    ++iter;
    ++step_counter;
    TraceRow row;
    row.iteration = iter;
    row.columns = out.factors.cols();
    row.shift = alpha;
    row.direction_index = dir_index;
    row.normalized_residual = res_rel;
    row.solves = solves;
    row.seconds = elapsed();
    out.trace.rows.push_back(row);
    if (opt.on_step) opt.on_step(row, out.factors, W);
  }

  finish(res_rel <= opt.tol ? RunStatus::Converged : RunStatus::MaxColumnsReached, "");
  return out;
}

}  // namespace detail

template <class Scalar>
RunResult<Scalar> run_block_adi(const LyapunovProblem<Scalar>& problem,
                                ShiftSource<Scalar>& shift_source,
                                const RunOptions<Scalar>& opt = {}) {
  return detail::run_adi_loop<Scalar>(problem, shift_source, nullptr, opt);
}

template <class Scalar>
RunResult<Scalar> run_tangential_adi(const LyapunovProblem<Scalar>& problem,
                                     ShiftSource<Scalar>& shift_source,
                                     DirectionSource<Scalar>& direction_source,
                                     const RunOptions<Scalar>& opt = {}) {
  return detail::run_adi_loop<Scalar>(problem, shift_source, &direction_source, opt);
}

}  // namespace tadi
