#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "tadi/dense_kernels.hpp"
#include "tadi/operators.hpp"
#include "tadi/rng.hpp"
#include "tadi/types.hpp"

namespace tadi {

// A X E^H + E X A^H + B R B^H = 0 with E invertible and the pencil
// lambda*E - A expected Hurwitz. R is Hermitian and may be indefinite.
template <class Scalar>
struct LyapunovProblem {
  CoefficientOperator<Scalar> A;
  CoefficientOperator<Scalar> E;
  DenseMatrix<Scalar> B;
  DenseMatrix<Scalar> R;
  std::string name;

  Index n() const { return A.size(); }
  Index m() const { return B.cols(); }

  LyapunovProblem<Complex> to_complex() const {
    if constexpr (is_complex_v<Scalar>) {
      return *this;
    } else {
      auto lift = [](const CoefficientOperator<double>& op) {
        if (op.is_sparse()) {
          return CoefficientOperator<Complex>(
              Eigen::SparseMatrix<Complex>(op.sparse_matrix().cast<Complex>()));
        }
        return CoefficientOperator<Complex>(Eigen::MatrixXcd(op.dense_matrix().cast<Complex>()));
      };
      return LyapunovProblem<Complex>{lift(A), lift(E), B.template cast<Complex>(),
                                      R.template cast<Complex>(), name};
    }
  }
};

using AnyProblem = std::variant<LyapunovProblem<double>, LyapunovProblem<Complex>>;

struct ValidationReport {
  Index n = 0;
  Index m = 0;
  double r_hermitian_deviation = 0.0;
  bool r_is_hermitian = false;
  double max_imag_entry = 0.0;  // content of complex-stored problems; 0 for real storage
  bool stability_checked = false;
  std::optional<double> max_real_part;  // over finite pencil eigenvalues
  std::optional<bool> hurwitz;

  bool ok() const { return r_is_hermitian && (!stability_checked || hurwitz.value_or(false)); }
};

template <class Scalar>
ValidationReport validate(const LyapunovProblem<Scalar>& p, bool check_stability = false);

// B R B^H rewritten over the invertible eigenpart of R: keeps eigenvalues with
// |s| > tol * max|s|, returns B*T_kept and diag(s_kept).
template <class Scalar>
struct TruncatedTerm {
  DenseMatrix<Scalar> B;
  DenseMatrix<Scalar> R;  // diagonal, invertible
  Index dropped = 0;
};

template <class Scalar>
TruncatedTerm<Scalar> rank_truncate(const DenseMatrix<Scalar>& B, const DenseMatrix<Scalar>& R,
                                    double tol = kRankTruncateTol);

struct SpectrumSpec {
  double real_min = -10.0;  // eigenvalue real parts drawn from [real_min, real_max], both < 0
  double real_max = -0.5;
  double imag_bound = 5.0;       // |Im| of complex eigenvalues
  double complex_fraction = 0.5;  // fraction of the spectrum in conjugate pairs
  std::uint64_t seed = 1;
};

// Random Hurwitz test problem with prescribed spectrum location and R inertia.
// Same spec and sizes give the same problem on every platform.
template <class Scalar>
LyapunovProblem<Scalar> synth_problem(Index n, Index m, const SpectrumSpec& spec, Index r_negative);

// Widens the constant term: B <- [B, extra_factor], R <- blkdiag(R, extra_center).
template <class Scalar>
LyapunovProblem<Scalar> augment_constant_term(const LyapunovProblem<Scalar>& base,
                                              const DenseMatrix<Scalar>& extra_factor,
                                              const DenseMatrix<Scalar>& extra_center);

struct ProblemPaths {
  std::string a;
  std::string e;  // empty: identity
  std::string b;
  std::string r;  // empty: identity
};

// Arithmetic is inferred from the files: any complex field makes the problem complex.
AnyProblem load_problem(const ProblemPaths& paths);

template <class Scalar>
void save_problem(const LyapunovProblem<Scalar>& p, const std::string& dir,
                  const std::string& prefix = "");

// ---- implementation ----

template <class Scalar>
ValidationReport validate(const LyapunovProblem<Scalar>& p, bool check_stability) {
  ValidationReport rep;
  rep.n = p.n();
  rep.m = p.m();
  if (p.E.size() != p.n()) throw InputError("validate: A and E sizes differ");
  if (p.B.rows() != p.n()) throw InputError("validate: B height differs from A");
  if (p.R.rows() != p.R.cols() || p.R.rows() != p.m()) {
    throw InputError("validate: R must be square with order matching B's width");
  }
  rep.r_hermitian_deviation = hermitian_deviation(p.R);
  rep.r_is_hermitian = rep.r_hermitian_deviation <= kHermitianRelTol;
  if constexpr (is_complex_v<Scalar>) {
    auto max_imag = [](const Eigen::MatrixXcd& M) {
      return M.size() ? M.imag().cwiseAbs().maxCoeff() : 0.0;
    };
    double mx = std::max(max_imag(p.B), max_imag(p.R));
    mx = std::max(mx, max_imag(p.A.to_dense()));
    mx = std::max(mx, max_imag(p.E.to_dense()));
    rep.max_imag_entry = mx;
  }
  if (check_stability && p.n() <= kStabilityCheckCap) {
    rep.stability_checked = true;
    const auto eigs = pencil_eigenvalues(DenseMatrix<Scalar>(p.A.to_dense()),
                                         DenseMatrix<Scalar>(p.E.to_dense()));
    double max_re = -std::numeric_limits<double>::infinity();
    bool any_finite = false;
    for (const auto& ge : eigs) {
      if (ge.infinite) continue;
      any_finite = true;
      max_re = std::max(max_re, ge.value.real());
    }
    if (any_finite) {
      rep.max_real_part = max_re;
      rep.hurwitz = max_re < 0.0;
    } else {
      rep.hurwitz = false;
    }
  }
  return rep;
}

template <class Scalar>
TruncatedTerm<Scalar> rank_truncate(const DenseMatrix<Scalar>& B, const DenseMatrix<Scalar>& R,
                                    double tol) {
  if (B.cols() != R.rows()) throw InputError("rank_truncate: B width differs from R order");
  const HermitianEigen<Scalar> eig = hermitian_eig(R);
  const Index m = R.rows();
  const double smax = m > 0 ? std::abs(eig.values[0]) : 0.0;
  if (smax == 0.0) throw InputError("rank_truncate: constant term is zero");
  Index keep = 0;
  while (keep < m && std::abs(eig.values[keep]) > tol * smax) ++keep;
  TruncatedTerm<Scalar> out;
  out.dropped = m - keep;
  out.B = B * eig.vectors.leftCols(keep);
  out.R = DenseMatrix<Scalar>::Zero(keep, keep);
  for (Index i = 0; i < keep; ++i) out.R(i, i) = Scalar(eig.values[i]);
  return out;
}

template <class Scalar>
LyapunovProblem<Scalar> synth_problem(Index n, Index m, const SpectrumSpec& spec, Index r_negative) {
  if (n <= 0 || m <= 0 || m > n) throw InputError("synth_problem: need 0 < m <= n");
  if (r_negative < 0 || r_negative > m) throw InputError("synth_problem: r_negative out of range");
  if (!(spec.real_min <= spec.real_max) || !(spec.real_max < 0.0)) {
    throw InputError("synth_problem: eigenvalue interval must be negative and nonempty");
  }
  if (spec.imag_bound < 0.0 || spec.complex_fraction < 0.0 || spec.complex_fraction > 1.0) {
    throw InputError("synth_problem: malformed spectrum spec");
  }
  Rng rng(spec.seed);
  // |Im| is capped at |Re| on top of imag_bound, keeping the spectrum inside a
  // quarter-plane sector; eigenvalues hugging the imaginary axis make the
  // equation arbitrarily hard for any shift choice
  const auto draw_imag = [&rng, &spec](double re) {
    return rng.uniform(0.0, std::min(spec.imag_bound, std::abs(re)));
  };
  DenseMatrix<Scalar> lambda = DenseMatrix<Scalar>::Zero(n, n);
  if constexpr (is_complex_v<Scalar>) {
    for (Index i = 0; i < n; ++i) {
      const double re = rng.uniform(spec.real_min, spec.real_max);
      const double pick = rng.uniform();
      double im = pick < spec.complex_fraction ? draw_imag(re) : 0.0;
      if (rng.uniform() < 0.5) im = -im;
      lambda(i, i) = Complex(re, im);
    }
  } else {
    Index pairs = static_cast<Index>(spec.complex_fraction * static_cast<double>(n) / 2.0);
    Index i = 0;
    for (Index p = 0; p < pairs; ++p, i += 2) {
      const double a = rng.uniform(spec.real_min, spec.real_max);
      const double b = draw_imag(a);
      lambda(i, i) = a;
      lambda(i, i + 1) = b;
      lambda(i + 1, i) = -b;
      lambda(i + 1, i + 1) = a;
    }
    for (; i < n; ++i) lambda(i, i) = rng.uniform(spec.real_min, spec.real_max);
  }

  // mild non-orthogonal similarity keeps the conditioning tame
  DenseMatrix<Scalar> G = random_normal_matrix<Scalar>(rng, n, n);
  DenseMatrix<Scalar> Q =
      DenseMatrix<Scalar>::Identity(n, n) + (0.1 / std::sqrt(static_cast<double>(n))) * G;
  Eigen::PartialPivLU<DenseMatrix<Scalar>> luq(Q);
  DenseMatrix<Scalar> A0t = luq.transpose().solve(DenseMatrix<Scalar>((Q * lambda).transpose()));
  DenseMatrix<Scalar> A0 = A0t.transpose();

  DenseMatrix<Scalar> S = random_normal_matrix<Scalar>(rng, n, n) / std::sqrt(static_cast<double>(n));
  DenseMatrix<Scalar> Ed = DenseMatrix<Scalar>(S * S.adjoint());
  const double enorm = Ed.template selfadjointView<Eigen::Lower>().operatorNorm();
  Ed = DenseMatrix<Scalar>::Identity(n, n) + Ed * (0.5 / std::max(enorm, 1e-300));
  Ed = (Ed + DenseMatrix<Scalar>(Ed.adjoint())) * Scalar(0.5);

  DenseMatrix<Scalar> Ad = Ed * A0;

  DenseMatrix<Scalar> B = random_normal_matrix<Scalar>(rng, n, m);

  DenseMatrix<Scalar> Tm = random_normal_matrix<Scalar>(rng, m, m);
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qrt(Tm);
  DenseMatrix<Scalar> T = qrt.householderQ() * DenseMatrix<Scalar>::Identity(m, m);
  DenseVector<Scalar> svals(m);
  for (Index i = 0; i < m; ++i) {
    const double mag = rng.uniform(0.5, 2.0);
    svals[i] = Scalar(i < r_negative ? -mag : mag);
  }
  DenseMatrix<Scalar> R = T * svals.asDiagonal() * T.adjoint();
  R = (R + DenseMatrix<Scalar>(R.adjoint())) * Scalar(0.5);
  if constexpr (is_complex_v<Scalar>) {
    for (Index i = 0; i < m; ++i) R(i, i) = Complex(R(i, i).real(), 0.0);
  }

  return LyapunovProblem<Scalar>{CoefficientOperator<Scalar>(std::move(Ad)),
                                 CoefficientOperator<Scalar>(std::move(Ed)), std::move(B),
                                 std::move(R), "synthetic"};
}

template <class Scalar>
LyapunovProblem<Scalar> augment_constant_term(const LyapunovProblem<Scalar>& base,
                                              const DenseMatrix<Scalar>& extra_factor,
                                              const DenseMatrix<Scalar>& extra_center) {
  if (extra_factor.rows() != base.n()) {
    throw InputError("augment_constant_term: factor height differs from the problem order");
  }
  if (extra_center.rows() != extra_center.cols() || extra_center.rows() != extra_factor.cols()) {
    throw InputError("augment_constant_term: center block must match the factor width");
  }
  const Index m0 = base.m();
  const Index r = extra_factor.cols();
  LyapunovProblem<Scalar> out = base;
  out.B.conservativeResize(Eigen::NoChange, m0 + r);
  out.B.rightCols(r) = extra_factor;
  DenseMatrix<Scalar> R = DenseMatrix<Scalar>::Zero(m0 + r, m0 + r);
  R.topLeftCorner(m0, m0) = base.R;
  R.bottomRightCorner(r, r) = extra_center;
  out.R = std::move(R);
  return out;
}

}  // namespace tadi
