#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace tadi {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
inline constexpr bool is_complex_v = std::is_same_v<Scalar, Complex>;

// Largest square dense matrix the small-dense kernels accept.
inline constexpr Index kSmallDenseCap = 4096;
// Shifted systems below this order are factored densely.
inline constexpr Index kDenseSolveThreshold = 600;
// Stability checks (dense pencil eigensolve) are skipped above this order.
inline constexpr Index kStabilityCheckCap = 1024;
// Order cap for the dense reference solver.
inline constexpr Index kOracleCap = 256;

inline constexpr double kDefaultDropTol = 1e-10;
inline constexpr double kHermitianRelTol = 1e-13;
inline constexpr double kRankTruncateTol = 1e-12;
inline constexpr double kIsotropyTol = 1e-12;

// Bad dimensions, bad flags, unreadable or inconsistent input files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: shift hits an eigenvalue, pencil singular, oracle unstable.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularShiftError : NumericalError {
  using NumericalError::NumericalError;
};

// t^H R^-1 t vanished; the tangential update is undefined for this direction.
struct IsotropicDirectionError : NumericalError {
  using NumericalError::NumericalError;
};

struct NoValidShiftsError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace tadi
