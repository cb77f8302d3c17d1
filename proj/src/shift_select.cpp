#include <algorithm>
#include <cmath>
#include <limits>

#include "tadi/shifts.hpp"

namespace tadi {

namespace {

// Worst surviving amplification over all candidates if `subset` were the shifts.
double minimax_objective(const std::vector<Complex>& candidates, const std::vector<Complex>& subset) {
  double worst = 0.0;
  for (const Complex& lam : candidates) {
    double prod = 1.0;
    for (const Complex& a : subset) {
      const double denom = std::abs(lam + a);
      if (denom == 0.0) return std::numeric_limits<double>::infinity();
      prod *= std::abs(lam - std::conj(a)) / denom;
    }
    worst = std::max(worst, prod);
  }
  return worst;
}

// Preference order for equal objectives: larger |Re|, then larger |Im|, then
// earlier input position.
struct SubsetKey {
  std::vector<std::size_t> idx;  // sorted by the preference of their shifts
};

bool shift_pref_less(const Complex& a, const Complex& b) {
  // "less" = preferred
  if (std::abs(a.real()) != std::abs(b.real())) return std::abs(a.real()) > std::abs(b.real());
  return std::abs(a.imag()) > std::abs(b.imag());
}

bool subset_preferred(const std::vector<Complex>& candidates, std::vector<std::size_t> a,
                      std::vector<std::size_t> b) {
  auto pref = [&](std::size_t i, std::size_t j) {
    const Complex& x = candidates[i];
    const Complex& y = candidates[j];
    if (std::abs(x.real()) != std::abs(y.real())) return std::abs(x.real()) > std::abs(y.real());
    if (std::abs(x.imag()) != std::abs(y.imag())) return std::abs(x.imag()) > std::abs(y.imag());
    return i < j;
  };
  std::sort(a.begin(), a.end(), pref);
  std::sort(b.begin(), b.end(), pref);
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (pref(a[k], b[k])) return true;
    if (pref(b[k], a[k])) return false;
  }
  return a.size() < b.size();
}

std::vector<Complex> pick(const std::vector<Complex>& candidates,
                          const std::vector<std::size_t>& idx) {
  std::vector<Complex> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(candidates[i]);
  return out;
}

std::vector<std::size_t> exhaustive_best(const std::vector<Complex>& candidates, std::size_t ell) {
  const std::size_t p = candidates.size();
  std::vector<std::size_t> best;
  double best_obj = std::numeric_limits<double>::infinity();

  const auto consider = [&](const std::vector<std::size_t>& choice, double obj) {
    if (best.empty()) {
      best = choice;
      best_obj = obj;
      return;
    }
    const bool both_inf = std::isinf(obj) && std::isinf(best_obj);
    const double tol = std::isfinite(best_obj) ? 1e-12 * std::max(1.0, best_obj) : 0.0;
    if (!both_inf && obj < best_obj - tol) {
      best = choice;
      best_obj = obj;
      return;
    }
    const bool tie = both_inf || std::abs(obj - best_obj) <= tol;
    if (tie && subset_preferred(candidates, choice, best)) best = choice;
  };

  std::vector<std::size_t> choice(ell);
  // iterative combination enumeration
  for (std::size_t i = 0; i < ell; ++i) choice[i] = i;
  while (true) {
    consider(choice, minimax_objective(candidates, pick(candidates, choice)));
    // advance
    std::size_t i = ell;
    while (i > 0) {
      --i;
      if (choice[i] != i + p - ell) {
        ++choice[i];
        for (std::size_t j = i + 1; j < ell; ++j) choice[j] = choice[j - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
    if (ell == 0) return best;
  }
}

std::vector<std::size_t> greedy_best(const std::vector<Complex>& candidates, std::size_t ell) {
  std::vector<std::size_t> chosen;
  std::vector<bool> used(candidates.size(), false);
  for (std::size_t round = 0; round < ell; ++round) {
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t best_i = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::size_t> trial = chosen;
      trial.push_back(i);
      const double obj = minimax_objective(candidates, pick(candidates, trial));
      bool take = false;
      if (best_i == candidates.size()) {
        take = true;
      } else {
        const bool both_inf = std::isinf(obj) && std::isinf(best_obj);
        const double tol = std::isfinite(best_obj) ? 1e-12 * std::max(1.0, best_obj) : 0.0;
        if (!both_inf && obj < best_obj - tol) {
          take = true;
        } else if (both_inf || std::abs(obj - best_obj) <= tol) {
          take = shift_pref_less(candidates[i], candidates[best_i]);
        }
      }
      if (take) {
        best_obj = obj;
        best_i = i;
      }
    }
    used[best_i] = true;
    chosen.push_back(best_i);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

std::vector<Complex> minimax_select(const std::vector<Complex>& candidates, int ell) {
  if (candidates.empty()) throw NoValidShiftsError("minimax_select: no candidates");
  if (ell <= 0) throw InputError("minimax_select: ell must be positive");
  if (static_cast<std::size_t>(ell) >= candidates.size()) {
    return candidates;
  }
  std::vector<std::size_t> idx;
  if (candidates.size() <= 12) {
    idx = exhaustive_best(candidates, static_cast<std::size_t>(ell));
  } else {
    idx = greedy_best(candidates, static_cast<std::size_t>(ell));
  }
  std::sort(idx.begin(), idx.end());  // keep candidate input order in the pool
  return pick(candidates, idx);
}

namespace detail {

ShiftPool select_pool_from_ritz(const std::vector<GeneralizedEigenvalue>& ritz, int ell,
                                bool real_mode) {
  std::vector<Complex> candidates;
  candidates.reserve(ritz.size());
  for (const auto& ge : ritz) {
    if (ge.infinite) continue;
    Complex v = ge.value;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;
    if (!(v.real() < 0.0)) continue;
    if (real_mode) {
      // near-defective pairs come out with noise-level imaginary parts; a pair
      // step with delta = Re/Im would blow up, so snap them to the axis
      if (std::abs(v.imag()) <= 1e-12 * std::abs(v)) v = Complex(v.real(), 0.0);
      if (v.imag() < 0.0) continue;  // keep one representative per pair
    }
    candidates.push_back(v);
  }
  if (candidates.empty()) {
    throw NoValidShiftsError("projection shifts: no stable Ritz values available");
  }
  const std::vector<Complex> selected = minimax_select(candidates, ell);
  ShiftPool pool;
  pool.real_mode = real_mode;
  for (const Complex& s : selected) {
    if (real_mode && s.imag() != 0.0) {
      pool.shifts.push_back(s);
      pool.shifts.push_back(std::conj(s));
    } else {
      pool.shifts.push_back(s);
    }
  }
  return pool;
}

}  // namespace detail

}  // namespace tadi
