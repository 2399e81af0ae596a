#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "profbench/error.hpp"
#include "profbench/profile_curve.hpp"
#include "profbench/timing_matrix.hpp"

namespace profbench {

// Failure ratio r_M. An empty optional selects the automatic rule:
// twice the largest finite ratio, or 2 when every cell fails.
template <typename Scalar>
using FailureRatio = std::optional<Scalar>;

inline constexpr std::nullopt_t kAutoRM = std::nullopt;

// One wave of performance ratios.
//
// Columns flagged in `rated` carry a ratio row; that is the active set plus
// any solvers eliminated in earlier waves. Unrated columns hold NaN.
template <typename Scalar>
struct RatioMatrix {
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  SolverMask active;
  SolverMask rated;
  Matrix<Scalar> ratios;
  Mask failed;
  Scalar rM = Scalar(2);

  Index num_problems() const { return ratios.rows(); }
  Index num_solvers() const { return ratios.cols(); }

  Index solver_index(std::string_view name) const { return detail::find_label(solvers, name); }

  bool is_active(Index s) const { return s >= 0 && s < active.size() && active[s]; }
  bool is_rated(Index s) const { return s >= 0 && s < rated.size() && rated[s]; }

  // Rated solvers that are no longer active.
  SolverMask eliminated() const { return rated && !active; }

  // Largest ratio strictly below rM over rated columns; 0 if none.
  Scalar max_finite_ratio() const {
    Scalar best = 0;
    for (Index s = 0; s < num_solvers(); ++s) {
      if (!rated[s]) continue;
      for (Index p = 0; p < num_problems(); ++p) {
        if (!failed(p, s)) best = std::max(best, ratios(p, s));
      }
    }
    return best;
  }
};

using RatioMatrixd = RatioMatrix<double>;

namespace detail {

template <typename Scalar>
void require_rated(const RatioMatrix<Scalar>& r, Index s) {
  if (!r.is_rated(s)) {
    throw Error(ErrorKind::UnknownSolver, "solver index " + std::to_string(s) + " has no ratio row");
  }
}

// Smallest successful time among `active` on problem p; nullopt if all fail.
template <typename Scalar>
std::optional<Scalar> best_time(const TimingMatrix<Scalar>& m, const SolverMask& active, Index p) {
  std::optional<Scalar> best;
  for (Index s = 0; s < m.num_solvers(); ++s) {
    if (!active[s] || m.failed(p, s)) continue;
    if (!best || m.time(p, s) < *best) best = m.time(p, s);
  }
  return best;
}

template <typename Scalar>
Scalar resolve_rm(FailureRatio<Scalar> requested, Scalar max_finite) {
  if (!requested) return max_finite > 0 ? Scalar(2) * max_finite : Scalar(2);
  const Scalar rm = *requested;
  if (!std::isfinite(rm) || !(rm > max_finite) || !(rm > 0)) {
    throw Error(ErrorKind::InvalidRM, "r_M = " + std::to_string(rm) +
                                          " must exceed the largest finite ratio " +
                                          std::to_string(max_finite));
  }
  return rm;
}

}  // namespace detail

inline SolverMask all_solvers(Index n) { return SolverMask::Constant(n, true); }

inline SolverMask solver_subset(Index n, std::span<const Index> members) {
  SolverMask mask = SolverMask::Constant(n, false);
  for (Index s : members) {
    if (s < 0 || s >= n) {
      throw Error(ErrorKind::UnknownSolver, "solver index " + std::to_string(s) + " out of range");
    }
    mask[s] = true;
  }
  return mask;
}

// r_{p,s} = t_{p,s} / min over active successful solvers on p; failures get r_M.
template <typename Scalar>
RatioMatrix<Scalar> compute_ratios(const TimingMatrix<Scalar>& m, const SolverMask& active,
                                   std::type_identity_t<FailureRatio<Scalar>> rM = kAutoRM) {
  if (active.size() != m.num_solvers()) {
    throw Error(ErrorKind::UnknownSolver, "active set does not match the solver count");
  }
  if (!active.any()) throw Error(ErrorKind::EmptyActiveSet, "no active solvers");

  const Index n_p = m.num_problems();
  const Index n_s = m.num_solvers();
  RatioMatrix<Scalar> r{m.problems(),
                        m.solvers(),
                        active,
                        active,
                        Matrix<Scalar>::Constant(n_p, n_s, std::numeric_limits<Scalar>::quiet_NaN()),
                        m.failures(),
                        Scalar(0)};

  Scalar max_finite = 0;
  for (Index p = 0; p < n_p; ++p) {
    const auto d = detail::best_time(m, active, p);
    if (!d) continue;
    for (Index s = 0; s < n_s; ++s) {
      if (!active[s] || m.failed(p, s)) continue;
      r.ratios(p, s) = m.time(p, s) / *d;
      max_finite = std::max(max_finite, r.ratios(p, s));
    }
  }
  r.rM = detail::resolve_rm(rM, max_finite);
  for (Index s = 0; s < n_s; ++s) {
    if (!active[s]) continue;
    for (Index p = 0; p < n_p; ++p) {
      if (m.failed(p, s)) r.ratios(p, s) = r.rM;
    }
  }
  return r;
}

template <typename Scalar>
RatioMatrix<Scalar> compute_ratios(const TimingMatrix<Scalar>& m, std::type_identity_t<FailureRatio<Scalar>> rM = kAutoRM) {
  return compute_ratios(m, all_solvers(m.num_solvers()), rM);
}

// rho_s(tau) = |{p : r_{p,s} <= tau}| / n_p as an exact step function.
template <typename Scalar>
ProfileCurve<Scalar> compute_profile(const RatioMatrix<Scalar>& r, Index s) {
  detail::require_rated(r, s);
  return ProfileCurve<Scalar>::from_ratios(r.ratios.col(s));
}

template <typename Scalar>
ProfileCurve<Scalar> compute_profile(const RatioMatrix<Scalar>& r, std::string_view solver) {
  return compute_profile(r, r.solver_index(solver));
}

// Number of problems with ratio exactly 1.
template <typename Scalar>
Index wins(const RatioMatrix<Scalar>& r, Index s) {
  detail::require_rated(r, s);
  return (r.ratios.col(s).array() == Scalar(1)).count();
}

template <typename Scalar>
Index wins(const RatioMatrix<Scalar>& r, std::string_view solver) {
  return wins(r, r.solver_index(solver));
}

// Fraction of problems the solver solved at all (the tau -> infinity limit
// of its profile below r_M).
template <typename Scalar>
Scalar success_fraction(const RatioMatrix<Scalar>& r, Index s) {
  detail::require_rated(r, s);
  const Index solved = r.num_problems() - r.failed.col(s).count();
  return Scalar(solved) / Scalar(r.num_problems());
}

template <typename Scalar>
Scalar success_fraction(const RatioMatrix<Scalar>& r, std::string_view solver) {
  return success_fraction(r, r.solver_index(solver));
}

}  // namespace profbench
