#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "profbench/error.hpp"
#include "profbench/timing_matrix.hpp"

namespace profbench {

using Count = std::int64_t;
using CountVector = Eigen::Matrix<Count, Eigen::Dynamic, 1>;

// Right-continuous step function rho(tau) = count(tau) / denominator.
//
// Values are kept as integer counts over a common denominator so that a
// profile over n_p problems is an exact multiple of 1/n_p and a mean of k
// profiles is an exact multiple of 1/(k n_p). The floating value is formed by
// a single division on demand.
template <typename Scalar>
class ProfileCurve {
 public:
  ProfileCurve() = default;

  ProfileCurve(Vector<Scalar> taus, CountVector counts, Count denominator)
      : taus_(std::move(taus)), counts_(std::move(counts)), denominator_(denominator) {
    if (denominator_ <= 0) throw Error(ErrorKind::InvalidConfig, "curve denominator must be positive");
    if (taus_.size() != counts_.size()) {
      throw Error(ErrorKind::ShapeError, "curve breakpoints and counts differ in length");
    }
    for (Index i = 0; i < taus_.size(); ++i) {
      if (!std::isfinite(taus_[i])) throw Error(ErrorKind::InvalidConfig, "curve breakpoint is not finite");
      if (counts_[i] < 0 || counts_[i] > denominator_) {
        throw Error(ErrorKind::InvalidConfig, "curve value outside [0, 1]");
      }
      if (i > 0 && !(taus_[i - 1] < taus_[i])) {
        throw Error(ErrorKind::InvalidConfig, "curve breakpoints not strictly increasing");
      }
      if (i > 0 && counts_[i - 1] > counts_[i]) {
        throw Error(ErrorKind::InvalidConfig, "curve values decreasing");
      }
    }
  }

  // Empirical CDF of one solver's ratios over n_p = ratios.size() problems.
  template <typename Derived>
  static ProfileCurve from_ratios(const Eigen::DenseBase<Derived>& ratios) {
    std::vector<Scalar> sorted(ratios.derived().begin(), ratios.derived().end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Scalar> taus;
    std::vector<Count> counts;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!taus.empty() && taus.back() == sorted[i]) {
        ++counts.back();
      } else {
        taus.push_back(sorted[i]);
        counts.push_back((counts.empty() ? 0 : counts.back()) + 1);
      }
    }
    return ProfileCurve(Eigen::Map<const Vector<Scalar>>(taus.data(), Index(taus.size())),
                        Eigen::Map<const CountVector>(counts.data(), Index(counts.size())),
                        static_cast<Count>(sorted.size()));
  }

  Index size() const { return taus_.size(); }
  bool empty() const { return taus_.size() == 0; }
  const Vector<Scalar>& taus() const { return taus_; }
  const CountVector& counts() const { return counts_; }
  Count denominator() const { return denominator_; }

  Scalar tau(Index i) const { return taus_[i]; }
  Count count(Index i) const { return counts_[i]; }
  Scalar value(Index i) const { return Scalar(counts_[i]) / Scalar(denominator_); }

  // Smallest breakpoint; +inf for an empty curve.
  Scalar domain_start() const {
    return empty() ? std::numeric_limits<Scalar>::infinity() : taus_[0];
  }

  Count count_at(Scalar tau) const {
    const auto it = std::upper_bound(taus_.begin(), taus_.end(), tau);
    if (it == taus_.begin()) return 0;
    return counts_[std::distance(taus_.begin(), it) - 1];
  }

  Scalar operator()(Scalar tau) const { return Scalar(count_at(tau)) / Scalar(denominator_); }

  friend bool operator==(const ProfileCurve& a, const ProfileCurve& b) {
    return a.denominator_ == b.denominator_ && a.taus_.size() == b.taus_.size() &&
           a.taus_ == b.taus_ && a.counts_ == b.counts_;
  }

 private:
  Vector<Scalar> taus_;
  CountVector counts_;
  Count denominator_ = 1;
};

using ProfileCurved = ProfileCurve<double>;

template <typename Scalar>
Scalar evaluate(const ProfileCurve<Scalar>& c, Scalar tau) {
  return c(tau);
}

// Sorted union of the breakpoints of several curves.
template <typename Scalar>
std::vector<Scalar> merged_breakpoints(std::span<const ProfileCurve<Scalar>> curves) {
  std::vector<Scalar> all;
  for (const auto& c : curves) all.insert(all.end(), c.taus().begin(), c.taus().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

// Pointwise arithmetic mean of step functions, stored on the union of their
// breakpoints. Counts are rescaled to the lcm of the input denominators, so
// the mean is exact as a rational number.
template <typename Scalar>
ProfileCurve<Scalar> mean_curve(std::span<const ProfileCurve<Scalar>> curves) {
  if (curves.empty()) throw Error(ErrorKind::EmptyCurves, "mean of zero curves");
  Count common = 1;
  for (const auto& c : curves) common = std::lcm(common, c.denominator());
  const std::vector<Scalar> taus = merged_breakpoints(curves);
  CountVector counts(Index(taus.size()));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    Count sum = 0;
    for (const auto& c : curves) sum += c.count_at(taus[i]) * (common / c.denominator());
    counts[Index(i)] = sum;
  }
  return ProfileCurve<Scalar>(Eigen::Map<const Vector<Scalar>>(taus.data(), Index(taus.size())),
                              std::move(counts), common * Count(curves.size()));
}

// Exact integral of |a - b| over [lo, hi] by summing over the merged
// breakpoint partition; both functions are constant on each piece.
template <typename Scalar>
Scalar l1_distance(const ProfileCurve<Scalar>& a, const ProfileCurve<Scalar>& b, std::type_identity_t<Scalar> lo,
                   std::type_identity_t<Scalar> hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorKind::InvalidInterval, "l1_distance needs finite lo < hi");
  }
  std::vector<Scalar> cuts{lo, hi};
  for (const auto* c : {&a, &b}) {
    for (Scalar t : c->taus()) {
      if (t > lo && t < hi) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const Scalar scale = Scalar(a.denominator()) * Scalar(b.denominator());
  Scalar total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Both counts are constant on [cuts[i], cuts[i+1]).
    const Count diff = a.count_at(cuts[i]) * b.denominator() - b.count_at(cuts[i]) * a.denominator();
    if (diff != 0) total += Scalar(std::llabs(diff)) * (cuts[i + 1] - cuts[i]);
  }
  return total / scale;
}

}  // namespace profbench
