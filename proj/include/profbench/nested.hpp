#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "profbench/error.hpp"
#include "profbench/profile_curve.hpp"
#include "profbench/ratios.hpp"
#include "profbench/timing_matrix.hpp"

namespace profbench {

// How the best solver of a wave is chosen.
enum class SelectionRule {
  Wins,       // most problems with ratio exactly 1
  MeanRatio,  // smallest sum of ratios (failures contribute r_M)
};

struct TieBreak {
  enum class Kind { FirstIndex, SeededRandom };
  Kind kind = Kind::FirstIndex;
  std::uint64_t seed = 0;

  static TieBreak first_index() { return {}; }
  static TieBreak seeded(std::uint64_t seed) { return {Kind::SeededRandom, seed}; }

  friend bool operator==(const TieBreak&, const TieBreak&) = default;
};

template <typename Scalar>
struct ProfileConfig {
  FailureRatio<Scalar> rM = kAutoRM;
  SelectionRule rule = SelectionRule::Wins;
  TieBreak tieBreak = TieBreak::first_index();
  std::optional<Index> waves;  // empty means all: n_s - 1
  Scalar reportingTau = Scalar(1);
};

using ProfileConfigd = ProfileConfig<double>;

template <typename Scalar>
struct NestedResult {
  std::vector<RatioMatrix<Scalar>> waves;
  // waveProfiles[i][s]: profile of solver s in wave i.
  std::vector<std::vector<ProfileCurve<Scalar>>> waveProfiles;
  std::vector<ProfileCurve<Scalar>> overall;
  // Solvers removed as best, in removal order.
  std::vector<Index> eliminated;
  // Elimination order, then the rest by overall rho(reportingTau), descending.
  std::vector<Index> ranking;
  Index k = 0;
  ProfileConfig<Scalar> config;
  Scalar rM = Scalar(2);

  const std::vector<std::string>& solvers() const { return waves.front().solvers; }
  const std::vector<std::string>& problems() const { return waves.front().problems; }
};

using NestedResultd = NestedResult<double>;

inline std::vector<std::string> labels_of(const std::vector<std::string>& solvers,
                                          const std::vector<Index>& order) {
  std::vector<std::string> out;
  out.reserve(order.size());
  for (Index s : order) out.push_back(solvers[static_cast<std::size_t>(s)]);
  return out;
}

namespace detail {

template <typename Scalar>
bool less_by_value_at(const ProfileCurve<Scalar>& a, const ProfileCurve<Scalar>& b, Scalar tau) {
  // Exact rational comparison of a(tau) < b(tau).
  return a.count_at(tau) * b.denominator() < b.count_at(tau) * a.denominator();
}

// Stable order of `candidates` by curve value at tau, descending; ties keep
// ascending index order.
template <typename Scalar>
std::vector<Index> order_by_value(const std::vector<ProfileCurve<Scalar>>& curves,
                                  std::vector<Index> candidates, Scalar tau) {
  std::sort(candidates.begin(), candidates.end());
  std::stable_sort(candidates.begin(), candidates.end(), [&](Index a, Index b) {
    return less_by_value_at(curves[std::size_t(b)], curves[std::size_t(a)], tau);
  });
  return candidates;
}

template <typename Scalar>
Index resolve_waves(const ProfileConfig<Scalar>& cfg, Index n_s) {
  const Index k = cfg.waves.value_or(n_s - 1);
  if (k < 1) throw Error(ErrorKind::InvalidConfig, "wave count must be at least 1");
  if (k > n_s - 1) {
    throw Error(ErrorKind::TooManyWaves, "wave count " + std::to_string(k) + " exceeds n_s - 1 = " +
                                             std::to_string(n_s - 1));
  }
  return k;
}

template <typename Scalar>
void require_finite_tau(Scalar tau) {
  if (!std::isfinite(tau)) throw Error(ErrorKind::InvalidConfig, "reporting tau must be finite");
}

}  // namespace detail

template <typename Scalar>
Index select_best(const RatioMatrix<Scalar>& r, SelectionRule rule, const TieBreak& tieBreak,
                  std::mt19937_64& rng) {
  std::vector<Index> tied;
  Scalar best_score = 0;
  for (Index s = 0; s < r.num_solvers(); ++s) {
    if (!r.is_active(s)) continue;
    // Higher score is better for both rules.
    const Scalar score = rule == SelectionRule::Wins ? Scalar(wins(r, s)) : -r.ratios.col(s).sum();
    if (tied.empty() || score > best_score) {
      tied.assign(1, s);
      best_score = score;
    } else if (score == best_score) {
      tied.push_back(s);
    }
  }
  if (tied.empty()) throw Error(ErrorKind::EmptyActiveSet, "no active solvers to select from");
  if (tied.size() == 1 || tieBreak.kind == TieBreak::Kind::FirstIndex) return tied.front();
  std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
  return tied[pick(rng)];
}

template <typename Scalar>
Index select_best(const RatioMatrix<Scalar>& r, SelectionRule rule, const TieBreak& tieBreak) {
  std::mt19937_64 rng(tieBreak.seed);
  return select_best(r, rule, tieBreak, rng);
}

// Removes `eliminated` from the active set and recomputes every ratio row
// against the reduced per-problem minimum. Eliminated solvers keep any ratio
// that was exactly 1 in `prev`; on problems where every remaining solver
// fails they carry their previous ratio.
template <typename Scalar>
RatioMatrix<Scalar> next_wave(const RatioMatrix<Scalar>& prev, const TimingMatrix<Scalar>& m,
                              Index eliminated, Scalar rM) {
  if (!prev.is_active(eliminated)) {
    throw Error(ErrorKind::SolverNotActive,
                "solver index " + std::to_string(eliminated) + " is not active");
  }
  if (m.num_problems() != prev.num_problems() || m.num_solvers() != prev.num_solvers()) {
    throw Error(ErrorKind::ShapeError, "ratio matrix does not match the timing matrix");
  }
  RatioMatrix<Scalar> next = prev;
  next.active[eliminated] = false;
  if (!next.active.any()) throw Error(ErrorKind::EmptyActiveSet, "cannot eliminate the last active solver");
  next.rM = rM;

  for (Index p = 0; p < m.num_problems(); ++p) {
    const auto d = detail::best_time(m, next.active, p);
    for (Index s = 0; s < m.num_solvers(); ++s) {
      if (!next.rated[s]) continue;
      if (!next.active[s]) {
        if (prev.ratios(p, s) == Scalar(1)) {
          next.ratios(p, s) = Scalar(1);
          continue;
        }
        if (!d) {
          next.ratios(p, s) = prev.ratios(p, s);
          continue;
        }
      }
      next.ratios(p, s) = (m.failed(p, s) || !d) ? rM : m.time(p, s) / *d;
    }
  }
  return next;
}

template <typename Scalar>
std::vector<ProfileCurve<Scalar>> wave_profiles(const RatioMatrix<Scalar>& r) {
  std::vector<ProfileCurve<Scalar>> curves(static_cast<std::size_t>(r.num_solvers()));
  for (Index s = 0; s < r.num_solvers(); ++s) {
    if (r.is_rated(s)) curves[std::size_t(s)] = compute_profile(r, s);
  }
  return curves;
}

template <typename Scalar>
NestedResult<Scalar> nested_profiles(const TimingMatrix<Scalar>& m, const ProfileConfig<Scalar>& cfg = {}) {
  const Index n_s = m.num_solvers();
  if (n_s < 2) throw Error(ErrorKind::InvalidConfig, "nested profiles need at least two solvers");
  detail::require_finite_tau(cfg.reportingTau);

  NestedResult<Scalar> out;
  out.config = cfg;
  out.k = detail::resolve_waves(cfg, n_s);
  out.waves.push_back(compute_ratios(m, cfg.rM));
  out.rM = out.waves.front().rM;

  std::mt19937_64 rng(cfg.tieBreak.seed);
  for (Index i = 1; i < out.k; ++i) {
    const auto& prev = out.waves.back();
    const Index best = select_best(prev, cfg.rule, cfg.tieBreak, rng);
    out.eliminated.push_back(best);
    out.waves.push_back(next_wave(prev, m, best, out.rM));
  }

  for (const auto& wave : out.waves) out.waveProfiles.push_back(wave_profiles(wave));

  for (Index s = 0; s < n_s; ++s) {
    std::vector<ProfileCurve<Scalar>> per_wave;
    for (const auto& curves : out.waveProfiles) per_wave.push_back(curves[std::size_t(s)]);
    out.overall.push_back(mean_curve<Scalar>(per_wave));
  }

  out.ranking = out.eliminated;
  std::vector<Index> rest;
  for (Index s = 0; s < n_s; ++s) {
    if (std::find(out.eliminated.begin(), out.eliminated.end(), s) == out.eliminated.end()) {
      rest.push_back(s);
    }
  }
  for (Index s : detail::order_by_value(out.overall, rest, cfg.reportingTau)) out.ranking.push_back(s);
  return out;
}

// Classic single-wave ranking: all solvers by rho_s(reportingTau), descending.
template <typename Scalar>
std::vector<Index> classic_ranking(const TimingMatrix<Scalar>& m, const ProfileConfig<Scalar>& cfg = {}) {
  detail::require_finite_tau(cfg.reportingTau);
  const auto curves = wave_profiles(compute_ratios(m, cfg.rM));
  std::vector<Index> all(static_cast<std::size_t>(m.num_solvers()));
  std::iota(all.begin(), all.end(), Index(0));
  return detail::order_by_value(curves, all, cfg.reportingTau);
}

}  // namespace profbench
