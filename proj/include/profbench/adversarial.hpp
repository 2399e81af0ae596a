#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "profbench/error.hpp"
#include "profbench/nested.hpp"
#include "profbench/timing_matrix.hpp"

namespace profbench {

// Partitioned problem set P_1..P_n where solver i wins exactly the problems
// of P_i, arranged so that removing solver 1 reorders the classic ranking of
// the others.
struct AdversarialSpec {
  Index nSolvers = 3;
  std::vector<Index> partitionSizes;
  double timeBase = 1.0;

  Index num_problems() const {
    return std::accumulate(partitionSizes.begin(), partitionSizes.end(), Index(0));
  }

  friend bool operator==(const AdversarialSpec&, const AdversarialSpec&) = default;
};

// Throws SpecInvariantViolated naming the first inequality that fails.
//
// n = 3: 2|P_1| > n_p, 4|P_2| > n_p, |P_1| >= 2|P_2|.
// n > 3: 2^n |P_i| > n_p for every i.
inline void validate(const AdversarialSpec& spec) {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::SpecInvariantViolated, what);
  };
  const Index n = spec.nSolvers;
  if (n < 3) fail("need at least 3 solvers, got " + std::to_string(n));
  if (n > 62) fail("at most 62 solvers are supported");
  if (static_cast<Index>(spec.partitionSizes.size()) != n) {
    fail("expected " + std::to_string(n) + " partition sizes, got " +
         std::to_string(spec.partitionSizes.size()));
  }
  if (!std::isfinite(spec.timeBase) || !(spec.timeBase > 0)) fail("timeBase must be finite and > 0");
  for (std::size_t i = 0; i < spec.partitionSizes.size(); ++i) {
    if (spec.partitionSizes[i] < 1) fail("|P_" + std::to_string(i + 1) + "| >= 1");
  }
  const Index n_p = spec.num_problems();
  const auto& sz = spec.partitionSizes;
  const std::string np = std::to_string(n_p);
  if (n == 3) {
    if (!(2 * sz[0] > n_p)) fail("|P_1| > n_p/2 (" + std::to_string(sz[0]) + " <= " + np + "/2)");
    if (!(4 * sz[1] > n_p)) fail("|P_2| > n_p/4 (" + std::to_string(sz[1]) + " <= " + np + "/4)");
    if (!(sz[0] >= 2 * sz[1])) {
      fail("|P_1| >= 2|P_2| (" + std::to_string(sz[0]) + " < 2*" + std::to_string(sz[1]) + ")");
    }
    return;
  }
  const Index scale = Index(1) << n;
  for (std::size_t i = 0; i < sz.size(); ++i) {
    if (!(scale * sz[i] > n_p)) {
      fail("|P_" + std::to_string(i + 1) + "| > n_p/2^" + std::to_string(n) + " (" +
           std::to_string(sz[i]) + " <= " + np + "/" + std::to_string(scale) + ")");
    }
  }
}

inline bool is_valid(const AdversarialSpec& spec) {
  try {
    validate(spec);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Row pattern for a problem in P_i (0-based i): the owner gets 1, a runner-up
// gets 2, every other solver gets 3. The runner-up is solver i+2 while it
// exists, otherwise solver 0.
inline Index runner_up(Index partition, Index n) { return partition + 2 < n ? partition + 2 : 0; }

template <typename Scalar = double>
TimingMatrix<Scalar> generate(const AdversarialSpec& spec) {
  validate(spec);
  const Index n = spec.nSolvers;
  const Index n_p = spec.num_problems();
  std::vector<std::string> problems;
  std::vector<std::string> solvers;
  for (Index s = 0; s < n; ++s) solvers.push_back("s" + std::to_string(s + 1));

  const Scalar base = static_cast<Scalar>(spec.timeBase);
  Matrix<Scalar> times = Matrix<Scalar>::Constant(n_p, n, Scalar(3) * base);
  Index p = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < spec.partitionSizes[std::size_t(i)]; ++j, ++p) {
      problems.push_back("p" + std::to_string(p + 1));
      times(p, i) = Scalar(1) * base;
      times(p, runner_up(i, n)) = Scalar(2) * base;
    }
  }
  return TimingMatrix<Scalar>(std::move(problems), std::move(solvers), std::move(times),
                              Mask::Constant(n_p, n, false));
}

// Smallest n_p admitting a valid spec; among those, the lexicographically
// first size vector.
inline AdversarialSpec minimal_spec(Index n) {
  if (n < 3) throw Error(ErrorKind::SpecInvariantViolated, "need at least 3 solvers");
  for (Index n_p = n;; ++n_p) {
    // Enumerate compositions of n_p into n positive parts in lexicographic order.
    std::vector<Index> sizes(std::size_t(n), 1);
    sizes.back() = n_p - (n - 1);
    while (true) {
      AdversarialSpec candidate{n, sizes, 1.0};
      if (is_valid(candidate)) return candidate;
      // Successor: grow the rightmost part whose tail (parts after it) holds
      // more than its minimum, then reset the tail to (1, ..., 1, rest).
      Index tail = 0;
      bool advanced = false;
      for (Index pos = n - 2; pos >= 0; --pos) {
        tail += sizes[std::size_t(pos + 1)];
        const Index slots = n - 1 - pos;
        if (tail > slots) {
          ++sizes[std::size_t(pos)];
          --tail;
          for (Index q = pos + 1; q < n - 1; ++q) sizes[std::size_t(q)] = 1;
          sizes.back() = tail - (slots - 1);
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
}

// Default adversarial family. For three solvers this is the reference
// instance with partition sizes (8, 4, 1); for n > 3 it is minimal_spec(n).
inline AdversarialSpec default_spec(Index n) {
  if (n == 3) return AdversarialSpec{3, {8, 4, 1}, 1.0};
  return minimal_spec(n);
}

struct FlipReport {
  std::vector<std::string> solvers;
  std::vector<Index> classicFull;
  Index classicBest = 0;
  std::vector<Index> classicReduced;
  bool flipped = false;
  std::vector<Index> nestedRanking;
  std::vector<Index> nestedReduced;
  bool nestedStable = false;
};

namespace detail {

inline std::vector<Index> drop(std::vector<Index> order, Index s) {
  order.erase(std::remove(order.begin(), order.end(), s), order.end());
  return order;
}

// Maps indices of a system with column `removed` deleted back to the original.
inline std::vector<Index> lift(const std::vector<Index>& order, Index removed) {
  std::vector<Index> out;
  out.reserve(order.size());
  for (Index s : order) out.push_back(s >= removed ? s + 1 : s);
  return out;
}

}  // namespace detail

// Compares the classic ranking with and without its best solver, and checks
// whether the nested ranking is unaffected by the same removal.
template <typename Scalar>
FlipReport check_flip(const TimingMatrix<Scalar>& m, const ProfileConfig<Scalar>& cfg = {}) {
  if (m.num_solvers() < 3) throw Error(ErrorKind::InvalidConfig, "flip check needs at least 3 solvers");
  FlipReport report;
  report.solvers = m.solvers();
  report.classicFull = classic_ranking(m, cfg);
  report.classicBest = report.classicFull.front();

  const auto reduced = m.without_solver(report.classicBest);
  report.classicReduced = detail::lift(classic_ranking(reduced, cfg), report.classicBest);
  report.flipped = report.classicReduced != detail::drop(report.classicFull, report.classicBest);

  report.nestedRanking = nested_profiles(m, cfg).ranking;
  ProfileConfig<Scalar> reduced_cfg = cfg;
  if (reduced_cfg.waves) reduced_cfg.waves = std::min(*reduced_cfg.waves, reduced.num_solvers() - 1);
  report.nestedReduced = detail::lift(nested_profiles(reduced, reduced_cfg).ranking, report.classicBest);
  report.nestedStable = detail::drop(report.nestedRanking, report.classicBest) == report.nestedReduced;
  return report;
}

}  // namespace profbench
