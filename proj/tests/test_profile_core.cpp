#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "profbench/error.hpp"
#include "profbench/ratios.hpp"

namespace profbench {
namespace {

using testing::sample;

// Expected Table-1 ratios, frozen from tests/oracles/nested_oracle.py.
const std::vector<double> kRatioA{2, 1, 1, 1, 1};
const std::vector<double> kRatioB{1.5, 1.2, 4, 5, 2.5};
const std::vector<double> kRatioC{1, 2, 2, 20, 10};

std::vector<double> column(const RatioMatrixd& r, Index s) {
  return {r.ratios.col(s).begin(), r.ratios.col(s).end()};
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidConfig;
}

TEST(ComputeRatios, SampleAllSolvers) {
  const auto r = compute_ratios(sample());
  EXPECT_EQ(column(r, 0), kRatioA);
  EXPECT_EQ(column(r, 1), kRatioB);
  EXPECT_EQ(column(r, 2), kRatioC);
  EXPECT_EQ(r.rM, 40.0);  // 2 x max finite ratio 20
  EXPECT_TRUE(r.active.all());
}

TEST(ComputeRatios, SingleActiveSolverIsAllOnes) {
  const auto m = sample();
  const std::vector<Index> only_b{1};
  const auto r = compute_ratios(m, solver_subset(3, only_b));
  EXPECT_TRUE((r.ratios.col(1).array() == 1.0).all());
  EXPECT_FALSE(r.is_rated(0));
  EXPECT_TRUE(std::isnan(r.ratios(0, 0)));
}

TEST(ComputeRatios, AutoRmWithOnlyUnitRatios) {
  const auto m = TimingMatrixd::from_rows({"p1"}, {"S1", "S2"}, {{1.0, std::nullopt}});
  const auto r = compute_ratios(m);
  EXPECT_EQ(r.ratios(0, 0), 1.0);
  EXPECT_EQ(r.ratios(0, 1), 2.0);
  EXPECT_EQ(r.rM, 2.0);
}

TEST(ComputeRatios, AllFailMatrixUsesTwo) {
  const auto m = TimingMatrixd::from_rows({"p1", "p2"}, {"S1", "S2"},
                                          {{std::nullopt, std::nullopt}, {std::nullopt, std::nullopt}});
  const auto r = compute_ratios(m);
  EXPECT_EQ(r.rM, 2.0);
  EXPECT_TRUE((r.ratios.array() == 2.0).all());
}

TEST(ComputeRatios, AllFailProblemGivesRmToActiveSolvers) {
  const auto m = TimingMatrixd::from_rows({"p1", "p2"}, {"S1", "S2"}, {{1.0, 3.0}, {std::nullopt, std::nullopt}});
  const auto r = compute_ratios(m, 10.0);
  EXPECT_EQ(r.ratios(1, 0), 10.0);
  EXPECT_EQ(r.ratios(1, 1), 10.0);
  // The all-fail problem still counts in the denominator.
  EXPECT_EQ(compute_profile(r, Index(0))(5.0), 0.5);
}

TEST(ComputeRatios, Errors) {
  const auto m = sample();
  EXPECT_EQ(kind_of([&] { compute_ratios(m, SolverMask::Constant(3, false)); }), ErrorKind::EmptyActiveSet);
  EXPECT_EQ(kind_of([&] { compute_ratios(m, 20.0); }), ErrorKind::InvalidRM);
  EXPECT_EQ(kind_of([&] { compute_ratios(m, 5.0); }), ErrorKind::InvalidRM);
  EXPECT_NO_THROW(compute_ratios(m, 20.5));
}

TEST(ComputeRatios, TiesAllWin) {
  const auto m = TimingMatrixd::from_rows({"p1"}, {"A", "B", "C"}, {{2.0, 2.0, 3.0}});
  const auto r = compute_ratios(m);
  EXPECT_EQ(wins(r, Index(0)), 1);
  EXPECT_EQ(wins(r, Index(1)), 1);
  EXPECT_EQ(wins(r, Index(2)), 0);
}

TEST(ComputeProfile, SampleValues) {
  const auto r = compute_ratios(sample());
  const auto a = compute_profile(r, "A");
  const auto b = compute_profile(r, "B");
  const auto c = compute_profile(r, "C");
  EXPECT_EQ(a(1.0), 0.8);
  EXPECT_EQ(a(2.0), 1.0);
  EXPECT_EQ(b(1.0), 0.0);
  EXPECT_EQ(c(1.0), 0.2);
  EXPECT_EQ(evaluate(c, 1.0), 0.2);
  EXPECT_EQ(a.count_at(1.0), 4);
  EXPECT_EQ(a.denominator(), 5);
}

TEST(ComputeProfile, AllFailuresJumpAtRm) {
  const auto m = TimingMatrixd::from_rows({"p1", "p2"}, {"A", "B"}, {{1.0, std::nullopt}, {1.0, std::nullopt}});
  const auto c = compute_profile(compute_ratios(m, 10.0), Index(1));
  EXPECT_EQ(c(9.999), 0.0);
  EXPECT_EQ(c(10.0), 1.0);
  EXPECT_EQ(c.size(), 1);
}

TEST(ComputeProfile, UnknownSolver) {
  const auto r = compute_ratios(sample());
  EXPECT_EQ(kind_of([&] { compute_profile(r, "Z"); }), ErrorKind::UnknownSolver);
  EXPECT_EQ(kind_of([&] { compute_profile(r, Index(7)); }), ErrorKind::UnknownSolver);
  EXPECT_EQ(kind_of([&] { wins(r, "Z"); }), ErrorKind::UnknownSolver);
  EXPECT_EQ(kind_of([&] { success_fraction(r, "Z"); }), ErrorKind::UnknownSolver);
}

TEST(Evaluate, BelowAndAboveBreakpoints) {
  const auto c = compute_profile(compute_ratios(sample()), "C");
  EXPECT_EQ(c(0.5), 0.0);
  EXPECT_EQ(c(1e9), 1.0);
  EXPECT_EQ(c(20.0), 1.0);
  EXPECT_EQ(c(19.999), 0.8);
}

TEST(Wins, Sample) {
  const auto r = compute_ratios(sample());
  EXPECT_EQ(wins(r, "A"), 4);
  EXPECT_EQ(wins(r, "B"), 0);
  EXPECT_EQ(wins(r, "C"), 1);
  const auto one = TimingMatrixd::from_rows({"a", "b", "c"}, {"S"}, {{1.0}, {2.0}, {3.0}});
  EXPECT_EQ(wins(compute_ratios(one), Index(0)), 3);
}

TEST(SuccessFraction, Counts) {
  const auto r = compute_ratios(sample());
  for (const char* s : {"A", "B", "C"}) EXPECT_EQ(success_fraction(r, s), 1.0);
  const auto m = TimingMatrixd::from_rows({"1", "2", "3", "4"}, {"X", "Y"},
                                          {{1.0, std::nullopt}, {1.0, std::nullopt}, {2.0, std::nullopt},
                                           {std::nullopt, std::nullopt}});
  const auto rr = compute_ratios(m);
  EXPECT_EQ(success_fraction(rr, "X"), 0.75);
  EXPECT_EQ(success_fraction(rr, "Y"), 0.0);
}

ProfileCurved step_at(double tau) {
  Vector<double> taus(1);
  taus << tau;
  CountVector counts(1);
  counts << 1;
  return ProfileCurved(taus, counts, 1);
}

TEST(L1Distance, Examples) {
  const auto a = step_at(1.0);
  const auto b = step_at(1.5);
  EXPECT_EQ(l1_distance(a, a, 1.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(a, b, 1.0, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(l1_distance(b, a, 0.0, 10.0), 0.5);
  EXPECT_EQ(kind_of([&] { l1_distance(a, b, 2.0, 1.0); }), ErrorKind::InvalidInterval);
  EXPECT_EQ(kind_of([&] { l1_distance(a, b, 1.0, INFINITY); }), ErrorKind::InvalidInterval);
}

TEST(ProfileCurve, RejectsMalformed) {
  Vector<double> taus(2);
  taus << 2.0, 1.0;
  CountVector counts(2);
  counts << 1, 2;
  EXPECT_THROW(ProfileCurved(taus, counts, 2), Error);
  taus << 1.0, 2.0;
  counts << 2, 1;
  EXPECT_THROW(ProfileCurved(taus, counts, 2), Error);
  counts << 1, 3;
  EXPECT_THROW(ProfileCurved(taus, counts, 2), Error);
}

TEST(MeanCurve, UnionOfBreakpoints) {
  const std::vector<ProfileCurved> curves{step_at(1.0), step_at(3.0)};
  const auto mean = mean_curve<double>(curves);
  EXPECT_EQ(mean.size(), 2);
  EXPECT_EQ(mean(1.0), 0.5);
  EXPECT_EQ(mean(3.0), 1.0);
  EXPECT_EQ(mean.denominator(), 2);
}

// ---------------------------------------------------------------------------
// Properties over random matrices.

constexpr int kTrials = 300;

TEST(ProfileCoreProperty, CurvesMonotoneAndOnCountGrid) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < kTrials; ++t) {
    const int n_p = 1 + int(rng() % 30);
    const int n_s = 1 + int(rng() % 6);
    const auto r = compute_ratios(testing::random_matrix(rng, n_p, n_s, 0.1));
    for (Index s = 0; s < n_s; ++s) {
      const auto c = compute_profile(r, s);
      ASSERT_EQ(c.denominator(), n_p);
      for (Index i = 0; i < c.size(); ++i) {
        ASSERT_GE(c.value(i), 0.0);
        ASSERT_LE(c.value(i), 1.0);
        if (i > 0) ASSERT_LE(c.count(i - 1), c.count(i));
        // value is count / n_p, formed by one division
        ASSERT_EQ(c.value(i), double(c.count(i)) / double(n_p));
      }
      ASSERT_EQ(c.count(c.size() - 1), n_p);
    }
  }
}

TEST(ProfileCoreProperty, EveryProblemHasAWinnerWithoutFailures) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < kTrials; ++t) {
    const int n_p = 1 + int(rng() % 30);
    const int n_s = 1 + int(rng() % 6);
    const auto r = compute_ratios(testing::random_matrix(rng, n_p, n_s, 0.0));
    Index total = 0;
    for (Index s = 0; s < n_s; ++s) total += wins(r, s);
    ASSERT_GE(total, n_p);
    for (Index p = 0; p < n_p; ++p) ASSERT_EQ(r.ratios.row(p).minCoeff(), 1.0);
  }
}

TEST(ProfileCoreProperty, ScaleInvariancePerProblem) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    const int n_p = 1 + int(rng() % 20);
    const int n_s = 2 + int(rng() % 5);
    const auto m = testing::random_matrix(rng, n_p, n_s, 0.1);
    const Index q = Index(rng() % n_p);
    const double pow2 = std::ldexp(1.0, int(rng() % 21) - 10);
    const double any = factor(rng);
    const auto base = compute_ratios(m);
    for (double c : {pow2, any}) {
      Matrix<double> times = m.times();
      times.row(q) *= c;
      const TimingMatrixd scaled(m.problems(), m.solvers(), times, m.failures());
      const auto r = compute_ratios(scaled, base.rM);
      for (Index p = 0; p < n_p; ++p) {
        for (Index s = 0; s < n_s; ++s) {
          const double x = base.ratios(p, s);
          const double y = r.ratios(p, s);
          if (c == pow2) {
            ASSERT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y));
          } else {
            const auto ulps = std::abs(std::bit_cast<std::int64_t>(x) - std::bit_cast<std::int64_t>(y));
            ASSERT_LE(ulps, 4) << x << " vs " << y;
          }
        }
      }
    }
  }
}

// Changing one problem's times moves any single profile by at most 1/n_p.
TEST(ProfileCoreProperty, OneProblemMovesProfileByAtMostOneOverNp) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < kTrials; ++t) {
    const int n_p = 2 + int(rng() % 30);
    const int n_s = 2 + int(rng() % 6);
    const auto m = testing::random_matrix(rng, n_p, n_s, 0.1);
    const Index q = Index(rng() % n_p);
    std::vector<std::vector<std::optional<double>>> rows;
    for (Index p = 0; p < n_p; ++p) {
      std::vector<std::optional<double>> row;
      for (Index s = 0; s < n_s; ++s) row.push_back(m.cell(p, s));
      rows.push_back(p == q ? testing::random_row(rng, n_s, 0.1) : row);
    }
    const auto m2 = TimingMatrixd::from_rows(m.problems(), m.solvers(), rows);
    // A common r_M above any ratio on the 0.25..10 grid.
    const auto r1 = compute_ratios(m, 1000.0);
    const auto r2 = compute_ratios(m2, 1000.0);
    for (Index s = 0; s < n_s; ++s) {
      const auto a = compute_profile(r1, s);
      const auto b = compute_profile(r2, s);
      const std::vector<ProfileCurved> both{a, b};
      for (double tau : merged_breakpoints<double>(both)) {
        ASSERT_LE(std::llabs(a.count_at(tau) - b.count_at(tau)), 1);
      }
    }
  }
}

TEST(ProfileCoreProperty, L1BoundedByRatioShift) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ratio(1.0, 30.0);
  for (int t = 0; t < kTrials; ++t) {
    const int n_p = 1 + int(rng() % 40);
    const double eps = std::array{0.01, 0.1, 1.0}[rng() % 3];
    std::uniform_real_distribution<double> shift(-eps, eps);
    Vector<double> r(n_p), rh(n_p);
    for (int i = 0; i < n_p; ++i) {
      r[i] = ratio(rng);
      rh[i] = std::max(1.0, r[i] + shift(rng));
    }
    const auto a = ProfileCurved::from_ratios(r);
    const auto b = ProfileCurved::from_ratios(rh);
    const double hi = std::max(r.maxCoeff(), rh.maxCoeff()) + eps;
    ASSERT_LE(l1_distance(a, b, 1.0, hi), eps + 1e-12);
  }
}

}  // namespace
}  // namespace profbench
