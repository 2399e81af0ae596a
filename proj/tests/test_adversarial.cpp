#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "profbench/adversarial.hpp"
#include "profbench/error.hpp"

namespace profbench {
namespace {

std::vector<double> row(const TimingMatrixd& m, Index p) {
  std::vector<double> out;
  for (Index s = 0; s < m.num_solvers(); ++s) out.push_back(m.time(p, s));
  return out;
}

TEST(Adversarial, ReferenceInstanceRows) {
  const auto m = generate(AdversarialSpec{3, {8, 4, 1}, 1.0});
  EXPECT_EQ(m.num_problems(), 13);
  EXPECT_EQ(m.solvers(), (std::vector<std::string>{"s1", "s2", "s3"}));
  EXPECT_EQ(m.problems().front(), "p1");
  EXPECT_EQ(m.problems().back(), "p13");
  for (Index p = 0; p < 8; ++p) EXPECT_EQ(row(m, p), (std::vector<double>{1, 3, 2}));
  for (Index p = 8; p < 12; ++p) EXPECT_EQ(row(m, p), (std::vector<double>{2, 1, 3}));
  EXPECT_EQ(row(m, 12), (std::vector<double>{2, 3, 1}));
  const auto r = compute_ratios(m);
  EXPECT_EQ(wins(r, Index(0)), 8);
  EXPECT_EQ(wins(r, Index(1)), 4);
  EXPECT_EQ(wins(r, Index(2)), 1);
}

TEST(Adversarial, TimeBaseScales) {
  const auto m = generate(AdversarialSpec{3, {8, 4, 1}, 0.5});
  EXPECT_EQ(row(m, 0), (std::vector<double>{0.5, 1.5, 1.0}));
  EXPECT_EQ(compute_ratios(m).ratios, compute_ratios(generate(default_spec(3))).ratios);
}

TEST(Adversarial, RejectsInvalidSpecs) {
  const auto kind = [](const AdversarialSpec& spec) {
    try {
      validate(spec);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidConfig;
  };
  EXPECT_EQ(kind({3, {4, 4, 5}, 1.0}), ErrorKind::SpecInvariantViolated);
  EXPECT_EQ(kind({3, {5, 1, 1}, 1.0}), ErrorKind::SpecInvariantViolated);  // 4*1 <= 7
  EXPECT_EQ(kind({3, {6, 4, 1}, 1.0}), ErrorKind::SpecInvariantViolated);  // 6 < 8
  EXPECT_EQ(kind({3, {8, 4}, 1.0}), ErrorKind::SpecInvariantViolated);
  EXPECT_EQ(kind({2, {8, 4}, 1.0}), ErrorKind::SpecInvariantViolated);
  EXPECT_EQ(kind({3, {8, 4, 0}, 1.0}), ErrorKind::SpecInvariantViolated);
  EXPECT_EQ(kind({3, {8, 4, 1}, 0.0}), ErrorKind::SpecInvariantViolated);
  EXPECT_EQ(kind({4, {40, 1, 1, 1}, 1.0}), ErrorKind::SpecInvariantViolated);  // 16 <= 43
  EXPECT_THROW(generate(AdversarialSpec{3, {4, 4, 5}, 1.0}), Error);
  try {
    validate({3, {4, 4, 5}, 1.0});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("|P_1|"), std::string::npos) << e.what();
  }
}

TEST(Adversarial, DefaultAndMinimalSpecs) {
  EXPECT_EQ(default_spec(3), (AdversarialSpec{3, {8, 4, 1}, 1.0}));
  EXPECT_EQ(minimal_spec(3), (AdversarialSpec{3, {4, 2, 1}, 1.0}));
  EXPECT_TRUE(is_valid(default_spec(3)));
  for (Index n = 4; n <= 10; ++n) {
    const auto spec = default_spec(n);
    EXPECT_TRUE(is_valid(spec));
    EXPECT_EQ(spec.num_problems(), n);
  }
  EXPECT_TRUE(is_valid({4, {3, 2, 1, 1}, 1.0}));
}

TEST(Adversarial, MinimalSpecIsMinimal) {
  // Brute force over every composition with n_p < 7.
  for (Index a = 1; a < 7; ++a) {
    for (Index b = 1; a + b < 7; ++b) {
      for (Index c = 1; a + b + c < 7; ++c) EXPECT_FALSE(is_valid({3, {a, b, c}, 1.0}));
    }
  }
}

TEST(FlipCheck, ReferenceInstance) {
  const auto rep = check_flip(generate(default_spec(3)));
  EXPECT_EQ(rep.classicFull, (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(rep.classicBest, 0);
  EXPECT_EQ(rep.classicReduced, (std::vector<Index>{2, 1}));
  EXPECT_TRUE(rep.flipped);
  EXPECT_EQ(rep.nestedRanking, (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(rep.nestedReduced, (std::vector<Index>{2, 1}));
  EXPECT_TRUE(rep.nestedStable);
}

TEST(FlipCheck, ReferenceInstanceOverall) {
  const auto res = nested_profiles(generate(default_spec(3)));
  EXPECT_EQ(res.overall[0].denominator(), 26);
  EXPECT_EQ(res.overall[0].count_at(1.0), 16);
  EXPECT_EQ(res.overall[1].count_at(1.0), 8);
  EXPECT_EQ(res.overall[2].count_at(1.0), 10);
}

TEST(FlipCheck, Sample) {
  const auto rep = check_flip(testing::sample());
  EXPECT_EQ(rep.classicFull, (std::vector<Index>{0, 2, 1}));
  EXPECT_EQ(rep.classicReduced, (std::vector<Index>{1, 2}));
  EXPECT_TRUE(rep.flipped);
  EXPECT_EQ(rep.nestedRanking, (std::vector<Index>{0, 1, 2}));
  EXPECT_TRUE(rep.nestedStable);
}

TEST(FlipCheck, DominatorDoesNotFlip) {
  const auto m = TimingMatrixd::from_rows({"p1", "p2", "p3"}, {"X", "Y", "Z"},
                                          {{1.0, 2.0, 3.0}, {1.0, 5.0, 4.0}, {1.0, 2.0, 7.0}});
  const auto rep = check_flip(m);
  EXPECT_EQ(rep.classicBest, 0);
  EXPECT_FALSE(rep.flipped);
}

TEST(FlipCheck, ExplicitWavesAreClamped) {
  ProfileConfigd cfg;
  cfg.waves = 2;
  EXPECT_NO_THROW(check_flip(testing::sample(), cfg));
}

TEST(FlipCheck, NeedsThreeSolvers) {
  EXPECT_THROW(check_flip(testing::sample().without_solver(0)), Error);
}

TEST(AdversarialProperty, EveryValidThreeSolverSpecFlips) {
  int checked = 0;
  for (Index n_p = 7; n_p <= 30; ++n_p) {
    for (Index a = 1; a < n_p; ++a) {
      for (Index b = 1; a + b < n_p; ++b) {
        const AdversarialSpec spec{3, {a, b, n_p - a - b}, 1.0};
        if (!is_valid(spec)) continue;
        const auto rep = check_flip(generate(spec));
        ASSERT_TRUE(rep.flipped) << a << "," << b;
        ASSERT_TRUE(rep.nestedStable) << a << "," << b;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(AdversarialProperty, RowsSatisfyThePattern) {
  for (Index n = 3; n <= 9; ++n) {
    const auto spec = n == 3 ? default_spec(3) : AdversarialSpec{n, std::vector<Index>(std::size_t(n), 2), 1.0};
    const auto m = generate(spec);
    Index p = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < spec.partitionSizes[std::size_t(i)]; ++j, ++p) {
        for (Index s = 0; s < n; ++s) {
          if (s != i) EXPECT_LT(m.time(p, i), m.time(p, s));
        }
        EXPECT_EQ(m.time(p, runner_up(i, n)), 2.0);
      }
    }
    EXPECT_EQ(generate(spec), m);
  }
}

TEST(AdversarialProperty, DefaultFamilyFlipsForEveryN) {
  for (Index n = 3; n <= 12; ++n) EXPECT_TRUE(check_flip(generate(default_spec(n))).flipped) << n;
}

}  // namespace
}  // namespace profbench
