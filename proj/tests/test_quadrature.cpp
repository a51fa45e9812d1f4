#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lebesgue_lab/parallel.hpp"
#include "lebesgue_lab/quadrature.hpp"

using namespace lebesgue_lab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [0, 1/2] with n (even) uniform intervals, doubled.
double simpson_lp(int l, double p, int n) {
  auto g = [&](double x) {
    if (x == 0.0) return 1.0;
    return std::pow(std::fabs(std::sin(l * kPi * x) / (l * std::sin(kPi * x))), p);
  };
  const double h = 0.5 / n;
  double s = g(0.0) + g(0.5);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(i * h);
  return 2.0 * s * h / 3.0;
}

// int_R |sin(pi x)/(pi x)|^p by Simpson on [0, U] plus the averaged tail.
double simpson_ball(double p, int U, int per_unit) {
  auto f = [&](double x) {
    if (x == 0.0) return 1.0;
    return std::pow(std::fabs(std::sin(kPi * x) / (kPi * x)), p);
  };
  const int n = U * per_unit;
  const double h = static_cast<double>(U) / n;
  double s = f(0.0) + f(U);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  const double cp = std::tgamma((p + 1) / 2) / (std::sqrt(kPi) * std::tgamma(p / 2 + 1));
  const double tail = cp / (std::pow(kPi, p) * (p - 1) * std::pow(U, p - 1));
  return 2.0 * (s * h / 3.0 + tail);
}

}  // namespace

TEST(QuadratureConfig, Validation) {
  QuadratureConfig c;
  EXPECT_NO_THROW(c.validate());
  c.abs_tol = 1e-16;
  EXPECT_THROW(c.validate(), domain_error);
  c = {};
  c.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), domain_error);
  c = {};
  c.max_subdivisions = 0;
  EXPECT_THROW(c.validate(), domain_error);
}

TEST(LpNorm, ParsevalExamples) {
  EXPECT_NEAR(lp_norm(KernelSpec(6), 2.0).value, 1.0 / 6.0, 1e-10);
  EXPECT_NEAR(lp_norm(KernelSpec(10), 2.0).value, 0.1, 1e-10);
}

TEST(LpNorm, FourthPowerAgainstSimpsonOracle) {
  const double oracle = simpson_lp(6, 4.0, 1'000'000);
  const LpNormResult r = lp_norm(KernelSpec(6), 4.0);
  EXPECT_NEAR(r.value, oracle, 1e-12);
  EXPECT_GT(r.value, 0.0);
  EXPECT_LT(r.value, std::sqrt(2.0 / (4.0 * 35.0)));
  // Frozen value of the oracle: 73/648.
  EXPECT_NEAR(oracle, 0.11265432098765432099, 1e-13);
}

TEST(LpNorm, FourthPowerClosedForm) {
  // int |D_l|^4 = (2 l^2 + 1) / (3 l^3).
  for (int l = 2; l <= 40; ++l) {
    const double ld = l;
    EXPECT_NEAR(lp_norm(KernelSpec(l), 4.0).value, (2 * ld * ld + 1) / (3 * ld * ld * ld), 1e-12)
        << l;
  }
}

TEST(LpNorm, FrozenHighPrecisionValues) {
  // 40-digit adaptive quadrature over the bump partition.
  struct Row {
    int l;
    double p;
    double value;
  };
  const std::vector<Row> rows{{6, 3.0, 0.13036887778349333058},  {9, 2.5, 0.095658705302934745641},
                              {7, 32.0, 0.03508935362701946251}, {12, 1.0, 0.16638409891064673015},
                              {13, 6.0, 0.042422022499750870606}};
  for (const Row& row : rows) {
    const LpNormResult r = lp_norm(KernelSpec(row.l), row.p);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, row.value, 1e-11) << row.l << ' ' << row.p;
    EXPECT_LE(std::fabs(r.value - row.value), r.abs_error_estimate + 1e-15) << row.l << ' ' << row.p;
  }
}

TEST(LpNorm, RejectsSmallExponent) {
  EXPECT_THROW(lp_norm(KernelSpec(6), 0.5), domain_error);
  EXPECT_THROW(lp_norm(KernelSpec(6), std::nan("")), domain_error);
}

TEST(LpNorm, BoundOnlyWhereHypothesisHolds) {
  EXPECT_TRUE(lp_norm(KernelSpec(6), 2.0).bound.has_value());
  EXPECT_FALSE(lp_norm(KernelSpec(5), 2.0).bound.has_value());
  EXPECT_FALSE(lp_norm(KernelSpec(6), 1.5).bound.has_value());
}

TEST(LpNorm, StrictlyDecreasingInP) {
  for (int l : {2, 6, 9, 30, 64}) {
    double prev = 2.0;
    for (double p : {1.0, 2.0, 3.0, 4.0, 8.0, 16.0}) {
      const double v = lp_norm(KernelSpec(l), p).value;
      EXPECT_LT(v, prev) << l << ' ' << p;
      prev = v;
    }
  }
}

TEST(LpNorm, BoundChain) {
  for (int l = 6; l <= 64; ++l) {
    const double l2 = static_cast<double>(l) * l;
    for (double p : {2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 16.0, 32.0}) {
      const LpNormResult r = lp_norm(KernelSpec(l), p);
      const double bound = std::sqrt(2.0 / (p * (l2 - 1)));
      EXPECT_LT(r.value + r.abs_error_estimate, bound) << l << ' ' << p;
      EXPECT_LT(bound, std::sqrt(2.0 / p) / l * (1 + 1 / (2 * (l2 - 1)))) << l << ' ' << p;
    }
  }
}

TEST(LpNorm, PartitionInvariance) {
  for (int l : {6, 7, 16, 33, 64}) {
    for (double p : {1.0, 2.5, 4.0, 16.0}) {
      const double bumps = lp_norm(KernelSpec(l), p).value;
      const double uniform = lp_norm_uniform_partition(KernelSpec(l), p, 4 * l).value;
      EXPECT_NEAR(bumps, uniform, 1e-10) << l << ' ' << p;
    }
  }
}

TEST(LpNorm, LargeExponentsDropNegligibleBumps) {
  for (int l : {6, 20, 64}) {
    for (double p : {80.0, 200.0}) {
      const LpNormResult r = lp_norm(KernelSpec(l), p);
      const LpNormResult full = lp_norm_uniform_partition(KernelSpec(l), p, 8 * l);
      EXPECT_TRUE(r.converged);
      EXPECT_NEAR(r.value, full.value, 1e-12) << l << ' ' << p;
    }
  }
}

TEST(LpNorm, DeterministicAcrossThreadCounts) {
  std::vector<std::pair<int, double>> grid;
  for (int l = 6; l <= 20; ++l) {
    for (double p : {1.0, 2.5, 7.0}) grid.emplace_back(l, p);
  }
  auto run = [&](unsigned threads) {
    return parallel_map(grid.size(), threads, [&](std::size_t i) {
      return lp_norm(KernelSpec(grid[i].first), grid[i].second).value;
    });
  };
  EXPECT_EQ(run(1), run(4));
  EXPECT_EQ(run(1), run(1));
}

TEST(Certify, ParsevalCases) {
  const CertificationRecord a = certify_bound(KernelSpec(6), 2.0);
  EXPECT_NEAR(a.bound, std::sqrt(1.0 / 35.0), 1e-16);
  EXPECT_NEAR(a.value, 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(a.margin, 0.002364, 1e-6);
  EXPECT_TRUE(a.passed);
  const CertificationRecord b = certify_bound(KernelSpec(100), 2.0);
  EXPECT_NEAR(b.bound, 1.0 / std::sqrt(9999.0), 1e-16);
  EXPECT_NEAR(b.value, 0.01, 1e-12);
  EXPECT_TRUE(b.passed);
}

TEST(Certify, Preconditions) {
  EXPECT_THROW(certify_bound(KernelSpec(5), 2.0), precondition_error);
  EXPECT_THROW(certify_bound(KernelSpec(6), 1.9), precondition_error);
}

TEST(Certify, RecordIsConsistent) {
  for (int l : {6, 11, 40}) {
    for (double p : {2.0, 3.0, 32.0}) {
      const CertificationRecord r = evaluate_certification(KernelSpec(l), p);
      EXPECT_EQ(r.margin, r.bound - r.value);
      EXPECT_EQ(r.passed, r.value + r.error_estimate < r.bound);
      EXPECT_EQ(r.bound, lp_bound(l, p));
    }
  }
}

TEST(Ball, SinePowerMean) {
  EXPECT_NEAR(sine_power_mean(2.0), 0.5, 1e-15);
  EXPECT_NEAR(sine_power_mean(4.0), 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(sine_power_mean(1.0), 2.0 / kPi, 1e-15);
}

TEST(Ball, FixedGridOracle) {
  const double o2 = simpson_ball(2.0, 1000, 2000);
  const double o4 = simpson_ball(4.0, 1000, 2000);
  EXPECT_NEAR(o2, 1.0, 1e-9);
  EXPECT_NEAR(o4, 2.0 / 3.0, 1e-9);
  const BallIntegralResult b2 = ball_integral(2.0);
  const BallIntegralResult b4 = ball_integral(4.0);
  EXPECT_NEAR(b2.value, 1.0, 1e-9);
  EXPECT_NEAR(b4.value, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(b2.value, o2, 2e-9);
  EXPECT_NEAR(b4.value, o4, 2e-9);
  EXPECT_LT(b4.value, std::sqrt(0.5));
  EXPECT_LE(b2.value, 1.0 + 1e-9);
  EXPECT_TRUE(b2.below_bound);
}

TEST(Ball, EvenPowerClosedForms) {
  // int (sin u / u)^6 = 11 pi / 20, int (sin u / u)^8 = 151 pi / 315.
  EXPECT_NEAR(ball_integral(6.0).value, 11.0 / 20.0, 1e-10);
  EXPECT_NEAR(ball_integral(8.0).value, 151.0 / 315.0, 1e-10);
}

TEST(Ball, OddPowerFrozenValue) {
  EXPECT_NEAR(ball_integral(3.0).value, 0.769319477564799, 1e-9);
}

TEST(Ball, StrictlyBelowBound) {
  for (double p : {2.5, 3.0, 4.0, 8.0, 16.0}) {
    const BallIntegralResult b = ball_integral(p);
    EXPECT_TRUE(b.converged) << p;
    EXPECT_LT(b.value, std::sqrt(2.0 / p)) << p;
    EXPECT_TRUE(b.below_bound) << p;
  }
}

TEST(Ball, RequiresExponentAboveOne) {
  EXPECT_THROW(ball_integral(1.0), domain_error);
}

TEST(Ball, FixedTailPolicyIsCruderButConsistent) {
  QuadratureConfig c;
  c.tail_cutoff_policy = TailCutoffPolicy::fixed;
  c.abs_tol = 1e-8;
  const BallIntegralResult b = ball_integral(4.0, c);
  EXPECT_NEAR(b.value, 2.0 / 3.0, 2 * b.abs_error_estimate + 1e-12);
  EXPECT_GT(b.abs_error_estimate, ball_integral(4.0).abs_error_estimate);
}

TEST(Asymptotic, ParsevalRatioIsOne) {
  const AsymptoticRecord r = asymptotic_comparison(KernelSpec(1000), 2.0);
  EXPECT_NEAR(r.ratio, 1.0, 1e-9);
  // (2/pi) int_0^inf (sin u / u)^2 du = 1, i.e. the half integral is pi/2.
  EXPECT_NEAR(ball_integral(2.0).value * kPi / 2.0, kPi / 2.0, 1e-9);
}

TEST(Asymptotic, FourthPowerTrend) {
  double prev = 1.0;
  for (int l : {50, 100, 200, 400}) {
    const AsymptoticRecord r = asymptotic_comparison(KernelSpec(l), 4.0);
    const double dev = std::fabs(r.ratio - 1.0);
    EXPECT_LT(dev, prev) << l;
    // Exact: ratio = 1 + 1/(2 l^2).
    EXPECT_NEAR(r.ratio, 1.0 + 0.5 / (static_cast<double>(l) * l), 1e-8) << l;
    prev = dev;
  }
}

TEST(Asymptotic, FirstPowerBand) {
  const AsymptoticRecord r = asymptotic_comparison(KernelSpec(1000), 1.0);
  EXPECT_GE(r.ratio, 0.8);
  EXPECT_LE(r.ratio, 1.6);
  EXPECT_GT(r.ratio, 1.0);
  EXPECT_EQ(r.reference_error, 0.0);
}

TEST(Asymptotic, AttachFillsReference) {
  LpNormResult r = lp_norm(KernelSpec(50), 4.0);
  EXPECT_FALSE(r.asymptotic.has_value());
  attach_asymptotic(r);
  ASSERT_TRUE(r.asymptotic.has_value());
  EXPECT_NEAR(*r.asymptotic, 2.0 / 3.0 / 50.0, 1e-11);
}
