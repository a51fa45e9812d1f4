#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lebesgue_lab/kernel.hpp"

using namespace lebesgue_lab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(KernelSpec, RejectsShortKernels) {
  EXPECT_THROW(KernelSpec(1), domain_error);
  EXPECT_THROW(KernelSpec(-3), domain_error);
  EXPECT_NO_THROW(KernelSpec(2));
}

TEST(KernelSpec, LastBumpIndex) {
  EXPECT_EQ(KernelSpec(8).last_bump(), 3);
  EXPECT_EQ(KernelSpec(9).last_bump(), 4);
  EXPECT_EQ(KernelSpec(2).last_bump(), 0);
}

TEST(KernelSpec, BoundHypothesisNeedsSix) {
  EXPECT_THROW(require_bound_hypothesis(KernelSpec(5)), precondition_error);
  EXPECT_NO_THROW(require_bound_hypothesis(KernelSpec(6)));
}

TEST(EvalG, KnownValues) {
  EXPECT_DOUBLE_EQ(eval_g(KernelSpec(8), 0.0), 1.0);
  EXPECT_LE(eval_g(KernelSpec(8), 0.125), 1e-14);
  // 1/(6 sin(pi/12)), 40-digit evaluation.
  EXPECT_NEAR(eval_g(KernelSpec(6), 1.0 / 12.0), 0.64395055085937885783, 1e-15);
  EXPECT_NEAR(eval_g(KernelSpec(9), 0.5), 1.0 / 9.0, 1e-16);
}

TEST(EvalG, DomainIsHalfPeriod) {
  EXPECT_THROW(eval_g(KernelSpec(8), -1e-12), domain_error);
  EXPECT_THROW(eval_g(KernelSpec(8), 0.5000001), domain_error);
  EXPECT_THROW(eval_g(KernelSpec(8), std::nan("")), domain_error);
}

TEST(EvalG, ZerosAtMultiplesOfOneOverL) {
  for (int l = 2; l <= 200; ++l) {
    for (int k = 1; 2 * k <= l; ++k) {
      EXPECT_LE(eval_g(KernelSpec(l), static_cast<double>(k) / l), 1e-14) << l << ' ' << k;
    }
  }
}

TEST(EvalG, BoundedByOne) {
  for (int l : {2, 3, 6, 17, 64, 1000}) {
    for (int i = 0; i <= 5000; ++i) {
      const double g = eval_g(KernelSpec(l), 0.5 * i / 5000.0);
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, 1.0);
    }
  }
}

TEST(EvalG, SeriesBranchMatchesClosedForm) {
  // Near the origin the evaluator switches to a series; both sides of the
  // switch must agree with the closed form computed in long double.
  for (int l : {6, 50, 1000}) {
    for (double x : {1e-9, 1e-7, 0.99e-4 / l, 1.01e-4 / l, 1e-3 / l}) {
      const long double num = std::sin(static_cast<long double>(l) * kPi * x);
      const long double den = l * std::sin(static_cast<long double>(kPi) * x);
      EXPECT_NEAR(eval_g(KernelSpec(l), x), static_cast<double>(num / den), 2e-15) << l << ' ' << x;
    }
  }
}

TEST(EvalG, DerivativeMatchesCentralDifference) {
  for (int l : {6, 9, 32}) {
    const KernelSpec spec(l);
    for (double x : {0.3 / l, 1.5 / l, 2.4 / l, 0.49}) {
      const double h = 1e-7;
      const double fd = (eval_g(spec, x + h) - eval_g(spec, x - h)) / (2 * h);
      EXPECT_NEAR(eval_g_derivative(spec, x), fd, 1e-6 * std::max(1.0, std::fabs(fd)));
    }
  }
}

TEST(TruncatedGaussian, EvenLengthEight) {
  const TruncatedGaussian tg(KernelSpec(8));
  EXPECT_NEAR(tg.y_last() / 0.070735530263064593675, 1.0, 1e-15);
  EXPECT_NEAR(tg.x_c(), 0.163604395549226467, 1e-15);
  EXPECT_DOUBLE_EQ(eval_f(tg, 0.0), 1.0);
  EXPECT_NEAR(eval_f(tg, tg.x_c()), tg.y_last(), 1e-15);
  EXPECT_EQ(eval_f(tg, tg.x_c() + 1e-9), 0.0);
}

TEST(TruncatedGaussian, OddLengthFloor) {
  const TruncatedGaussian tg(KernelSpec(9));
  EXPECT_NEAR(tg.y_last() / 0.057874524760689213007, 1.0, 1e-15);
}

TEST(TruncatedGaussian, CutoffConsistency) {
  for (int l = 6; l <= 200; ++l) {
    const TruncatedGaussian tg{KernelSpec(l)};
    const double at_cut = std::exp(-kPi * (l * l - 1.0) * tg.x_c() * tg.x_c() / 2.0);
    EXPECT_NEAR(at_cut / tg.y_last(), 1.0, 1e-12) << l;
  }
}

TEST(ClosedFormF, EvenLengthEight) {
  const TruncatedGaussian tg(KernelSpec(8));
  EXPECT_NEAR(closed_form_F(tg, 0.5), 0.0836917246013657209, 1e-15);
  EXPECT_NEAR(closed_form_F(tg, 1e-6), 0.163604395549226467, 1e-15);
  EXPECT_NEAR(closed_form_F(tg, 0.999999), std::sqrt(-2.0 * std::log(0.999999) / (kPi * 63.0)), 1e-15);
  EXPECT_THROW(closed_form_F(tg, 0.0), domain_error);
  EXPECT_THROW(closed_form_F(tg, 1.0), domain_error);
}

TEST(ClosedFormF, MatchesMeasuredSuperlevelSets) {
  // Measure {x >= 0 : f(x) > y} by bisection on the decreasing f.
  for (int l : {6, 7, 8, 9}) {
    const TruncatedGaussian tg{KernelSpec(l)};
    for (int i = 0; i < 100; ++i) {
      const double y = std::exp(std::log(1e-3) + (std::log(0.999) - std::log(1e-3)) * i / 99.0);
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eval_f(tg, mid) > y ? lo : hi) = mid;
      }
      EXPECT_NEAR(closed_form_F(tg, y), lo, 1e-8) << l << ' ' << y;
    }
  }
}

TEST(ClosedFormF, SlopeMatchesDifference) {
  const TruncatedGaussian tg(KernelSpec(8));
  for (double y : {0.1, 0.3, 0.7}) {
    const double h = 1e-6 * y;
    const double fd = (closed_form_F(tg, y - h) - closed_form_F(tg, y + h)) / (2 * h);
    EXPECT_NEAR(closed_form_F_slope(tg, y) / fd, 1.0, 1e-6);
  }
}

TEST(GaussianDomination, EndpointOfShortestKernel) {
  const LemmaStep1Report r = check_lemma_step1(KernelSpec(2), 1000);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LT(r.max_difference, 0.0);
  // The last grid point is x = 1/2, where lhs = 0 < exp(-3 pi/8).
  EXPECT_LE(std::fabs(dirichlet_ratio(2, 0.5)), 1e-16);
}

TEST(GaussianDomination, DenseGridsHold) {
  for (int l : {6, 50}) {
    const LemmaStep1Report r = check_lemma_step1(KernelSpec(l), 10'000);
    EXPECT_EQ(r.violations, 0) << l;
    EXPECT_LT(r.max_difference, 0.0) << l;
  }
}

TEST(GaussianDomination, IndependentGridOracle) {
  // Same inequality evaluated from the raw closed forms in long double.
  for (int l : {6, 13, 50}) {
    long double worst = -1.0L;
    for (int i = 1; i <= 10'000; ++i) {
      const long double x = static_cast<long double>(i) / (10'000.0L * l);
      const long double lhs = std::sin(l * kPi * x) / (l * std::sin(kPi * x));
      const long double rhs = std::exp(-kPi * (static_cast<long double>(l) * l - 1) * x * x / 2);
      worst = std::max(worst, lhs - rhs);
    }
    EXPECT_LT(worst, 0.0L) << l;
    EXPECT_NEAR(static_cast<double>(worst),
                check_lemma_step1(KernelSpec(l), 10'000).max_difference, 1e-14);
  }
}

TEST(GaussianDomination, RejectsTinyGrid) {
  EXPECT_THROW(check_lemma_step1(KernelSpec(6), 1), domain_error);
}
