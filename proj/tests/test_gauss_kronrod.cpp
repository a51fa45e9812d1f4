#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "lebesgue_lab/gauss_kronrod.hpp"

using namespace lebesgue_lab;

TEST(GaussKronrod, ExactForHighDegreePolynomials) {
  // The 31-point Kronrod rule integrates degree 46 exactly.
  const auto r = integrate_adaptive([](double x) { return std::pow(x, 45); }, 0.0, 1.0, 1e-14,
                                    1e-14, 1);
  EXPECT_NEAR(r.value, 1.0 / 46.0, 1e-15);
  EXPECT_EQ(r.segments, 1u);
}

TEST(GaussKronrod, SmoothIntegrals) {
  const double pi = std::numbers::pi;
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-13, 1e-13, 100);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  EXPECT_TRUE(r.converged);
  r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-13, 1e-13, 100);
  EXPECT_NEAR(r.value, std::sqrt(pi) * std::erf(6.0), 1e-13);
}

TEST(GaussKronrod, OscillatoryIntegrand) {
  const auto r = integrate_adaptive([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, 1e-13,
                                    1e-12, 1000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::sin(200.0) / 200.0, 1e-12);
}

TEST(GaussKronrod, EndpointSingularities) {
  auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12, 1000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-12);
  r = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, 1e-11, 1e-11, 1000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, -1.0, 1e-11);
}

TEST(GaussKronrod, ErrorEstimateCoversTrueError) {
  struct Case {
    double (*f)(double);
    double a, b, exact;
  };
  const std::vector<Case> cases{
      {[](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0, 0.4 * std::atan(5.0)},
      {[](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0, 0.29},
      {[](double x) { return std::pow(x, 0.25); }, 0.0, 1.0, 0.8},
      {[](double x) { return std::sin(50.0 * x) * std::sin(50.0 * x); }, 0.0, 1.0,
       0.5 - std::sin(100.0) / 200.0},
  };
  for (const Case& c : cases) {
    for (double tol : {1e-6, 1e-9, 1e-12}) {
      const auto r = integrate_adaptive(c.f, c.a, c.b, tol, 0.0, 5000);
      EXPECT_TRUE(r.converged);
      EXPECT_LE(std::fabs(r.value - c.exact), std::max(r.abs_error, 1e-15)) << c.exact << ' ' << tol;
    }
  }
}

TEST(GaussKronrod, BreakpointsSeedSegments) {
  const std::array<double, 4> bp{0.0, 0.3, 0.3, 1.0};
  const auto r = integrate_adaptive([](double x) { return std::fabs(x - 0.3); },
                                    std::span<const double>(bp), 1e-14, 1e-14, 10);
  EXPECT_EQ(r.segments, 2u);
  EXPECT_NEAR(r.value, 0.29, 1e-15);
}

TEST(GaussKronrod, RejectsBadBreakpoints) {
  const std::array<double, 3> bp{0.0, 1.0, 0.5};
  auto f = [](double x) { return x; };
  EXPECT_THROW(integrate_adaptive(f, std::span<const double>(bp), 1e-10, 1e-10, 10),
               std::invalid_argument);
  const std::array<double, 1> one{0.0};
  EXPECT_THROW(integrate_adaptive(f, std::span<const double>(one), 1e-10, 1e-10, 10),
               std::invalid_argument);
}

TEST(GaussKronrod, SegmentCapReportsNonConvergence) {
  const auto r = integrate_adaptive([](double x) { return std::cos(5000.0 * x); }, 0.0, 1.0, 1e-14,
                                    0.0, 4);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.segments, 4u);
}

TEST(GaussKronrod, Deterministic) {
  auto f = [](double x) { return std::exp(std::sin(30.0 * x)); };
  const auto a = integrate_adaptive(f, 0.0, 3.0, 1e-12, 1e-12, 1000);
  const auto b = integrate_adaptive(f, 0.0, 3.0, 1e-12, 1e-12, 1000);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.abs_error, b.abs_error);
  EXPECT_EQ(a.segments, b.segments);
}
