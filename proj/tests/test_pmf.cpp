#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lebesgue_lab/pmf.hpp"

using namespace lebesgue_lab;

namespace {

Pmf random_pmf(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> w(size);
  double s = 0.0;
  for (double& x : w) s += (x = u(rng));
  for (double& x : w) x /= s;
  return Pmf::from_weights(std::uniform_int_distribution<int>(-20, 20)(rng), w);
}

void expect_close(const Pmf& a, const Pmf& b, double tol) {
  ASSERT_EQ(a.offset(), b.offset());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.weights()[i], b.weights()[i], tol) << i;
}

}  // namespace

TEST(Pmf, Validation) {
  EXPECT_THROW(Pmf::from_weights(0, {}), domain_error);
  EXPECT_THROW(Pmf::from_weights(0, {0.0, 0.0}), domain_error);
  EXPECT_THROW(Pmf::from_weights(0, {0.5, -0.1, 0.6}), domain_error);
  EXPECT_THROW(Pmf::from_weights(0, {0.5, std::nan("")}), domain_error);
  EXPECT_THROW(Pmf::from_weights(0, {0.5, 0.4}), domain_error);
  EXPECT_NO_THROW(Pmf::from_weights(0, {0.5, 0.5 + 5e-13}));
}

TEST(Pmf, TrimsZeroEnds) {
  const Pmf f = Pmf::from_weights(3, {0.0, 0.0, 0.25, 0.0, 0.75, 0.0});
  EXPECT_EQ(f.offset(), 5);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(f.support_max(), 7);
  EXPECT_EQ(f.at(6), 0.0);
  EXPECT_EQ(f.at(7), 0.75);
  EXPECT_EQ(f.at(100), 0.0);
}

TEST(Uniform, Examples) {
  const Pmf one = uniform(1);
  EXPECT_EQ(one.offset(), 1);
  EXPECT_EQ(entropy_summary(one).M, 1.0);
  EXPECT_EQ(entropy_summary(one).N_inf, 1.0);
  const EntropySummary six = entropy_summary(uniform(6));
  EXPECT_DOUBLE_EQ(six.M, 1.0 / 6.0);
  EXPECT_NEAR(six.H_inf, std::log(6.0), 1e-15);
  EXPECT_NEAR(six.N_inf, 36.0, 1e-12);
  EXPECT_NEAR(entropy_summary(uniform(10)).N_inf, 100.0, 1e-12);
  EXPECT_THROW(uniform(0), domain_error);
  for (int l : {3, 7, 250}) EXPECT_NEAR(entropy_summary(uniform(l)).H_inf, std::log(l), 1e-14);
}

TEST(EntropySummary, Examples) {
  const EntropySummary s = entropy_summary(Pmf::from_weights(0, {0.5, 0.3, 0.2}));
  EXPECT_EQ(s.M, 0.5);
  EXPECT_EQ(s.N_inf, 4.0);
  const EntropySummary pm = entropy_summary(Pmf::point_mass(9));
  EXPECT_EQ(pm.H_inf, 0.0);
  EXPECT_EQ(pm.N_inf, 1.0);
}

TEST(LIndex, Examples) {
  EXPECT_EQ(l_index_of_max(1.0 / 6.0), 6);
  EXPECT_EQ(l_index_of_max(0.15), 6);
  EXPECT_EQ(l_index_of_max(1.0), 1);
  EXPECT_EQ(l_index_of_max(1.0 / 7.0 + 1e-9), 6);
  EXPECT_EQ(l_index_of_max(1.0 / 7.0 - 1e-9), 7);
  EXPECT_THROW(l_index_of_max(0.0), domain_error);
  EXPECT_THROW(l_index_of_max(1.5), domain_error);
}

TEST(LIndex, ExactReciprocalsForLargeL) {
  for (int l = 1; l <= 2'000'000; ++l) {
    ASSERT_EQ(l_index_of_max(1.0 / l), l) << l;
  }
}

TEST(LIndex, PmfMatchesIntervalMembership) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Pmf f = random_pmf(rng, 1 + trial % 40);
    const int l = l_index(f);
    const double M = f.max_weight();
    EXPECT_GT(M, 1.0 / (l + 1) - 1e-15);
    EXPECT_LE(M, 1.0 / l + 1e-15);
  }
}

TEST(Convolve, TwoUniformSixes) {
  const Pmf t = convolve(uniform(6), uniform(6));
  EXPECT_EQ(t.offset(), 2);
  EXPECT_EQ(t.support_max(), 12);
  for (int k = 2; k <= 12; ++k) EXPECT_NEAR(t.at(k), (6 - std::abs(k - 7)) / 36.0, 1e-16) << k;
  EXPECT_NEAR(t.max_weight(), 1.0 / 6.0, 1e-16);
}

TEST(Convolve, TwoAndThree) {
  const Pmf t = convolve(uniform(2), uniform(3));
  EXPECT_EQ(t.offset(), 2);
  const std::vector<double> want{1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6};
  ASSERT_EQ(t.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(t.weights()[i], want[i], 1e-16);
  EXPECT_NEAR(t.max_weight(), 1.0 / 3.0, 1e-16);
}

TEST(Convolve, PointMassIsIdentity) {
  std::mt19937_64 rng(5);
  const Pmf f = random_pmf(rng, 17);
  EXPECT_EQ(convolve(Pmf::point_mass(0), f), f);
  const Pmf shifted = convolve(Pmf::point_mass(4), f);
  EXPECT_EQ(shifted.offset(), f.offset() + 4);
}

TEST(Convolve, CommutativeAndAssociative) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Pmf a = random_pmf(rng, 1 + trial * 7 % 60);
    const Pmf b = random_pmf(rng, 1 + trial * 13 % 80);
    const Pmf c = random_pmf(rng, 1 + trial * 5 % 30);
    expect_close(convolve(a, b), convolve(b, a), 1e-12);
    expect_close(convolve(convolve(a, b), c), convolve(a, convolve(b, c)), 1e-12);
  }
}

TEST(Convolve, MaximumShrinksAndEntropyPowerGrows) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Pmf a = random_pmf(rng, 1 + trial % 50);
    const Pmf b = random_pmf(rng, 1 + trial * 3 % 70);
    const Pmf s = convolve(a, b);
    EXPECT_LE(s.max_weight(), std::min(a.max_weight(), b.max_weight()) + 1e-15);
    EXPECT_GE(entropy_summary(s).N_inf,
              std::max(entropy_summary(a).N_inf, entropy_summary(b).N_inf) * (1 - 1e-14));
  }
}

TEST(Convolve, UniformSelfSumKeepsEntropyPower) {
  for (int l = 1; l <= 200; ++l) {
    const Pmf u = uniform(l);
    const double n_sum = entropy_summary(convolve(u, u)).N_inf;
    EXPECT_NEAR(n_sum / (static_cast<double>(l) * l), 1.0, 1e-12) << l;
    EXPECT_NEAR(n_sum / entropy_summary(u).N_inf, 1.0, 1e-12) << l;
  }
}

TEST(Convolve, TransformMatchesDirect) {
  std::mt19937_64 rng(17);
  for (std::size_t n : {1u, 2u, 3u, 100u, 1000u, 4096u, 10'000u}) {
    const Pmf a = random_pmf(rng, n);
    const Pmf b = random_pmf(rng, std::max<std::size_t>(1, n / 3 + 1));
    expect_close(convolve_transform(a, b), convolve_direct(a, b), 1e-12);
  }
  const Pmf a = random_pmf(rng, 10'000);
  const Pmf b = random_pmf(rng, 10'000);
  expect_close(convolve_transform(a, b), convolve_direct(a, b), 1e-12);
}

TEST(Convolve, LengthCap) {
  ConvolutionOptions opt;
  opt.max_length = 10;
  EXPECT_THROW(convolve(uniform(6), uniform(6), opt), overflow_error);
  EXPECT_NO_THROW(convolve(uniform(5), uniform(6), opt));
}

TEST(Convolve, AllFoldsLeft) {
  const std::vector<Pmf> fs{uniform(2), uniform(3), uniform(4)};
  const Pmf s = convolve_all(fs);
  EXPECT_EQ(s.offset(), 3);
  EXPECT_EQ(s.support_max(), 9);
  EXPECT_EQ(s, convolve(convolve(fs[0], fs[1]), fs[2]));
  EXPECT_THROW(convolve_all(std::vector<Pmf>{}), domain_error);
}

TEST(Convolve, TransformNoiseHandling) {
  std::vector<double> w{0.5, -1e-16, 0.5};
  detail::clean_transform_output(w);
  EXPECT_EQ(w[1], 0.0);
  std::vector<double> bad{0.5, -1e-10, 0.5};
  EXPECT_THROW(detail::clean_transform_output(bad), domain_error);
}
