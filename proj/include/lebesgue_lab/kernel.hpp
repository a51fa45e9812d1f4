#pragma once

// Pointwise evaluation of the normalized Dirichlet kernel modulus
//   g(x) = |sin(l pi x) / (l sin(pi x))|,  x in [0, 1/2],
// and of the truncated Gaussian majorant
//   f(x) = exp(-pi (l^2 - 1) x^2 / 2) on [0, x_c], 0 beyond,
// whose cutoff is chosen so that f(x_c) equals the floor level y_last.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace lebesgue_lab {

/// Length l of a normalized Dirichlet kernel. Always >= 2.
class KernelSpec {
 public:
  explicit KernelSpec(int length) : l_(length) {
    if (length < 2) {
      throw domain_error("kernel length must be >= 2, got " +
                         std::to_string(length));
    }
  }

  [[nodiscard]] int length() const noexcept { return l_; }
  [[nodiscard]] bool is_even() const noexcept { return l_ % 2 == 0; }

  /// Index of the last bump above m = 0. For even l the bumps
  /// [m/l, (m+1)/l] with m = 1..l/2-1 are complete; for odd l the last one,
  /// m = floor(l/2), is the half bump ending at 1/2.
  [[nodiscard]] int last_bump() const noexcept {
    return is_even() ? l_ / 2 - 1 : l_ / 2;
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  int l_;
};

/// Throws precondition_error unless l >= 6 (hypothesis of the L^p bound).
inline void require_bound_hypothesis(const KernelSpec& spec) {
  if (spec.length() < 6) {
    throw precondition_error("the L^p bound requires l >= 6, got l = " +
                             std::to_string(spec.length()));
  }
}

namespace detail {

inline constexpr long double kPiL = std::numbers::pi_v<long double>;

/// sin(pi t) with t reduced modulo 2 before scaling by pi.
inline long double sin_pi(long double t) {
  long double r = std::fmod(t, 2.0L);
  if (r < 0) r += 2.0L;
  bool negate = false;
  if (r >= 1.0L) {
    r -= 1.0L;
    negate = true;
  }
  if (r > 0.5L) r = 1.0L - r;
  const long double s = std::sin(kPiL * r);
  return negate ? -s : s;
}

/// cos(pi t) = sin(pi (t + 1/2)), with the shift applied after reduction.
inline long double cos_pi(long double t) {
  long double r = std::fmod(t, 2.0L);
  if (r < 0) r += 2.0L;
  return sin_pi(r + 0.5L);
}

// Below this value of l*|x| the ratio and its derivative use the Taylor
// expansion of sinc(l x) / sinc(x); the truncation error is O((l pi x)^6).
inline constexpr double kSeriesThreshold = 1e-4;

}  // namespace detail

/// Signed ratio h(x) = sin(l pi x) / (l sin(pi x)), h(0) = 1. No domain
/// check; callers needing g use eval_g.
inline double dirichlet_ratio(int l, double x) {
  const long double ll = l;
  const long double xl = x;
  if (std::fabs(ll * xl) < detail::kSeriesThreshold) {
    const long double u = detail::kPiL * xl;
    const long double u2 = u * u;
    const long double lu2 = ll * ll * u2;
    const long double num = 1.0L - lu2 / 6.0L + lu2 * lu2 / 120.0L;
    const long double den = 1.0L - u2 / 6.0L + u2 * u2 / 120.0L;
    return static_cast<double>(num / den);
  }
  const long double num = detail::sin_pi(ll * xl);
  const long double den = ll * detail::sin_pi(xl);
  return static_cast<double>(num / den);
}

/// Derivative of dirichlet_ratio with respect to x, from the quotient rule
///   h'(x) = pi / sin(pi x) * (cos(l pi x) - cos(pi x) h(x)).
inline double dirichlet_ratio_derivative(int l, double x) {
  const long double ll = l;
  const long double xl = x;
  const long double pi2 = detail::kPiL * detail::kPiL;
  if (std::fabs(ll * xl) < detail::kSeriesThreshold) {
    // h = 1 - c2 x^2 + c4 x^4 + O(x^6)
    const long double l2 = ll * ll;
    const long double c2 = (l2 - 1.0L) * pi2 / 6.0L;
    const long double c4 = pi2 * pi2 *
                           (l2 * l2 / 120.0L - l2 / 36.0L + 1.0L / 36.0L -
                            1.0L / 120.0L);
    return static_cast<double>(-2.0L * c2 * xl + 4.0L * c4 * xl * xl * xl);
  }
  const long double s = detail::sin_pi(xl);
  const long double c = detail::cos_pi(xl);
  const long double sl = detail::sin_pi(ll * xl);
  const long double cl = detail::cos_pi(ll * xl);
  const long double h = sl / (ll * s);
  return static_cast<double>(detail::kPiL / s * (cl - c * h));
}

/// g(x) = |sin(l pi x) / (l sin(pi x))| on [0, 1/2].
inline double eval_g(const KernelSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 0.5)) {
    throw domain_error("eval_g: x must lie in [0, 1/2], got " +
                       std::to_string(x));
  }
  return std::fabs(dirichlet_ratio(spec.length(), x));
}

/// d|h|/dx on (0, 1/2); zero at kernel zeros is not well defined and the
/// one-sided value of the sign-corrected derivative is returned there.
inline double eval_g_derivative(const KernelSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 0.5)) {
    throw domain_error("eval_g_derivative: x must lie in [0, 1/2]");
  }
  const double h = dirichlet_ratio(spec.length(), x);
  const double dh = dirichlet_ratio_derivative(spec.length(), x);
  return h < 0.0 ? -dh : dh;
}

/// The truncated Gaussian comparison function for a kernel of length l.
/// y_last and x_c are computed once at construction and stored.
class TruncatedGaussian {
 public:
  explicit TruncatedGaussian(const KernelSpec& spec)
      : l_(spec.length()),
        rate_(std::numbers::pi * (static_cast<double>(l_) * l_ - 1.0) / 2.0),
        y_last_(floor_level(spec)),
        x_c_(std::sqrt(std::log(1.0 / y_last_) / rate_)) {}

  [[nodiscard]] int length() const noexcept { return l_; }
  /// pi (l^2 - 1) / 2, the Gaussian exponent coefficient.
  [[nodiscard]] double rate() const noexcept { return rate_; }
  [[nodiscard]] double y_last() const noexcept { return y_last_; }
  [[nodiscard]] double x_c() const noexcept { return x_c_; }

  /// 1/(pi (l/2 + 1/2)) for even l, 1/(pi (floor(l/2) + 3/2)) for odd l.
  static double floor_level(const KernelSpec& spec) {
    const int l = spec.length();
    const double denom = spec.is_even() ? l / 2.0 + 0.5 : (l / 2) + 1.5;
    return 1.0 / (std::numbers::pi * denom);
  }

 private:
  int l_;
  double rate_;
  double y_last_;
  double x_c_;
};

/// f(x): the Gaussian on [0, x_c], zero beyond the cutoff.
inline double eval_f(const TruncatedGaussian& tg, double x) {
  if (!(x >= 0.0)) {
    throw domain_error("eval_f: x must be >= 0, got " + std::to_string(x));
  }
  if (x > tg.x_c()) return 0.0;
  return std::exp(-tg.rate() * x * x);
}

/// Distribution function F(y) = lambda{x >= 0 : f(x) > y} for y in (0, 1).
/// Constant x_c below y_last, sqrt(2 log(1/y) / (pi (l^2 - 1))) above.
inline double closed_form_F(const TruncatedGaussian& tg, double y) {
  if (!(y > 0.0 && y < 1.0)) {
    throw domain_error("closed_form_F: y must lie in (0, 1), got " +
                       std::to_string(y));
  }
  if (y < tg.y_last()) return tg.x_c();
  return std::sqrt(-std::log(y) / tg.rate());
}

/// |F'(y)| on (y_last, 1): 1 / (y sqrt(2 pi (l^2 - 1) log(1/y))).
inline double closed_form_F_slope(const TruncatedGaussian& tg, double y) {
  if (!(y > 0.0 && y < 1.0)) {
    throw domain_error("closed_form_F_slope: y must lie in (0, 1)");
  }
  if (y < tg.y_last()) return 0.0;
  return 1.0 / (y * std::sqrt(4.0 * tg.rate() * -std::log(y)));
}

struct LemmaStep1Report {
  int l = 0;
  int grid_size = 0;
  double max_difference = 0.0;  // max over the grid of lhs - rhs
  double argmax_x = 0.0;
  int violations = 0;           // points with lhs - rhs >= slack
  bool ok = false;
};

inline constexpr double kStrictSlack = 1e-15;

/// Checks sin(l pi x)/(l sin pi x) < exp(-pi (l^2-1) x^2 / 2) on the grid
/// x_i = i / (grid_size l), i = 1..grid_size, which covers (0, 1/l].
inline LemmaStep1Report check_lemma_step1(const KernelSpec& spec,
                                          int grid_size) {
  if (grid_size < 2) {
    throw domain_error("check_lemma_step1: grid_size must be >= 2");
  }
  const int l = spec.length();
  const double rate = std::numbers::pi * (static_cast<double>(l) * l - 1.0) / 2.0;
  LemmaStep1Report report{l, grid_size, -INFINITY, 0.0, 0, false};
  for (int i = 1; i <= grid_size; ++i) {
    const double x = static_cast<double>(i) /
                     (static_cast<double>(grid_size) * static_cast<double>(l));
    const double lhs = dirichlet_ratio(l, x);
    const double rhs = std::exp(-rate * x * x);
    const double diff = lhs - rhs;
    if (diff > report.max_difference) {
      report.max_difference = diff;
      report.argmax_x = x;
    }
    if (diff >= kStrictSlack) ++report.violations;
  }
  report.ok = report.violations == 0;
  return report;
}

}  // namespace lebesgue_lab
