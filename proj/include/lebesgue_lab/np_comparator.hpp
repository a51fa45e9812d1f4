#pragma once

// Distribution-function comparison between the kernel modulus g and the
// truncated Gaussian f on the half line:
//   G(y) = lambda{x in [0, 1/2] : g(x) > y},  F(y) = lambda{x >= 0 : f(x) > y}.
// F - G changes sign exactly once, from - to +, and the functional
//   phi(p) = (int f^p - int g^p) / (p y0^p)
// is nondecreasing in p, which carries int g^2 <= int f^2 to every p >= 2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gauss_kronrod.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

namespace lebesgue_lab {

/// One arch of g between consecutive zeros. Bump 0 is [0, 1/l] with its
/// maximum 1 at x = 0; for odd l the last bump is the half arch ending at 1/2.
struct BumpProfile {
  int index = 0;
  double left = 0.0;
  double right = 0.0;
  double peak_x = 0.0;
  double peak_y = 0.0;
  bool half = false;
};

struct LevelRoot {
  double x = 0.0;
  int bump = 0;
};

namespace detail {

inline constexpr int kBisectionIterations = 60;

/// Root of g(x) = y on [lo, hi] where g(lo) > y >= g(hi) (decreasing) or the
/// reverse (increasing).
inline double bisect_level(int l, double y, double lo, double hi, bool increasing) {
  for (int i = 0; i < kBisectionIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool above = std::fabs(dirichlet_ratio(l, mid)) > y;
    if (above != increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Golden-section maximisation of g on [a, b], seeded at the midpoint.
inline double golden_peak(int l, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [l](double x) { return std::fabs(dirichlet_ratio(l, x)); };
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > tol) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

/// Peak of bump m: golden section to 1e-8, then bisection on the sign of
/// d|h|/dx to the 1e-13 level.
inline double locate_peak(const KernelSpec& spec, double a, double b) {
  const int l = spec.length();
  double x = golden_peak(l, a, b, 1e-8);
  double lo = std::max(a, x - 1e-7);
  double hi = std::min(b, x + 1e-7);
  auto slope = [&](double t) { return eval_g_derivative(spec, t); };
  if (!(slope(lo) > 0.0 && slope(hi) < 0.0)) return x;
  for (int i = 0; i < kBisectionIterations && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Precomputed bump geometry of one kernel, for repeated level-set queries.
class KernelLevelSets {
 public:
  explicit KernelLevelSets(const KernelSpec& spec) : spec_(spec), tg_(spec) {
    const int l = spec.length();
    bumps_.push_back({0, 0.0, 1.0 / l, 0.0, 1.0, false});
    for (int m = 1; m <= spec.last_bump(); ++m) {
      BumpProfile b;
      b.index = m;
      b.left = static_cast<double>(m) / l;
      b.half = 2 * (m + 1) > l;
      b.right = b.half ? 0.5 : static_cast<double>(m + 1) / l;
      // The half arch is symmetric about 1/2, where g = 1/l.
      b.peak_x = b.half ? 0.5 : detail::locate_peak(spec, b.left, b.right);
      b.peak_y = eval_g(spec, b.peak_x);
      bumps_.push_back(b);
    }
  }

  [[nodiscard]] const KernelSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const TruncatedGaussian& gaussian() const noexcept { return tg_; }
  [[nodiscard]] std::span<const BumpProfile> bumps() const noexcept { return bumps_; }

  /// y_1, the highest secondary peak.
  [[nodiscard]] double y1() const { return bumps_.at(1).peak_y; }

  /// y_1, ..., y_M (descending).
  [[nodiscard]] std::vector<double> peak_levels() const {
    std::vector<double> out;
    for (std::size_t m = 1; m < bumps_.size(); ++m) out.push_back(bumps_[m].peak_y);
    return out;
  }

  /// All x in (0, 1/2] with g(x) = y, ascending. Bump 0 always contributes
  /// one root; each bump with peak above y contributes two, or one for the
  /// half arch.
  [[nodiscard]] std::vector<LevelRoot> roots(double y) const {
    std::vector<LevelRoot> out;
    if (!(y > 0.0 && y < 1.0)) return out;
    const int l = spec_.length();
    out.push_back({detail::bisect_level(l, y, 0.0, bumps_[0].right, false), 0});
    for (std::size_t m = 1; m < bumps_.size(); ++m) {
      const BumpProfile& b = bumps_[m];
      if (!(b.peak_y > y)) continue;
      out.push_back({detail::bisect_level(l, y, b.left, b.peak_x, true), b.index});
      if (!b.half) {
        out.push_back({detail::bisect_level(l, y, b.peak_x, b.right, false), b.index});
      }
    }
    return out;
  }

  /// G(y) = lambda{x in [0, 1/2] : g(x) > y}. 1/2 for y <= 0, 0 for y >= 1.
  [[nodiscard]] double measure(double y) const {
    if (y >= 1.0) return 0.0;
    if (y <= 0.0) return 0.5;
    const int l = spec_.length();
    double total = detail::bisect_level(l, y, 0.0, bumps_[0].right, false);
    for (std::size_t m = 1; m < bumps_.size(); ++m) {
      const BumpProfile& b = bumps_[m];
      if (!(b.peak_y > y)) continue;
      const double a = detail::bisect_level(l, y, b.left, b.peak_x, true);
      const double c =
          b.half ? 0.5 : detail::bisect_level(l, y, b.peak_x, b.right, false);
      total += c - a;
    }
    return total;
  }

  /// Sum over roots of 1/|g'(x)|, i.e. |G'(y)| away from peak levels.
  [[nodiscard]] double measure_slope(double y) const {
    double s = 0.0;
    for (const LevelRoot& r : roots(y)) {
      s += 1.0 / std::fabs(eval_g_derivative(spec_, r.x));
    }
    return s;
  }

  /// Band index m with y in (y_{m+1}, y_m), y_{M+1} := y_last; 0 above y_1.
  [[nodiscard]] int band(double y) const {
    int m = 0;
    for (std::size_t k = 1; k < bumps_.size(); ++k) {
      if (bumps_[k].peak_y > y) m = bumps_[k].index;
    }
    return m;
  }

  /// F(y) - G(y) for y in (0, 1).
  [[nodiscard]] double difference(double y) const {
    return closed_form_F(tg_, y) - measure(y);
  }

 private:
  KernelSpec spec_;
  TruncatedGaussian tg_;
  std::vector<BumpProfile> bumps_;
};

/// G(y) for a single query; see KernelLevelSets::measure.
inline double measure_G(const KernelSpec& spec, double y) {
  if (!(y > 0.0 && y < 1.0)) {
    if (y >= 1.0) return 0.0;
    throw domain_error("measure_G: y must lie in (0, 1)");
  }
  return KernelLevelSets(spec).measure(y);
}

// ---------------------------------------------------------------------------
// Sign change of F - G

struct SignChangeReport {
  int l = 0;
  double y0 = 0.0;          // refined crossing level (first - to + change)
  int crossings = 0;        // sign changes seen on the scan grid
  bool F0_lt_G0 = false;    // x_c < 1/2
  bool G_lt_F_above_y1 = false;
  double F0 = 0.0;
  double y1 = 0.0;
  double y_last = 0.0;
  std::size_t levels = 0;

  [[nodiscard]] bool ok() const {
    return crossings == 1 && F0_lt_G0 && G_lt_F_above_y1;
  }
};

/// 2000 log-spaced levels in [1e-4, 1 - 1e-6] plus every y_m and y_last.
inline std::vector<double> default_scan_levels(const KernelLevelSets& sets) {
  constexpr int kCount = 2000;
  const double lo = std::log(1e-4);
  const double hi = std::log(1.0 - 1e-6);
  std::vector<double> out;
  out.reserve(kCount + sets.bumps().size() + 1);
  for (int i = 0; i < kCount; ++i) {
    out.push_back(std::exp(lo + (hi - lo) * i / (kCount - 1)));
  }
  for (double y : sets.peak_levels()) out.push_back(y);
  out.push_back(sets.gaussian().y_last());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline constexpr int kAboveY1Levels = 1000;

/// Scans F - G over `levels` (ascending, in (0, 1), at least 1000 of them),
/// counts sign changes and refines the - to + crossing to 1e-10 by
/// bisection. G < F is checked separately on 1000 evenly spaced levels in
/// (y_1, 1). For l >= 6 a report that is not ok() throws
/// verification_failure; smaller l is report-only.
inline SignChangeReport detect_sign_change(const KernelLevelSets& sets,
                                           std::span<const double> levels) {
  if (levels.size() < 1000) {
    throw domain_error("detect_sign_change: need at least 1000 scan levels");
  }
  const TruncatedGaussian& tg = sets.gaussian();
  SignChangeReport rep;
  rep.l = sets.spec().length();
  rep.F0 = tg.x_c();
  rep.y1 = sets.y1();
  rep.y_last = tg.y_last();
  rep.levels = levels.size();
  rep.F0_lt_G0 = rep.F0 < 0.5;

  int prev_sign = 0;
  double prev_y = 0.0;
  std::optional<std::pair<double, double>> bracket;
  for (double y : levels) {
    if (!(y > 0.0 && y < 1.0)) {
      throw domain_error("detect_sign_change: levels must lie in (0, 1)");
    }
    const double d = sets.difference(y);
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      ++rep.crossings;
      if (prev_sign < 0 && !bracket) bracket = {prev_y, y};
    }
    prev_sign = sign;
    prev_y = y;
  }
  if (bracket) {
    auto [lo, hi] = *bracket;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (sets.difference(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    rep.y0 = 0.5 * (lo + hi);
  }

  rep.G_lt_F_above_y1 = true;
  for (int i = 0; i < kAboveY1Levels; ++i) {
    const double y = rep.y1 + (1.0 - rep.y1) * (i + 0.5) / kAboveY1Levels;
    if (!(sets.measure(y) < closed_form_F(tg, y))) {
      rep.G_lt_F_above_y1 = false;
      break;
    }
  }

  if (rep.l >= 6 && !rep.ok()) {
    std::ostringstream os;
    os << "sign change check failed for l=" << rep.l
       << ": crossings=" << rep.crossings << " F0<G0=" << rep.F0_lt_G0
       << " G<F above y1=" << rep.G_lt_F_above_y1;
    throw verification_failure(os.str());
  }
  return rep;
}

inline SignChangeReport detect_sign_change(const KernelSpec& spec) {
  const KernelLevelSets sets(spec);
  const std::vector<double> levels = default_scan_levels(sets);
  return detect_sign_change(sets, levels);
}

// ---------------------------------------------------------------------------
// phi(p)

struct PhiRecord {
  int l = 0;
  double p = 0.0;
  double y0 = 0.0;
  double int_f = 0.0;  // 2 int_0^{x_c} f^p
  double int_g = 0.0;  // int_{-1/2}^{1/2} g^p
  double value = 0.0;  // (int_f - int_g) / (p y0^p)
  double abs_error = 0.0;
};

/// 2 int_0^{x_c} exp(-p pi (l^2 - 1) x^2 / 2) dx by adaptive quadrature.
inline IntegrationResult truncated_gaussian_power_integral(const TruncatedGaussian& tg,
                                                           double p,
                                                           const QuadratureConfig& cfg = {}) {
  const double a = p * tg.rate();
  IntegrationResult r = integrate_adaptive(
      [a](double x) { return std::exp(-a * x * x); }, 0.0, tg.x_c(),
      cfg.abs_tol / 2.0, cfg.rel_tol, cfg.max_subdivisions);
  r.value *= 2.0;
  r.abs_error *= 2.0;
  return r;
}

inline PhiRecord phi(const KernelSpec& spec, double p, double y0,
                     const QuadratureConfig& cfg = {}) {
  if (!(p >= 2.0)) throw domain_error("phi requires p >= 2");
  if (!(y0 > 0.0 && y0 < 1.0)) throw domain_error("phi requires y0 in (0, 1)");
  const TruncatedGaussian tg(spec);
  const IntegrationResult f = truncated_gaussian_power_integral(tg, p, cfg);
  const LpNormResult g = lp_norm(spec, p, cfg);
  PhiRecord rec;
  rec.l = spec.length();
  rec.p = p;
  rec.y0 = y0;
  rec.int_f = f.value;
  rec.int_g = g.value;
  const double scale = 1.0 / (p * std::pow(y0, p));
  rec.value = (f.value - g.value) * scale;
  rec.abs_error = (f.abs_error + g.abs_error_estimate) * scale;
  return rec;
}

// ---------------------------------------------------------------------------
// Derivative bounds at the roots of g(x) = y

struct RootBound {
  double x = 0.0;
  int k = 0;                  // bump containing the root
  double abs_derivative = 0.0;
  double pointwise = 0.0;     // (lpi/2)(pi x/sin pi x)^2, or (pi/sin pi x)(pi x/sin(k pi/l))
  double intermediate = 0.0;  // (lpi/2)((pi/l)/sin(pi/l))^2, or lpi^2/(4k)
  double bound = 0.0;         // 2l, or lpi^2/(4k)
  bool ok = false;
};

struct DerivativeBoundRecord {
  int l = 0;
  double y = 0.0;
  int band = 0;
  bool skipped = false;  // y within 1e-9 of a peak level
  int expected_roots = 0;
  int found_roots = 0;
  std::vector<RootBound> roots;
  double G_prime = 0.0;                   // sum 1/|g'|
  double lower_bound = 0.0;               // 1/(2l) + 4 m^2/(l pi^2)
  std::optional<double> sharpened_bound;  // 1/(2l) + 4 (m^2 + m)/(l pi^2)
  double F_prime = 0.0;                   // |F'(y)|
  double slope_ratio = 0.0;               // |G'| / |F'|
  double fd_G_prime = 0.0;                // central difference, step 1e-6 y
  double fd_rel_error = 0.0;
  bool bounds_ok = false;
  bool sum_ok = false;
  bool ratio_ok = false;

  [[nodiscard]] bool ok() const { return skipped || (bounds_ok && sum_ok && ratio_ok); }
};

inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kPeakExclusion = 1e-9;

/// For y in (y_last, y_1): finds every root of g(x) = y, checks the
/// per-root derivative bounds, the root census, the lower bound on
/// sum 1/|g'| and |G'| >= |F'|. Census mismatch throws verification_failure.
inline DerivativeBoundRecord check_derivative_bounds(const KernelLevelSets& sets, double y) {
  const KernelSpec& spec = sets.spec();
  require_bound_hypothesis(spec);
  const TruncatedGaussian& tg = sets.gaussian();
  if (!(y > tg.y_last() && y < sets.y1())) {
    throw domain_error("check_derivative_bounds: y must lie in (y_last, y_1)");
  }
  const int l = spec.length();
  const double pi = std::numbers::pi;
  DerivativeBoundRecord rec;
  rec.l = l;
  rec.y = y;
  rec.band = sets.band(y);
  for (double ym : sets.peak_levels()) {
    if (std::fabs(y - ym) < kPeakExclusion) rec.skipped = true;
  }
  if (rec.skipped) return rec;

  const int m = rec.band;
  const bool half_in_band = !spec.is_even() && m == spec.last_bump();
  rec.expected_roots = 1 + 2 * m - (half_in_band ? 1 : 0);
  const std::vector<LevelRoot> roots = sets.roots(y);
  rec.found_roots = static_cast<int>(roots.size());
  if (rec.found_roots != rec.expected_roots) {
    std::ostringstream os;
    os.precision(17);
    os << "root census mismatch for l=" << l << " y=" << y << ": expected "
       << rec.expected_roots << ", found " << rec.found_roots;
    throw verification_failure(os.str());
  }

  auto within = [](double a, double b) { return a <= b + kBoundSlack * std::max(1.0, std::fabs(b)); };
  rec.bounds_ok = true;
  for (const LevelRoot& r : roots) {
    RootBound rb;
    rb.x = r.x;
    rb.k = r.bump;
    rb.abs_derivative = std::fabs(eval_g_derivative(spec, r.x));
    const double spx = std::sin(pi * r.x);
    if (r.bump == 0) {
      const double q = pi * r.x / spx;
      const double ql = (pi / l) / std::sin(pi / l);
      rb.pointwise = l * pi / 2.0 * q * q;
      rb.intermediate = l * pi / 2.0 * ql * ql;
      rb.bound = 2.0 * l;
    } else {
      rb.pointwise = pi / spx * (pi * r.x / std::sin(r.bump * pi / l));
      rb.intermediate = l * pi * pi / (4.0 * r.bump);
      rb.bound = rb.intermediate;
    }
    rb.ok = within(rb.abs_derivative, rb.pointwise) && within(rb.pointwise, rb.intermediate) &&
            within(rb.intermediate, rb.bound);
    rec.bounds_ok = rec.bounds_ok && rb.ok;
    rec.G_prime += 1.0 / rb.abs_derivative;
    rec.roots.push_back(rb);
  }

  rec.lower_bound = 1.0 / (2.0 * l) + 4.0 * m * m / (l * pi * pi);
  rec.sum_ok = rec.G_prime >= rec.lower_bound - kBoundSlack;
  if (!half_in_band) {
    rec.sharpened_bound = 1.0 / (2.0 * l) + 4.0 * (m * m + m) / (l * pi * pi);
    rec.sum_ok = rec.sum_ok && rec.G_prime >= *rec.sharpened_bound - kBoundSlack;
  }
  rec.F_prime = closed_form_F_slope(tg, y);
  rec.slope_ratio = rec.G_prime / rec.F_prime;
  rec.ratio_ok = rec.slope_ratio >= 1.0;

  const double h = 1e-6 * y;
  rec.fd_G_prime = (sets.measure(y - h) - sets.measure(y + h)) / (2.0 * h);
  rec.fd_rel_error = std::fabs(rec.fd_G_prime - rec.G_prime) / rec.G_prime;
  return rec;
}

inline DerivativeBoundRecord check_derivative_bounds(const KernelSpec& spec, double y) {
  return check_derivative_bounds(KernelLevelSets(spec), y);
}

}  // namespace lebesgue_lab
