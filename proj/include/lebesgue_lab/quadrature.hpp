#pragma once

// L^p norms of the normalized Dirichlet kernel, certification of
//   int_{-1/2}^{1/2} |D_l|^p dx < sqrt(2 / (p (l^2 - 1)))   (l >= 6, p >= 2),
// Ball's integral int_R |sin(pi x)/(pi x)|^p dx and the asymptotic
// references (first term of the large-l expansion, 4 log l / (pi^2 l) at p = 1).

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "gauss_kronrod.hpp"
#include "kernel.hpp"

namespace lebesgue_lab {

enum class TailCutoffPolicy {
  fixed,      // U from the crude |sin u/u|^p <= u^-p tail bound, no correction
  tol_driven  // U from the mean-value tail remainder bound, tail corrected
};

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 10'000;  // per bump / per unit period
  TailCutoffPolicy tail_cutoff_policy = TailCutoffPolicy::tol_driven;

  void validate() const {
    if (!(abs_tol >= 1e-15)) throw domain_error("abs_tol must be >= 1e-15");
    if (!(rel_tol > 0.0)) throw domain_error("rel_tol must be > 0");
    if (max_subdivisions < 1 || max_subdivisions > 1'000'000) {
      throw domain_error("max_subdivisions must lie in [1, 1e6]");
    }
  }

  friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

struct LpNormResult {
  int l = 0;
  double p = 0.0;
  double value = 0.0;                 // int_{-1/2}^{1/2} |D_l|^p dx
  std::optional<double> bound;        // sqrt(2/(p(l^2-1))) when p >= 2, l >= 6
  std::optional<double> asymptotic;   // filled by attach_asymptotic
  double abs_error_estimate = 0.0;
  bool converged = false;
};

/// sqrt(2 / (p (l^2 - 1))).
inline double lp_bound(int l, double p) {
  return std::sqrt(2.0 / (p * (static_cast<double>(l) * l - 1.0)));
}

namespace detail {

inline void require_p(double p, double minimum) {
  if (!(p >= minimum) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "exponent p must be >= " << minimum << ", got " << p;
    throw domain_error(os.str());
  }
}

/// |g|^p, in the log domain for p > 64.
inline double kernel_power(int l, double x, double p) {
  const double g = std::fabs(dirichlet_ratio(l, x));
  if (p == 1.0) return g;
  if (p == 2.0) return g * g;
  if (g == 0.0) return 0.0;
  if (p > 64.0) return std::exp(p * std::log(g));
  return std::pow(g, p);
}

/// Natural partition of [0, 1/2] at kernel zeros k/l.
inline std::vector<double> bump_breakpoints(int l) {
  std::vector<double> bp;
  bp.reserve(static_cast<std::size_t>(l / 2) + 2);
  for (int k = 0; 2 * k <= l; ++k) bp.push_back(static_cast<double>(k) / l);
  if (bp.back() < 0.5) bp.push_back(0.5);
  return bp;
}

inline LpNormResult lp_norm_on(const KernelSpec& spec, double p,
                               const QuadratureConfig& cfg,
                               std::vector<double> breakpoints,
                               double dropped_error) {
  const int l = spec.length();
  auto integrand = [l, p](double x) { return kernel_power(l, x, p); };
  const std::size_t pieces = breakpoints.size() - 1;
  const double abs_target = std::max(cfg.abs_tol / 2.0 - dropped_error, 0.25 * cfg.abs_tol);
  const IntegrationResult half =
      integrate_adaptive(integrand, std::span<const double>(breakpoints),
                         abs_target, cfg.rel_tol, cfg.max_subdivisions * pieces);
  LpNormResult out;
  out.l = l;
  out.p = p;
  out.value = 2.0 * half.value;
  out.abs_error_estimate = 2.0 * (half.abs_error + dropped_error);
  out.converged = out.abs_error_estimate <=
                  std::max(cfg.abs_tol, cfg.rel_tol * out.value);
  if (p >= 2.0 && l >= 6) out.bound = lp_bound(l, p);
  return out;
}

}  // namespace detail

/// int_{-1/2}^{1/2} |D_l(x)|^p dx = 2 int_0^{1/2} g^p, integrated bump by bump.
/// For p > 64, bumps whose peak bound satisfies p log(peak) < log(abs_tol) -
/// log(l) are dropped and their worst-case mass is charged to the error.
/// A run that exhausts max_subdivisions returns converged = false.
inline LpNormResult lp_norm(const KernelSpec& spec, double p,
                            const QuadratureConfig& cfg = {}) {
  detail::require_p(p, 1.0);
  cfg.validate();
  const int l = spec.length();
  std::vector<double> bp = detail::bump_breakpoints(l);
  double dropped = 0.0;
  if (p > 64.0) {
    const double cut = std::log(cfg.abs_tol) - std::log(static_cast<double>(l));
    std::size_t keep = bp.size() - 1;  // number of pieces kept
    for (std::size_t m = 1; m + 1 < bp.size(); ++m) {
      const double peak_bound =
          1.0 / (l * std::sin(std::numbers::pi * static_cast<double>(m) / l));
      if (p * std::log(peak_bound) < cut) {
        keep = m;
        for (std::size_t k = m; k + 1 < bp.size(); ++k) {
          const double u = 1.0 / (l * std::sin(std::numbers::pi * static_cast<double>(k) / l));
          dropped += (bp[k + 1] - bp[k]) * std::exp(p * std::log(u));
        }
        break;
      }
    }
    bp.resize(keep + 1);
  }
  return detail::lp_norm_on(spec, p, cfg, std::move(bp), dropped);
}

/// Same integral on a uniform partition of [0, 1/2] into `pieces` segments.
/// Exists to cross-check the bump partition.
inline LpNormResult lp_norm_uniform_partition(const KernelSpec& spec, double p,
                                              int pieces,
                                              const QuadratureConfig& cfg = {}) {
  detail::require_p(p, 1.0);
  cfg.validate();
  if (pieces < 1) throw domain_error("pieces must be >= 1");
  std::vector<double> bp(static_cast<std::size_t>(pieces) + 1);
  for (int i = 0; i <= pieces; ++i) bp[i] = 0.5 * static_cast<double>(i) / pieces;
  return detail::lp_norm_on(spec, p, cfg, std::move(bp), 0.0);
}

struct CertificationRecord {
  int l = 0;
  double p = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - value
  double error_estimate = 0.0;
  bool passed = false;

  [[nodiscard]] std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "certify l=" << l << " p=" << p << ": value=" << value
       << " err=" << error_estimate << " bound=" << bound
       << " margin=" << margin;
    return os.str();
  }
};

/// Computes the record without asserting; `passed` means converged and
/// value + error estimate < sqrt(2/(p(l^2-1))). Throws precondition_error
/// outside l >= 6, p >= 2.
inline CertificationRecord evaluate_certification(const KernelSpec& spec, double p,
                                                  const QuadratureConfig& cfg = {}) {
  require_bound_hypothesis(spec);
  if (!(p >= 2.0)) {
    throw precondition_error("the L^p bound requires p >= 2");
  }
  const LpNormResult r = lp_norm(spec, p, cfg);
  CertificationRecord rec;
  rec.l = spec.length();
  rec.p = p;
  rec.value = r.value;
  rec.bound = lp_bound(rec.l, p);
  rec.margin = rec.bound - r.value;
  rec.error_estimate = r.abs_error_estimate;
  rec.passed = r.converged && r.value + r.abs_error_estimate < rec.bound;
  return rec;
}

/// evaluate_certification, throwing verification_failure when not passed.
inline CertificationRecord certify_bound(const KernelSpec& spec, double p,
                                         const QuadratureConfig& cfg = {}) {
  CertificationRecord rec = evaluate_certification(spec, p, cfg);
  if (!rec.passed) throw verification_failure(rec.describe());
  return rec;
}

// ---------------------------------------------------------------------------
// Ball's integral

struct BallIntegralResult {
  double p = 0.0;
  double value = 0.0;           // int_R |sin(pi x)/(pi x)|^p dx
  double abs_error_estimate = 0.0;
  double cutoff = 0.0;          // U, in units of x
  double bound = 0.0;           // sqrt(2/p)
  bool below_bound = false;     // value <= bound (strictness per p, see below)
  bool converged = false;
};

/// Mean of |sin|^p over a period: Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2 + 1)).
inline double sine_power_mean(double p) {
  return std::exp(std::lgamma((p + 1.0) / 2.0) - std::lgamma(p / 2.0 + 1.0)) /
         std::sqrt(std::numbers::pi);
}

inline constexpr double kMaxBallPeriods = 1e7;

namespace detail {

inline double sinc_pi_power(double x, double p) {
  const double ax = std::fabs(x);
  double s;
  if (ax < 1e-4) {
    const double u2 = std::numbers::pi * std::numbers::pi * ax * ax;
    s = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  } else {
    s = static_cast<double>(sin_pi(ax) / (kPiL * ax));
  }
  s = std::fabs(s);
  if (p == 2.0) return s * s;
  if (s == 0.0) return 0.0;
  return std::exp(p * std::log(s));
}

}  // namespace detail

/// int_R |sin(pi x)/(pi x)|^p dx = 2 int_0^U + tail.
///
/// tol_driven: the tail int_U^inf is replaced by its period mean
/// c_p / (pi^p (p-1) U^(p-1)) with c_p = sine_power_mean(p); integrating by
/// parts against the zero-mean periodic remainder bounds the error by
/// c_p (pi U)^-p. U is the smallest integer >= 10 making the doubled bound
/// <= abs_tol / 2.
///
/// fixed: U = max(10, (2/((p-1) abs_tol))^(1/(p-1)) / pi) with no tail
/// correction; the crude tail bound is charged to the error. Either way U is
/// capped at kMaxBallPeriods and a capped run reports converged = false.
///
/// Asserts value < sqrt(2/p) for p >= 2 + 1e-6 and value <= sqrt(2/p) + 1e-9
/// on [2, 2 + 1e-6); throws verification_failure on violation.
inline BallIntegralResult ball_integral(double p, const QuadratureConfig& cfg = {}) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw domain_error("ball_integral requires p > 1");
  }
  cfg.validate();
  const double pi = std::numbers::pi;
  const double cp = sine_power_mean(p);
  const double cap = kMaxBallPeriods;

  double U = 10.0;
  double tail_value = 0.0;
  double tail_error = 0.0;
  if (cfg.tail_cutoff_policy == TailCutoffPolicy::tol_driven) {
    // 2 c_p (pi U)^-p <= abs_tol / 2
    const double need = std::pow(4.0 * cp / cfg.abs_tol, 1.0 / p) / pi;
    U = std::min(std::max(10.0, std::ceil(need)), cap);
    tail_value = cp / (std::pow(pi, p) * (p - 1.0) * std::pow(U, p - 1.0));
    tail_error = cp * std::pow(pi * U, -p);
  } else {
    const double need = std::pow(2.0 / ((p - 1.0) * cfg.abs_tol), 1.0 / (p - 1.0)) / pi;
    U = std::min(std::max(10.0, std::ceil(need)), cap);
    tail_error = 1.0 / (std::pow(pi, p) * (p - 1.0) * std::pow(U, p - 1.0));
  }

  const auto periods = static_cast<std::size_t>(U);
  std::vector<double> bp(periods + 1);
  for (std::size_t k = 0; k <= periods; ++k) bp[k] = static_cast<double>(k);
  auto integrand = [p](double x) { return detail::sinc_pi_power(x, p); };
  const IntegrationResult half = integrate_adaptive(
      integrand, std::span<const double>(bp), cfg.abs_tol / 4.0, cfg.rel_tol / 2.0,
      periods + cfg.max_subdivisions);

  BallIntegralResult out;
  out.p = p;
  out.cutoff = U;
  out.value = 2.0 * (half.value + tail_value);
  out.abs_error_estimate = 2.0 * (half.abs_error + tail_error);
  out.bound = std::sqrt(2.0 / p);
  out.converged = out.abs_error_estimate <=
                  std::max(cfg.abs_tol, cfg.rel_tol * out.value);
  if (p >= 2.0 + 1e-6) {
    out.below_bound = out.value < out.bound;
  } else if (p >= 2.0) {
    out.below_bound = out.value <= out.bound + 1e-9;
  } else {
    out.below_bound = out.value <= out.bound;
  }
  if (p >= 2.0 && !out.below_bound) {
    std::ostringstream os;
    os.precision(17);
    os << "ball integral p=" << p << ": value " << out.value
       << " is not below sqrt(2/p) = " << out.bound;
    throw verification_failure(os.str());
  }
  return out;
}

namespace detail {

/// Ball integrals memoised per (p, cfg); the asymptotic reference is reused
/// across many kernel lengths.
inline BallIntegralResult cached_ball_integral(double p, const QuadratureConfig& cfg) {
  using Key = std::tuple<double, double, double, std::size_t, int>;
  static std::mutex mu;
  static std::map<Key, BallIntegralResult> cache;
  const Key key{p, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions,
                static_cast<int>(cfg.tail_cutoff_policy)};
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  BallIntegralResult r = ball_integral(p, cfg);
  std::lock_guard lock(mu);
  cache.emplace(key, r);
  return r;
}

}  // namespace detail

struct AsymptoticRecord {
  int l = 0;
  double p = 0.0;
  double value = 0.0;            // lp_norm
  double value_error = 0.0;
  double reference = 0.0;        // leading asymptotic term
  double reference_error = 0.0;
  double ratio = 0.0;            // value / reference
  double ratio_error = 0.0;      // first-order propagated error of the ratio
};

/// Leading asymptotic term of the L^p norm: int_R |sinc|^p / l for p > 1,
/// 4 log l / (pi^2 l) for p = 1. Returns {reference, error}.
inline std::pair<double, double> asymptotic_reference(int l, double p,
                                                      const QuadratureConfig& cfg = {}) {
  detail::require_p(p, 1.0);
  if (p == 1.0) {
    return {4.0 * std::log(static_cast<double>(l)) /
                (std::numbers::pi * std::numbers::pi * l),
            0.0};
  }
  const BallIntegralResult b = detail::cached_ball_integral(p, cfg);
  return {b.value / l, b.abs_error_estimate / l};
}

/// Fills result.asymptotic.
inline void attach_asymptotic(LpNormResult& result, const QuadratureConfig& cfg = {}) {
  result.asymptotic = asymptotic_reference(result.l, result.p, cfg).first;
}

/// Ratio of the computed norm to its leading asymptotic term.
inline AsymptoticRecord asymptotic_comparison(const KernelSpec& spec, double p,
                                              const QuadratureConfig& cfg = {}) {
  const LpNormResult r = lp_norm(spec, p, cfg);
  const auto [ref, ref_err] = asymptotic_reference(spec.length(), p, cfg);
  AsymptoticRecord rec;
  rec.l = spec.length();
  rec.p = p;
  rec.value = r.value;
  rec.value_error = r.abs_error_estimate;
  rec.reference = ref;
  rec.reference_error = ref_err;
  rec.ratio = r.value / ref;
  rec.ratio_error = rec.ratio * (r.abs_error_estimate / r.value + ref_err / ref);
  return rec;
}

}  // namespace lebesgue_lab
