#pragma once

// Numerical validation of the infinity-Renyi entropy power inequality for
// sums of independent integer-valued random variables:
//   N(X_1 + ... + X_n) >= 1/2 (l_min - 1)/(l_min + 1) sum N(X_i)   (l_min >= 6),
// with the sharper constant 1/2 (l_min^2 - 1)/l_min^2 when every
// M(X_i) = 1/l_i. The reduction to uniforms, the Holder split with
// p_i = sum_j l_j^2 / l_i^2 and the single-dominant case are checked
// member by member.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gauss_kronrod.hpp"
#include "kernel.hpp"
#include "parallel.hpp"
#include "pmf.hpp"
#include "quadrature.hpp"

namespace lebesgue_lab {

enum class EpiCase {
  holder_split,     // l_max^2 / sum l_j^2 <= 1/2
  single_dominant,  // l_max^2 / sum l_j^2 > 1/2
};

inline const char* to_string(EpiCase c) {
  return c == EpiCase::holder_split ? "holder_split" : "single_dominant";
}

inline constexpr double kEpiSlack = 1e-9;

/// Exact integer test of l_max^2 / sum l_j^2 <= 1/2.
inline EpiCase classify(std::span<const int> ls) {
  std::int64_t sum = 0;
  std::int64_t mx = 0;
  for (int l : ls) {
    sum += std::int64_t{l} * l;
    mx = std::max(mx, std::int64_t{l} * l);
  }
  return 2 * mx <= sum ? EpiCase::holder_split : EpiCase::single_dominant;
}

struct EpiInstance {
  std::vector<Pmf> pmfs;
  std::vector<int> l_indices;
  int l_min = 0;
  int l_max = 0;
  EpiCase split_case = EpiCase::single_dominant;
  std::optional<std::uint64_t> seed;

  static EpiInstance from_pmfs(std::vector<Pmf> pmfs,
                               std::optional<std::uint64_t> seed = std::nullopt) {
    if (pmfs.size() < 2) throw domain_error("an instance needs at least two pmfs");
    EpiInstance inst;
    inst.pmfs = std::move(pmfs);
    for (const Pmf& f : inst.pmfs) inst.l_indices.push_back(l_index(f));
    const auto [lo, hi] = std::minmax_element(inst.l_indices.begin(), inst.l_indices.end());
    inst.l_min = *lo;
    inst.l_max = *hi;
    inst.split_case = classify(inst.l_indices);
    inst.seed = seed;
    return inst;
  }

  /// True when M(X_i) = 1/l_i for every i (to 1e-12 relative).
  [[nodiscard]] bool all_exact_max() const {
    for (std::size_t i = 0; i < pmfs.size(); ++i) {
      if (std::fabs(pmfs[i].max_weight() * l_indices[i] - 1.0) > 1e-12) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Holder split

/// p_i = sum_j l_j^2 / l_i^2. Throws case_error unless every p_i >= 2.
inline std::vector<double> holder_exponents(std::span<const int> ls) {
  if (ls.empty()) throw domain_error("holder_exponents: empty list");
  if (classify(ls) != EpiCase::holder_split) {
    throw case_error("holder_exponents: l_max^2 / sum l_j^2 > 1/2, some p_i < 2");
  }
  double sum = 0.0;
  for (int l : ls) sum += static_cast<double>(l) * l;
  std::vector<double> p;
  p.reserve(ls.size());
  for (int l : ls) p.push_back(sum / (static_cast<double>(l) * l));
  return p;
}

struct HolderChain {
  std::vector<int> ls;
  std::vector<double> exponents;
  double max_uniform_sum = 0.0;  // M(U_1 + ... + U_n)
  double l1_norm = 0.0;          // ||prod D_{l_i}||_1
  double l1_norm_error = 0.0;
  double member1 = 0.0;          // ||prod D_{l_i}||_1^2
  double member2 = 0.0;          // prod ||D_{l_i}||_{p_i}^2
  double member3 = 0.0;          // prod (2/(p_i (l_i^2 - 1)))^(1/p_i)
  double member4 = 0.0;          // 2 l_min^2 / (l_min^2 - 1) / sum l_i^2
  bool hausdorff_young_ok = false;
  bool ordered = false;

  [[nodiscard]] bool ok() const { return hausdorff_young_ok && ordered; }
};

namespace detail {

inline bool le_relative(double a, double b) {
  return a <= b + kEpiSlack * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace detail

/// int_{-1/2}^{1/2} prod_i |D_{l_i}(x)| dx, with breakpoints at every k/l_i.
inline IntegrationResult kernel_product_l1(std::span<const int> ls,
                                           const QuadratureConfig& cfg = {}) {
  std::vector<double> bp{0.0, 0.5};
  for (int l : ls) {
    for (int k = 1; 2 * k < l; ++k) bp.push_back(static_cast<double>(k) / l);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<int> lens(ls.begin(), ls.end());
  auto integrand = [&lens](double x) {
    double v = 1.0;
    for (int l : lens) v *= std::fabs(dirichlet_ratio(l, x));
    return v;
  };
  IntegrationResult r = integrate_adaptive(integrand, std::span<const double>(bp),
                                           cfg.abs_tol / 2.0, cfg.rel_tol,
                                           cfg.max_subdivisions * (bp.size() - 1));
  r.value *= 2.0;
  r.abs_error *= 2.0;
  return r;
}

/// Evaluates
///   M(sum U_i) <= ||prod D||_1,
///   ||prod D||_1^2 <= prod ||D||_{p_i}^2 <= prod (2/(p_i(l_i^2-1)))^(1/p_i)
///                  <= 2 l_min^2 / ((l_min^2 - 1) sum l_i^2),
/// each within 1e-9 relative. Requires the split case and every l_i >= 6.
/// A broken chain throws verification_failure.
inline HolderChain holder_bound_chain(std::span<const int> ls, const QuadratureConfig& cfg = {}) {
  for (int l : ls) require_bound_hypothesis(KernelSpec(l));
  HolderChain ch;
  ch.ls.assign(ls.begin(), ls.end());
  ch.exponents = holder_exponents(ls);

  std::vector<Pmf> uniforms;
  for (int l : ls) uniforms.push_back(uniform(l));
  ch.max_uniform_sum = convolve_all(uniforms).max_weight();

  const IntegrationResult l1 = kernel_product_l1(ls, cfg);
  ch.l1_norm = l1.value;
  ch.l1_norm_error = l1.abs_error;
  ch.member1 = l1.value * l1.value;

  double sum_sq = 0.0;
  int l_min = ls.front();
  ch.member2 = 1.0;
  ch.member3 = 1.0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const int l = ls[i];
    const double p = ch.exponents[i];
    const LpNormResult norm = lp_norm(KernelSpec(l), p, cfg);
    ch.member2 *= std::pow(norm.value, 2.0 / p);
    ch.member3 *= std::pow(2.0 / (p * (static_cast<double>(l) * l - 1.0)), 1.0 / p);
    sum_sq += static_cast<double>(l) * l;
    l_min = std::min(l_min, l);
  }
  const double lm2 = static_cast<double>(l_min) * l_min;
  ch.member4 = 2.0 * lm2 / (lm2 - 1.0) / sum_sq;

  ch.hausdorff_young_ok = detail::le_relative(ch.max_uniform_sum, ch.l1_norm);
  ch.ordered = detail::le_relative(ch.member1, ch.member2) &&
               detail::le_relative(ch.member2, ch.member3) &&
               detail::le_relative(ch.member3, ch.member4);
  if (!ch.ok()) {
    std::ostringstream os;
    os.precision(17);
    os << "Holder chain broken for l = (";
    for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "," : "") << ls[i];
    os << "): M=" << ch.max_uniform_sum << " l1=" << ch.l1_norm << " m1=" << ch.member1
       << " m2=" << ch.member2 << " m3=" << ch.member3 << " m4=" << ch.member4;
    throw verification_failure(os.str());
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Rogozin reduction

struct RogozinRecord {
  double max_sum = 0.0;          // M(X_1 + ... + X_n)
  double max_uniform_sum = 0.0;  // M(U_1 + ... + U_n)
  double gap = 0.0;              // max_uniform_sum - max_sum
  bool holds = false;
};

inline constexpr double kRogozinSlack = 1e-12;

/// Compares M of the exact sum with M of the sum of matched uniforms
/// U_i ~ uniform{1..l_i}. Violation throws verification_failure.
inline RogozinRecord check_rogozin(const EpiInstance& inst) {
  std::vector<Pmf> uniforms;
  for (int l : inst.l_indices) uniforms.push_back(uniform(l));
  RogozinRecord rec;
  rec.max_sum = convolve_all(inst.pmfs).max_weight();
  rec.max_uniform_sum = convolve_all(uniforms).max_weight();
  rec.gap = rec.max_uniform_sum - rec.max_sum;
  rec.holds = rec.max_sum <= rec.max_uniform_sum + kRogozinSlack;
  if (!rec.holds) {
    std::ostringstream os;
    os.precision(17);
    os << "Rogozin comparison failed: M(sum X)=" << rec.max_sum
       << " > M(sum U)=" << rec.max_uniform_sum;
    throw verification_failure(os.str());
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Entropy power inequality

struct EpiReport {
  double lhs = 0.0;                   // N(sum X_i)
  double sum_N = 0.0;                 // sum N(X_i)
  double rhs_general = 0.0;           // 1/2 (l_min-1)/(l_min+1) sum N
  std::optional<double> rhs_exact_M;  // 1/2 (l_min^2-1)/l_min^2 sum N
  double floor_general = 0.0;         // 5/14 sum N
  double floor_exact = 0.0;           // 35/72 sum N
  EpiCase split_case = EpiCase::single_dominant;
  int l_min = 0;
  int l_max = 0;
  bool asserted = false;              // l_min >= 6
  bool holds = false;
  std::optional<HolderChain> chain;
  std::optional<std::uint64_t> seed;
};

/// Computes both sides of the inequality and classifies the case. In the
/// split case with l_min >= 6 the Holder chain is evaluated as well. For
/// l_min < 6 the report is informational only.
inline EpiReport check_epi(const EpiInstance& inst, const QuadratureConfig& cfg = {}) {
  EpiReport rep;
  rep.l_min = inst.l_min;
  rep.l_max = inst.l_max;
  rep.split_case = inst.split_case;
  rep.seed = inst.seed;
  rep.asserted = inst.l_min >= 6;

  const Pmf sum = convolve_all(inst.pmfs);
  rep.lhs = entropy_summary(sum).N_inf;
  for (const Pmf& f : inst.pmfs) rep.sum_N += entropy_summary(f).N_inf;
  const double lm = inst.l_min;
  rep.rhs_general = 0.5 * (lm - 1.0) / (lm + 1.0) * rep.sum_N;
  if (inst.all_exact_max()) rep.rhs_exact_M = 0.5 * (lm * lm - 1.0) / (lm * lm) * rep.sum_N;
  rep.floor_general = 5.0 / 14.0 * rep.sum_N;
  rep.floor_exact = 35.0 / 72.0 * rep.sum_N;

  rep.holds = rep.lhs >= rep.rhs_general - kEpiSlack;
  if (rep.rhs_exact_M) rep.holds = rep.holds && rep.lhs >= *rep.rhs_exact_M - kEpiSlack;
  if (rep.asserted) {
    rep.holds = rep.holds && rep.rhs_general >= rep.floor_general - kEpiSlack;
    if (rep.rhs_exact_M) rep.holds = rep.holds && *rep.rhs_exact_M >= rep.floor_exact - kEpiSlack;
    if (rep.split_case == EpiCase::holder_split) {
      rep.chain = holder_bound_chain(inst.l_indices, cfg);
    }
  }
  if (rep.asserted && !rep.holds) {
    std::ostringstream os;
    os.precision(17);
    os << "entropy power inequality failed";
    if (rep.seed) os << " (seed " << *rep.seed << ")";
    os << ": N(sum)=" << rep.lhs << " rhs=" << rep.rhs_general;
    if (rep.rhs_exact_M) os << " rhs_exact=" << *rep.rhs_exact_M;
    throw verification_failure(os.str());
  }
  return rep;
}

struct Theorem34Report {
  int l = 0;
  int n = 0;
  double lhs = 0.0;
  double sum_N = 0.0;
  double constant = 0.0;                 // (pi/6)(l^2-1)/(l+1)^2
  double rhs = 0.0;
  std::optional<double> exact_constant;  // (pi/6)(l^2-1)/l^2
  std::optional<double> rhs_exact;
  double ratio = 0.0;                    // lhs / sum_N
  bool holds = false;
};

/// (pi/6)(l^2 - 1)/(l + 1)^2.
inline double theorem34_constant(int l) {
  const double ld = l;
  return std::numbers::pi / 6.0 * (ld * ld - 1.0) / ((ld + 1.0) * (ld + 1.0));
}

/// Common-l inequality: every pmf must have l_index == l (precondition_error
/// otherwise); a violation throws verification_failure.
inline Theorem34Report check_theorem_34(int l, std::span<const Pmf> pmfs) {
  if (l < 2) throw precondition_error("check_theorem_34 requires l >= 2");
  if (pmfs.size() < 2) throw precondition_error("check_theorem_34 requires n >= 2");
  bool exact = true;
  for (const Pmf& f : pmfs) {
    if (l_index(f) != l) {
      throw precondition_error("check_theorem_34: all pmfs must share l_index = " +
                               std::to_string(l));
    }
    exact = exact && std::fabs(f.max_weight() * l - 1.0) <= 1e-12;
  }
  Theorem34Report rep;
  rep.l = l;
  rep.n = static_cast<int>(pmfs.size());
  rep.lhs = entropy_summary(convolve_all(pmfs)).N_inf;
  for (const Pmf& f : pmfs) rep.sum_N += entropy_summary(f).N_inf;
  rep.constant = theorem34_constant(l);
  rep.rhs = rep.constant * rep.sum_N;
  rep.ratio = rep.lhs / rep.sum_N;
  rep.holds = rep.lhs >= rep.rhs - kEpiSlack;
  if (exact) {
    const double ld = l;
    rep.exact_constant = std::numbers::pi / 6.0 * (ld * ld - 1.0) / (ld * ld);
    rep.rhs_exact = *rep.exact_constant * rep.sum_N;
    rep.holds = rep.holds && rep.lhs >= *rep.rhs_exact - kEpiSlack;
  }
  if (!rep.holds) {
    throw verification_failure("common-l entropy power inequality failed for l = " +
                               std::to_string(l));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Instance generation

namespace detail {

inline constexpr int kAdjustRounds = 50;
inline constexpr int kRedraws = 100;

/// Moves mass so that max(w) == target exactly, keeping sum(w) == 1.
/// Returns false if `rounds` water-filling rounds do not suffice.
inline bool adjust_max_weight(std::vector<double>& w, double target, int rounds = kAdjustRounds) {
  if (static_cast<double>(w.size()) * target < 1.0) return false;
  std::vector<bool> capped(w.size(), false);
  for (int round = 0; round < rounds; ++round) {
    const auto top = std::max_element(w.begin(), w.end());
    if (*top < target) {
      // Too flat: raise the argmax bin and shrink the rest proportionally.
      const double scale = (1.0 - target) / (1.0 - *top);
      for (double& x : w) x *= scale;
      *top = target;
      return true;
    }
    double excess = 0.0;
    double free_mass = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= target) {
        excess += w[i] - target;
        w[i] = target;
        capped[i] = true;
      } else if (!capped[i]) {
        free_mass += w[i];
      }
    }
    if (excess == 0.0) return true;
    if (free_mass <= 0.0) return false;
    const double grow = (free_mass + excess) / free_mass;
    bool over = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!capped[i]) {
        w[i] *= grow;
        over = over || w[i] > target;
      }
    }
    if (!over) return true;
  }
  return false;
}

inline std::vector<double> normalized(std::vector<double> w) {
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return w;
}

}  // namespace detail

/// Draws a pmf with l_index == l: support size in [l, 4l], exponential
/// weights, max weight moved to a target in (1/(l+1), 1/l] (exactly 1/l
/// with probability 1/4).
template <class Rng>
Pmf random_pmf(int l, Rng& rng) {
  if (l < 1) throw domain_error("random_pmf: l must be >= 1");
  std::uniform_int_distribution<std::int64_t> offset_dist(-5, 5);
  if (l == 1) return Pmf::point_mass(offset_dist(rng));
  std::uniform_int_distribution<int> size_dist(l, 4 * l);
  std::exponential_distribution<double> weight_dist(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = 1.0 / (l + 1.0);
  const double hi = 1.0 / l;
  for (int attempt = 0; attempt < detail::kRedraws; ++attempt) {
    const int size = size_dist(rng);
    double target = hi;
    if (unit(rng) >= 0.25) target = lo + (hi - lo) * (1.0 - unit(rng));
    std::vector<double> w(static_cast<std::size_t>(size));
    for (double& x : w) x = weight_dist(rng) + 1e-12;
    w = detail::normalized(std::move(w));
    if (!detail::adjust_max_weight(w, target)) continue;
    const std::int64_t offset = offset_dist(rng);
    try {
      Pmf f = Pmf::from_weights(offset, std::move(w));
      if (l_index(f) == l) return f;
    } catch (const domain_error&) {
    }
  }
  throw generation_failure("random_pmf: could not draw a pmf with l_index " + std::to_string(l));
}

/// Deterministic given the seed: draws n in n_range, then l_i in l_range and
/// a pmf with that l-index for each i.
inline EpiInstance random_instance(std::uint64_t seed, std::pair<int, int> n_range,
                                   std::pair<int, int> l_range) {
  if (n_range.first < 2 || n_range.second < n_range.first) {
    throw domain_error("random_instance: n_range must satisfy 2 <= lo <= hi");
  }
  if (l_range.first < 1 || l_range.second < l_range.first) {
    throw domain_error("random_instance: l_range must satisfy 1 <= lo <= hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_dist(n_range.first, n_range.second);
  std::uniform_int_distribution<int> l_dist(l_range.first, l_range.second);
  const int n = n_dist(rng);
  std::vector<Pmf> pmfs;
  pmfs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pmfs.push_back(random_pmf(l_dist(rng), rng));
  return EpiInstance::from_pmfs(std::move(pmfs), seed);
}

// Handcrafted shapes with M = 1/l unless stated.

/// (1 - eps)/l on l bins and eps on one more: M = (1 - eps)/l.
inline Pmf near_uniform_pmf(int l, double eps) {
  std::vector<double> w(static_cast<std::size_t>(l), (1.0 - eps) / l);
  w.push_back(eps);
  return Pmf::from_weights(0, std::move(w));
}

/// Two bins of mass 1/l at the ends, the rest spread evenly over `spread`
/// bins in between.
inline Pmf two_spike_pmf(int l, int spread) {
  const double t = 1.0 / l;
  std::vector<double> w(static_cast<std::size_t>(spread) + 2, (1.0 - 2.0 * t) / spread);
  w.front() = t;
  w.back() = t;
  return Pmf::from_weights(0, std::move(w));
}

/// w_k = t (1 - t)^k with t = 1/l, truncated after `length` bins with the
/// remaining tail mass folded into the last bin.
inline Pmf geometric_tail_pmf(int l, int length) {
  const double t = 1.0 / l;
  std::vector<double> w(static_cast<std::size_t>(length));
  double rest = 1.0;
  for (int k = 0; k + 1 < length; ++k) {
    w[k] = t * std::pow(1.0 - t, k);
    rest -= w[k];
  }
  w.back() = rest;
  return Pmf::from_weights(0, std::move(w));
}

/// Twenty fixed instances: uniforms, near-uniform, two-spike and
/// geometric-tail shapes, in both cases.
inline std::vector<EpiInstance> handcrafted_corpus() {
  auto U = [](int l) { return uniform(l); };
  auto NU = [](int l, double eps) { return near_uniform_pmf(l, eps); };
  auto TS = [](int l, int spread) { return two_spike_pmf(l, spread); };
  auto GT = [](int l) { return geometric_tail_pmf(l, 4 * l); };
  std::vector<std::vector<Pmf>> sets = {
      {U(6), U(6)},
      {U(6), U(100)},
      {U(6), U(8), U(10)},
      {U(7), U(7), U(7), U(7)},
      {NU(6, 0.01), NU(6, 0.01)},
      {NU(6, 0.05), NU(9, 0.05), NU(12, 0.05)},
      {TS(6, 10), TS(6, 10)},
      {TS(8, 12), U(8), GT(8)},
      {GT(6), GT(6)},
      {GT(6), GT(10), GT(14)},
      {GT(20), U(6)},
      {NU(30, 0.02), TS(6, 8)},
      {U(6), U(6), U(6), U(6), U(6)},
      {GT(7), GT(7), GT(7), U(7)},
      {TS(12, 20), TS(12, 20), TS(12, 20)},
      {NU(6, 0.1), GT(6), TS(6, 4)},
      {U(6), NU(25, 0.03)},
      {U(10), U(11), U(12), U(13), U(14)},
      {GT(6), TS(9, 14), NU(12, 0.07), U(15), GT(18)},
      {NU(40, 0.01), U(40)},
  };
  std::vector<EpiInstance> out;
  out.reserve(sets.size());
  for (auto& s : sets) out.push_back(EpiInstance::from_pmfs(std::move(s)));
  return out;
}

struct EpiBatchEntry {
  EpiReport epi;
  RogozinRecord rogozin;
};

/// Instances for seeds [first_seed, first_seed + count), evaluated on
/// `threads` workers, returned in seed order.
inline std::vector<EpiBatchEntry> run_epi_batch(std::uint64_t first_seed, std::size_t count,
                                                std::pair<int, int> n_range,
                                                std::pair<int, int> l_range, unsigned threads,
                                                const QuadratureConfig& cfg = {}) {
  return parallel_map(count, threads, [&](std::size_t i) {
    const EpiInstance inst = random_instance(first_seed + i, n_range, l_range);
    return EpiBatchEntry{check_epi(inst, cfg), check_rogozin(inst)};
  });
}

}  // namespace lebesgue_lab
