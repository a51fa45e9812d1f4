#pragma once

// The acceptance battery. Each criterion returns a CriterionResult; the
// acceptance test binary and the `suite` command both run all ten.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "epi.hpp"
#include "kernel.hpp"
#include "np_comparator.hpp"
#include "parallel.hpp"
#include "pmf.hpp"
#include "quadrature.hpp"

namespace lebesgue_lab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;

  [[nodiscard]] std::string line() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << (passed ? "[PASS] " : "[FAIL] ") << id << ' ' << name << ": " << detail << " ("
       << seconds << " s)";
    return os.str();
  }
};

/// Shared state: the random EPI batch feeds both criteria 8 and 9.
struct Context {
  unsigned threads = 1;
  QuadratureConfig cfg{};
  std::optional<std::vector<EpiBatchEntry>> batch;
  std::string batch_error;
  double batch_seconds = 0.0;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace detail

inline constexpr std::array<double, 8> kCertifyExponents{2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 16.0, 32.0};

inline CriterionResult bound_certification(Context& ctx) {
  const auto t0 = detail::Clock::now();
  struct Job {
    int l;
    double p;
  };
  std::vector<Job> jobs;
  for (int l = 6; l <= 64; ++l) {
    for (double p : kCertifyExponents) jobs.push_back({l, p});
  }
  const auto recs = parallel_map(jobs.size(), ctx.threads, [&](std::size_t i) {
    return evaluate_certification(KernelSpec(jobs[i].l), jobs[i].p, ctx.cfg);
  });
  std::size_t passed = 0;
  double min_rel_margin = 1.0;
  std::string first_failure;
  for (const auto& r : recs) {
    if (r.passed) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = r.describe();
    }
    min_rel_margin = std::min(min_rel_margin, (r.margin - r.error_estimate) / r.bound);
  }
  CriterionResult out{1, "bound certification", false, "", 0.0};
  out.seconds = detail::since(t0);
  out.passed = passed == recs.size() && out.seconds < 60.0;
  out.detail = std::to_string(passed) + "/" + std::to_string(recs.size()) +
               " pairs certified, l in 6..64, min relative margin " +
               detail::fmt(min_rel_margin) + ", budget 60 s";
  if (!first_failure.empty()) out.detail += "; first failure: " + first_failure;
  return out;
}

inline CriterionResult parseval(Context& ctx) {
  const auto t0 = detail::Clock::now();
  const auto errs = parallel_map(127, ctx.threads, [&](std::size_t i) {
    const int l = static_cast<int>(i) + 2;
    return std::fabs(lp_norm(KernelSpec(l), 2.0, ctx.cfg).value - 1.0 / l);
  });
  const double worst = *std::max_element(errs.begin(), errs.end());
  CriterionResult out{2, "Parseval oracle", worst <= 1e-9, "", 0.0};
  out.detail = "max |int g^2 - 1/l| over l in 2..128 = " + detail::fmt(worst, 3) +
               " (tolerance 1e-9)";
  out.seconds = detail::since(t0);
  return out;
}

inline CriterionResult ball(Context& ctx) {
  const auto t0 = detail::Clock::now();
  CriterionResult out{3, "Ball integral", true, "", 0.0};
  std::ostringstream os;
  os.precision(12);
  try {
    const BallIntegralResult b2 = ball_integral(2.0, ctx.cfg);
    const BallIntegralResult b4 = ball_integral(4.0, ctx.cfg);
    const bool ok2 = std::fabs(b2.value - 1.0) <= 1e-9;
    const bool ok4 = std::fabs(b4.value - 2.0 / 3.0) <= 1e-9;
    out.passed = ok2 && ok4;
    os << "I(2)=" << b2.value << " I(4)=" << b4.value;
    for (double p : {2.5, 3.0, 4.0, 8.0, 16.0}) {
      const BallIntegralResult b = ball_integral(p, ctx.cfg);
      const bool below = b.value < b.bound;
      out.passed = out.passed && below;
      os << "; p=" << p << ": " << b.value << (below ? " < " : " >= ") << b.bound;
    }
  } catch (const std::exception& e) {
    out.passed = false;
    os << " error: " << e.what();
  }
  out.detail = os.str();
  out.seconds = detail::since(t0);
  return out;
}

inline CriterionResult asymptotics(Context& ctx) {
  const auto t0 = detail::Clock::now();
  CriterionResult out{4, "asymptotic coincidence", true, "", 0.0};
  std::ostringstream os;
  os.precision(8);
  struct Series {
    double p;
    std::vector<int> ls;
  };
  const std::vector<Series> series{{2.0, {50, 100, 200, 400}},
                                   {4.0, {50, 100, 200, 400}},
                                   {1.0, {50, 100, 200, 400, 1000}}};
  for (const Series& s : series) {
    const auto recs = parallel_map(s.ls.size(), ctx.threads, [&](std::size_t i) {
      return asymptotic_comparison(KernelSpec(s.ls[i]), s.p, ctx.cfg);
    });
    const AsymptoticRecord& last = recs.back();
    bool ok;
    if (s.p == 1.0) {
      ok = last.ratio >= 0.8 && last.ratio <= 1.6;
      for (std::size_t i = 1; i < recs.size(); ++i) ok = ok && recs[i].ratio < recs[i - 1].ratio;
    } else {
      ok = last.ratio >= 0.98 && last.ratio <= 1.02;
      // Deviations are compared up to their propagated errors: at p = 2 the
      // ratio is exactly 1 and only noise remains.
      for (std::size_t i = 1; i < recs.size(); ++i) {
        const double d0 = std::fabs(recs[i - 1].ratio - 1.0);
        const double d1 = std::fabs(recs[i].ratio - 1.0);
        ok = ok && d1 <= d0 + recs[i].ratio_error + recs[i - 1].ratio_error;
      }
    }
    out.passed = out.passed && ok;
    os << "p=" << s.p << " ratios";
    for (const auto& r : recs) os << ' ' << r.ratio;
    os << (ok ? " ok" : " FAILED") << "; ";
  }
  out.detail = os.str();
  out.seconds = detail::since(t0);
  return out;
}

inline constexpr std::array<double, 9> kPhiGrid{2, 3, 4, 6, 8, 12, 16, 24, 32};

inline CriterionResult np_machinery(Context& ctx) {
  const auto t0 = detail::Clock::now();
  CriterionResult out{5, "NP machinery", true, "", 0.0};
  std::ostringstream os;
  struct LResult {
    bool sign_ok = false;
    bool phi_ok = true;
    std::string note;
  };
  const auto rows = parallel_map(11, ctx.threads, [&](std::size_t i) {
    const int l = 6 + static_cast<int>(i);
    LResult r;
    try {
      const SignChangeReport rep = detect_sign_change(KernelSpec(l));
      r.sign_ok = rep.ok();
      if (l <= 12) {
        std::vector<PhiRecord> phis;
        for (double p : kPhiGrid) phis.push_back(phi(KernelSpec(l), p, rep.y0, ctx.cfg));
        for (std::size_t k = 1; k < phis.size(); ++k) {
          if (phis[k].value < phis[k - 1].value - phis[k].abs_error - phis[k - 1].abs_error) {
            r.phi_ok = false;
            r.note = "phi decreases at l=" + std::to_string(l) + " p=" + detail::fmt(phis[k].p);
          }
        }
      }
    } catch (const std::exception& e) {
      r.sign_ok = false;
      r.note = std::string("l=") + std::to_string(l) + ": " + e.what();
    }
    return r;
  });
  int sign_ok = 0;
  bool phi_ok = true;
  for (const auto& r : rows) {
    sign_ok += r.sign_ok ? 1 : 0;
    phi_ok = phi_ok && r.phi_ok;
    if (!r.note.empty()) os << r.note << "; ";
  }
  out.seconds = detail::since(t0);
  out.passed = sign_ok == 11 && phi_ok && out.seconds < 120.0;
  os << sign_ok << "/11 kernels with one crossing, F(0) < 1/2 and G < F above y_1; phi "
     << (phi_ok ? "nondecreasing" : "NOT nondecreasing") << " for l in 6..12; budget 120 s";
  out.detail = os.str();
  return out;
}

inline CriterionResult lemma_grid(Context& ctx) {
  const auto t0 = detail::Clock::now();
  const auto reps = parallel_map(49, ctx.threads, [&](std::size_t i) {
    return check_lemma_step1(KernelSpec(static_cast<int>(i) + 2), 10'000);
  });
  int violations = 0;
  double worst = -1.0;
  for (const auto& r : reps) {
    violations += r.violations;
    worst = std::max(worst, r.max_difference);
  }
  CriterionResult out{6, "pointwise Gaussian majorant grid", violations == 0, "", 0.0};
  out.detail = std::to_string(violations) + " violations over l in 2..50 (10^4 points each), "
               "max difference " + detail::fmt(worst, 3);
  out.seconds = detail::since(t0);
  return out;
}

inline CriterionResult derivative_census(Context& ctx) {
  const auto t0 = detail::Clock::now();
  constexpr int kPerBand = 50;
  struct Tally {
    int checked = 0;
    int failed = 0;
    int skipped = 0;
    double worst_fd = 0.0;
    std::string note;
  };
  const std::array<int, 4> ls{6, 8, 9, 12};
  const auto tallies = parallel_map(ls.size(), ctx.threads, [&](std::size_t i) {
    Tally t;
    try {
      const KernelLevelSets sets{KernelSpec(ls[i])};
      std::vector<double> knots = sets.peak_levels();
      knots.push_back(sets.gaussian().y_last());
      std::sort(knots.begin(), knots.end());
      for (std::size_t b = 0; b + 1 < knots.size(); ++b) {
        for (int k = 1; k <= kPerBand; ++k) {
          const double y = knots[b] + (knots[b + 1] - knots[b]) * k / (kPerBand + 1.0);
          const DerivativeBoundRecord rec = check_derivative_bounds(sets, y);
          if (rec.skipped) {
            ++t.skipped;
            continue;
          }
          ++t.checked;
          t.worst_fd = std::max(t.worst_fd, rec.fd_rel_error);
          if (!rec.ok() || rec.fd_rel_error > 1e-4) {
            ++t.failed;
            if (t.note.empty()) {
              t.note = "l=" + std::to_string(ls[i]) + " y=" + detail::fmt(y, 17);
            }
          }
        }
      }
    } catch (const std::exception& e) {
      ++t.failed;
      t.note = e.what();
    }
    return t;
  });
  Tally sum;
  for (const auto& t : tallies) {
    sum.checked += t.checked;
    sum.failed += t.failed;
    sum.skipped += t.skipped;
    sum.worst_fd = std::max(sum.worst_fd, t.worst_fd);
    if (sum.note.empty()) sum.note = t.note;
  }
  CriterionResult out{7, "derivative-bound census", sum.failed == 0 && sum.checked > 0, "", 0.0};
  out.detail = std::to_string(sum.checked) + " levels checked for l in {6,8,9,12}, " +
               std::to_string(sum.failed) + " failures, " + std::to_string(sum.skipped) +
               " skipped at peaks, max finite-difference relative error " +
               detail::fmt(sum.worst_fd, 3);
  if (!sum.note.empty()) out.detail += "; first failure: " + sum.note;
  out.seconds = detail::since(t0);
  return out;
}

inline constexpr std::uint64_t kBatchSize = 10'000;

inline void ensure_batch(Context& ctx) {
  if (ctx.batch || !ctx.batch_error.empty()) return;
  const auto t0 = detail::Clock::now();
  try {
    ctx.batch = run_epi_batch(0, kBatchSize, {2, 5}, {6, 30}, ctx.threads, ctx.cfg);
  } catch (const std::exception& e) {
    ctx.batch_error = e.what();
  }
  ctx.batch_seconds = detail::since(t0);
}

inline CriterionResult epi_suite(Context& ctx) {
  const auto t0 = detail::Clock::now();
  ensure_batch(ctx);
  CriterionResult out{8, "entropy power inequality", false, "", 0.0};
  std::ostringstream os;
  if (!ctx.batch) {
    os << "random batch failed: " << ctx.batch_error;
  } else {
    std::size_t holds = 0;
    std::size_t exact = 0;
    std::size_t exact_holds = 0;
    std::size_t split = 0;
    double min_ratio = 1e300;
    for (const auto& e : *ctx.batch) {
      holds += e.epi.holds ? 1 : 0;
      if (e.epi.rhs_exact_M) {
        ++exact;
        exact_holds += e.epi.lhs >= *e.epi.rhs_exact_M - kEpiSlack ? 1 : 0;
      }
      split += e.epi.split_case == EpiCase::holder_split ? 1 : 0;
      min_ratio = std::min(min_ratio, e.epi.lhs / e.epi.rhs_general);
    }
    std::size_t corpus_ok = 0;
    std::size_t corpus_n = 0;
    std::string corpus_note;
    try {
      const auto corpus = handcrafted_corpus();
      corpus_n = corpus.size();
      for (const auto& inst : corpus) {
        const EpiReport r = check_epi(inst, ctx.cfg);
        check_rogozin(inst);
        corpus_ok += r.holds ? 1 : 0;
      }
    } catch (const std::exception& e) {
      corpus_note = e.what();
    }
    const bool floors = 0.5 * (6.0 - 1.0) / (6.0 + 1.0) == 5.0 / 14.0 &&
                        0.5 * (36.0 - 1.0) / 36.0 == 35.0 / 72.0;
    const double seconds = detail::since(t0);
    out.passed = holds == ctx.batch->size() && exact_holds == exact && corpus_n == 20 &&
                 corpus_ok == corpus_n && floors && seconds < 300.0;
    os << holds << "/" << ctx.batch->size() << " random instances hold (" << split
       << " split, min lhs/rhs " << detail::fmt(min_ratio) << "), exact-M subset " << exact_holds
       << "/" << exact << ", corpus " << corpus_ok << "/" << corpus_n
       << ", floors 5/14 and 35/72 " << (floors ? "exact" : "WRONG") << ", budget 300 s";
    if (!corpus_note.empty()) os << "; corpus error: " << corpus_note;
  }
  out.detail = os.str();
  out.seconds = detail::since(t0);
  return out;
}

inline CriterionResult rogozin_suite(Context& ctx) {
  const auto t0 = detail::Clock::now();
  ensure_batch(ctx);
  CriterionResult out{9, "Rogozin reduction", false, "", 0.0};
  std::ostringstream os;
  if (!ctx.batch) {
    os << "random batch failed: " << ctx.batch_error;
  } else {
    std::size_t holds = 0;
    double min_gap = 1e300;
    for (const auto& e : *ctx.batch) {
      holds += e.rogozin.holds ? 1 : 0;
      min_gap = std::min(min_gap, e.rogozin.gap);
    }
    bool zero_gap = true;
    for (const std::vector<int>& ls : std::vector<std::vector<int>>{
             {6, 6}, {6, 7}, {2, 3, 5}, {6, 8, 10}, {7, 7, 7, 7}, {1, 9}, {30, 6, 12, 20, 25}}) {
      std::vector<Pmf> us;
      for (int l : ls) us.push_back(uniform(l));
      zero_gap = zero_gap && check_rogozin(EpiInstance::from_pmfs(std::move(us))).gap == 0.0;
    }
    out.passed = holds == ctx.batch->size() && zero_gap;
    os << holds << "/" << ctx.batch->size() << " random instances satisfy M(sum X) <= M(sum U)"
       << " + 1e-12 (min gap " << detail::fmt(min_gap, 3) << "); uniform gap "
       << (zero_gap ? "exactly 0" : "NONZERO");
  }
  out.detail = os.str();
  out.seconds = detail::since(t0);
  return out;
}

inline CriterionResult sharpness(Context&) {
  const auto t0 = detail::Clock::now();
  bool equal = true;
  double worst = 0.0;
  for (int l = 6; l <= 20; ++l) {
    const Pmf u = uniform(l);
    const double n_sum = entropy_summary(convolve(u, u)).N_inf;
    const double n_one = entropy_summary(u).N_inf;
    const double rel = std::fabs(n_sum - n_one) / n_one;
    worst = std::max(worst, rel);
    equal = equal && rel <= 1e-12;
  }
  const double ratio = theorem34_constant(100) / (std::numbers::pi / 6.0);
  const bool near = ratio >= 0.95 && ratio <= 1.0;
  CriterionResult out{10, "sharpness witnesses", equal && near, "", 0.0};
  out.detail = "N(U_l + U_l') = N(U_l) for l in 6..20 (max relative deviation " +
               detail::fmt(worst, 3) + "); constant/(pi/6) at l = 100 is " +
               detail::fmt(ratio, 8);
  out.seconds = detail::since(t0);
  return out;
}

inline std::vector<CriterionResult> run_all(Context& ctx,
                                            const std::function<void(const CriterionResult&)>& on_result = {}) {
  using Fn = CriterionResult (*)(Context&);
  const std::array<Fn, 10> fns{bound_certification, parseval,          ball,
                               asymptotics,         np_machinery,      lemma_grid,
                               derivative_census,   epi_suite,         rogozin_suite,
                               sharpness};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    CriterionResult r;
    try {
      r = fns[i](ctx);
    } catch (const std::exception& e) {
      r = CriterionResult{static_cast<int>(i) + 1, "criterion", false,
                          std::string("unexpected error: ") + e.what(), 0.0};
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lebesgue_lab::acceptance
