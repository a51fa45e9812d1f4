#pragma once

// Globally adaptive 15/31-point Gauss-Kronrod integration over a set of
// breakpoints. The worst segment (largest local error) is bisected first.
// The error estimator follows QUADPACK's dqk31. Output is a deterministic
// function of the inputs; the final sum runs over segments in ascending
// order of their left endpoint.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace lebesgue_lab {

struct IntegrationResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t segments = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights of the
// 31-point rule; Gauss weights of the embedded 15-point rule.
inline constexpr std::array<double, 16> kXgk31 = {
    0.998002298693397060285172840152271, 0.987992518020485428489565718586613,
    0.967739075679139134257347978784337, 0.937273392400705904307758947710209,
    0.897264532344081900882509656454496, 0.848206583410427216200648320774217,
    0.790418501442465932967649294817947, 0.724417731360170047416186054613938,
    0.650996741297416970533735895313275, 0.570972172608538847537226737253911,
    0.485081863640239680693655740232351, 0.394151347077563369897207370981045,
    0.299180007153168812166780024266389, 0.201194093997434522300628303394596,
    0.101142066918717499027074231447392, 0.0};
inline constexpr std::array<double, 16> kWgk31 = {
    0.005377479872923348987792051430128, 0.015007947329316122538374763075807,
    0.025460847326715320186874001019653, 0.035346360791375846222037948478360,
    0.044589751324764876608227299373280, 0.053481524690928087265343147239430,
    0.062009567800670640285139230960803, 0.069854121318728258709520077099147,
    0.076849680757720378894432777482659, 0.083080502823133021038289247286104,
    0.088564443056211770647275443693774, 0.093126598170825321225486872747346,
    0.096642726983623678505179907627589, 0.099173598721791959332393173484603,
    0.100769845523875595044946662617570, 0.101330007014791549017374792767493};
inline constexpr std::array<double, 8> kWg15 = {
    0.030753241996117268354628393577204, 0.070366047488108124709267416450667,
    0.107159220467171935011869546685869, 0.139570677926154314447804794511028,
    0.166269205816993933553200860481209, 0.186161000015562211026800561866423,
    0.198431485327111576456118326443839, 0.202578241925561272880620199967519};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment gk31(F& f, double a, double b) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kUflow = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double dhalf = std::fabs(half);

  std::array<double, 15> fv1{};
  std::array<double, 15> fv2{};
  const double fc = f(centre);
  double resg = kWg15[7] * fc;
  double resk = kWgk31[15] * fc;
  double resabs = std::fabs(resk);
  for (int j = 0; j < 15; ++j) {
    const double absc = half * kXgk31[j];
    const double f1 = f(centre - absc);
    const double f2 = f(centre + absc);
    fv1[j] = f1;
    fv2[j] = f2;
    const double fsum = f1 + f2;
    resk += kWgk31[j] * fsum;
    resabs += kWgk31[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg15[j / 2] * fsum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk31[15] * std::fabs(fc - reskh);
  for (int j = 0; j < 15; ++j) {
    resasc += kWgk31[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }
  resabs *= dhalf;
  resasc *= dhalf;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kUflow / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, resk * half, err};
}

inline constexpr std::size_t kGk31Evaluations = 31;

}  // namespace detail

/// Integrates f over [breakpoints.front(), breakpoints.back()], seeding one
/// segment per consecutive breakpoint pair. Stops once the summed error
/// estimate is <= max(abs_tol, rel_tol |I|) or the segment count reaches
/// max_segments; `converged` reports which.
template <class F>
IntegrationResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                     double abs_tol, double rel_tol,
                                     std::size_t max_segments) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate_adaptive: need >= 2 breakpoints");
  }
  using detail::Segment;
  auto worse = [](const Segment& x, const Segment& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  };
  std::vector<Segment> done;
  std::priority_queue<Segment, std::vector<Segment>, decltype(worse)> heap(worse);

  IntegrationResult out;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      if (breakpoints[i] == breakpoints[i + 1]) continue;
      throw std::invalid_argument("integrate_adaptive: breakpoints must ascend");
    }
    Segment s = detail::gk31(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += detail::kGk31Evaluations;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  std::size_t segments = heap.size();
  max_segments = std::max(max_segments, segments);

  auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::fabs(total)); };
  while (!heap.empty() && total_err > tolerance() && segments < max_segments) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Segment can no longer be split in double precision.
      done.push_back(worst);
      continue;
    }
    Segment left = detail::gk31(f, worst.a, mid);
    Segment right = detail::gk31(f, mid, worst.b);
    out.evaluations += 2 * detail::kGk31Evaluations;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }

  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  out.value = 0.0;
  out.abs_error = 0.0;
  for (const Segment& s : done) {
    out.value += s.value;
    out.abs_error += s.error;
  }
  out.segments = done.size();
  out.converged =
      out.abs_error <= std::max(abs_tol, rel_tol * std::fabs(out.value));
  return out;
}

/// Convenience overload for a single interval [a, b].
template <class F>
IntegrationResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                     double rel_tol, std::size_t max_segments) {
  const std::array<double, 2> bp{a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(bp),
                            abs_tol, rel_tol, max_segments);
}

}  // namespace lebesgue_lab
