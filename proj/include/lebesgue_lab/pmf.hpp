#pragma once

// Probability mass functions of integer-valued random variables, their
// maxima M, infinity-Renyi entropy H = -log M and entropy power N = M^-2,
// and exact distributions of independent sums.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace lebesgue_lab {

inline constexpr double kPmfSumTolerance = 1e-12;
inline constexpr double kConvolutionSumTolerance = 1e-11;

/// Integer-valued pmf: weights[i] = P(X = offset + i). Weights are
/// nonnegative, sum to 1 and the support is trimmed (first and last > 0).
class Pmf {
 public:
  /// Validates and trims exact zeros at both ends.
  static Pmf from_weights(std::int64_t offset, std::vector<double> weights,
                          double sum_tolerance = kPmfSumTolerance) {
    std::size_t first = 0;
    while (first < weights.size() && weights[first] == 0.0) ++first;
    std::size_t last = weights.size();
    while (last > first && weights[last - 1] == 0.0) --last;
    if (first == last) throw domain_error("pmf has no positive weight");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw domain_error("pmf weights must be finite and nonnegative");
      }
      sum += w;
    }
    if (std::fabs(sum - 1.0) > sum_tolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "pmf weights sum to " << sum << ", not 1";
      throw domain_error(os.str());
    }
    std::vector<double> trimmed(weights.begin() + static_cast<std::ptrdiff_t>(first),
                                weights.begin() + static_cast<std::ptrdiff_t>(last));
    return Pmf(offset + static_cast<std::int64_t>(first), std::move(trimmed));
  }

  static Pmf point_mass(std::int64_t at) { return Pmf(at, {1.0}); }

  [[nodiscard]] std::int64_t offset() const noexcept { return offset_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::int64_t support_max() const noexcept {
    return offset_ + static_cast<std::int64_t>(weights_.size()) - 1;
  }
  /// P(X = k), zero outside the support.
  [[nodiscard]] double at(std::int64_t k) const noexcept {
    if (k < offset_ || k > support_max()) return 0.0;
    return weights_[static_cast<std::size_t>(k - offset_)];
  }
  /// M(X) = max_k P(X = k).
  [[nodiscard]] double max_weight() const noexcept {
    return *std::max_element(weights_.begin(), weights_.end());
  }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  Pmf(std::int64_t offset, std::vector<double> weights)
      : offset_(offset), weights_(std::move(weights)) {}

  std::int64_t offset_;
  std::vector<double> weights_;
};

/// Uniform law on {1, ..., l}.
inline Pmf uniform(int l) {
  if (l < 1) throw domain_error("uniform: l must be >= 1");
  return Pmf::from_weights(1, std::vector<double>(static_cast<std::size_t>(l),
                                                  1.0 / static_cast<double>(l)));
}

struct EntropySummary {
  double M = 0.0;
  double H_inf = 0.0;  // -log M
  double N_inf = 0.0;  // M^-2
};

inline EntropySummary entropy_summary(const Pmf& f) {
  const double m = f.max_weight();
  return {m, -std::log(m), 1.0 / (m * m)};
}

/// Unique l >= 1 with M in (1/(l+1), 1/l]. floor(1/M), except that when
/// 1/M is within a relative 1e-12 of an integer k with M k <= 1, k is
/// returned; this absorbs the rounding of 1/k.
inline int l_index_of_max(double M) {
  if (!(M > 0.0 && M <= 1.0)) throw domain_error("l_index: M must lie in (0, 1]");
  const double inv = 1.0 / M;
  const double k = std::round(inv);
  if (std::fabs(inv - k) <= 1e-12 * std::max(1.0, k) && M * k <= 1.0) {
    return static_cast<int>(k);
  }
  return static_cast<int>(std::floor(inv));
}

inline int l_index(const Pmf& f) { return l_index_of_max(f.max_weight()); }

struct ConvolutionOptions {
  std::size_t max_length = std::size_t{1} << 24;
  std::size_t direct_threshold = std::size_t{1} << 16;  // on len(a) * len(b)
};

namespace detail {

inline void check_length(std::size_t la, std::size_t lb, const ConvolutionOptions& opt) {
  if (la + lb - 1 > opt.max_length) {
    throw overflow_error("convolution result length " + std::to_string(la + lb - 1) +
                         " exceeds cap " + std::to_string(opt.max_length));
  }
}

inline std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// FFTW's planner is not thread safe; plan execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct FftwPlanDestroy {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using FftwPlan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDestroy>;

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

inline std::vector<double> convolve_transform(std::span<const double> a, std::span<const double> b) {
  const std::size_t n_out = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < n_out) n <<= 1;
  const std::size_t nc = n / 2 + 1;
  auto ra = fftw_buffer<double>(n);
  auto rb = fftw_buffer<double>(n);
  auto ca = fftw_buffer<fftw_complex>(nc);
  auto cb = fftw_buffer<fftw_complex>(nc);
  std::fill_n(ra.get(), n, 0.0);
  std::fill_n(rb.get(), n, 0.0);
  std::copy(a.begin(), a.end(), ra.get());
  std::copy(b.begin(), b.end(), rb.get());

  FftwPlan pa, pb, pinv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int ni = static_cast<int>(n);
    pa.reset(fftw_plan_dft_r2c_1d(ni, ra.get(), ca.get(), FFTW_ESTIMATE));
    pb.reset(fftw_plan_dft_r2c_1d(ni, rb.get(), cb.get(), FFTW_ESTIMATE));
    pinv.reset(fftw_plan_dft_c2r_1d(ni, ca.get(), ra.get(), FFTW_ESTIMATE));
  }
  fftw_execute(pa.get());
  fftw_execute(pb.get());
  for (std::size_t k = 0; k < nc; ++k) {
    const double re = ca[k][0] * cb[k][0] - ca[k][1] * cb[k][1];
    const double im = ca[k][0] * cb[k][1] + ca[k][1] * cb[k][0];
    ca[k][0] = re;
    ca[k][1] = im;
  }
  fftw_execute(pinv.get());
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<double> out(n_out);
  for (std::size_t i = 0; i < n_out; ++i) out[i] = ra[i] * scale;
  // The extreme weights are single products; set them exactly.
  out.front() = a.front() * b.front();
  out.back() = a.back() * b.back();
  return out;
}

inline constexpr double kNegativeClamp = -1e-15;

/// Clamps transform noise in [-1e-15, 0) to zero and renormalises; larger
/// negatives are an error.
inline void clean_transform_output(std::vector<double>& w) {
  bool clamped = false;
  for (double& x : w) {
    if (x < 0.0) {
      if (x < kNegativeClamp) {
        std::ostringstream os;
        os.precision(17);
        os << "transform convolution produced weight " << x;
        throw domain_error(os.str());
      }
      x = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
  }
}

}  // namespace detail

/// Direct O(len(a) len(b)) convolution.
inline Pmf convolve_direct(const Pmf& a, const Pmf& b, const ConvolutionOptions& opt = {}) {
  detail::check_length(a.size(), b.size(), opt);
  return Pmf::from_weights(a.offset() + b.offset(),
                           detail::convolve_direct(a.weights(), b.weights()),
                           kConvolutionSumTolerance);
}

/// FFT-based convolution (zero padded to a power of two).
inline Pmf convolve_transform(const Pmf& a, const Pmf& b, const ConvolutionOptions& opt = {}) {
  detail::check_length(a.size(), b.size(), opt);
  std::vector<double> w = detail::convolve_transform(a.weights(), b.weights());
  detail::clean_transform_output(w);
  return Pmf::from_weights(a.offset() + b.offset(), std::move(w), kConvolutionSumTolerance);
}

/// Distribution of the independent sum: direct when len(a) len(b) <=
/// opt.direct_threshold, transform-based otherwise.
inline Pmf convolve(const Pmf& a, const Pmf& b, const ConvolutionOptions& opt = {}) {
  if (a.size() * b.size() <= opt.direct_threshold) return convolve_direct(a, b, opt);
  return convolve_transform(a, b, opt);
}

/// Left fold of convolve over a nonempty list.
inline Pmf convolve_all(std::span<const Pmf> pmfs, const ConvolutionOptions& opt = {}) {
  if (pmfs.empty()) throw domain_error("convolve_all: empty list");
  Pmf acc = pmfs.front();
  for (std::size_t i = 1; i < pmfs.size(); ++i) acc = convolve(acc, pmfs[i], opt);
  return acc;
}

}  // namespace lebesgue_lab
