#pragma once

// JSON forms of every record. Doubles are written shortest round-trip, so
// re-parsing reproduces the in-memory values bit for bit.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "epi.hpp"
#include "errors.hpp"
#include "gauss_kronrod.hpp"
#include "kernel.hpp"
#include "np_comparator.hpp"
#include "pmf.hpp"
#include "quadrature.hpp"

NLOHMANN_JSON_NAMESPACE_BEGIN
template <class T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};
NLOHMANN_JSON_NAMESPACE_END

namespace lebesgue_lab {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(TailCutoffPolicy, {
    {TailCutoffPolicy::fixed, "fixed"},
    {TailCutoffPolicy::tol_driven, "tol_driven"},
})

NLOHMANN_JSON_SERIALIZE_ENUM(EpiCase, {
    {EpiCase::holder_split, "holder_split"},
    {EpiCase::single_dominant, "single_dominant"},
})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(QuadratureConfig, abs_tol, rel_tol, max_subdivisions,
                                   tail_cutoff_policy)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(IntegrationResult, value, abs_error, segments, evaluations,
                                   converged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LemmaStep1Report, l, grid_size, max_difference, argmax_x,
                                   violations, ok)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LpNormResult, l, p, value, bound, asymptotic,
                                   abs_error_estimate, converged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CertificationRecord, l, p, value, bound, margin,
                                   error_estimate, passed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BallIntegralResult, p, value, abs_error_estimate, cutoff,
                                   bound, below_bound, converged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AsymptoticRecord, l, p, value, value_error, reference,
                                   reference_error, ratio, ratio_error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SignChangeReport, l, y0, crossings, F0_lt_G0,
                                   G_lt_F_above_y1, F0, y1, y_last, levels)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhiRecord, l, p, y0, int_f, int_g, value, abs_error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RootBound, x, k, abs_derivative, pointwise, intermediate,
                                   bound, ok)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DerivativeBoundRecord, l, y, band, skipped, expected_roots,
                                   found_roots, roots, G_prime, lower_bound, sharpened_bound,
                                   F_prime, slope_ratio, fd_G_prime, fd_rel_error, bounds_ok,
                                   sum_ok, ratio_ok)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EntropySummary, M, H_inf, N_inf)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(HolderChain, ls, exponents, max_uniform_sum, l1_norm,
                                   l1_norm_error, member1, member2, member3, member4,
                                   hausdorff_young_ok, ordered)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RogozinRecord, max_sum, max_uniform_sum, gap, holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EpiReport, lhs, sum_N, rhs_general, rhs_exact_M,
                                   floor_general, floor_exact, split_case, l_min, l_max,
                                   asserted, holds, chain, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Theorem34Report, l, n, lhs, sum_N, constant, rhs,
                                   exact_constant, rhs_exact, ratio, holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EpiBatchEntry, epi, rogozin)

inline void to_json(json& j, const Pmf& f) {
  j = json{{"offset", f.offset()},
           {"weights", std::vector<double>(f.weights().begin(), f.weights().end())}};
}

inline Pmf pmf_from_json(const json& j) {
  return Pmf::from_weights(j.at("offset").get<std::int64_t>(),
                           j.at("weights").get<std::vector<double>>());
}

inline void to_json(json& j, const EpiInstance& inst) {
  j = json{{"seed", inst.seed},
           {"pmfs", inst.pmfs},
           {"l_indices", inst.l_indices},
           {"l_min", inst.l_min},
           {"l_max", inst.l_max},
           {"split_case", inst.split_case}};
}

/// Accepts either a full instance object or a bare array of pmf objects.
/// Derived fields are recomputed from the pmfs.
inline EpiInstance instance_from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("pmfs");
  std::vector<Pmf> pmfs;
  for (const json& e : arr) pmfs.push_back(pmf_from_json(e));
  std::optional<std::uint64_t> seed;
  if (j.is_object() && j.contains("seed")) seed = j.at("seed").get<std::optional<std::uint64_t>>();
  return EpiInstance::from_pmfs(std::move(pmfs), seed);
}

/// A corpus file holds one instance (array of pmfs) or an array of instances.
inline std::vector<EpiInstance> corpus_from_json(const json& j) {
  std::vector<EpiInstance> out;
  if (!j.is_array() || j.empty()) throw domain_error("corpus must be a nonempty JSON array");
  const bool single = j.front().is_object() && j.front().contains("weights");
  if (single) {
    out.push_back(instance_from_json(j));
  } else {
    for (const json& e : j) out.push_back(instance_from_json(e));
  }
  return out;
}

}  // namespace lebesgue_lab
