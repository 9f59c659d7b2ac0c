#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnoma/core_model.hpp"
#include "cnoma/decoding.hpp"

namespace cnoma {

// Region 6 splits on whether UE i can cancel x_B2 before decoding x_A1.
enum class DeltaBranch {
  blocked,  // Delta = 1: x_B2 stays as interference on x_A1
  cancels,  // Delta = 0: x_B2 is decoded and removed first
};

struct RegionId {
  int n = 1;
  std::optional<DeltaBranch> delta;

  // Throws InvalidArgument unless 1 <= n <= 7 and delta is given iff n == 6.
  static RegionId make(int n, std::optional<DeltaBranch> delta = std::nullopt);

  int delta_value() const { return delta == DeltaBranch::blocked ? 1 : 0; }
  // "1".."5", "6a" (Delta = 1), "6b" (Delta = 0), "7".
  std::string label() const;

  friend bool operator==(const RegionId&, const RegionId&) = default;
};

// Search order used by achievable(): lowest n first, Delta = 1 before Delta = 0.
inline const std::array<RegionId, 8> kAllRegions{
    RegionId{1, {}}, RegionId{2, {}}, RegionId{3, {}}, RegionId{4, {}},
    RegionId{5, {}}, RegionId{6, DeltaBranch::blocked}, RegionId{6, DeltaBranch::cancels},
    RegionId{7, {}}};

std::optional<RegionId> parse_region_label(const std::string& label);

// Absolute slack on power-region comparisons; boundary points belong to both sides.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Linear predicate coeff . p >= gap_multiple * (alpha_j - alpha_i). Strict
/// predicates are stored by their closure.
struct PowerPredicate {
  std::array<std::int8_t, 4> coeff;
  std::int8_t gap_multiple;

  template <typename Scalar>
  Scalar margin(const BasicPowerAlloc<Scalar>& p, const BasicChannelState<Scalar>& ch) const {
    Scalar lhs(0);
    for (int k = 0; k < 4; ++k) lhs += Scalar(coeff[k]) * p(k);
    return lhs - Scalar(gap_multiple) * ch.alpha_gap();
  }
};

/// C(num . p / (interference . p + alpha_user)). A per-signal bound has a
/// one-hot numerator; a sum bound covers both of the user's own signals.
struct RateBound {
  User user;
  std::optional<Signal> signal;  // nullopt: sum bound r_k1 + r_k2
  std::array<std::int8_t, 4> interference;

  bool is_sum() const { return !signal.has_value(); }

  template <typename Scalar>
  Vector4<Scalar> numerator_mask() const {
    Vector4<Scalar> m = Vector4<Scalar>::Zero();
    if (signal) {
      m(index(*signal)) = Scalar(1);
    } else {
      for (Signal s : own_signals(user)) m(index(s)) = Scalar(1);
    }
    return m;
  }

  template <typename Scalar>
  Vector4<Scalar> interference_mask() const {
    Vector4<Scalar> m;
    for (int k = 0; k < 4; ++k) m(k) = Scalar(interference[k]);
    return m;
  }

  template <typename Scalar>
  Scalar sinr(const BasicPowerAlloc<Scalar>& p, const BasicChannelState<Scalar>& ch) const {
    return numerator_mask<Scalar>().dot(p) / (interference_mask<Scalar>().dot(p) + ch.alpha(user));
  }

  template <typename Scalar>
  Scalar evaluate(const BasicPowerAlloc<Scalar>& p, const BasicChannelState<Scalar>& ch) const {
    return capacity(sinr(p, ch));
  }
};

struct RegionSpec {
  RegionId id;
  std::vector<PowerPredicate> predicates;  // conjunction; empty means all of C1
  std::vector<RateBound> bounds;
};

const RegionSpec& region_spec(RegionId id);

/// Closure membership of p in the power region (see kBoundaryTolerance).
template <typename Scalar>
bool power_region_contains(RegionId id, const BasicPowerAlloc<Scalar>& p,
                           const BasicChannelState<Scalar>& ch) {
  for (const auto& pred : region_spec(id).predicates) {
    if (pred.margin(p, ch) < Scalar(-kBoundaryTolerance)) return false;
  }
  return true;
}

/// Delta indicator for region 6: 1 iff UE i cannot decode x_B2 ahead of x_A1,
/// i.e. p_i2 < p_i1 - p_j1 - alpha_j + alpha_i. Equality gives 0.
template <typename Scalar>
int delta_indicator(const BasicPowerAlloc<Scalar>& p, const BasicChannelState<Scalar>& ch) {
  return p(1) < p(0) - p(2) - ch.alpha_gap() ? 1 : 0;
}

template <typename Scalar>
struct BasicRateBoundSet {
  Vector4<Scalar> per_signal = Vector4<Scalar>::Zero();
  std::array<std::optional<Scalar>, 2> sum_bound{};

  // Largest r_k1 + r_k2 admitted for user k.
  Scalar user_total(User u) const {
    const auto [s1, s2] = own_signals(u);
    Scalar t = per_signal(index(s1)) + per_signal(index(s2));
    if (const auto& sb = sum_bound[index(u)]; sb && *sb < t) t = *sb;
    return t;
  }

  bool admits(const BasicRateAlloc<Scalar>& r, Scalar tol = Scalar(1e-12)) const {
    if ((r.array() < -tol).any()) return false;
    if ((r - per_signal).maxCoeff() > tol) return false;
    for (User u : {User::i, User::j}) {
      const auto& sb = sum_bound[index(u)];
      const auto [s1, s2] = own_signals(u);
      if (sb && r(index(s1)) + r(index(s2)) > *sb + tol) return false;
    }
    return true;
  }
};

using RateBoundSet = BasicRateBoundSet<double>;

// Bound set without the membership check; callers guarantee p is in the region.
template <typename Scalar>
BasicRateBoundSet<Scalar> rate_bounds_unchecked(RegionId id, const BasicPowerAlloc<Scalar>& p,
                                                const BasicChannelState<Scalar>& ch) {
  BasicRateBoundSet<Scalar> out;
  for (const auto& b : region_spec(id).bounds) {
    const Scalar v = b.evaluate(p, ch);
    if (b.is_sum()) {
      out.sum_bound[index(b.user)] = v;
    } else {
      out.per_signal(index(*b.signal)) = v;
    }
  }
  return out;
}

/// Capacity bounds (per-signal and, where present, per-user sum) of region
/// `id` at power allocation p. Throws RegionMismatchError if p is outside P_n.
template <typename Scalar>
BasicRateBoundSet<Scalar> rate_bounds(RegionId id, const BasicPowerAlloc<Scalar>& p,
                                      const BasicChannelState<Scalar>& ch) {
  if (!power_region_contains(id, p, ch)) {
    throw RegionMismatchError("power allocation lies outside power region " + id.label());
  }
  return rate_bounds_unchecked(id, p, ch);
}

/// First region (in kAllRegions order) whose power set contains p and whose
/// bound set admits r.
template <typename Scalar>
std::optional<RegionId> achievable(const BasicRateAlloc<Scalar>& r,
                                   const BasicPowerAlloc<Scalar>& p,
                                   const BasicChannelState<Scalar>& ch,
                                   Scalar tol = Scalar(1e-12)) {
  for (const RegionId& id : kAllRegions) {
    if (!power_region_contains(id, p, ch)) continue;
    if (rate_bounds_unchecked(id, p, ch).admits(r, tol)) return id;
  }
  return std::nullopt;
}

/// Decoding orders (UE i, UE j) that achieve region `id`.
std::pair<DecodingOrder, DecodingOrder> decoding_order(RegionId id);

struct FrontierPoint {
  double r_i = 0;  // r_i1 + r_i2
  double r_j = 0;  // r_j1 + r_j2
  RegionId region;
};

/// Pareto frontier of per-user sum rates over the union of all regions,
/// sorted by r_i. Powers are enumerated on the C1-tight face
/// sum(p) = P: three coordinates take values from a level set of
/// `grid_points_per_axis` entries and the fourth takes the remainder.
std::vector<FrontierPoint> sweep_region_frontier(const ChannelState& ch,
                                                 int grid_points_per_axis);

/// Power levels used by the frontier sweep: 0, P, and points spaced evenly in
/// interference-free capacity for each user.
std::vector<double> frontier_power_levels(const ChannelState& ch, int count);

// Largest r_j over points with r_i' >= r_i (downward-closed staircase).
// Returns -infinity when r_i exceeds every point.
double staircase_value(std::span<const FrontierPoint> frontier, double r_i);

// Keeps the Pareto-maximal points, sorted by r_i ascending.
std::vector<FrontierPoint> pareto_filter(std::vector<FrontierPoint> points);

}  // namespace cnoma
