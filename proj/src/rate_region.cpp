#include "cnoma/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnoma {

namespace {

using Mask = std::array<std::int8_t, 4>;
constexpr Mask kNone{0, 0, 0, 0};

RateBound per_signal(Signal s, Mask interference) { return {owner(s), s, interference}; }
RateBound sum_of(User u, Mask interference) { return {u, std::nullopt, interference}; }

// Coordinates: A1 = p_i1, A2 = p_i2, B1 = p_j1, B2 = p_j2.
std::vector<RegionSpec> build_region_table() {
  using enum Signal;
  const PowerPredicate p2{{0, 0, -1, 1}, 1};    // p_j2 - p_j1 > gap
  const PowerPredicate p3{{-1, 0, 0, 0}, -1};   // p_i1 < gap
  const PowerPredicate p4{{1, 0, 0, 0}, 1};     // complement of P3
  const PowerPredicate p5{{-1, 0, 1, 0}, -1};   // p_i1 < p_j1 + gap
  const PowerPredicate p67{{1, 0, -1, 0}, 1};   // complement of P5
  const PowerPredicate blocked{{1, -1, -1, 0}, 1};   // p_i2 < p_i1 - p_j1 - gap
  const PowerPredicate cancels{{-1, 1, 1, 0}, -1};   // p_i2 >= p_i1 - p_j1 - gap

  const Mask a2_b2{0, 1, 0, 1};
  const Mask a2{0, 1, 0, 0};
  const Mask b2{0, 0, 0, 1};
  const Mask a1_b2{1, 0, 0, 1};
  const Mask a2_b1{0, 1, 1, 0};

  std::vector<RegionSpec> t;
  t.push_back({RegionId{1, {}},
               {},
               {per_signal(A1, a2_b2), per_signal(A2, kNone), per_signal(B1, a2),
                per_signal(B2, a2), sum_of(User::j, a2)}});
  t.push_back({RegionId{2, {}},
               {p2},
               {per_signal(A1, a2_b2), per_signal(A2, b2), per_signal(B1, kNone),
                per_signal(B2, a2_b1)}});
  t.push_back({RegionId{3, {}},
               {p3},
               {per_signal(A1, kNone), per_signal(A2, kNone), sum_of(User::i, kNone),
                per_signal(B1, a2_b2), per_signal(B2, a2)}});
  t.push_back({RegionId{4, {}},
               {p4},
               {per_signal(A1, b2), per_signal(A2, a1_b2), per_signal(B1, a2_b2),
                per_signal(B2, kNone)}});
  t.push_back({RegionId{5, {}},
               {p5},
               {per_signal(A1, kNone), per_signal(A2, kNone), sum_of(User::i, kNone),
                per_signal(B1, a2), per_signal(B2, a2_b1)}});
  t.push_back({RegionId{6, DeltaBranch::blocked},
               {p67, blocked},
               {per_signal(A1, b2), per_signal(A2, a1_b2), per_signal(B1, kNone),
                per_signal(B2, a2_b1)}});
  t.push_back({RegionId{6, DeltaBranch::cancels},
               {p67, cancels},
               {per_signal(A1, kNone), per_signal(A2, a1_b2), per_signal(B1, kNone),
                per_signal(B2, a2_b1)}});
  t.push_back({RegionId{7, {}},
               {p67},
               {per_signal(A1, b2), per_signal(A2, a1_b2), per_signal(B1, kNone),
                per_signal(B2, kNone), sum_of(User::j, kNone)}});
  return t;
}

int table_index(RegionId id) {
  if (id.n < 6) return id.n - 1;
  if (id.n == 6) return id.delta == DeltaBranch::cancels ? 6 : 5;
  return 7;
}

}  // namespace

RegionId RegionId::make(int n, std::optional<DeltaBranch> delta) {
  if (n < 1 || n > 7) throw InvalidArgument("region index must be in 1..7");
  if ((n == 6) != delta.has_value()) {
    throw InvalidArgument("a Delta branch is required for region 6 and only for region 6");
  }
  return RegionId{n, delta};
}

std::string RegionId::label() const {
  std::string s = std::to_string(n);
  if (delta) s += (*delta == DeltaBranch::blocked ? "a" : "b");
  return s;
}

std::optional<RegionId> parse_region_label(const std::string& label) {
  for (const RegionId& id : kAllRegions) {
    if (id.label() == label) return id;
  }
  return std::nullopt;
}

const RegionSpec& region_spec(RegionId id) {
  static const std::vector<RegionSpec> table = build_region_table();
  return table.at(static_cast<std::size_t>(table_index(id)));
}

std::string to_string(const DecodingOrder& order) {
  std::string out;
  for (const DecodeStep& step : order) {
    if (!out.empty()) out += " -> ";
    if (step.is_joint()) {
      out += "(" + std::string(name(step.first)) + "," + std::string(name(*step.second)) + ")";
    } else {
      out += name(step.first);
    }
  }
  return out;
}

std::pair<DecodingOrder, DecodingOrder> decoding_order(RegionId id) {
  using enum Signal;
  const auto s = DecodeStep::single;
  const auto j = DecodeStep::joint;
  switch (id.n) {
    case 1: return {{s(A1), s(B2), s(A2)}, {j(B1, B2)}};
    // x_B2 must leave UE j's signal before x_A2 can be removed ahead of x_B1.
    case 2: return {{s(A1), s(A2)}, {s(B2), s(A2), s(B1)}};
    case 3: return {{s(B2), j(A1, A2)}, {s(B1), s(B2)}};
    case 4: return {{s(A2), s(A1)}, {s(B1), s(A2), s(B2)}};
    case 5: return {{s(B2), j(A1, A2)}, {s(B2), s(B1)}};
    // x_A2 leaves UE j's signal before the interference-free x_B1.
    case 6:
      if (id.delta == DeltaBranch::blocked) return {{s(A2), s(A1)}, {s(B2), s(A2), s(B1)}};
      return {{s(A2), s(B2), s(A1)}, {s(B2), s(A2), s(B1)}};
    case 7: return {{s(A2), s(A1)}, {s(A2), j(B1, B2)}};
    default: break;
  }
  throw InvalidArgument("unknown region " + id.label());
}

std::vector<double> frontier_power_levels(const ChannelState& ch, int count) {
  if (count < 2) throw InvalidArgument("frontier sweep needs at least 2 grid points per axis");
  const double P = ch.power_budget();
  std::vector<double> levels{0.0, P};
  const int n_i = count / 2;
  const int n_j = count - n_i;
  for (auto [alpha, n] : {std::pair{ch.alpha_i(), n_i}, std::pair{ch.alpha_j(), n_j}}) {
    if (n < 2) continue;
    // Evenly spaced in C(level / alpha) from 0 to C(P / alpha).
    const double top = std::log1p(P / alpha);
    for (int k = 1; k + 1 < n; ++k) {
      levels.push_back(alpha * std::expm1(top * k / (n - 1)));
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [P](double a, double b) { return b - a <= 1e-15 * P; }),
               levels.end());
  return levels;
}

namespace {

// Flattened bound: SINR = num . p / (interf . p + noise).
struct FlatBound {
  std::array<double, 4> num;
  std::array<double, 4> interf;
  double noise;
};

struct FlatUser {
  std::vector<FlatBound> singles;
  std::optional<FlatBound> sum;
};

struct FlatRegion {
  RegionId id;
  std::vector<std::pair<std::array<double, 4>, double>> predicates;  // coeff . p >= rhs
  std::array<FlatUser, 2> users;
};

inline double dot4(const std::array<double, 4>& a, const double* p) {
  return a[0] * p[0] + a[1] * p[1] + a[2] * p[2] + a[3] * p[3];
}

inline double sinr(const FlatBound& b, const double* p) {
  return dot4(b.num, p) / (dot4(b.interf, p) + b.noise);
}

// 2^(user total): product over singles, capped by the sum bound.
inline double total_growth(const FlatUser& u, const double* p) {
  double g = 1.0;
  for (const FlatBound& b : u.singles) g *= 1.0 + sinr(b, p);
  if (u.sum) g = std::min(g, 1.0 + sinr(*u.sum, p));
  return g;
}

std::vector<FlatRegion> flatten(const ChannelState& ch) {
  std::vector<FlatRegion> out;
  for (const RegionId& id : kAllRegions) {
    const RegionSpec& spec = region_spec(id);
    FlatRegion fr{id, {}, {}};
    for (const auto& pred : spec.predicates) {
      std::array<double, 4> c{};
      for (int k = 0; k < 4; ++k) c[k] = pred.coeff[k];
      fr.predicates.emplace_back(c, pred.gap_multiple * ch.alpha_gap() - kBoundaryTolerance);
    }
    for (const RateBound& b : spec.bounds) {
      FlatBound fb{};
      const Eigen::Vector4d num = b.numerator_mask<double>();
      for (int k = 0; k < 4; ++k) {
        fb.num[k] = num(k);
        fb.interf[k] = b.interference[k];
      }
      fb.noise = ch.alpha(b.user);
      FlatUser& fu = fr.users[index(b.user)];
      if (b.is_sum()) {
        fu.sum = fb;
      } else {
        fu.singles.push_back(fb);
      }
    }
    out.push_back(std::move(fr));
  }
  return out;
}

}  // namespace

std::vector<FrontierPoint> pareto_filter(std::vector<FrontierPoint> points) {
  std::sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    return a.r_i != b.r_i ? a.r_i > b.r_i : a.r_j > b.r_j;
  });
  std::vector<FrontierPoint> kept;
  double best_rj = -std::numeric_limits<double>::infinity();
  for (const FrontierPoint& pt : points) {
    if (pt.r_j > best_rj) {
      kept.push_back(pt);
      best_rj = pt.r_j;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

double staircase_value(std::span<const FrontierPoint> frontier, double r_i) {
  double best = -std::numeric_limits<double>::infinity();
  for (const FrontierPoint& pt : frontier) {
    if (pt.r_i >= r_i) best = std::max(best, pt.r_j);
  }
  return best;
}

std::vector<FrontierPoint> sweep_region_frontier(const ChannelState& ch,
                                                 int grid_points_per_axis) {
  const std::vector<double> levels = frontier_power_levels(ch, grid_points_per_axis);
  const std::vector<FlatRegion> regions = flatten(ch);
  const double P = ch.power_budget();
  const double ri_max = capacity(P / ch.alpha_i());

  // Per-bin best r_j, binned on r_i; the bins only thin out the candidate set.
  const int n_bins = 16 * grid_points_per_axis;
  struct Bin {
    double growth_j = 0;  // 2^r_j, 0 = empty
    double r_i = 0;
    int region = 0;
  };
  std::vector<Bin> bins(static_cast<std::size_t>(n_bins));
  const double bin_scale = n_bins / ri_max;

  auto consider = [&](const double* p) {
    for (std::size_t ri = 0; ri < regions.size(); ++ri) {
      const FlatRegion& reg = regions[ri];
      bool inside = true;
      for (const auto& [c, rhs] : reg.predicates) {
        if (dot4(c, p) < rhs) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      const double gj = total_growth(reg.users[1], p);
      const double r_i = std::log2(total_growth(reg.users[0], p));
      const int b = std::clamp(static_cast<int>(r_i * bin_scale), 0, n_bins - 1);
      Bin& bin = bins[static_cast<std::size_t>(b)];
      if (gj > bin.growth_j || (gj == bin.growth_j && r_i > bin.r_i)) {
        bin = {gj, r_i, static_cast<int>(ri)};
      }
    }
  };

  const std::size_t n = levels.size();
  double p[4];
  for (int rem = 0; rem < 4; ++rem) {
    int axes[3];
    for (int k = 0, m = 0; k < 4; ++k) {
      if (k != rem) axes[m++] = k;
    }
    for (std::size_t a = 0; a < n; ++a) {
      const double la = levels[a];
      for (std::size_t b = 0; b < n && la + levels[b] <= P; ++b) {
        const double lb = levels[b];
        for (std::size_t c = 0; c < n && la + lb + levels[c] <= P; ++c) {
          p[axes[0]] = la;
          p[axes[1]] = lb;
          p[axes[2]] = levels[c];
          p[rem] = std::max(0.0, P - (la + lb + levels[c]));
          consider(p);
        }
      }
    }
  }

  std::vector<FrontierPoint> candidates;
  candidates.reserve(bins.size() + 2);
  for (const Bin& bin : bins) {
    if (bin.growth_j > 0) {
      candidates.push_back(
          {bin.r_i, std::log2(bin.growth_j), regions[static_cast<std::size_t>(bin.region)].id});
    }
  }
  // Single-user corners: all power on x_A2 (resp. x_B1), region 1.
  candidates.push_back({ri_max, 0.0, RegionId{1, {}}});
  candidates.push_back({0.0, capacity(P / ch.alpha_j()), RegionId{1, {}}});
  return pareto_filter(std::move(candidates));
}

}  // namespace cnoma
