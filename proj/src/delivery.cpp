#include "cnoma/delivery.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace cnoma {

void BisectionConfig::validate() const {
  if (!(lb >= 0 && lb < ub && std::isfinite(ub))) {
    throw InvalidArgument("bisection bracket must satisfy 0 <= lb < ub");
  }
  if (!(epsilon > 0)) throw InvalidArgument("bisection epsilon must be positive");
}

BisectionConfig default_bisection(const ChannelState& ch, const Eigen::VectorXd& beta) {
  double min_beta = std::numeric_limits<double>::infinity();
  for (double b : beta) {
    if (b < 0 || !std::isfinite(b)) throw InvalidArgument("bit loads must be non-negative");
    if (b > 0) min_beta = std::min(min_beta, b);
  }
  if (!std::isfinite(min_beta)) {
    throw InvalidArgument("every user requests nothing; at least one bit load must be positive");
  }
  const double ub = ch.bandwidth_hz() * capacity(ch.power_budget() / ch.alpha_i()) / min_beta;
  return {0.0, ub, 1e-6 * ub};
}

namespace {

struct Bisection {
  double rho = 0;
  std::optional<PowerAlloc> witness;
  double gap = 0;
};

// Largest rho in [lb, ub] (to within epsilon) whose system is feasible.
Bisection bisect(const BisectionConfig& cfg,
                 const std::function<HalfspaceSystem(double)>& system_at) {
  cfg.validate();
  Feasibility at_lb = feasible(system_at(cfg.lb));
  if (!at_lb) return {0.0, std::nullopt, 0.0};
  if (Feasibility at_ub = feasible(system_at(cfg.ub))) return {cfg.ub, at_ub.witness, 0.0};
  double lb = cfg.lb;
  double ub = cfg.ub;
  std::optional<PowerAlloc> witness = at_lb.witness;
  while (ub - lb >= cfg.epsilon) {
    const double mid = 0.5 * (lb + ub);
    if (Feasibility f = feasible(system_at(mid))) {
      lb = mid;
      witness = f.witness;
    } else {
      ub = mid;
    }
  }
  return {lb, witness, ub - lb};
}

// A target so large that 2^c overflows cannot be met by any finite power.
void add_rate_row(HalfspaceSystem& sys, const Halfspace& h) {
  if (h.normal.allFinite() && std::isfinite(h.offset)) {
    sys.rows.push_back(h);
  } else {
    sys.rows.push_back({Eigen::Vector4d::Zero(), 1.0});
  }
}

void pin_to_zero(HalfspaceSystem& sys, int k) {
  Halfspace h;
  h.normal(k) = -1;
  sys.rows.push_back(h);
}

}  // namespace

HalfspaceSystem region_system(RegionId id, const ChannelState& ch, const DeliveryLoad& load,
                              double rho) {
  const RegionSpec& spec = region_spec(id);
  const double bw = ch.bandwidth_hz();
  HalfspaceSystem sys;
  sys.power_budget = ch.power_budget();
  for (const PowerPredicate& pred : spec.predicates) {
    Halfspace h;
    for (int k = 0; k < 4; ++k) h.normal(k) = pred.coeff[k];
    h.offset = pred.gap_multiple * ch.alpha_gap();
    sys.rows.push_back(h);
  }
  for (const RateBound& b : spec.bounds) {
    const double bits = b.is_sum() ? load.user_total(b.user) : load[*b.signal];
    if (bits <= 0) continue;
    add_rate_row(sys, linearize<double>(b.numerator_mask<double>(), b.interference_mask<double>(),
                                        ch.alpha(b.user), rho * bits / bw));
  }
  for (Signal s : kAllSignals) {
    if (load[s] <= 0) pin_to_zero(sys, index(s));
  }
  return sys;
}

RegionRho rho_star_region(RegionId id, const ChannelState& ch, const DeliveryLoad& load,
                          const BisectionConfig& cfg) {
  const Bisection b =
      bisect(cfg, [&](double rho) { return region_system(id, ch, load, rho); });
  return {b.rho, b.witness, b.gap};
}

DeliverySolution min_delivery_time(const ChannelState& ch, const DeliveryLoad& load,
                                   const BisectionConfig& cfg) {
  if ((load.beta.array() < 0).any()) throw InvalidArgument("bit loads must be non-negative");
  if ((load.beta.array() == 0).all()) {
    throw InvalidArgument("every user requests nothing; at least one bit load must be positive");
  }
  DeliverySolution best;
  std::optional<RegionRho> best_rho;
  for (const RegionId& id : kAllRegions) {
    RegionRho r = rho_star_region(id, ch, load, cfg);
    if (r.rho > 0 && (!best_rho || r.rho > best_rho->rho)) {
      best_rho = r;
      best.region = id;
    }
  }
  if (!best_rho) throw NoSolutionError("no region delivers the load at a positive rate");
  best.rho = best_rho->rho;
  best.delivery_time_s = 1.0 / best.rho;
  best.order = decoding_order(best.region);
  best.p_star = *best_rho->witness;
  best.r_star = best.rho * load.beta / ch.bandwidth_hz();
  best.bracket_gap = best_rho->bracket_gap;
  best.epsilon = cfg.epsilon;
  return best;
}

DeliverySolution min_delivery_time(const ChannelState& ch, const DeliveryLoad& load) {
  return min_delivery_time(ch, load, default_bisection(ch, load.beta));
}

Eigen::Vector2d baseline_bits(const CacheConfig& cache, bool cached) {
  Eigen::Vector2d bits;
  for (User u : {User::i, User::j}) {
    const File f = requested_file(u);
    const double keep = cached ? 1.0 - cache.fraction(u, f) : 1.0;
    bits(index(u)) = keep * cache.file_bits(f);
  }
  return bits;
}

OmaSolution oma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta,
                                  OmaTiming timing) {
  if ((beta.array() < 0).any()) throw InvalidArgument("bit loads must be non-negative");
  const double bw = ch.bandwidth_hz();
  const double mu_i = beta(0) / (bw * capacity(ch.power_budget() / ch.alpha_i()));
  const double mu_j = beta(1) / (bw * capacity(ch.power_budget() / ch.alpha_j()));
  if (mu_i + mu_j == 0) return {0.0, 0.5};
  if (timing == OmaTiming::time_shared) return {mu_i + mu_j, mu_i / (mu_i + mu_j)};
  const double si = std::sqrt(mu_i);
  const double sj = std::sqrt(mu_j);
  return {(si + sj) * (si + sj), si / (si + sj)};
}

NomaSolution noma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta,
                                    const BisectionConfig& cfg) {
  if ((beta.array() < 0).any()) throw InvalidArgument("bit loads must be non-negative");
  const double bw = ch.bandwidth_hz();
  // p(0) = p_i, p(1) = p_j; the other coordinates are unused.
  auto system_at = [&](double rho) {
    HalfspaceSystem sys;
    sys.power_budget = ch.power_budget();
    const Eigen::Vector4d e_i = Eigen::Vector4d::Unit(0);
    const Eigen::Vector4d e_j = Eigen::Vector4d::Unit(1);
    if (beta(0) > 0) {
      add_rate_row(sys, linearize<double>(e_i, Eigen::Vector4d::Zero(), ch.alpha_i(),
                                          rho * beta(0) / bw));
    } else {
      pin_to_zero(sys, 0);
    }
    if (beta(1) > 0) {
      add_rate_row(sys, linearize<double>(e_j, e_i, ch.alpha_j(), rho * beta(1) / bw));
    } else {
      pin_to_zero(sys, 1);
    }
    pin_to_zero(sys, 2);
    pin_to_zero(sys, 3);
    return sys;
  };
  const Bisection b = bisect(cfg, system_at);
  if (!(b.rho > 0)) throw NoSolutionError("NOMA baseline cannot deliver the load");
  return {1.0 / b.rho, b.rho, (*b.witness)(0), (*b.witness)(1), b.gap, cfg.epsilon};
}

NomaSolution noma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta) {
  return noma_min_delivery_time(ch, beta, default_bisection(ch, beta));
}

}  // namespace cnoma
