#pragma once

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

#include "cnoma/core_model.hpp"
#include "cnoma/lp_feasibility.hpp"
#include "cnoma/rate_region.hpp"

namespace cnoma {

/// Bracket and termination gap for the bisection over rho = 1/T (1/s).
struct BisectionConfig {
  double lb = 0;
  double ub = 1;
  double epsilon = 1e-6;

  void validate() const;
};

/// lb = 0, ub = bandwidth * C(P/alpha_i) / (smallest positive beta),
/// epsilon = 1e-6 * ub. Throws InvalidArgument if every beta is zero.
BisectionConfig default_bisection(const ChannelState& ch, const Eigen::VectorXd& beta);

struct RegionRho {
  double rho = 0;  // 0 when the region admits no positive rate
  std::optional<PowerAlloc> witness;
  double bracket_gap = 0;
};

/// Halfspace system "region `id` delivers load at rate rho": per-signal and
/// sum bounds linearized at rho * beta / bandwidth, the closure of the power
/// region, and p = 0 for every signal with beta = 0.
HalfspaceSystem region_system(RegionId id, const ChannelState& ch, const DeliveryLoad& load,
                              double rho);

RegionRho rho_star_region(RegionId id, const ChannelState& ch, const DeliveryLoad& load,
                          const BisectionConfig& cfg);

struct DeliverySolution {
  double delivery_time_s = 0;
  double rho = 0;
  RegionId region;
  std::pair<DecodingOrder, DecodingOrder> order;
  PowerAlloc p_star = PowerAlloc::Zero();
  RateAlloc r_star = RateAlloc::Zero();  // bit/s/Hz
  double bracket_gap = 0;
  double epsilon = 0;
};

/// T* = 1 / max_n rho*_n over every region and Delta branch. Throws
/// InvalidArgument for an all-zero load and NoSolutionError if no region
/// delivers at a positive rate.
DeliverySolution min_delivery_time(const ChannelState& ch, const DeliveryLoad& load,
                                   const BisectionConfig& cfg);
DeliverySolution min_delivery_time(const ChannelState& ch, const DeliveryLoad& load);

/// Per-user bits for the baselines: (1 - c_kf) V_f with caching, V_f without.
Eigen::Vector2d baseline_bits(const CacheConfig& cache, bool cached);

enum class OmaTiming {
  // T = max(mu_i / tau, mu_j / (1 - tau)), optimum mu_i + mu_j.
  time_shared,
  // T = mu_i / tau + mu_j / (1 - tau), optimum (sqrt(mu_i) + sqrt(mu_j))^2.
  sequential,
};

struct OmaSolution {
  double delivery_time_s = 0;
  double tau = 0;  // fraction of time given to UE i
};

/// TDMA with interference-free rates, mu_k = beta_k / (bandwidth C(P/alpha_k)).
/// time_shared: tau* = mu_i / (mu_i + mu_j). sequential: tau* = sqrt(mu_i) /
/// (sqrt(mu_i) + sqrt(mu_j)).
OmaSolution oma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta,
                                  OmaTiming timing = OmaTiming::time_shared);

struct NomaSolution {
  double delivery_time_s = 0;
  double rho = 0;
  double p_i = 0;
  double p_j = 0;
  double bracket_gap = 0;
  double epsilon = 0;
};

/// Two-codeword NOMA, UE i removing x_B before decoding x_A:
/// r_i <= C(p_i/alpha_i), r_j <= C(p_j/(p_i+alpha_j)), p_i + p_j <= P.
NomaSolution noma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta,
                                    const BisectionConfig& cfg);
NomaSolution noma_min_delivery_time(const ChannelState& ch, const Eigen::Vector2d& beta);

}  // namespace cnoma
