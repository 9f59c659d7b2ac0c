#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cnoma/delivery.hpp"
#include "cnoma/rate_region.hpp"
#include "cnoma/scenario.hpp"
#include "cnoma/sic_oracle.hpp"

namespace cnoma {

// ---- rate-region sweep ----

struct RegionRow {
  std::string scheme;  // "oma", "noma", "proposed"
  double r_i = 0;
  double r_j = 0;
};

/// OMA: (tau C_i, (1 - tau) C_j). NOMA: r_i stepped evenly up to
/// C(P/alpha_i) with r_j = C(p_j/(p_i + alpha_j)). Both use `grid` + 1 points at
/// the same r_i values. Proposed: sweep_region_frontier.
std::vector<RegionRow> run_region_sweep(double alpha_i, double alpha_j, double power, int grid);

// ---- Monte-Carlo delivery time ----

inline const std::vector<std::string> kMonteCarloSchemes{"proposed", "b2_cache", "b2_nocache",
                                                         "b1"};

struct DropResult {
  double alpha_i = 0;
  double alpha_j = 0;
  double proposed_s = 0;
  double b2_cache_s = 0;
  double b2_nocache_s = 0;
  double b1_s = 0;
  RegionId region;
  // Relative width of the final bisection bracket, epsilon / rho, per scheme.
  double proposed_rel_gap = 0;
  double b2_cache_rel_gap = 0;
  double b2_nocache_rel_gap = 0;
};

/// All four schemes on one drop, load split from the drop's (relabelled) cache.
/// Bisections stop at 1e-10 * ub.
DropResult solve_drop(const Drop& drop, OmaTiming b1_timing = OmaTiming::time_shared);

struct MonteCarloRow {
  double r_j_km = 0;
  std::string scheme;
  double mean_t_s = 0;
  double ci95_s = 0;
};

struct MonteCarloResult {
  std::vector<MonteCarloRow> rows;
  // Drops breaking proposed <= b2_cache <= b2_nocache or proposed <= b1 by
  // more than the bisection brackets allow.
  int dominance_violations = 0;
  std::vector<std::vector<DropResult>> drops;  // [r_j index][drop index]
};

/// Drop k uses stream (seed, k) for every R_j, so the sweep shares random
/// numbers across R_j. Output is identical for any worker count.
MonteCarloResult run_montecarlo(const ScenarioConfig& cfg, const std::vector<double>& rj_sweep_km);

/// "START:STOP:STEPS" -> STEPS values evenly spaced from START to STOP.
std::vector<double> parse_sweep(const std::string& spec);

// ---- oracle verification ----

struct VerifyOptions {
  int samples = 10000;
  std::uint64_t seed = 1;
  DecodeRule rule = DecodeRule::rate_based;
  double margin = 1e-6;
  // Test hook: the closed form admits r when it admits r / (1 + inflate_bounds).
  double inflate_bounds = 0;
  int max_dumps = 10;
};

struct VerifyReport {
  int samples = 0;
  int agreements = 0;
  int closed_only = 0;  // closed form admits, oracle rejects
  int oracle_only = 0;  // oracle admits, closed form rejects
  int rejected_near_boundary = 0;
  int cross_first_samples = 0;
  int cross_first_feasible = 0;
  std::vector<std::string> dumps;

  int disagreements() const { return closed_only + oracle_only; }
  std::string to_text() const;
};

/// Random channels and powers; rates drawn half inside a region that holds
/// the power vector and half over the interference-free box, discarding
/// samples within `margin` of any closed-form bound or power-region face.
/// Also checks the cross-first decoding pair on `samples` random powers.
VerifyReport run_verify(const VerifyOptions& opts);

// ---- CSV ----

std::string format_double(double v);
void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows);
void write_montecarlo_csv(std::ostream& os, const std::vector<MonteCarloRow>& rows);

}  // namespace cnoma
