// Acceptance checks. Prints one PASS/FAIL line per criterion followed by
// indented details. Usage: acceptance [N]  (N in 1..7, default all).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cnoma/experiments.hpp"
#include "grid_oracle.hpp"

using namespace cnoma;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  violated: " << what << "\n";
    }
  }
};

// ---- 1 ----

Outcome corner_points() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto rows = run_region_sweep(1e-3, 1e-2, 10, 200);
  std::ostringstream csv;
  write_region_csv(csv, rows);
  const double runtime = seconds_since(t0);
  const double ci = capacity(10 / 1e-3), cj = capacity(10 / 1e-2);
  for (const char* scheme : {"oma", "noma", "proposed"}) {
    bool has_i = false, has_j = false;
    for (const RegionRow& r : rows) {
      if (r.scheme != scheme) continue;
      has_i = has_i || (std::abs(r.r_i - ci) <= 0.05 && std::abs(r.r_j) <= 0.05);
      has_j = has_j || (std::abs(r.r_i) <= 0.05 && std::abs(r.r_j - cj) <= 0.05);
    }
    o.require(has_i, std::string(scheme) + " corner (13.29, 0)");
    o.require(has_j, std::string(scheme) + " corner (0, 9.97)");
  }
  o.require(runtime < 10, "runtime < 10 s");
  o.detail << "  corners expected (" << ci << ", 0) and (0, " << cj << "); runtime " << runtime
           << " s\n";
  return o;
}

// ---- 2 ----

Outcome region_nesting() {
  Outcome o;
  const double P = 10, ai = 1e-3, aj = 1e-2;
  const double ci = capacity(P / ai), cj = capacity(P / aj);
  std::vector<FrontierPoint> proposed;
  for (const RegionRow& r : run_region_sweep(ai, aj, P, 200)) {
    if (r.scheme == "proposed") proposed.push_back({r.r_i, r.r_j, RegionId{1, {}}});
  }
  double worst_pn = 1e300, worst_no = 1e300;
  for (int k = 1; k <= 50; ++k) {
    const double ri = ci * k / 51;
    const double p_i = ai * std::expm1(ri * std::log(2.0));
    const double noma = capacity((P - p_i) / (p_i + aj));
    const double oma = (1 - ri / ci) * cj;
    const double prop = staircase_value(proposed, ri);
    worst_pn = std::min(worst_pn, prop - noma);
    worst_no = std::min(worst_no, noma - oma);
    o.require(prop >= noma - 1e-6, "proposed >= NOMA at r_i = " + format_double(ri));
    o.require(noma >= oma - 1e-6, "NOMA >= OMA at r_i = " + format_double(ri));
  }
  o.detail << "  min(proposed - NOMA) " << worst_pn << ", min(NOMA - OMA) " << worst_no << "\n";
  return o;
}

// ---- 3 ----

Outcome oracle_equivalence() {
  Outcome o;
  VerifyOptions opts;
  opts.samples = 10000;
  opts.seed = 1;
  opts.margin = 1e-6;
  const auto t0 = Clock::now();
  const VerifyReport rep = run_verify(opts);
  const double runtime = seconds_since(t0);
  o.require(rep.disagreements() == 0, "zero disagreements");
  o.require(rep.cross_first_samples >= 10000 && rep.cross_first_feasible == 0,
            "cross-first pair infeasible on every sample");
  o.require(runtime < 60, "runtime < 60 s");
  o.detail << "  samples " << rep.samples << ", agreements " << rep.agreements
           << ", closed_only " << rep.closed_only << ", oracle_only " << rep.oracle_only
           << ", near-boundary rejections " << rep.rejected_near_boundary << "\n"
           << "  cross-first feasible " << rep.cross_first_feasible << " of "
           << rep.cross_first_samples << "; runtime " << runtime << " s\n";
  for (std::size_t k = 0; k < std::min<std::size_t>(3, rep.dumps.size()); ++k) {
    o.detail << "  " << rep.dumps[k] << "\n";
  }
  return o;
}

// ---- shared instances for 4 and 7 ----

struct Instance {
  ChannelState ch;
  DeliveryLoad load;
};

CacheConfig random_case_one_cache(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    const CacheConfig c = CacheConfig::uniform(u(gen), u(gen), u(gen), u(gen), 1.0);
    if (classify_cache_case(c) == CacheCase::I) return c;
  }
}

std::vector<Instance> random_instances(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Instance> out;
  while (static_cast<int>(out.size()) < n) {
    const double ai = std::pow(10.0, -2 + u(gen));
    const double ratio = 2 * std::pow(50.0, u(gen));
    const DeliveryLoad load = split_files(random_case_one_cache(gen));
    if ((load.beta.array() == 0).all()) continue;
    out.push_back({ChannelState(ai, ai * ratio, 1.0), load});
  }
  return out;
}

// ---- 4 ----

Outcome optimizer_vs_grid() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0;
  int k = 0;
  for (const Instance& in : random_instances(20, 4)) {
    const DeliverySolution s = min_delivery_time(in.ch, in.load);
    const testing::GridOptimum g = testing::grid_rho_star(in.ch, in.load, 200);
    const double t_grid = 1 / g.rho;
    const double rel = std::abs(s.delivery_time_s - t_grid) / t_grid;
    worst = std::max(worst, rel);
    o.require(rel <= 0.02, "instance " + std::to_string(k) + " within 2%");
    ++k;
  }
  const double runtime = seconds_since(t0);
  o.require(runtime < 300, "runtime < 5 min");
  o.detail << "  worst |T_lp - T_grid| / T_grid " << worst << "; runtime " << runtime << " s\n";
  return o;
}

// ---- 5 ----

Outcome degeneration() {
  Outcome o;
  ScenarioConfig cfg;
  cfg.c_iA = cfg.c_iB = cfg.c_jA = cfg.c_jB = 0;
  double worst = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    DropRng rng(cfg.seed, k);
    const Drop d = gen_drop(cfg, rng);
    const DeliveryLoad load = split_files(d.cache);
    const Eigen::Vector2d bits = baseline_bits(d.cache, false);
    // One bracket for both so the comparison is limited by the same epsilon.
    BisectionConfig bc = default_bisection(d.channel, load.beta);
    bc.epsilon = 1e-9 * bc.ub;
    const double t = min_delivery_time(d.channel, load, bc).delivery_time_s;
    const double t_noma = noma_min_delivery_time(d.channel, bits, bc).delivery_time_s;
    const double rel = std::abs(t - t_noma) / t_noma;
    worst = std::max(worst, rel);
    o.require(rel <= 1e-4, "drop " + std::to_string(k) + " within 1e-4");
  }
  o.detail << "  worst relative difference " << worst << "\n";
  return o;
}

// ---- 6 ----

Outcome montecarlo_trends() {
  Outcome o;
  ScenarioConfig cfg;
  cfg.drops = 500;
  cfg.seed = 1;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<double> rj{0.2, 0.6, 1.0, 1.4, 2.0};
  const auto t0 = Clock::now();
  const MonteCarloResult res = run_montecarlo(cfg, rj);
  const double runtime = seconds_since(t0);

  const auto mean = [&](const MonteCarloResult& m, std::size_t r, const std::string& scheme) {
    for (const MonteCarloRow& row : m.rows) {
      if (row.r_j_km == rj[r] && row.scheme == scheme) return row.mean_t_s;
    }
    return std::nan("");
  };
  std::vector<std::string> violations;
  const auto check = [&](bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  };
  for (const std::string& s : kMonteCarloSchemes) {
    for (std::size_t r = 1; r < rj.size(); ++r) {
      check(mean(res, r, s) >= mean(res, r - 1, s),
            "(a) " + s + " non-decreasing at R_j = " + format_double(rj[r]));
    }
  }
  o.detail << "  R_j   proposed    b2_cache    b2_nocache  b1          | b2nc<b1 %  extra pp  prop<b1 %\n";
  for (std::size_t r = 0; r < rj.size(); ++r) {
    const double p = mean(res, r, "proposed"), c = mean(res, r, "b2_cache"),
                 n = mean(res, r, "b2_nocache"), b = mean(res, r, "b1");
    const double nocache_red = 100 * (b - n) / b;
    const double extra = 100 * (n - c) / b;
    const double prop_red = 100 * (b - p) / b;
    const std::string at = " at R_j = " + format_double(rj[r]);
    check(p < c && c < n && n < b, "strict ordering proposed < b2_cache < b2_nocache < b1" + at);
    check(nocache_red >= 30 && nocache_red <= 60, "(b) b2_nocache 30-60% below b1" + at);
    check(extra >= 5 && extra <= 20, "(c) b2_cache further 5-20 pp" + at);
    check(prop_red >= 70 && prop_red <= 90, "(d) proposed 70-90% below b1" + at);
    char line[200];
    std::snprintf(line, sizeof line,
                  "  %-4g  %-10.4g  %-10.4g  %-10.4g  %-10.4g  | %9.1f  %8.1f  %9.1f\n", rj[r], p,
                  c, n, b, nocache_red, extra, prop_red);
    o.detail << line;
  }
  for (const std::string& v : violations) o.require(false, v);

  // Same drops with B1 under simultaneous time sharing, for reference only.
  ScenarioConfig shared = cfg;
  shared.b1_timing = OmaTiming::time_shared;
  const MonteCarloResult alt = run_montecarlo(shared, rj);
  o.detail << "  b1 time-shared form: proposed / b2_nocache below b1 %";
  for (std::size_t r = 0; r < rj.size(); ++r) {
    const double b = mean(alt, r, "b1");
    char cell[64];
    std::snprintf(cell, sizeof cell, "  %g km: %.1f / %.1f", rj[r],
                  100 * (b - mean(alt, r, "proposed")) / b, 100 * (b - mean(alt, r, "b2_nocache")) / b);
    o.detail << cell;
  }
  o.detail << "\n";
  o.require(runtime < 600, "runtime < 10 min");
  o.detail << "  dominance violations " << res.dominance_violations << "; runtime " << runtime
           << " s\n";
  return o;
}

// ---- 7 ----

Outcome bisection_contract() {
  Outcome o;
  std::vector<Instance> cases = random_instances(20, 7);
  ScenarioConfig cfg;
  for (std::uint64_t k = 0; k < 20; ++k) {
    DropRng rng(cfg.seed, k);
    const Drop d = gen_drop(cfg, rng);
    cases.push_back({d.channel, split_files(d.cache)});
  }
  int solved = 0, perturbed = 0;
  for (const Instance& in : cases) {
    const BisectionConfig bc = default_bisection(in.ch, in.load.beta);
    const DeliverySolution s = min_delivery_time(in.ch, in.load, bc);
    ++solved;
    o.require(s.bracket_gap < bc.epsilon, "final bracket gap < epsilon");
    for (Signal sig : kAllSignals) {
      const double delivered = s.r_star(index(sig)) * in.ch.bandwidth_hz() * s.delivery_time_s;
      o.require(delivered >= in.load[sig] * (1 - 1e-6), "every bit delivered within T");
    }
    const RateBoundSet b = rate_bounds_unchecked(s.region, s.p_star, in.ch);
    o.require(b.admits(s.r_star, 1e-6 * s.r_star.maxCoeff()), "r* within the region at p*");
    for (int k = 0; k < 4; ++k) {
      if (in.load.beta(k) <= 0) continue;
      DeliveryLoad more = in.load;
      more.beta(k) *= 1.1;
      const DeliverySolution t = min_delivery_time(in.ch, more, bc);
      ++perturbed;
      o.require(t.rho <= s.rho, "rho non-increasing under a 10% larger load");
    }
  }
  o.detail << "  " << solved << " instances, " << perturbed << " load perturbations\n";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"corner points of all three regions", corner_points},
      {"region nesting proposed >= NOMA >= OMA", region_nesting},
      {"closed-form regions match the decoding oracle", oracle_equivalence},
      {"optimizer matches a brute-force power grid", optimizer_vs_grid},
      {"zero cache reduces to uncached NOMA", degeneration},
      {"Monte-Carlo delivery-time trends", montecarlo_trends},
      {"bisection contract", bisection_contract},
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && static_cast<int>(k) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "  exception: " << e.what() << "\n";
    }
    std::printf("%s %zu: %s\n%s", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.str().c_str());
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
