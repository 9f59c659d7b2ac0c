#include "cnoma/experiments.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

namespace cnoma {

// ---- rate-region sweep ----

std::vector<RegionRow> run_region_sweep(double alpha_i, double alpha_j, double power, int grid) {
  if (grid < 2) throw InvalidArgument("grid must be at least 2");
  const ChannelState ch(alpha_i, alpha_j, power);
  const double c_i = capacity(power / alpha_i);
  const double c_j = capacity(power / alpha_j);
  std::vector<RegionRow> rows;
  for (int k = 0; k <= grid; ++k) {
    const double tau = static_cast<double>(k) / grid;
    rows.push_back({"oma", tau * c_i, (1 - tau) * c_j});
  }
  for (int k = 0; k <= grid; ++k) {
    const double r_i = c_i * k / grid;
    const double p_i = std::min(power, alpha_i * std::expm1(r_i * std::log(2.0)));
    const double p_j = std::max(0.0, power - p_i);
    rows.push_back({"noma", r_i, capacity(p_j / (p_i + alpha_j))});
  }
  for (const FrontierPoint& pt : sweep_region_frontier(ch, grid)) {
    rows.push_back({"proposed", pt.r_i, pt.r_j});
  }
  return rows;
}

// ---- Monte-Carlo ----

namespace {

// Deep fades put rho far below the bracket's upper end, where 1e-6 * ub is a
// coarse relative tolerance; those drops dominate the mean delivery time.
BisectionConfig drop_bisection(const ChannelState& ch, const Eigen::VectorXd& beta) {
  BisectionConfig cfg = default_bisection(ch, beta);
  cfg.epsilon = 1e-10 * cfg.ub;
  return cfg;
}

}  // namespace

DropResult solve_drop(const Drop& drop, OmaTiming b1_timing) {
  const ChannelState& ch = drop.channel;
  DropResult out;
  out.alpha_i = ch.alpha_i();
  out.alpha_j = ch.alpha_j();
  const DeliveryLoad load = split_files(drop.cache);
  const DeliverySolution proposed = min_delivery_time(ch, load, drop_bisection(ch, load.beta));
  out.proposed_s = proposed.delivery_time_s;
  out.region = proposed.region;
  out.proposed_rel_gap = proposed.epsilon / proposed.rho;
  const Eigen::Vector2d cached_bits = baseline_bits(drop.cache, true);
  const NomaSolution cached =
      noma_min_delivery_time(ch, cached_bits, drop_bisection(ch, cached_bits));
  out.b2_cache_s = cached.delivery_time_s;
  out.b2_cache_rel_gap = cached.epsilon / cached.rho;
  const Eigen::Vector2d uncached_bits = baseline_bits(drop.cache, false);
  const NomaSolution uncached =
      noma_min_delivery_time(ch, uncached_bits, drop_bisection(ch, uncached_bits));
  out.b2_nocache_s = uncached.delivery_time_s;
  out.b2_nocache_rel_gap = uncached.epsilon / uncached.rho;
  out.b1_s =
      oma_min_delivery_time(ch, baseline_bits(drop.cache, true), b1_timing).delivery_time_s;
  return out;
}

namespace {

// Each bisection returns a rho up to epsilon below its optimum.
bool dominance_holds(const DropResult& d) {
  const auto le = [](double a, double gap_a, double b, double gap_b) {
    return a <= b * (1 + gap_a + gap_b + 1e-9);
  };
  return le(d.proposed_s, d.proposed_rel_gap, d.b2_cache_s, d.b2_cache_rel_gap) &&
         le(d.b2_cache_s, d.b2_cache_rel_gap, d.b2_nocache_s, d.b2_nocache_rel_gap) &&
         le(d.proposed_s, d.proposed_rel_gap, d.b1_s, 0);
}

std::pair<double, double> mean_ci95(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, 1.96 * std::sqrt(ss / (n - 1)) / std::sqrt(n)};
}

}  // namespace

MonteCarloResult run_montecarlo(const ScenarioConfig& cfg,
                                const std::vector<double>& rj_sweep_km) {
  cfg.validate();
  MonteCarloResult result;
  const auto n_drops = static_cast<std::size_t>(cfg.drops);
  for (double rj : rj_sweep_km) {
    ScenarioConfig point = cfg;
    point.r_j_km = rj;
    point.validate();
    std::vector<DropResult> drops(n_drops);
    auto work = [&](std::size_t first, std::size_t stride) {
      for (std::size_t k = first; k < n_drops; k += stride) {
        DropRng rng(cfg.seed, k);
        drops[k] = solve_drop(gen_drop(point, rng), cfg.b1_timing);
      }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, cfg.workers));
    if (workers == 1) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            work(w, workers);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    std::vector<std::vector<double>> times(4);
    for (const DropResult& d : drops) {
      if (!dominance_holds(d)) ++result.dominance_violations;
      times[0].push_back(d.proposed_s);
      times[1].push_back(d.b2_cache_s);
      times[2].push_back(d.b2_nocache_s);
      times[3].push_back(d.b1_s);
    }
    for (std::size_t s = 0; s < kMonteCarloSchemes.size(); ++s) {
      const auto [mean, ci] = mean_ci95(times[s]);
      result.rows.push_back({rj, kMonteCarloSchemes[s], mean, ci});
    }
    result.drops.push_back(std::move(drops));
  }
  return result;
}

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("sweep must be START:STOP:STEPS");
  double start = 0, stop = 0;
  int steps = 0;
  try {
    std::size_t used = 0;
    start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("start");
    stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("stop");
    steps = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("steps");
  } catch (const std::exception&) {
    throw ConfigError("sweep must be START:STOP:STEPS with numeric fields, got '" + spec + "'");
  }
  if (steps < 1) throw ConfigError("sweep STEPS must be at least 1");
  if (steps == 1) return {start};
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) {
    out.push_back(k == steps - 1 ? stop : start + (stop - start) * k / (steps - 1));
  }
  return out;
}

// ---- verification ----

namespace {

struct VerifySample {
  ChannelState ch;
  PowerAlloc p;
};

VerifySample draw_channel_and_power(DropRng& rng) {
  const double alpha_i = std::pow(10.0, -3.0 + 2.0 * rng.uniform());
  const double alpha_j = alpha_i * std::pow(10.0, 0.05 + 1.95 * rng.uniform());
  const double P = 1.0;
  // Uniform over {p >= 0, sum(p) <= P}: first four of a flat 5-part split.
  std::array<double, 5> e{};
  double total = 0;
  for (double& x : e) total += (x = rng.exponential());
  PowerAlloc p;
  for (int k = 0; k < 4; ++k) p(k) = P * e[static_cast<std::size_t>(k)] / total;
  return {ChannelState(alpha_i, alpha_j, P), p};
}

PowerPredicate delta_predicate(DeltaBranch b) {
  return b == DeltaBranch::blocked ? PowerPredicate{{1, -1, -1, 0}, 1}
                                   : PowerPredicate{{-1, 1, 1, 0}, -1};
}

bool near_power_face(const PowerAlloc& p, const ChannelState& ch, double margin) {
  for (const RegionId& id : kAllRegions) {
    for (const PowerPredicate& pred : region_spec(id).predicates) {
      if (std::abs(pred.margin(p, ch)) < margin) return true;
    }
  }
  return std::abs(delta_predicate(DeltaBranch::blocked).margin(p, ch)) < margin;
}

bool near_rate_face(const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
                    double margin) {
  for (const RegionId& id : kAllRegions) {
    if (!power_region_contains(id, p, ch)) continue;
    const RateBoundSet b = rate_bounds_unchecked(id, p, ch);
    if (((r - b.per_signal).array().abs() < margin).any()) return true;
    for (User u : {User::i, User::j}) {
      const auto [s1, s2] = own_signals(u);
      if (const auto& sb = b.sum_bound[index(u)];
          sb && std::abs(r(index(s1)) + r(index(s2)) - *sb) < margin) {
        return true;
      }
    }
  }
  return false;
}

RateAlloc draw_inside(const PowerAlloc& p, const ChannelState& ch, DropRng& rng) {
  std::vector<RegionId> holding;
  for (const RegionId& id : kAllRegions) {
    if (power_region_contains(id, p, ch)) holding.push_back(id);
  }
  const auto pick = std::min(holding.size() - 1,
                             static_cast<std::size_t>(rng.uniform() * holding.size()));
  const RateBoundSet b = rate_bounds_unchecked(holding[pick], p, ch);
  RateAlloc r;
  // Rejection from the bounding box; sum bounds keep at least half of it.
  for (int tries = 0; tries < 64; ++tries) {
    for (int k = 0; k < 4; ++k) r(k) = rng.uniform() * b.per_signal(k);
    if (b.admits(r)) return r;
  }
  return RateAlloc::Zero();
}

RateAlloc draw_box(const PowerAlloc& p, const ChannelState& ch, DropRng& rng) {
  RateAlloc r;
  for (Signal s : kAllSignals) {
    r(index(s)) = rng.uniform() * capacity(p(index(s)) / ch.alpha(owner(s)));
  }
  return r;
}

std::string vec_text(const Eigen::Vector4d& v) {
  std::string s = "[";
  for (int k = 0; k < 4; ++k) s += (k ? "," : "") + format_double(v(k));
  return s + "]";
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
  if (opts.samples < 1) throw InvalidArgument("verify needs at least one sample");
  VerifyReport rep;
  std::uint64_t stream = 0;
  while (rep.samples < opts.samples) {
    DropRng rng(opts.seed, stream++);
    const VerifySample s = draw_channel_and_power(rng);
    const bool inside = rng.uniform() < 0.5;
    const RateAlloc r = inside ? draw_inside(s.p, s.ch, rng) : draw_box(s.p, s.ch, rng);
    if (near_power_face(s.p, s.ch, opts.margin) || near_rate_face(r, s.p, s.ch, opts.margin)) {
      ++rep.rejected_near_boundary;
      continue;
    }
    ++rep.samples;
    const RateAlloc r_closed = r / (1.0 + opts.inflate_bounds);
    const auto closed = achievable(r_closed, s.p, s.ch);
    const auto witness = oracle_witness(r, s.p, s.ch, opts.rule);
    if (closed.has_value() == witness.has_value()) {
      ++rep.agreements;
      continue;
    }
    (closed ? rep.closed_only : rep.oracle_only)++;
    if (static_cast<int>(rep.dumps.size()) < opts.max_dumps) {
      std::string d = closed ? "closed_only" : "oracle_only";
      d += " alpha_i=" + format_double(s.ch.alpha_i()) +
           " alpha_j=" + format_double(s.ch.alpha_j()) +
           " P=" + format_double(s.ch.power_budget()) + " p=" + vec_text(s.p) +
           " r=" + vec_text(r);
      if (closed) d += " region=" + closed->label();
      if (witness) d += " orders={" + to_string(witness->first) + "; " + to_string(witness->second) + "}";
      rep.dumps.push_back(std::move(d));
    }
  }

  // Cross-first decoding pair on fresh power vectors.
  for (int k = 0; k < opts.samples; ++k) {
    DropRng rng(opts.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(k));
    const VerifySample s = draw_channel_and_power(rng);
    ++rep.cross_first_samples;
    if (cross_first_decoding_feasible(s.p, s.ch)) ++rep.cross_first_feasible;
  }
  return rep;
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "samples " << samples << "\n"
     << "agreements " << agreements << "\n"
     << "disagreements " << disagreements() << "\n"
     << "closed_only " << closed_only << "\n"
     << "oracle_only " << oracle_only << "\n"
     << "rejected_near_boundary " << rejected_near_boundary << "\n"
     << "cross_first_samples " << cross_first_samples << "\n"
     << "cross_first_feasible " << cross_first_feasible << "\n";
  for (const std::string& d : dumps) os << "dump " << d << "\n";
  return os.str();
}

// ---- CSV ----

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows) {
  os << "scheme,r_i,r_j\n";
  for (const RegionRow& r : rows) {
    os << r.scheme << ',' << format_double(r.r_i) << ',' << format_double(r.r_j) << '\n';
  }
}

void write_montecarlo_csv(std::ostream& os, const std::vector<MonteCarloRow>& rows) {
  os << "r_j_km,scheme,mean_t_s,ci95_s\n";
  for (const MonteCarloRow& r : rows) {
    os << format_double(r.r_j_km) << ',' << r.scheme << ',' << format_double(r.mean_t_s) << ','
       << format_double(r.ci95_s) << '\n';
  }
}

}  // namespace cnoma
