#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cnoma/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDisagreement = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cnoma::ConfigError("cannot open output file '" + path + "'");
  return out;
}

std::string vec_text(const Eigen::Vector4d& v) {
  std::string s;
  for (int k = 0; k < 4; ++k) s += (k ? " " : "") + cnoma::format_double(v(k));
  return s;
}

int cmd_region(double alpha_i, double alpha_j, double power, int grid, const std::string& out) {
  const auto rows = cnoma::run_region_sweep(alpha_i, alpha_j, power, grid);
  auto os = open_out(out);
  cnoma::write_region_csv(os, rows);
  return 0;
}

int cmd_delivery(const std::string& config, const std::string& out) {
  const cnoma::ScenarioConfig cfg = cnoma::load_scenario(config);
  std::optional<cnoma::Drop> drop;
  if (cfg.channel) {
    drop = cnoma::Drop{cnoma::ChannelState(cfg.channel->alpha_i, cfg.channel->alpha_j,
                                           cfg.channel->power_w, cfg.bandwidth_hz),
                       cfg.cache(), false, 0, 0};
  } else {
    cnoma::DropRng rng(cfg.seed, 0);
    drop = cnoma::gen_drop(cfg, rng);
  }
  const cnoma::ChannelState& ch = drop->channel;
  const cnoma::DeliverySolution sol = cnoma::min_delivery_time(ch, cnoma::split_files(drop->cache));

  std::ostringstream text;
  text << "alpha_i " << cnoma::format_double(ch.alpha_i()) << "\n"
       << "alpha_j " << cnoma::format_double(ch.alpha_j()) << "\n"
       << "delivery_time_s " << cnoma::format_double(sol.delivery_time_s) << "\n"
       << "region " << sol.region.label() << "\n"
       << "order_i " << cnoma::to_string(sol.order.first) << "\n"
       << "order_j " << cnoma::to_string(sol.order.second) << "\n"
       << "p_star " << vec_text(sol.p_star) << "\n"
       << "r_star " << vec_text(sol.r_star) << "\n";
  std::cout << text.str();
  if (!out.empty()) open_out(out) << text.str();
  return 0;
}

int cmd_mc(const std::string& config, const std::string& sweep, int drops, std::uint64_t seed,
           int workers, const std::string& out) {
  cnoma::ScenarioConfig cfg = cnoma::load_scenario(config);
  if (drops > 0) cfg.drops = drops;
  cfg.seed = seed;
  if (workers > 0) cfg.workers = workers;
  cfg.validate();
  const auto result = cnoma::run_montecarlo(cfg, cnoma::parse_sweep(sweep));
  auto os = open_out(out);
  cnoma::write_montecarlo_csv(os, result.rows);
  if (result.dominance_violations > 0) {
    std::cerr << "warning: " << result.dominance_violations
              << " drops break the expected scheme ordering\n";
  }
  return 0;
}

int cmd_verify(int samples, std::uint64_t seed, const std::string& rule, double margin) {
  cnoma::VerifyOptions opts;
  opts.samples = samples;
  opts.seed = seed;
  opts.margin = margin;
  if (rule == "sinr") {
    opts.rule = cnoma::DecodeRule::sinr_ordering;
  } else if (rule != "rate") {
    throw cnoma::ConfigError("--rule must be 'rate' or 'sinr'");
  }
  const cnoma::VerifyReport rep = cnoma::run_verify(opts);
  std::cout << rep.to_text();
  const bool ok = rep.disagreements() == 0 && rep.cross_first_feasible == 0;
  return ok ? 0 : kExitDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-aided NOMA delivery: rate regions, delivery time, Monte-Carlo"};
  app.require_subcommand(1);

  double alpha_i = 0, alpha_j = 0, power = 0;
  int grid = 200;
  std::string region_out;
  auto* region = app.add_subcommand("region", "Frontier points of OMA, NOMA and the proposed scheme");
  region->add_option("--alpha-i", alpha_i, "effective noise level of the strong UE")->required();
  region->add_option("--alpha-j", alpha_j, "effective noise level of the weak UE")->required();
  region->add_option("--power", power, "total transmit power (linear)")->required();
  region->add_option("--grid", grid, "grid points per power axis")->check(CLI::Range(2, 100000));
  region->add_option("--out", region_out, "CSV output path")->required();

  std::string delivery_cfg, delivery_out;
  auto* delivery = app.add_subcommand("delivery", "Minimum delivery time for one channel");
  delivery->add_option("--config", delivery_cfg, "scenario JSON")->required();
  delivery->add_option("--out", delivery_out, "also write the report here");

  std::string mc_cfg, mc_sweep, mc_out;
  int mc_drops = 0, mc_workers = 0;
  std::uint64_t mc_seed = 0;
  auto* mc = app.add_subcommand("mc", "Monte-Carlo mean delivery time over an R_j sweep");
  mc->add_option("--config", mc_cfg, "scenario JSON")->required();
  mc->add_option("--rj-sweep", mc_sweep, "START:STOP:STEPS in km")->required();
  mc->add_option("--drops", mc_drops, "drops per R_j (overrides the config)");
  mc->add_option("--seed", mc_seed, "64-bit seed")->required();
  mc->add_option("--workers", mc_workers, "worker threads (overrides the config)");
  mc->add_option("--out", mc_out, "CSV output path")->required();

  int v_samples = 10000;
  std::uint64_t v_seed = 0;
  std::string v_rule = "rate";
  double v_margin = 1e-6;
  auto* verify = app.add_subcommand("verify", "Cross-check the closed-form regions against the decoding oracle");
  verify->add_option("--samples", v_samples, "number of accepted samples")->check(CLI::PositiveNumber);
  verify->add_option("--seed", v_seed, "64-bit seed")->required();
  verify->add_option("--rule", v_rule, "oracle decoding rule: rate or sinr");
  verify->add_option("--margin", v_margin, "minimum distance from any bound surface")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*region) return cmd_region(alpha_i, alpha_j, power, grid, region_out);
    if (*delivery) return cmd_delivery(delivery_cfg, delivery_out);
    if (*mc) return cmd_mc(mc_cfg, mc_sweep, mc_drops, mc_seed, mc_workers, mc_out);
    if (*verify) return cmd_verify(v_samples, v_seed, v_rule, v_margin);
  } catch (const cnoma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::UnsupportedCaseError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cnoma::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
