#include "cnoma/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cnoma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void ScenarioConfig::validate() const {
  const auto positive = [](double v) { return v > 0 && std::isfinite(v); };
  require(positive(cell_radius_km), "cell_radius_km must be positive");
  require(positive(r_i_km) && r_i_km <= cell_radius_km, "r_i_km must lie in (0, cell_radius_km]");
  require(positive(r_j_km) && r_j_km <= cell_radius_km, "r_j_km must lie in (0, cell_radius_km]");
  require(positive(bandwidth_hz), "bandwidth_hz must be positive");
  require(std::isfinite(noise_psd_dbm_hz), "noise_psd_dbm_hz must be finite");
  require(std::isfinite(tx_power_dbm), "tx_power_dbm must be finite");
  require(positive(file_bits), "file_bits must be positive");
  for (double c : {c_iA, c_iB, c_jA, c_jB}) {
    require(c >= 0 && c <= 1, "cache fractions must lie in [0, 1]");
  }
  require(drops >= 1, "drops must be at least 1");
  require(workers >= 1, "workers must be at least 1");
  require(std::isfinite(path_loss_intercept_db) && std::isfinite(path_loss_slope_db),
          "path loss constants must be finite");
  if (channel) {
    require(positive(channel->alpha_i) && positive(channel->alpha_j) &&
                channel->alpha_i < channel->alpha_j,
            "channel requires 0 < alpha_i < alpha_j");
    require(positive(channel->power_w), "channel.power_w must be positive");
  }
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double ScenarioConfig::noise_power_w() const {
  return dbm_to_watts(noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

double ScenarioConfig::tx_power_w() const { return dbm_to_watts(tx_power_dbm); }

CacheConfig ScenarioConfig::cache() const {
  return CacheConfig::uniform(c_iA, c_iB, c_jA, c_jB, file_bits);
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  require(doc.is_object(), "config must be a JSON object");

  ScenarioConfig cfg;
  const std::set<std::string> known{
      "cell_radius_km", "r_i_km",    "r_j_km",  "bandwidth_hz",
      "noise_psd_dbm_hz", "tx_power_dbm", "file_bits", "cache",
      "drops",          "seed",      "path_loss_intercept_db", "path_loss_slope_db",
      "placement",      "workers",   "channel", "b1_timing"};
  for (const auto& [key, _] : doc.items()) {
    require(known.count(key) == 1, "unknown config key '" + key + "'");
  }

  try {
    const auto number = [&](const json& obj, const char* key, double& out) {
      if (!obj.contains(key)) return;
      require(obj.at(key).is_number(), std::string(key) + " must be a number");
      out = obj.at(key).get<double>();
    };
    number(doc, "cell_radius_km", cfg.cell_radius_km);
    number(doc, "r_i_km", cfg.r_i_km);
    number(doc, "r_j_km", cfg.r_j_km);
    number(doc, "bandwidth_hz", cfg.bandwidth_hz);
    number(doc, "noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    number(doc, "tx_power_dbm", cfg.tx_power_dbm);
    number(doc, "file_bits", cfg.file_bits);
    number(doc, "path_loss_intercept_db", cfg.path_loss_intercept_db);
    number(doc, "path_loss_slope_db", cfg.path_loss_slope_db);
    if (doc.contains("cache")) {
      const json& c = doc.at("cache");
      require(c.is_object(), "cache must be an object");
      for (const auto& [key, _] : c.items()) {
        require(key == "c_iA" || key == "c_iB" || key == "c_jA" || key == "c_jB",
                "unknown cache key '" + key + "'");
      }
      number(c, "c_iA", cfg.c_iA);
      number(c, "c_iB", cfg.c_iB);
      number(c, "c_jA", cfg.c_jA);
      number(c, "c_jB", cfg.c_jB);
    }
    if (doc.contains("drops")) {
      require(doc.at("drops").is_number_integer(), "drops must be an integer");
      cfg.drops = doc.at("drops").get<int>();
    }
    if (doc.contains("workers")) {
      require(doc.at("workers").is_number_integer(), "workers must be an integer");
      cfg.workers = doc.at("workers").get<int>();
    }
    if (doc.contains("seed")) {
      require(doc.at("seed").is_number_unsigned(), "seed must be a non-negative integer");
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("placement")) {
      const std::string p = doc.at("placement").get<std::string>();
      require(p == "disc" || p == "ring", "placement must be \"disc\" or \"ring\"");
      cfg.placement = p == "disc" ? Placement::disc : Placement::ring;
    }
    if (doc.contains("b1_timing")) {
      const std::string t = doc.at("b1_timing").get<std::string>();
      require(t == "time_shared" || t == "sequential",
              "b1_timing must be \"time_shared\" or \"sequential\"");
      cfg.b1_timing = t == "sequential" ? OmaTiming::sequential : OmaTiming::time_shared;
    }
    if (doc.contains("channel")) {
      const json& c = doc.at("channel");
      require(c.is_object(), "channel must be an object");
      ChannelOverride ov;
      require(c.contains("alpha_i") && c.contains("alpha_j") && c.contains("power_w"),
              "channel needs alpha_i, alpha_j and power_w");
      number(c, "alpha_i", ov.alpha_i);
      number(c, "alpha_j", ov.alpha_j);
      number(c, "power_w", ov.power_w);
      cfg.channel = ov;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

double path_loss_db(double distance_km, double intercept_db, double slope_db) {
  return intercept_db + slope_db * std::log10(std::max(distance_km, 1e-3));
}

DropRng::DropRng(std::uint64_t seed, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ index)) {}

double DropRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double DropRng::exponential() { return -std::log1p(-uniform()); }

Drop gen_drop(const ScenarioConfig& cfg, DropRng& rng) {
  const double noise = cfg.noise_power_w();
  // Draw order is fixed so a drop index maps to the same geometry and fading
  // for every R_j in a sweep.
  const double u_i = rng.uniform();
  const double u_j = rng.uniform();
  const double g_i = rng.exponential();
  const double g_j = rng.exponential();
  const auto distance = [&](double radius, double u) {
    const double d = cfg.placement == Placement::disc ? radius * std::sqrt(u) : radius;
    return std::max(d, 1e-3);
  };
  const double d_i = distance(cfg.r_i_km, u_i);
  const double d_j = distance(cfg.r_j_km, u_j);
  const auto alpha = [&](double d, double fading) {
    const double pl = path_loss_db(d, cfg.path_loss_intercept_db, cfg.path_loss_slope_db);
    return effective_noise(fading * std::pow(10.0, -pl / 10.0), noise);
  };
  double a_i = alpha(d_i, g_i);
  double a_j = alpha(d_j, g_j);
  CacheConfig cache = cfg.cache();
  const bool swapped = a_i >= a_j;
  if (swapped) {
    std::swap(a_i, a_j);
    cache = cache.swapped_labels();
  }
  if (!(a_i < a_j)) throw DegenerateChannelError("drop produced equal effective noise levels");
  return {ChannelState(a_i, a_j, cfg.tx_power_w(), cfg.bandwidth_hz), cache, swapped,
          swapped ? d_j : d_i, swapped ? d_i : d_j};
}

}  // namespace cnoma
