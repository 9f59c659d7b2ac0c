#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "cnoma/core_model.hpp"
#include "cnoma/delivery.hpp"

namespace cnoma {

enum class Placement {
  disc,  // uniform over the disc area
  ring,  // on the circle of the given radius
};

/// Fixed channel for `delivery`, bypassing drop generation.
struct ChannelOverride {
  double alpha_i = 0;
  double alpha_j = 0;
  double power_w = 0;
};

struct ScenarioConfig {
  double cell_radius_km = 2.0;
  double r_i_km = 0.2;
  double r_j_km = 0.6;
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_hz = -172.6;
  double tx_power_dbm = 35.0;
  double file_bits = 4e9;  // V_A = V_B
  double c_iA = 0.2;
  double c_iB = 0.8;
  double c_jA = 0.8;
  double c_jB = 0.2;
  int drops = 500;
  std::uint64_t seed = 1;
  double path_loss_intercept_db = 128.1;
  double path_loss_slope_db = 37.6;
  Placement placement = Placement::disc;
  int workers = 1;
  OmaTiming b1_timing = OmaTiming::sequential;
  std::optional<ChannelOverride> channel;

  void validate() const;  // throws ConfigError

  double noise_power_w() const;
  double tx_power_w() const;
  CacheConfig cache() const;
};

/// Parses a JSON document whose keys mirror ScenarioConfig; missing keys keep
/// their defaults, unknown keys are rejected. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

double dbm_to_watts(double dbm);
double path_loss_db(double distance_km, double intercept_db, double slope_db);

/// Counter-based stream: drop `index` of run `seed` always sees the same draws.
class DropRng {
 public:
  DropRng(std::uint64_t seed, std::uint64_t index);

  double uniform();      // [0, 1), 53 bits
  double exponential();  // mean 1

 private:
  std::mt19937_64 engine_;
};

struct Drop {
  ChannelState channel;
  CacheConfig cache;     // relabelled together with the users when swapped
  bool swapped = false;  // the farther-in-noise UE was drawn as "i"
  double d_i_km = 0;
  double d_j_km = 0;
};

/// Places both UEs, applies path loss and Rayleigh fading, and relabels so
/// that alpha_i < alpha_j. Distances are clamped to at least 1 m.
Drop gen_drop(const ScenarioConfig& cfg, DropRng& rng);

}  // namespace cnoma
