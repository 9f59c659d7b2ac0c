#include "cnoma/core_model.hpp"

#include <cmath>

namespace cnoma {

double effective_noise(double channel_gain_sq, double noise_power) {
  if (!(channel_gain_sq > 0) || !std::isfinite(channel_gain_sq)) {
    throw DegenerateChannelError("effective_noise: channel gain must be positive");
  }
  if (!(noise_power > 0)) throw InvalidArgument("effective_noise: noise power must be positive");
  return noise_power / channel_gain_sq;
}

std::string to_string(CacheCase c) {
  switch (c) {
    case CacheCase::I: return "I";
    case CacheCase::II: return "II";
    case CacheCase::III: return "III";
    case CacheCase::IV: return "IV";
  }
  return "?";
}

CacheConfig::CacheConfig(const Eigen::Matrix2d& fractions, const Eigen::Vector2d& file_bits,
                         std::optional<Eigen::Vector2d> cache_capacity_bits)
    : c_(fractions), v_(file_bits), capacity_(std::move(cache_capacity_bits)) {
  if (!((c_.array() >= 0.0).all() && (c_.array() <= 1.0).all())) {
    throw InvalidArgument("cache fractions must lie in [0, 1]");
  }
  if (!((v_.array() >= 0.0).all() && v_.allFinite())) {
    throw InvalidArgument("file sizes must be non-negative");
  }
  if (capacity_) {
    const Eigen::Vector2d stored = c_ * v_;
    for (int k = 0; k < 2; ++k) {
      if (stored(k) > (*capacity_)(k) * (1.0 + 1e-12)) {
        throw InvalidArgument("cached bits exceed the cache capacity of UE " +
                              std::string(name(static_cast<User>(k))));
      }
    }
  }
}

CacheConfig CacheConfig::uniform(double c_ia, double c_ib, double c_ja, double c_jb,
                                 double file_bits) {
  Eigen::Matrix2d c;
  c << c_ia, c_ib, c_ja, c_jb;
  return CacheConfig(c, Eigen::Vector2d::Constant(file_bits));
}

CacheConfig CacheConfig::swapped_labels() const {
  // New UE i is old UE j and new file A is old file B, so c'(u, f) = c(~u, ~f).
  Eigen::Matrix2d c;
  c << c_(1, 1), c_(1, 0), c_(0, 1), c_(0, 0);
  std::optional<Eigen::Vector2d> cap;
  if (capacity_) cap = capacity_->reverse();
  return CacheConfig(c, v_.reverse(), cap);
}

CacheCase classify_cache_case(const CacheConfig& cfg) {
  // Ties put the requesting user on the min side (non-requester holds more).
  const bool i_holds_more_b = cfg.fraction(User::i, File::B) >= cfg.fraction(User::j, File::B);
  const bool j_holds_more_a = cfg.fraction(User::j, File::A) >= cfg.fraction(User::i, File::A);
  if (i_holds_more_b) return j_holds_more_a ? CacheCase::I : CacheCase::II;
  return j_holds_more_a ? CacheCase::III : CacheCase::IV;
}

DeliveryLoad split_files(const CacheConfig& cfg) {
  const CacheCase c = classify_cache_case(cfg);
  if (c != CacheCase::I) {
    throw UnsupportedCaseError("delivery is implemented for cache Case I only (got Case " +
                               to_string(c) + ")");
  }
  DeliveryLoad load;
  for (User u : {User::i, User::j}) {
    const File f = requested_file(u);
    const double v = cfg.file_bits(f);
    const double cmax = cfg.max_fraction(f);
    const auto [s1, s2] = own_signals(u);
    load.beta(index(s1)) = (cmax - cfg.fraction(u, f)) * v;
    load.beta(index(s2)) = (1.0 - cmax) * v;
  }
  return load;
}

}  // namespace cnoma
