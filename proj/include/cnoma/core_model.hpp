#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "cnoma/errors.hpp"

namespace cnoma {

// UE i is always the strong user (smaller effective noise level).
enum class User : int { i = 0, j = 1 };

// UE i requests file A, UE j requests file B.
enum class File : int { A = 0, B = 1 };

// Superposed codewords. x_f1 carries the part of the requested file cached
// only at the other user, x_f2 the part cached nowhere. The enumerator value
// is the coordinate in power and rate 4-vectors.
enum class Signal : int { A1 = 0, A2 = 1, B1 = 2, B2 = 3 };

inline constexpr std::array<Signal, 4> kAllSignals{Signal::A1, Signal::A2, Signal::B1,
                                                   Signal::B2};

constexpr int index(Signal s) { return static_cast<int>(s); }
constexpr int index(User u) { return static_cast<int>(u); }
constexpr int index(File f) { return static_cast<int>(f); }

constexpr User owner(Signal s) {
  return (s == Signal::A1 || s == Signal::A2) ? User::i : User::j;
}
constexpr User other(User u) { return u == User::i ? User::j : User::i; }
constexpr File requested_file(User u) { return u == User::i ? File::A : File::B; }

// (x_f1, x_f2) of the file requested by `u`.
constexpr std::array<Signal, 2> own_signals(User u) {
  return u == User::i ? std::array{Signal::A1, Signal::A2}
                      : std::array{Signal::B1, Signal::B2};
}

// The other user's x_f1 is removed by cache-enabled interference cancellation,
// so the only foreign signal left at a receiver is the other user's x_f2.
constexpr Signal interfering_signal(User u) { return u == User::i ? Signal::B2 : Signal::A2; }

constexpr std::string_view name(Signal s) {
  switch (s) {
    case Signal::A1: return "A1";
    case Signal::A2: return "A2";
    case Signal::B1: return "B1";
    case Signal::B2: return "B2";
  }
  return "?";
}
constexpr std::string_view name(User u) { return u == User::i ? "i" : "j"; }

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

// (p_i1, p_i2, p_j1, p_j2) in linear power units.
template <typename Scalar>
using BasicPowerAlloc = Vector4<Scalar>;
// (r_i1, r_i2, r_j1, r_j2) in bit/s/Hz.
template <typename Scalar>
using BasicRateAlloc = Vector4<Scalar>;

using PowerAlloc = BasicPowerAlloc<double>;
using RateAlloc = BasicRateAlloc<double>;

/// Physical two-user downlink instance. Effective noise levels are
/// receiver noise over channel gain; construction enforces alpha_i < alpha_j.
template <typename Scalar>
class BasicChannelState {
 public:
  BasicChannelState(Scalar alpha_i, Scalar alpha_j, Scalar power_budget,
                    Scalar bandwidth_hz = Scalar(1))
      : alpha_{alpha_i, alpha_j}, power_budget_(power_budget), bandwidth_hz_(bandwidth_hz) {
    using std::isfinite;
    if (!(alpha_i > 0) || !(alpha_j > 0) || !isfinite(alpha_i) || !isfinite(alpha_j)) {
      throw InvalidArgument("effective noise levels must be positive and finite");
    }
    if (!(power_budget > 0) || !isfinite(power_budget)) {
      throw InvalidArgument("power budget must be positive and finite");
    }
    if (!(bandwidth_hz > 0)) throw InvalidArgument("bandwidth must be positive");
    if (!(alpha_i < alpha_j)) {
      throw InvalidArgument("UE i must be the strong user (alpha_i < alpha_j)");
    }
  }

  Scalar alpha_i() const { return alpha_[0]; }
  Scalar alpha_j() const { return alpha_[1]; }
  Scalar alpha(User u) const { return alpha_[index(u)]; }
  // alpha_j - alpha_i > 0; every power-region predicate is offset by it.
  Scalar alpha_gap() const { return alpha_[1] - alpha_[0]; }
  Scalar power_budget() const { return power_budget_; }
  Scalar bandwidth_hz() const { return bandwidth_hz_; }

  template <typename Other>
  BasicChannelState<Other> cast() const {
    return BasicChannelState<Other>(Other(alpha_[0]), Other(alpha_[1]), Other(power_budget_),
                                    Other(bandwidth_hz_));
  }

 private:
  std::array<Scalar, 2> alpha_;
  Scalar power_budget_;
  Scalar bandwidth_hz_;
};

using ChannelState = BasicChannelState<double>;

/// AWGN capacity log2(1 + gamma) in bit/s/Hz.
template <typename Scalar>
Scalar capacity(Scalar gamma) {
  using std::log2;
  if (!(gamma >= Scalar(0))) throw DomainError("capacity: SINR must be non-negative");
  return log2(Scalar(1) + gamma);
}

// Nonnegativity plus the total power constraint C1, with an absolute slack.
template <typename Derived>
bool within_budget(const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar power_budget,
                   typename Derived::Scalar tol = typename Derived::Scalar(1e-12)) {
  return (p.array() >= -tol).all() && p.sum() <= power_budget + tol;
}

// alpha = noise power / |h|^2.
double effective_noise(double channel_gain_sq, double noise_power);

enum class CacheCase { I, II, III, IV };

std::string to_string(CacheCase c);

/// Cached fraction c(user, file) plus file sizes. The optional per-user cache
/// size is only validated, never used by the delivery math.
class CacheConfig {
 public:
  CacheConfig(const Eigen::Matrix2d& fractions, const Eigen::Vector2d& file_bits,
              std::optional<Eigen::Vector2d> cache_capacity_bits = std::nullopt);

  // c_iA, c_iB, c_jA, c_jB with V_A = V_B = file_bits.
  static CacheConfig uniform(double c_ia, double c_ib, double c_ja, double c_jb, double file_bits);

  double fraction(User u, File f) const { return c_(index(u), index(f)); }
  double file_bits(File f) const { return v_(index(f)); }
  const Eigen::Matrix2d& fractions() const { return c_; }
  const Eigen::Vector2d& file_sizes() const { return v_; }
  const std::optional<Eigen::Vector2d>& cache_capacity_bits() const { return capacity_; }

  double min_fraction(File f) const { return c_.col(index(f)).minCoeff(); }
  double max_fraction(File f) const { return c_.col(index(f)).maxCoeff(); }

  // Relabel UE i <-> UE j together with file A <-> B. Case I maps to Case I.
  CacheConfig swapped_labels() const;

 private:
  Eigen::Matrix2d c_;
  Eigen::Vector2d v_;
  std::optional<Eigen::Vector2d> capacity_;
};

CacheCase classify_cache_case(const CacheConfig& cfg);

/// Bits owed per signal, indexed like the power vector.
struct DeliveryLoad {
  Eigen::Vector4d beta = Eigen::Vector4d::Zero();

  double operator[](Signal s) const { return beta(index(s)); }
  double user_total(User u) const {
    const auto [s1, s2] = own_signals(u);
    return beta(index(s1)) + beta(index(s2));
  }
};

/// Case-I file splitting: beta_k1 = (cmax_f - c_kf) V_f, beta_k2 = (1 - cmax_f) V_f
/// for the requester k of file f. Throws UnsupportedCaseError otherwise.
DeliveryLoad split_files(const CacheConfig& cfg);

}  // namespace cnoma
