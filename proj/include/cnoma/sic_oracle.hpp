#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnoma/core_model.hpp"
#include "cnoma/decoding.hpp"

namespace cnoma {

// Signals left at a receiver after cache-enabled interference cancellation:
// the user's own two codewords plus the other user's x_f2.
constexpr std::array<Signal, 3> residual_signals(User u) {
  return u == User::i ? std::array{Signal::A1, Signal::A2, Signal::B2}
                      : std::array{Signal::A2, Signal::B1, Signal::B2};
}

struct DecodeAttempt {
  User user = User::i;
  DecodingOrder steps;

  friend bool operator==(const DecodeAttempt&, const DecodeAttempt&) = default;
};

std::string to_string(const DecodeAttempt& att);

/// How a receiver decides it can decode the other user's codeword.
enum class DecodeRule {
  // r_x <= C(SINR of x at this step).
  rate_based,
  // SINR of x here >= SINR of x at its intended receiver's decoding step.
  sinr_ordering,
};

/// Every order of the residual set, with the two own signals optionally merged
/// into one joint step: 6 sequential plus 3 with a joint pair.
std::vector<DecodeAttempt> enumerate_orders(User u);

/// Rate-based walk of one attempt. Steps after the last own signal are not
/// needed and are skipped.
bool attempt_decodes(const DecodeAttempt& att, const RateAlloc& r, const PowerAlloc& p,
                     const ChannelState& ch, double tol = 1e-12);

/// Both attempts succeed under `rule`.
bool attempt_pair_decodes(const DecodeAttempt& att_i, const DecodeAttempt& att_j,
                          const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
                          DecodeRule rule = DecodeRule::rate_based, double tol = 1e-12);

/// First (UE i, UE j) attempt pair that succeeds, in enumeration order.
std::optional<std::pair<DecodeAttempt, DecodeAttempt>> oracle_witness(
    const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
    DecodeRule rule = DecodeRule::rate_based, double tol = 1e-12);

bool oracle_achievable(const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
                       DecodeRule rule = DecodeRule::rate_based, double tol = 1e-12);

/// SINR conditions for UE j decoding x_A2 first while UE i decodes x_B2
/// first, both as strict inequalities:
///   p_i2/(p_j1+p_j2+alpha_j) > p_i2/(p_i1+alpha_i)
///   p_j2/(p_i1+p_i2+alpha_i) > p_j2/(p_j1+alpha_j)
/// They imply p_i2 + p_j2 < 0, so this is false for every feasible p.
bool cross_first_decoding_feasible(const PowerAlloc& p, const ChannelState& ch);

}  // namespace cnoma
