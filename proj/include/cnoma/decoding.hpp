#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cnoma/core_model.hpp"

namespace cnoma {

// One SIC step: a single codeword, or a jointly decoded pair of a user's own codewords.
struct DecodeStep {
  Signal first;
  std::optional<Signal> second;

  static DecodeStep single(Signal s) { return {s, std::nullopt}; }
  static DecodeStep joint(Signal a, Signal b) { return {a, b}; }

  bool is_joint() const { return second.has_value(); }
  bool contains(Signal s) const { return first == s || (second && *second == s); }

  friend bool operator==(const DecodeStep&, const DecodeStep&) = default;
};

using DecodingOrder = std::vector<DecodeStep>;

// "A1 -> B2 -> A2", joint steps as "(B1,B2)".
std::string to_string(const DecodingOrder& order);

}  // namespace cnoma
