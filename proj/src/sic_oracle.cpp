#include "cnoma/sic_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace cnoma {

std::string to_string(const DecodeAttempt& att) {
  return "UE " + std::string(name(att.user)) + ": " + to_string(att.steps);
}

std::vector<DecodeAttempt> enumerate_orders(User u) {
  std::vector<DecodeAttempt> out;
  std::array<Signal, 3> sigs = residual_signals(u);
  std::sort(sigs.begin(), sigs.end());
  do {
    DecodingOrder steps;
    for (Signal s : sigs) steps.push_back(DecodeStep::single(s));
    out.push_back({u, std::move(steps)});
  } while (std::next_permutation(sigs.begin(), sigs.end()));

  const auto [s1, s2] = own_signals(u);
  const DecodeStep pair = DecodeStep::joint(s1, s2);
  const DecodeStep x = DecodeStep::single(interfering_signal(u));
  out.push_back({u, {x, pair}});
  out.push_back({u, {pair, x}});
  out.push_back({u, {pair}});
  return out;
}

namespace {

// One step of an attempt with the interference-plus-noise it sees. Members
// of a joint step do not interfere with each other.
struct StepView {
  DecodeStep step;
  double interference_plus_noise;
};

std::vector<StepView> walk(const DecodeAttempt& att, const PowerAlloc& p,
                           const ChannelState& ch) {
  const User u = att.user;
  double remaining = 0;
  for (Signal s : residual_signals(u)) remaining += p(index(s));

  // Only steps up to the last one touching an own signal matter.
  std::size_t last_own = 0;
  for (std::size_t k = 0; k < att.steps.size(); ++k) {
    const DecodeStep& st = att.steps[k];
    if (owner(st.first) == u) last_own = k + 1;
  }

  std::vector<StepView> views;
  for (std::size_t k = 0; k < last_own; ++k) {
    const DecodeStep& st = att.steps[k];
    double here = p(index(st.first));
    if (st.second) here += p(index(*st.second));
    remaining -= here;
    views.push_back({st, std::max(0.0, remaining) + ch.alpha(u)});
  }
  return views;
}

bool own_step_ok(const StepView& v, const RateAlloc& r, const PowerAlloc& p, double tol) {
  const double d = v.interference_plus_noise;
  const DecodeStep& st = v.step;
  if (r(index(st.first)) > capacity(p(index(st.first)) / d) + tol) return false;
  if (!st.second) return true;
  const Signal b = *st.second;
  if (r(index(b)) > capacity(p(index(b)) / d) + tol) return false;
  const double both = p(index(st.first)) + p(index(b));
  return r(index(st.first)) + r(index(b)) <= capacity(both / d) + tol;
}

// SINR of signal x at the step where its intended receiver decodes it.
double intended_sinr(Signal x, const std::vector<StepView>& intended, const PowerAlloc& p) {
  for (const StepView& v : intended) {
    if (v.step.contains(x)) return p(index(x)) / v.interference_plus_noise;
  }
  return 0;  // not reached: every attempt decodes its own signals
}

bool views_ok(const std::vector<StepView>& views, User u, const std::vector<StepView>& other,
              const RateAlloc& r, const PowerAlloc& p, DecodeRule rule, double tol) {
  for (const StepView& v : views) {
    if (owner(v.step.first) == u) {
      if (!own_step_ok(v, r, p, tol)) return false;
      continue;
    }
    const Signal x = v.step.first;
    const double here = p(index(x)) / v.interference_plus_noise;
    if (rule == DecodeRule::rate_based) {
      if (r(index(x)) > capacity(here) + tol) return false;
    } else {
      const double target = intended_sinr(x, other, p);
      if (here < target * (1 - tol) - tol) return false;
    }
  }
  return true;
}

}  // namespace

bool attempt_decodes(const DecodeAttempt& att, const RateAlloc& r, const PowerAlloc& p,
                     const ChannelState& ch, double tol) {
  return views_ok(walk(att, p, ch), att.user, {}, r, p, DecodeRule::rate_based, tol);
}

bool attempt_pair_decodes(const DecodeAttempt& att_i, const DecodeAttempt& att_j,
                          const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
                          DecodeRule rule, double tol) {
  const auto vi = walk(att_i, p, ch);
  const auto vj = walk(att_j, p, ch);
  return views_ok(vi, User::i, vj, r, p, rule, tol) && views_ok(vj, User::j, vi, r, p, rule, tol);
}

std::optional<std::pair<DecodeAttempt, DecodeAttempt>> oracle_witness(
    const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch, DecodeRule rule,
    double tol) {
  static const std::vector<DecodeAttempt> orders_i = enumerate_orders(User::i);
  static const std::vector<DecodeAttempt> orders_j = enumerate_orders(User::j);
  if (rule == DecodeRule::rate_based) {
    // The two receivers are independent under the rate rule.
    const DecodeAttempt* wi = nullptr;
    for (const auto& a : orders_i) {
      if (attempt_decodes(a, r, p, ch, tol)) {
        wi = &a;
        break;
      }
    }
    if (!wi) return std::nullopt;
    for (const auto& b : orders_j) {
      if (attempt_decodes(b, r, p, ch, tol)) return std::pair{*wi, b};
    }
    return std::nullopt;
  }
  for (const auto& a : orders_i) {
    for (const auto& b : orders_j) {
      if (attempt_pair_decodes(a, b, r, p, ch, rule, tol)) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

bool oracle_achievable(const RateAlloc& r, const PowerAlloc& p, const ChannelState& ch,
                       DecodeRule rule, double tol) {
  return oracle_witness(r, p, ch, rule, tol).has_value();
}

bool cross_first_decoding_feasible(const PowerAlloc& p, const ChannelState& ch) {
  const double pi1 = p(0), pi2 = p(1), pj1 = p(2), pj2 = p(3);
  const bool j_takes_a2 = pi2 / (pj1 + pj2 + ch.alpha_j()) > pi2 / (pi1 + ch.alpha_i());
  const bool i_takes_b2 = pj2 / (pi1 + pi2 + ch.alpha_i()) > pj2 / (pj1 + ch.alpha_j());
  return j_takes_a2 && i_takes_b2;
}

}  // namespace cnoma
