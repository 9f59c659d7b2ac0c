#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "cnoma/lp_feasibility.hpp"

using namespace cnoma;

namespace {

Halfspace row(double a0, double a1, double a2, double a3, double b) {
  return {Eigen::Vector4d(a0, a1, a2, a3), b};
}

}  // namespace

TEST_CASE("linearize examples") {
  // log2(1 + p1 / (p2 + 1)) >= 1  <=>  p1 - p2 >= 1
  const Halfspace h = linearize(Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0), 1.0, 1.0);
  CHECK(h.normal.isApprox(Eigen::Vector4d(1, -1, 0, 0)));
  CHECK(h.offset == doctest::Approx(1));

  const Halfspace vacuous =
      linearize(Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0), 1.0, 0.0);
  CHECK(vacuous.offset == 0);
  CHECK(vacuous.slack(Eigen::Vector4d::Zero()) >= 0);

  CHECK_THROWS_AS(linearize(Eigen::Vector4d::Zero().eval(), Eigen::Vector4d::Zero().eval(), 0.0, 1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(linearize(Eigen::Vector4d::Zero().eval(), Eigen::Vector4d::Zero().eval(), 1.0, -1.0),
                  InvalidArgument);
}

TEST_CASE("linearized row agrees with the rate inequality") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0, 1);
  int agree = 0, total = 0;
  for (int k = 0; k < 1000; ++k) {
    Eigen::Vector4d a = Eigen::Vector4d::Zero(), b = Eigen::Vector4d::Zero();
    const int s = static_cast<int>(gen() % 4);
    a(s) = 1;
    for (int t = 0; t < 4; ++t) {
      if (t != s && u(gen) < 0.5) b(t) = 1;
    }
    const double noise = std::pow(10.0, -3 + 2 * u(gen));
    const double c = 4 * u(gen);
    const Eigen::Vector4d p(u(gen), u(gen), u(gen), u(gen));
    const double rate = std::log2(1 + a.dot(p) / (b.dot(p) + noise));
    if (std::abs(rate - c) < 1e-9) continue;
    const Halfspace h = linearize(a, b, noise, c);
    ++total;
    agree += (h.slack(p) >= 0) == (rate >= c);
  }
  CHECK(agree == total);
  CHECK(total > 990);
}

TEST_CASE("simple feasibility verdicts") {
  HalfspaceSystem sys;
  sys.power_budget = 2;
  sys.rows = {row(1, 0, 0, 0, 1)};
  const Feasibility yes = feasible(sys);
  REQUIRE(yes.feasible);
  REQUIRE(yes.witness.has_value());
  CHECK((*yes.witness)(0) >= 1 - 1e-9);
  CHECK(yes.witness->sum() <= 2 + 1e-9);

  sys.rows = {row(1, 0, 0, 0, 3)};
  CHECK_FALSE(feasible(sys).feasible);

  sys.rows = {};
  CHECK(feasible(sys).feasible);

  sys.rows = {row(0, 0, 0, 0, 1)};
  CHECK_FALSE(feasible(sys).feasible);

  sys.rows = {row(1, -1, 0, 0, 0.5), row(0, 1, 0, 0, 0.5), row(0, 0, 1, 1, 0.5)};
  CHECK(feasible(sys).feasible);
  sys.rows.push_back(row(0, 0, 1, 0, 0.6));
  CHECK_FALSE(feasible(sys).feasible);
}

TEST_CASE("witness satisfies every row on random systems") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-1, 1);
  int yes = 0, no = 0;
  for (int k = 0; k < 2000; ++k) {
    HalfspaceSystem sys;
    sys.power_budget = std::pow(10.0, 2 * u(gen));
    // Rows through a known point make roughly half the instances feasible.
    Eigen::Vector4d x0 = (Eigen::Vector4d::Random().array() + 1).matrix() / 8 * sys.power_budget;
    const bool shift = gen() % 2;
    for (int r = 0; r < 6; ++r) {
      Halfspace h{Eigen::Vector4d(u(gen), u(gen), u(gen), u(gen)), 0};
      h.offset = h.normal.dot(x0) - (shift ? u(gen) * sys.power_budget : 0.0);
      sys.rows.push_back(h);
    }
    const Feasibility f = feasible(sys);
    if (!shift) CHECK(f.feasible);
    if (!f.feasible) {
      ++no;
      continue;
    }
    ++yes;
    const Eigen::Vector4d& p = *f.witness;
    CHECK(p.minCoeff() >= 0);
    CHECK(p.sum() <= sys.power_budget * (1 + 1e-9));
    for (const Halfspace& h : sys.rows) {
      const double scale = std::max(h.normal.cwiseAbs().maxCoeff() * sys.power_budget,
                                    std::abs(h.offset));
      CHECK(h.slack(p) >= -1e-9 * scale * std::max(1.0, sys.power_budget));
    }
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("verdict is invariant to row scaling") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 300; ++k) {
    HalfspaceSystem a, b;
    a.power_budget = b.power_budget = 1;
    for (int r = 0; r < 5; ++r) {
      const Halfspace h{Eigen::Vector4d(u(gen), u(gen), u(gen), u(gen)), 0.3 * u(gen)};
      const double s = std::pow(10.0, 6 * u(gen));
      a.rows.push_back(h);
      b.rows.push_back({h.normal * s, h.offset * s});
    }
    CHECK(feasible(a).feasible == feasible(b).feasible);
  }
}

TEST_CASE("non-finite input is rejected") {
  HalfspaceSystem sys;
  sys.rows = {row(std::numeric_limits<double>::quiet_NaN(), 0, 0, 0, 1)};
  CHECK_THROWS_AS(feasible(sys), InvalidArgument);
  sys.rows = {row(1, 0, 0, 0, std::numeric_limits<double>::infinity())};
  CHECK_THROWS_AS(feasible(sys), InvalidArgument);
  sys.rows = {};
  sys.power_budget = 0;
  CHECK_THROWS_AS(feasible(sys), InvalidArgument);
}

TEST_CASE("float instantiation") {
  BasicHalfspaceSystem<float> sys;
  sys.power_budget = 2;
  sys.rows = {{Vector4<float>(1, 0, 0, 0), 1}};
  CHECK(feasible(sys).feasible);
}
