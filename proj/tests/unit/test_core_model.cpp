#include "doctest.h"

#include "cnoma/core_model.hpp"

using namespace cnoma;

TEST_CASE("capacity is log2(1 + gamma)") {
  CHECK(capacity(0.0) == 0.0);
  CHECK(capacity(1.0) == doctest::Approx(1.0));
  CHECK(capacity(3.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(capacity(-1e-3), DomainError);
  CHECK_THROWS_AS(capacity(std::nan("")), DomainError);
  CHECK(capacity(1.0f) == doctest::Approx(1.0));
}

TEST_CASE("channel state enforces the strong-user labelling") {
  CHECK_NOTHROW(ChannelState(1e-3, 1e-2, 10));
  CHECK_THROWS_AS(ChannelState(1e-2, 1e-3, 10), InvalidArgument);
  CHECK_THROWS_AS(ChannelState(1e-2, 1e-2, 10), InvalidArgument);
  CHECK_THROWS_AS(ChannelState(0, 1e-2, 10), InvalidArgument);
  CHECK_THROWS_AS(ChannelState(1e-3, 1e-2, 0), InvalidArgument);
  CHECK_THROWS_AS(ChannelState(1e-3, 1e-2, 1, -5), InvalidArgument);

  const ChannelState ch(1e-3, 1e-2, 10, 5e6);
  CHECK(ch.alpha(User::i) == 1e-3);
  CHECK(ch.alpha(User::j) == 1e-2);
  CHECK(ch.alpha_gap() == doctest::Approx(9e-3));
  CHECK(ch.cast<float>().alpha_j() == doctest::Approx(1e-2));
}

TEST_CASE("effective noise") {
  CHECK(effective_noise(2.0, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(effective_noise(0.0, 1.0), DegenerateChannelError);
  CHECK_THROWS_AS(effective_noise(1.0, 0.0), InvalidArgument);
}

TEST_CASE("signal bookkeeping") {
  CHECK(owner(Signal::A1) == User::i);
  CHECK(owner(Signal::B2) == User::j);
  CHECK(interfering_signal(User::i) == Signal::B2);
  CHECK(interfering_signal(User::j) == Signal::A2);
  CHECK(own_signals(User::j)[0] == Signal::B1);
  CHECK(requested_file(User::j) == File::B);
}

TEST_CASE("power budget check") {
  CHECK(within_budget(Eigen::Vector4d(1, 1, 0, 0), 2.0));
  CHECK_FALSE(within_budget(Eigen::Vector4d(1, 1, 0.5, 0), 2.0));
  CHECK_FALSE(within_budget(Eigen::Vector4d(-0.1, 0, 0, 0), 2.0));
}

TEST_CASE("cache case classification") {
  CHECK(classify_cache_case(CacheConfig::uniform(0.2, 0.8, 0.8, 0.2, 1)) == CacheCase::I);
  CHECK(classify_cache_case(CacheConfig::uniform(0.9, 0.8, 0.1, 0.2, 1)) == CacheCase::II);
  CHECK(classify_cache_case(CacheConfig::uniform(0.2, 0.1, 0.8, 0.2, 1)) == CacheCase::III);
  CHECK(classify_cache_case(CacheConfig::uniform(0.9, 0.1, 0.1, 0.2, 1)) == CacheCase::IV);
  // Equal fractions count as Case I.
  CHECK(classify_cache_case(CacheConfig::uniform(0, 0, 0, 0, 1)) == CacheCase::I);
}

TEST_CASE("cache config validation") {
  CHECK_THROWS_AS(CacheConfig::uniform(1.2, 0, 0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(CacheConfig::uniform(0, 0, 0, 0, -1), InvalidArgument);
  Eigen::Matrix2d c;
  c << 0.5, 0.5, 0.5, 0.5;
  CHECK_NOTHROW(CacheConfig(c, Eigen::Vector2d(10, 10), Eigen::Vector2d(10, 10)));
  CHECK_THROWS_AS(CacheConfig(c, Eigen::Vector2d(10, 10), Eigen::Vector2d(9, 10)),
                  InvalidArgument);
}

TEST_CASE("Case-I file splitting") {
  const CacheConfig cfg = CacheConfig::uniform(0.2, 0.8, 0.8, 0.2, 4e9);
  const DeliveryLoad load = split_files(cfg);
  CHECK(load[Signal::A1] == doctest::Approx(0.6 * 4e9));
  CHECK(load[Signal::A2] == doctest::Approx(0.2 * 4e9));
  CHECK(load[Signal::B1] == doctest::Approx(0.6 * 4e9));
  CHECK(load[Signal::B2] == doctest::Approx(0.2 * 4e9));
  CHECK(load.user_total(User::i) == doctest::Approx(0.8 * 4e9));

  const DeliveryLoad none = split_files(CacheConfig::uniform(0, 0, 0, 0, 1));
  CHECK(none[Signal::A1] == 0);
  CHECK(none[Signal::A2] == 1);

  CHECK_THROWS_AS(split_files(CacheConfig::uniform(0.9, 0.8, 0.1, 0.2, 1)), UnsupportedCaseError);
}

TEST_CASE("label swap exchanges users and files together") {
  Eigen::Matrix2d c;
  c << 0.1, 0.7, 0.6, 0.3;
  const CacheConfig cfg(c, Eigen::Vector2d(4, 5));
  const CacheConfig s = cfg.swapped_labels();
  CHECK(s.fraction(User::i, File::A) == doctest::Approx(0.3));  // old j, B
  CHECK(s.fraction(User::i, File::B) == doctest::Approx(0.6));  // old j, A
  CHECK(s.fraction(User::j, File::A) == doctest::Approx(0.7));  // old i, B
  CHECK(s.fraction(User::j, File::B) == doctest::Approx(0.1));  // old i, A
  CHECK(s.file_bits(File::A) == 5);
  CHECK(classify_cache_case(cfg) == CacheCase::I);
  CHECK(classify_cache_case(s) == CacheCase::I);
  // The default configuration maps onto itself.
  const CacheConfig d = CacheConfig::uniform(0.2, 0.8, 0.8, 0.2, 1);
  CHECK(d.swapped_labels().fractions().isApprox(d.fractions()));
}
