#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tracelab/error.hpp"
#include "tracelab/kmer_maps.hpp"

using namespace tracelab;

namespace {
BitString bs(const char* s) { return BitString::from_ascii(s); }
}  // namespace

TEST_CASE("occurrence indicator") {
  CHECK(occurrence_indicator(bs("0110"), 1, bs("11")) == 1);
  CHECK(occurrence_indicator(bs("0110"), 0, bs("11")) == 0);
  CHECK_THROWS_AS(occurrence_indicator(bs("0110"), 3, bs("11")), Error);
}

TEST_CASE("binomial weights are binomial pmfs") {
  for (double p : {0.0, 0.2, 0.5, 0.95}) {
    for (std::size_t n : {10, 60, 200}) {
      const BinomialWeights w(n, ChannelParams::with_deletion(p));
      for (std::size_t j = 0; j < n; j += 7) {
        double sum = 0.0;
        for (double v : w.row(j)) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        const std::size_t i = j / 2;
        const double ref = oracle::binomial(j, i) * std::pow(p, static_cast<double>(j - i)) *
                           std::pow(1.0 - p, static_cast<double>(i));
        CHECK(w(j, i) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(w(j, j + 1) == 0.0);
      }
    }
  }
}

TEST_CASE("density entry examples") {
  const auto params = ChannelParams::with_deletion(0.3);
  CHECK(density_entry(bs("01"), bs("1"), 0, params) == doctest::Approx(0.3));
  CHECK(density_entry(bs("01"), bs("1"), 1, params) == doctest::Approx(0.7));
  CHECK(density_entry(bs("1"), bs("1"), 0, ChannelParams::with_deletion(0.8)) == 1.0);
}

TEST_CASE("density map rows") {
  const auto map = density_map(bs("11"), 1, ChannelParams::with_deletion(0.5));
  REQUIRE(map.row("1") != nullptr);
  CHECK(map.at("1", 0) == doctest::Approx(1.5));
  CHECK(map.at("1", 1) == doctest::Approx(0.5));
  CHECK(map.row("0") == nullptr);
  CHECK(density_map(bs("00"), 1, ChannelParams::with_deletion(0.5)).row("1") == nullptr);
  CHECK_THROWS_AS(density_map(bs("00"), 3, ChannelParams::with_deletion(0.5)), Error);
  CHECK_THROWS_AS(density_map(bs("00"), 0, ChannelParams::with_deletion(0.5)), Error);
}

TEST_CASE("density map matches the direct sum") {
  CounterRng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    const auto x = oracle::random_string(rng, n);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 5));
    const auto params = ChannelParams::with_deletion(0.9 * rng.uniform());
    const auto map = density_map(x, k, params);
    for (const auto& [w, row] : map.rows) {
      REQUIRE(row.size() == n);
      const auto wb = BitString::from_ascii(w);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(row[i] - oracle::density_entry(x, wb, i, params)) <= 1e-12 * std::max(1.0, row[i]));
    }
  }
}

TEST_CASE("row sums equal subword counts") {
  CounterRng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(64);
    const auto x = oracle::random_string(rng, n);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 6));
    const auto map = density_map(x, k, ChannelParams::with_deletion(rng.uniform() * 0.99));
    for (const auto& [w, row] : map.rows) {
      double sum = 0.0;
      for (double v : row) sum += v;
      CHECK(sum == doctest::Approx(static_cast<double>(subword_count(x, BitString::from_ascii(w)))).epsilon(1e-12));
    }
  }
}

TEST_CASE("window marginalisation holds at the indicator level") {
  CounterRng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = oracle::random_string(rng, 4 + rng.below(10));
    const auto w = oracle::random_string(rng, 1 + rng.below(3));
    for (std::size_t j = 1; j + w.size() <= x.size(); ++j) {
      const int lhs = occurrence_indicator(x, j, w);
      const int rhs = occurrence_indicator(x, j - 1, bs("0") + w) + occurrence_indicator(x, j - 1, bs("1") + w);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("map distances") {
  const auto params = ChannelParams::with_deletion(0.5);
  const auto a = density_map(bs("10"), 1, params);
  const auto b = density_map(bs("01"), 1, params);
  CHECK(map_l1_distance(a, a) == 0.0);
  // The "1" rows alone are [1, 0] and [0.5, 0.5]; the "0" rows mirror them.
  double ones = 0.0;
  for (std::size_t i = 0; i < 2; ++i) ones += std::abs(a.at("1", i) - b.at("1", i));
  CHECK(ones == doctest::Approx(1.0));
  CHECK(map_l1_distance(a, b) == doctest::Approx(2.0));
  CHECK(map_linf_distance(a, b) == doctest::Approx(0.5));
  CHECK_THROWS_AS(map_l1_distance(a, density_map(bs("101"), 1, params)), Error);
  CHECK_THROWS_AS(map_l1_distance(a, density_map(bs("10"), 1, ChannelParams::with_deletion(0.4))), Error);
}

TEST_CASE("mean trace equals keep-set expectation") {
  CHECK(mean_trace(bs("1"), ChannelParams::with_deletion(0.5))[0] == doctest::Approx(0.5));
  const auto m = mean_trace(bs("01"), ChannelParams::with_deletion(0.3));
  CHECK(m[0] == doctest::Approx(0.21));
  CHECK(m[1] == doctest::Approx(0.49));
  for (double v : mean_trace(bs("0000"), ChannelParams::with_deletion(0.3))) CHECK(v == 0.0);
  CounterRng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = oracle::random_string(rng, 1 + rng.below(10));
    const auto params = ChannelParams::with_deletion(rng.uniform() * 0.9);
    const auto got = mean_trace(x, params);
    const auto ref = oracle::mean_trace(x, params);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(got[j] - ref[j]) <= 1e-12);
  }
}

TEST_CASE("contiguous-origin frequency") {
  const auto params = ChannelParams::with_deletion(0.5);
  const auto est = contiguous_origin_frequency(bs("11"), bs("11"), 0, params, 100000, 77);
  CHECK(std::abs(est.estimate - 0.25) <= 4.0 * std::sqrt(0.25 * 0.75 / 1e5));
  const auto exact = contiguous_origin_frequency(bs("0110"), bs("11"), 1, ChannelParams::with_deletion(0.0), 50, 1);
  CHECK(exact.estimate == 1.0);
  const auto miss = contiguous_origin_frequency(bs("0110"), bs("11"), 0, ChannelParams::with_deletion(0.0), 50, 1);
  CHECK(miss.estimate == 0.0);
  const auto none = contiguous_origin_frequency(bs("0000"), bs("11"), 0, params, 500, 1);
  CHECK(none.hits == 0);
}

TEST_CASE("empirical mean trace") {
  const auto exact = empirical_mean_trace(bs("0110"), ChannelParams::with_deletion(0.0), 10, 3);
  CHECK(exact.mean == std::vector<double>{0, 1, 1, 0});
  const auto est = empirical_mean_trace(bs("11"), ChannelParams::with_deletion(0.5), 100000, 5);
  CHECK(std::abs(est.mean[0] - 0.75) <= 4.0 * std::sqrt(0.75 * 0.25 / 1e5));
}

TEST_CASE("distinctness at small n") {
  CHECK(distinctness_k(1) == 1);
  CHECK(distinctness_k(8) == 4);
  const auto params = ChannelParams::with_deletion(0.5);
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto scan = distinctness_scan(n, params);
    CHECK(scan.min_l1 > 0.0);
    CHECK(scan.pairs == (std::uint64_t{1} << n) * ((std::uint64_t{1} << n) - 1) / 2);
    CHECK(map_l1_distance(density_map(scan.x, scan.k, params), density_map(scan.y, scan.k, params)) ==
          doctest::Approx(scan.min_l1));
    const auto serial = distinctness_scan(n, params, kernels::Exec::Serial);
    CHECK(serial.min_l1 == scan.min_l1);
    CHECK(serial.x == scan.x);
    CHECK(serial.y == scan.y);
  }
}
