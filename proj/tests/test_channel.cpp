#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/error.hpp"

using namespace tracelab;

namespace {
BitString bs(const char* s) { return BitString::from_ascii(s); }
}  // namespace

TEST_CASE("identity channel keeps every bit") {
  const auto t = sample_trace(bs("101"), ChannelParams::with_deletion(0.0), 99);
  CHECK(t.bits == bs("101"));
  CHECK(t.origins == std::vector<std::size_t>{0, 1, 2});
  const auto e = sample_trace(BitString{}, ChannelParams::with_deletion(0.5), 1);
  CHECK(e.bits.empty());
  CHECK(e.origins.empty());
}

TEST_CASE("channel parameters are validated") {
  CHECK_THROWS_AS(ChannelParams::with_deletion(1.0), Error);
  CHECK_THROWS_AS(ChannelParams::with_deletion(-0.1), Error);
  CHECK(ChannelParams::with_deletion(0.3).q == doctest::Approx(0.7));
}

TEST_CASE("sampling is deterministic and yields valid embeddings") {
  CounterRng rng(3);
  const auto params = ChannelParams::with_deletion(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = oracle::random_string(rng, 1 + rng.below(30));
    const auto seed = rng();
    const auto a = sample_trace(x, params, seed);
    const auto b = sample_trace(x, params, seed);
    CHECK(a.bits == b.bits);
    CHECK(a.origins == b.origins);
    CHECK(a.is_valid_embedding(x));
  }
}

TEST_CASE("long all-ones source keeps about half its bits") {
  const std::size_t n = 100000;
  const BitString x(std::vector<std::uint8_t>(n, 1));
  const auto t = sample_trace(x, ChannelParams::with_deletion(0.5), 2024);
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(static_cast<double>(t.bits.size()) - 0.5 * n) <= 3.0 * sigma);
  CHECK(t.bits.count_ones() == t.bits.size());
}

TEST_CASE("subsequence counts match index-tuple enumeration") {
  CHECK(subsequence_count(bs("101"), bs("11")) == 1);
  CHECK(subsequence_count(bs("0000"), bs("00")) == 6);
  CHECK(subsequence_count(bs("0110"), BitString{}) == 1);
  CHECK(subsequence_count_u64(bs("0000"), bs("00")) == 6);
  CounterRng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = oracle::random_string(rng, rng.below(11));
    const auto t = oracle::random_string(rng, rng.below(x.size() + 2));
    CHECK(subsequence_count_u64(x, t) == oracle::tuple_count(x, t));
  }
}

TEST_CASE("large counts stay exact") {
  const BitString x(std::vector<std::uint8_t>(200, 0));
  const BitString t(std::vector<std::uint8_t>(100, 0));
  BigInt c = 1;
  for (int i = 1; i <= 100; ++i) c = c * (100 + i) / i;
  CHECK(subsequence_count(x, t) == c);
}

TEST_CASE("trace probability examples") {
  CHECK(trace_probability(bs("101"), bs("11"), ChannelParams::with_deletion(0.5)) == doctest::Approx(0.125));
  CHECK(trace_probability(bs("1"), bs("1"), ChannelParams::with_deletion(0.3)) == doctest::Approx(0.7));
  CHECK(trace_probability(bs("1101"), bs("1101"), ChannelParams::with_deletion(0.0)) == 1.0);
  CHECK(trace_probability(bs("1101"), bs("110"), ChannelParams::with_deletion(0.0)) == 0.0);
  CHECK(std::isinf(trace_log_probability(bs("000"), bs("1"), ChannelParams::with_deletion(0.5))));
}

TEST_CASE("log-domain probability agrees across the 64-bit boundary") {
  CounterRng rng(8);
  const auto params = ChannelParams::with_deletion(0.2);
  const auto x = oracle::random_string(rng, 70);
  const auto prefix = x.slice(0, 64);
  const auto t = sample_trace(prefix, params, 17).bits;
  // Appending deleted bits multiplies D by N'/N p^6; compare through logs.
  const double small = trace_log_probability(prefix, t, params);
  CHECK(std::isfinite(small));
  const double big = trace_log_probability(x, t, params);
  CHECK(std::isfinite(big));
  CHECK(std::log(trace_probability(x, t, params)) == doctest::Approx(big).epsilon(1e-12));
}

TEST_CASE("distribution of 101") {
  const auto table = trace_distribution(bs("101"), ChannelParams::with_deletion(0.5));
  const std::vector<std::string> order{"", "0", "1", "01", "10", "11", "101"};
  REQUIRE(table.size() == order.size());
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(table.domain()[i] == order[i]);
  CHECK(table.probability("1") == doctest::Approx(0.25));
  CHECK(table.probability("101") == doctest::Approx(0.125));
  CHECK(table.probability("111") == 0.0);
  const auto one = trace_distribution(bs("1"), ChannelParams::with_deletion(0.25));
  CHECK(one.probability("") == doctest::Approx(0.25));
  CHECK(one.probability("1") == doctest::Approx(0.75));
}

TEST_CASE("distributions match keep-set enumeration") {
  for (double p : {0.1, 0.5, 0.9}) {
    const auto params = ChannelParams::with_deletion(p);
    for (std::size_t n = 0; n <= 8; ++n) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const auto x = BitString::from_integer(v, n);
        const auto table = trace_distribution(x, params);
        const auto ref = oracle::keep_set_distribution(x, params);
        REQUIRE(table.size() == ref.size());
        CHECK(std::abs(table.total() - 1.0) <= 1e-10);
        for (const auto& [t, pr] : ref) CHECK(std::abs(table.probability(t) - pr) <= 1e-12);
      }
    }
  }
}

TEST_CASE("distinct subsequences are sorted by length then value") {
  const auto subs = distinct_subsequences(bs("0110"));
  for (std::size_t i = 1; i < subs.size(); ++i) {
    const bool ordered = subs[i - 1].size() < subs[i].size() ||
                         (subs[i - 1].size() == subs[i].size() && subs[i - 1] < subs[i]);
    CHECK(ordered);
  }
  CHECK(subs.size() == oracle::keep_set_distribution(bs("0110"), ChannelParams::with_deletion(0.5)).size());
}

TEST_CASE("length guard") {
  const BitString x(std::vector<std::uint8_t>(21, 1));
  CHECK_THROWS_AS(trace_distribution(x, ChannelParams::with_deletion(0.5)), Error);
  CHECK(trace_distribution(x, ChannelParams::with_deletion(0.5), true).size() == 22);
}

TEST_CASE("total variation distance") {
  const auto a = trace_distribution(bs("0110"), ChannelParams::with_deletion(0.3));
  CHECK(tv_distance(a, a) == 0.0);
  const auto u = DistributionTable::from_map({{"a", 0.5}, {"b", 0.5}});
  const auto v = DistributionTable::from_map({{"c", 1.0}});
  CHECK(tv_distance(u, v) == doctest::Approx(1.0));
  // Uniform on [m] against a point mass.
  const auto w = DistributionTable::from_map({{"0", 0.25}, {"1", 0.25}, {"2", 0.25}, {"3", 0.25}});
  const auto point = DistributionTable::from_map({{"2", 1.0}});
  CHECK(tv_distance(w, point) == doctest::Approx(0.75));
}

TEST_CASE("table validation and json round trip") {
  CHECK_THROWS_AS(DistributionTable({"a", "a"}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(DistributionTable({"a"}, {0.9}), Error);
  CHECK_THROWS_AS(DistributionTable({"a", "b"}, {1.5, -0.5}), Error);
  const auto table = trace_distribution(bs("1001"), ChannelParams::with_deletion(0.4));
  const auto back = distribution_from_json(to_json(table));
  CHECK(tv_distance(table, back) == 0.0);
}
