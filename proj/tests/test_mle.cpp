#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "tracelab/error.hpp"
#include "tracelab/mle.hpp"

using namespace tracelab;

namespace {
BitString bs(const char* s) { return BitString::from_ascii(s); }

DistributionFamily uniform_vs_points(std::size_t m) {
  std::vector<std::string> domain;
  for (std::size_t s = 0; s < m; ++s) domain.push_back(std::to_string(s));
  std::vector<std::vector<double>> members{std::vector<double>(m, 1.0 / static_cast<double>(m))};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> point(m, 0.0);
    point[i] = 1.0;
    members.push_back(point);
  }
  return DistributionFamily(domain, members);
}

DistributionFamily random_family(CounterRng& rng, std::size_t members, std::size_t domain_size) {
  std::vector<std::string> domain;
  for (std::size_t s = 0; s < domain_size; ++s) domain.push_back("o" + std::to_string(s));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < members; ++i) {
    std::vector<double> row(domain_size);
    double total = 0.0;
    for (auto& v : row) {
      v = rng.uniform() < 0.3 ? 0.0 : -std::log(1.0 - rng.uniform());
      total += v;
    }
    if (total == 0.0) {
      row[0] = 1.0;
      total = 1.0;
    }
    for (auto& v : row) v /= total;
    rows.push_back(row);
  }
  return DistributionFamily(domain, rows);
}
}  // namespace

TEST_CASE("log likelihood") {
  const auto one = DistributionTable::from_map({{"a", 1.0}});
  CHECK(log_likelihood(std::vector<std::string>{"a"}, one) == 0.0);
  const auto half = DistributionTable::from_map({{"a", 0.5}, {"b", 0.5}, {"c", 0.0}});
  CHECK(log_likelihood(std::vector<std::string>{"a", "b"}, half) == doctest::Approx(std::log(0.25)));
  CHECK(std::isinf(log_likelihood(std::vector<std::string>{"c"}, half)));
  CHECK_THROWS_AS(log_likelihood(std::vector<std::string>{"z"}, half), Error);
}

TEST_CASE("mle tie-breaking and the point-mass family") {
  const DistributionFamily twins({"a", "b"}, {{0.5, 0.5}, {0.5, 0.5}});
  CHECK(mle(SampleBatch{{0, 1}}, twins).index == 0);
  const DistributionFamily single({"a"}, {{1.0}});
  CHECK(mle(SampleBatch{{0}}, single).index == 0);
  const auto family = uniform_vs_points(5);
  for (std::size_t s = 0; s < 5; ++s) CHECK(mle(SampleBatch{{s}}, family).index == s + 1);
  const DistributionFamily disjoint({"a", "b"}, {{1.0, 0.0}, {0.0, 1.0}});
  const auto none = mle(SampleBatch{{0, 1}}, disjoint);
  CHECK(none.degenerate);
  CHECK(none.index == 0);
  CHECK_THROWS_AS(mle(SampleBatch{{0}}, DistributionFamily{}), Error);
}

TEST_CASE("optimality bound") {
  const auto tight = optimality_bound_check(uniform_vs_points(6), 0, 1);
  CHECK(tight.pass);
  CHECK(tight.details["prob_mle_null"].get<double>() == 0.0);
  CHECK(tight.details["bound"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  const DistributionFamily disjoint({"a", "b", "c"}, {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  const auto d = optimality_bound_check(disjoint, 0, 1);
  CHECK(d.pass);
  CHECK(d.details["prob_mle_null"].get<double>() == 1.0);
  CounterRng rng(77);
  for (int trial = 0; trial < 20; ++trial) CHECK(optimality_bound_check(random_family(rng, 2 + rng.below(6), 2 + rng.below(8)), 0, 1).pass);
}

TEST_CASE("trace product families") {
  const std::vector<BitString> sources{bs("0011"), bs("0101"), bs("1001")};
  const auto params = ChannelParams::with_deletion(0.3);
  const auto family = trace_product_family(sources, params, 2);
  const std::size_t d = trace_product_family(sources, params, 1).domain().size();
  CHECK(family.domain().size() == d * d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    double total = 0.0;
    for (double v : family.member(i)) total += v;
    CHECK(total == doctest::Approx(1.0));
  }
  const auto idx = family.index_of("01,1");
  REQUIRE(idx.has_value());
  CHECK(family.member(0)[*idx] == doctest::Approx(trace_probability(sources[0], bs("01"), params) *
                                                  trace_probability(sources[0], bs("1"), params)));
  CHECK(optimality_bound_check(trace_product_family(sources, params, 3), 0, 1).pass);
}

TEST_CASE("trace MLE reconstruction") {
  const auto identity = ChannelParams::with_deletion(0.0);
  for (const char* s : {"0", "1011", "1110001"}) {
    const auto x = bs(s);
    const std::vector<Trace> traces{sample_trace(x, identity, 1)};
    const auto r = trace_mle_reconstruct(traces, x.size(), identity);
    CHECK(r.estimate == x);
    CHECK(r.log_likelihood == 0.0);
  }
  const std::vector<BitString> cands{bs("0000"), bs("0011")};
  const std::vector<Trace> stray{Trace{bs("111"), {}}};
  const auto none = trace_mle_reconstruct(stray, 4, ChannelParams::with_deletion(0.5),
                                          std::span<const BitString>(cands));
  CHECK(none.degenerate);
  CHECK(none.estimate == bs("0000"));
  CHECK_THROWS_AS(trace_mle_reconstruct(stray, 21, ChannelParams::with_deletion(0.5)), Error);
}

TEST_CASE("trace MLE agrees with a direct likelihood scan") {
  CounterRng rng(5);
  const auto params = ChannelParams::with_deletion(0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_string(rng, 6);
    std::vector<Trace> traces;
    for (int t = 0; t < 4; ++t) traces.push_back(sample_trace(x, params, rng()));
    std::vector<double> ll(64, 0.0);
    for (std::uint64_t v = 0; v < 64; ++v) {
      const auto c = BitString::from_integer(v, 6);
      for (const auto& t : traces) ll[v] += std::log(static_cast<double>(oracle::tuple_count(c, t.bits))) +
                                            static_cast<double>(6 - t.bits.size()) * std::log(0.3) +
                                            static_cast<double>(t.bits.size()) * std::log(0.7);
    }
    const double best = *std::max_element(ll.begin(), ll.end());
    std::uint64_t first = 0;
    while (ll[first] < best - 1e-9) ++first;
    const auto r = trace_mle_reconstruct(traces, 6, params);
    CHECK(r.log_likelihood == doctest::Approx(best).epsilon(1e-12));
    CHECK(r.estimate == BitString::from_integer(first, 6));
  }
}

TEST_CASE("lower-bound family") {
  const auto lb = lb_family(8);
  CHECK(lb.t == 2);
  CHECK(lb.m == 28);
  CHECK(lb.family.domain().size() == 36);
  CHECK(lb.family.size() == 29);
  for (std::size_t s = 0; s < 8; ++s) {
    const auto idx = lb.family.index_of(std::to_string(s));
    REQUIRE(idx.has_value());
    CHECK(lb.family.member(0)[*idx] == doctest::Approx(0.125));
  }
  CHECK(lb.family.member(0)[*lb.family.index_of("{0,1}")] == 0.0);
  CHECK(lb.family.member(1)[*lb.family.index_of("{0,1}")] == doctest::Approx(2.0 / 3.0));
  CHECK(lb.family.member(1)[*lb.family.index_of("0")] == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("lower-bound verification") {
  const auto a = lb_verify(8, 2);
  CHECK(a.pass);
  CHECK(a.prob_mle_null == "0");
  CHECK(a.tuples_mle_null == 0);
  CHECK(a.multisets == 36);
  CHECK(a.distinguisher_min == "2/3");
  CHECK(a.distinguisher_null == "1");
  const auto b = lb_verify(12, 3);
  CHECK(b.pass);
  CHECK(b.prob_mle_null == "0");
  // Beyond the claim's range some multisets are uncovered and D_0 wins them.
  const auto c = lb_verify(8, 3);
  CHECK_FALSE(c.claim_applies);
  CHECK(c.uncovered_multiset);
  CHECK(c.prob_mle_null != "0");
}

TEST_CASE("posterior argmax equals the MLE") {
  CHECK(map_equals_mle_check(uniform_vs_points(4), 1000, 3).pass);
  CounterRng rng(8);
  for (int trial = 0; trial < 5; ++trial) CHECK(map_equals_mle_check(random_family(rng, 5, 6), 200, rng()).pass);
}

TEST_CASE("isotonic regression") {
  const std::vector<double> v{0.1, 0.5, 0.3, 0.9, 0.8};
  const auto fit = isotonic_increasing(v);
  const std::vector<double> expected{0.1, 0.4, 0.4, 0.85, 0.85};
  REQUIRE(fit.size() == expected.size());
  for (std::size_t i = 0; i < fit.size(); ++i) CHECK(fit[i] == doctest::Approx(expected[i]));
  for (std::size_t i = 1; i < fit.size(); ++i) CHECK(fit[i] >= fit[i - 1]);
  const std::vector<double> w{3.0, 1.0};
  const auto weighted = isotonic_increasing(std::vector<double>{1.0, 0.0}, w);
  CHECK(weighted[0] == doctest::Approx(0.75));
  CHECK(weighted[1] == doctest::Approx(0.75));
}

TEST_CASE("success curves") {
  const std::vector<BitString> pool{bs("0110"), bs("1001")};
  const std::vector<std::size_t> Ts{1, 4};
  const auto exact = amplified_success_curve(pool, ChannelParams::with_deletion(0.0), Ts, 20, 9);
  for (const auto& row : exact.rows) CHECK(row.success_rate == 1.0);
  const auto curve = amplified_success_curve(pool, ChannelParams::with_deletion(0.3), Ts, 50, 9);
  const auto serial =
      amplified_success_curve(pool, ChannelParams::with_deletion(0.3), Ts, 50, 9, kernels::Exec::Serial);
  CHECK(success_curve_csv(curve) == success_curve_csv(serial));
  CHECK(success_curve_csv(curve).rfind("n,p,T,source,success_rate,trials,seed\n", 0) == 0);
  CHECK(curve.rows.size() == 4);
}
