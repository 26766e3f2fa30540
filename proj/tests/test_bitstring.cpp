#include <doctest.h>

#include "tracelab/bitstring.hpp"
#include "tracelab/error.hpp"
#include "tracelab/rng.hpp"

using tracelab::BitString;

TEST_CASE("ascii round trip and integer padding") {
  CHECK(BitString::from_ascii("0110").to_ascii() == "0110");
  CHECK(BitString::from_integer(5, 4).to_ascii() == "0101");
  CHECK(BitString::from_integer(0, 0).empty());
  CHECK_THROWS_AS(BitString::from_ascii("01a"), tracelab::Error);
}

TEST_CASE("windows and slices") {
  const auto x = BitString::from_ascii("0110");
  CHECK(x.window_equals(1, BitString::from_ascii("11")));
  CHECK_FALSE(x.window_equals(0, BitString::from_ascii("11")));
  CHECK_FALSE(x.window_equals(3, BitString::from_ascii("11")));
  CHECK(x.slice(1, 2).to_ascii() == "11");
  CHECK(x.count_ones() == 2);
  CHECK((x + BitString::from_ascii("1")).to_ascii() == "01101");
}

TEST_CASE("unit k-mers") {
  CHECK(tracelab::unit_kmer(3, 1).to_ascii() == "100");
  CHECK(tracelab::unit_kmer(3, 3).to_ascii() == "001");
  CHECK_THROWS_AS(tracelab::unit_kmer(3, 0), tracelab::Error);
  CHECK_THROWS_AS(tracelab::unit_kmer(3, 4), tracelab::Error);
}

TEST_CASE("ordering is lexicographic on bits") {
  CHECK(BitString::from_ascii("001") < BitString::from_ascii("010"));
  CHECK(BitString::from_ascii("01") < BitString::from_ascii("010"));
}

TEST_CASE("counter rng is positionable and bounded") {
  tracelab::CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
  CHECK(a.counter() == 100);
  tracelab::CounterRng c(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.below(13) < 13);
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  tracelab::BernoulliThreshold always(1.0), never(0.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(always(c));
    CHECK_FALSE(never(c));
  }
}
