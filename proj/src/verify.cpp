#include "tracelab/verify.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "tracelab/channel.hpp"
#include "tracelab/distinguish.hpp"
#include "tracelab/error.hpp"
#include "tracelab/genpoly.hpp"
#include "tracelab/hard_pairs.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/mle.hpp"
#include "tracelab/rng.hpp"

namespace tracelab::verify {

namespace {

CheckReport named(const std::string& check, json inputs = json::object()) {
  CheckReport r;
  r.check = check;
  r.inputs = std::move(inputs);
  return r;
}

BitString random_string(CounterRng& rng, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
  return BitString(std::move(bits));
}

// Probability of trace t by summing over every keep set of x.
double keep_set_probability(const BitString& x, const BitString& t, const ChannelParams& params) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint8_t> kept;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1U) kept.push_back(x[j]);
    if (BitString(kept) != t) continue;
    const auto m = static_cast<double>(kept.size());
    total += std::pow(params.p, static_cast<double>(n) - m) * std::pow(params.q, m);
  }
  return total;
}

}  // namespace

std::vector<CheckReport> channel_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    auto r = named("trace_distribution_vs_keep_sets", {{"max_n", 6}});
    for (double p : {0.1, 0.5, 0.9}) {
      const auto params = ChannelParams::with_deletion(p);
      for (std::size_t n = 0; n <= 6; ++n) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
          const BitString x = BitString::from_integer(v, n);
          const auto table = trace_distribution(x, params);
          r.require(std::abs(table.total() - 1.0), 1e-10);
          for (std::size_t i = 0; i < table.size(); ++i)
            r.require(std::abs(table.probs()[i] -
                               keep_set_probability(x, BitString::from_ascii(table.domain()[i]), params)),
                      1e-12);
        }
      }
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("sample_frequencies", {{"x", "10110"}, {"p", 0.3}, {"T", 20000}, {"seed", seed}});
    const BitString x = BitString::from_ascii("10110");
    const auto params = ChannelParams::with_deletion(0.3);
    const auto table = trace_distribution(x, params);
    std::vector<double> hits(table.size(), 0.0);
    bool origins_ok = true;
    constexpr std::uint64_t T = 20000;
    for (std::uint64_t t = 0; t < T; ++t) {
      const Trace tr = sample_trace(x, params, derive_seed(seed, t));
      origins_ok = origins_ok && tr.is_valid_embedding(x);
      hits[*table.index_of(tr.bits.to_ascii())] += 1.0;
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double pr = table.probs()[i];
      const double sigma = std::sqrt(pr * (1.0 - pr) / static_cast<double>(T));
      r.require(std::abs(hits[i] / static_cast<double>(T) - pr), 4.0 * sigma + 1e-15);
    }
    r.require_true(origins_ok, "origins are embeddings");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> kmer_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  CounterRng rng(seed);
  {
    auto r = named("row_sum_identity", {{"strings", 40}, {"max_n", 64}, {"max_k", 6}});
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 6 + rng.below(59);
      const BitString x = random_string(rng, n);
      const auto params = ChannelParams::with_deletion(0.05 + 0.9 * rng.uniform());
      const std::size_t k = 1 + rng.below(6);
      const auto map = density_map(x, k, params);
      for (const auto& [w, row] : map.rows) {
        double sum = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) {
          sum += row[i];
          if (i + k > n) r.require_true(row[i] == 0.0, "support bound");
        }
        const auto count = static_cast<double>(subword_count(x, BitString::from_ascii(w)));
        r.require(std::abs(sum - count), 1e-9);
      }
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("mean_trace_identity", {{"x", "1101001110"}, {"p", 0.4}, {"T", 20000}, {"seed", seed}});
    const BitString x = BitString::from_ascii("1101001110");
    const auto params = ChannelParams::with_deletion(0.4);
    const auto exact = mean_trace(x, params);
    const auto emp = empirical_mean_trace(x, params, 20000, seed);
    for (std::size_t j = 0; j < exact.size(); ++j) {
      const double sigma = std::sqrt(exact[j] * (1.0 - exact[j]) / 20000.0);
      r.require(std::abs(emp.mean[j] - exact[j]), 4.0 * sigma + 1e-15);
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("contiguous_origin_frequency", {{"x", "0110100"}, {"p", 0.3}, {"T", 20000}, {"seed", seed}});
    const BitString x = BitString::from_ascii("0110100");
    const auto params = ChannelParams::with_deletion(0.3);
    const auto map = density_map(x, 2, params);
    for (const auto& [w, row] : map.rows) {
      for (std::size_t i = 0; i + 2 <= x.size(); ++i) {
        const double expect = params.q * params.q * row[i];
        const auto est = contiguous_origin_frequency(x, BitString::from_ascii(w), i, params, 20000,
                                                     derive_seed(seed, i));
        const double sigma = std::sqrt(expect * (1.0 - expect) / 20000.0);
        r.require(std::abs(est.estimate - expect), 4.0 * sigma + 1e-15);
      }
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("distinctness", {{"max_n", 8}, {"p", 0.5}});
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto scan = distinctness_scan(n, ChannelParams::with_deletion(0.5));
      r.require_true(scan.min_l1 > 0.0, "n=" + std::to_string(n));
      r.details["min_l1"].push_back(scan.min_l1);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> genpoly_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  CounterRng rng(seed);
  {
    auto r = named("coefficient_vs_subword_form", {{"instances", 100}});
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + rng.below(16);
      const BitString x = random_string(rng, n);
      const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 4));
      const BitString w = x.slice(rng.below(n - k + 1), k);
      const auto params = ChannelParams::with_deletion(0.9 * rng.uniform());
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      const Complex a = generating_polynomial(x, w, params)(z);
      const Complex b = eval_subword_form(x, w, params, z);
      r.require(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(b)));
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("chebyshev_round_trip", {{"instances", 20}});
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t deg = rng.below(65);
      std::vector<double> c(deg + 1);
      for (auto& v : c) v = 2.0 * rng.uniform() - 1.0;
      const auto f = PolyCoeffs::from_real(c);
      const auto cheb = monomial_to_chebyshev(f);
      double scale = 0.0;
      for (const auto& v : c) scale += std::abs(v);
      for (int g = 0; g <= 256; ++g) {
        const double z = -1.0 + 2.0 * g / 256.0;
        r.require(std::abs(chebyshev_eval(cheb, z) - f(z)), 1e-8 * std::max(1.0, scale));
      }
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("analytic_checks", {{"instances", 5}});
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(1 + rng.below(10));
      for (auto& v : c) v = 2.0 * rng.uniform() - 1.0;
      const auto f = PolyCoeffs::from_real(c);
      const double rho = 1.5 + 2.5 * rng.uniform();
      const double a = 0.125 * (0.2 + 0.8 * rng.uniform());
      for (const auto& rep : {cheb_coeff_bounds_check(monomial_to_chebyshev(f), f, rho),
                              ellipse_geometry_check(EllipseParams{a, rho}),
                              hadamard_three_circles_check(f, 0.5, 1.0 + rng.uniform(), 3.0),
                              contour_coefficient_bound_check(f)})
        r.require_true(rep.pass, rep.check);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> hardpair_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  const auto params = ChannelParams::with_deletion(0.5);
  for (std::size_t L : {8, 27}) {
    const auto family = build_family(L);
    const std::size_t c = family.cube_root;
    for (std::size_t k = 1; k <= c; ++k) out.push_back(family_properties_check(family, k, params, seed));
  }
  {
    const auto family = build_family(8);
    const ArcSpec arc = ArcSpec::with_default_grid(default_arc_half_width(8), 7);
    const auto fast = brute_force_closest_pair(family, 2, params, arc);
    const auto slow = closest_pair_reference(family, 2, params, arc);
    auto r = named("closest_pair_reference", {{"L", 8}, {"k", 2}});
    r.require_true(fast.first == slow.first && fast.second == slow.second && fast.sup == slow.sup,
                   "pruned scan equals reference");
    out.push_back(std::move(r));
    out.push_back(pad_and_bound(fast.x, fast.y, 32, params, 2, default_arc_half_width(8)).report);
    out.push_back(l1_pathway_check(fast.x, fast.y, 2, params));
  }
  return out;
}

std::vector<CheckReport> mle_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    constexpr std::size_t m = 6;
    std::vector<std::string> domain;
    for (std::size_t s = 0; s < m; ++s) domain.push_back(std::to_string(s));
    std::vector<std::vector<double>> members{std::vector<double>(m, 1.0 / m)};
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> point(m, 0.0);
      point[i] = 1.0;
      members.push_back(point);
    }
    const DistributionFamily family(domain, members);
    out.push_back(optimality_bound_check(family, 0, seed));
    out.push_back(map_equals_mle_check(family, 1000, seed));
  }
  {
    const std::vector<BitString> sources{BitString::from_ascii("001"), BitString::from_ascii("010"),
                                         BitString::from_ascii("101")};
    const auto family = trace_product_family(sources, ChannelParams::with_deletion(0.3), 2);
    out.push_back(optimality_bound_check(family, 0, seed));
    out.push_back(map_equals_mle_check(family, 1000, seed));
  }
  for (auto [n, T] : {std::pair<std::size_t, std::size_t>{8, 2}, {12, 3}}) {
    const auto lb = lb_verify(n, T);
    auto r = named("mle_lower_bound", {{"n", n}, {"T", T}});
    r.require_true(lb.pass && lb.prob_mle_null == "0", "Pr[MLE = 0] = 0");
    r.details["distinguisher_min"] = lb.distinguisher_min;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CheckReport> distinguish_suite(std::uint64_t seed) {
  std::vector<CheckReport> out;
  {
    auto r = named("kgram_expectation_vs_patterns", {{"max_n", 6}});
    const auto params = ChannelParams::with_deletion(0.35);
    for (std::size_t n = 2; n <= 6; ++n) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        const BitString x = BitString::from_integer(v, n);
        // Enumerate deletion patterns once; accumulate every trace window.
        std::map<std::pair<std::string, std::size_t>, double> oracle;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          std::vector<std::uint8_t> kept;
          for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1U) kept.push_back(x[j]);
          const auto m = static_cast<double>(kept.size());
          const double pr = std::pow(params.p, static_cast<double>(n) - m) * std::pow(params.q, m);
          const BitString t(kept);
          for (std::size_t i = 0; i + 2 <= t.size(); ++i) oracle[{t.slice(i, 2).to_ascii(), i}] += pr;
        }
        for (const char* w : {"00", "01", "10", "11"})
          for (std::size_t i = 0; i + 2 <= n; ++i) {
            const auto it = oracle.find({w, i});
            const double want = it == oracle.end() ? 0.0 : it->second;
            r.require(std::abs(expected_kgram_statistic(x, BitString::from_ascii(w), i, params) - want), 1e-12);
          }
      }
    }
    out.push_back(std::move(r));
  }
  {
    auto r = named("identity_channel_success", {{"seed", seed}});
    const auto rate = success_rate(BitString::from_ascii("0110"), BitString::from_ascii("0101"),
                                   ChannelParams::with_deletion(0.0), Method{}, 1, 40, seed);
    r.require_true(rate.rate == 1.0, "p = 0, T = 1");
    out.push_back(std::move(r));
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"channel", "kmer", "genpoly", "hardpair", "mle", "distinguish"};
  return names;
}

std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "all") {
    std::vector<CheckReport> all;
    for (const auto& suite : suite_names()) {
      auto part = run_suite(suite, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (name == "channel") return channel_suite(seed);
  if (name == "kmer") return kmer_suite(seed);
  if (name == "genpoly") return genpoly_suite(seed);
  if (name == "hardpair") return hardpair_suite(seed);
  if (name == "mle") return mle_suite(seed);
  if (name == "distinguish") return distinguish_suite(seed);
  throw Error(ErrorCode::Usage, "unknown suite '" + name + "'");
}

}  // namespace tracelab::verify
