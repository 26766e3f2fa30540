// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/distinguish.hpp"
#include "tracelab/genpoly.hpp"
#include "tracelab/hard_pairs.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/mle.hpp"
#include "tracelab/rng.hpp"

using namespace tracelab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream note;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      if (pass) note << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

// Trace index 2^len - 1 + value, so every trace of a source of length n
// lands in [0, 2^{n+1} - 1).
std::size_t trace_slot(std::string_view t) {
  std::size_t value = 0;
  for (char c : t) value = value << 1 | static_cast<std::size_t>(c == '1');
  return (std::size_t{1} << t.size()) - 1 + value;
}

void criterion_channel(Verdict& v) {
  std::size_t strings = 0;
  double worst_entry = 0.0, worst_total = 0.0;
  for (double p : {0.1, 0.5, 0.9}) {
    const auto params = ChannelParams::with_deletion(p);
    std::vector<double> pk(13), qk(13);
    for (std::size_t i = 0; i <= 12; ++i) {
      pk[i] = std::pow(p, static_cast<double>(i));
      qk[i] = std::pow(1.0 - p, static_cast<double>(i));
    }
    for (std::size_t n = 0; n <= 12; ++n) {
      std::vector<double> ref((std::size_t{2} << n) - 1);
      for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
        const auto x = BitString::from_integer(xv, n);
        std::fill(ref.begin(), ref.end(), 0.0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          std::size_t len = 0, value = 0;
          for (std::size_t j = 0; j < n; ++j)
            if (mask >> j & 1U) {
              value = value << 1 | x[j];
              ++len;
            }
          ref[(std::size_t{1} << len) - 1 + value] += pk[n - len] * qk[len];
        }
        const auto table = trace_distribution(x, params);
        worst_total = std::max(worst_total, std::abs(table.total() - 1.0));
        std::size_t nonzero = 0;
        for (double r : ref) nonzero += r > 0.0 ? 1 : 0;
        v.expect(nonzero == table.size(), "support size for " + x.to_ascii());
        for (std::size_t i = 0; i < table.size(); ++i)
          worst_entry = std::max(worst_entry, std::abs(table.probs()[i] - ref[trace_slot(table.domain()[i])]));
        ++strings;
      }
    }
  }
  v.expect(worst_total <= 1e-10, "total mass");
  v.expect(worst_entry <= 1e-12, "entrywise agreement");
  v.note << strings << " (x, p) cases, max |sum-1| " << fmt(worst_total) << ", max entry error "
         << fmt(worst_entry);
}

void criterion_density(Verdict& v) {
  CounterRng rng(2024);
  // Row sums: exhaustive for n <= 8, random up to n = 64.
  double worst_sum = 0.0;
  std::size_t maps = 0;
  auto check_rows = [&](const BitString& x, std::size_t k, const ChannelParams& params) {
    const auto map = density_map(x, k, params);
    for (const auto& [w, row] : map.rows) {
      double sum = 0.0;
      for (double e : row) sum += e;
      const auto count = static_cast<double>(subword_count(x, BitString::from_ascii(w)));
      worst_sum = std::max(worst_sum, std::abs(sum - count) / count);
    }
    ++maps;
  };
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv)
      for (std::size_t k = 1; k <= std::min<std::size_t>(n, 6); ++k)
        check_rows(BitString::from_integer(xv, n), k, ChannelParams::with_deletion(0.3));
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 9 + rng.below(56);
    check_rows(oracle::random_string(rng, n), 1 + rng.below(6), ChannelParams::with_deletion(0.95 * rng.uniform()));
  }
  v.expect(worst_sum <= 1e-12, "row sums");

  // Mean-trace identity at T = 1e5.
  constexpr std::uint64_t T = 100000;
  double worst_z = 0.0;
  std::size_t positions = 0;
  const std::vector<std::pair<const char*, double>> mean_cases{
      {"11", 0.5}, {"1101001110", 0.4}, {"0111010010110001", 0.2}, {"1010101011", 0.7}};
  for (const auto& [s, p] : mean_cases) {
    const auto x = BitString::from_ascii(s);
    const auto params = ChannelParams::with_deletion(p);
    const auto map = density_map(x, 1, params);
    const auto emp = empirical_mean_trace(x, params, T, derive_seed(7, positions));
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double expect = params.q * map.at("1", j);
      const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(T));
      const double dev = std::abs(emp.mean[j] - expect);
      v.expect(dev <= 4.0 * sigma + 1e-15, std::string("mean trace of ") + s);
      if (sigma > 0.0) worst_z = std::max(worst_z, dev / sigma);
      ++positions;
    }
  }

  // Contiguous-origin frequencies.
  double worst_z2 = 0.0;
  std::size_t events = 0;
  for (const auto& [s, p, k] : std::vector<std::tuple<const char*, double, std::size_t>>{
           {"11", 0.5, 2}, {"0110100101", 0.3, 2}, {"0110100101", 0.3, 3}, {"111000111", 0.6, 3}}) {
    const auto x = BitString::from_ascii(s);
    const auto params = ChannelParams::with_deletion(p);
    const auto map = density_map(x, k, params);
    for (const auto& [w, row] : map.rows) {
      for (std::size_t i = 0; i + k <= x.size(); ++i) {
        const double expect = std::pow(params.q, static_cast<double>(k)) * row[i];
        const auto est = contiguous_origin_frequency(x, BitString::from_ascii(w), i, params, T,
                                                     derive_seed(11, events));
        const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(T));
        const double dev = std::abs(est.estimate - expect);
        v.expect(dev <= 4.0 * sigma + 1e-15, "contiguous origin " + w + " in " + s);
        if (sigma > 0.0) worst_z2 = std::max(worst_z2, dev / sigma);
        ++events;
      }
    }
  }
  v.note << maps << " maps, max relative row-sum error " << fmt(worst_sum) << "; mean trace " << positions
         << " positions, max |z| " << fmt(worst_z) << "; contiguous origin " << events << " events, max |z| "
         << fmt(worst_z2);
}

void criterion_genpoly(Verdict& v) {
  CounterRng rng(33);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(16);
    const auto x = oracle::random_string(rng, n);
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(n, 4));
    // Half the instances use a window of x so the polynomial is nonzero.
    const auto w = trial % 2 == 0 ? x.slice(rng.below(n - k + 1), k) : oracle::random_string(rng, k);
    const auto params = ChannelParams::with_deletion(0.95 * rng.uniform());
    const Complex z = std::polar(1.5 * rng.uniform(), 2.0 * kPi * rng.uniform());
    const Complex a = generating_polynomial(x, w, params)(z);
    const Complex b = eval_subword_form(x, w, params, z);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  v.expect(worst <= 1e-9, "coefficient vs subword form");
  v.note << "100 instances, max relative deviation " << fmt(worst);
}

PolyCoeffs unit_disk_poly(CounterRng& rng, std::size_t coeffs) {
  std::vector<Complex> c(coeffs);
  for (auto& e : c) e = std::polar(std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform());
  return PolyCoeffs(c);
}

void criterion_analytic(Verdict& v) {
  CounterRng rng(44);
  std::size_t passed[5] = {0, 0, 0, 0, 0};
  std::size_t rejected = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = unit_disk_poly(rng, 1 + rng.below(16));
    const double rho = 1.1 + 3.0 * rng.uniform();
    passed[0] += cheb_coeff_bounds_check(monomial_to_chebyshev(f), f, rho).pass;
    passed[1] += ellipse_geometry_check(EllipseParams{0.125 * (0.02 + 0.98 * rng.uniform()), rho}).pass;
    const double r1 = 0.2 + rng.uniform();
    const double r2 = r1 * (1.5 + 2.0 * rng.uniform());
    const double r = r1 + (r2 - r1) * rng.uniform();
    passed[2] += hadamard_three_circles_check(f, r1, r, r2).pass;
    passed[4] += contour_coefficient_bound_check(f).pass;
    // The interval bound is drawn where n (1 + 4.5a)^n <= exp(5an) holds.
    while (true) {
      const double a = 0.0625 + 0.0625 * rng.uniform();
      const std::size_t n = 16 + rng.below(81);
      const double nd = static_cast<double>(n);
      if (std::log(nd) + nd * std::log1p(4.5 * a) > 5.0 * a * nd) {
        ++rejected;
        continue;
      }
      const auto g = trial % 5 == 0 ? PolyCoeffs::from_real(std::vector<double>(n, 1.0)) : unit_disk_poly(rng, n);
      passed[3] += ellipse_to_interval_check(g, a).pass;
      break;
    }
  }
  const char* names[5] = {"chebyshev", "geometry", "three-circles", "interval", "contour"};
  for (int i = 0; i < 5; ++i) {
    v.expect(passed[i] == 50, names[i]);
    v.note << names[i] << " " << passed[i] << "/50" << (i < 4 ? ", " : "");
  }
  v.note << " (" << rejected << " interval draws outside the growth premise redrawn)";
}

void criterion_family(Verdict& v) {
  const auto params = ChannelParams::with_deletion(0.5);
  std::size_t checks = 0;
  for (std::size_t L : {8, 27, 64}) {
    const auto family = build_family(L);
    for (std::size_t k = 1; k <= family.cube_root; ++k) {
      const auto rep = family_properties_check(family, k, params);
      v.expect(rep.pass, "L=" + std::to_string(L) + " k=" + std::to_string(k));
      ++checks;
    }
  }
  v.note << checks << " (L, k) combinations, items 1-3";
}

struct HardPairRun {
  std::size_t L = 0, k = 0;
  ClosestPair best;
};
std::vector<HardPairRun> g_hard_pairs;

void criterion_decay(Verdict& v) {
  const auto params = ChannelParams::with_deletion(0.5);
  for (std::size_t L : {8, 27, 64}) {
    const auto family = build_family(L);
    const std::size_t k = family.cube_root;
    const auto arc = ArcSpec::with_default_grid(default_arc_half_width(L), static_cast<int>(L) - 1);
    const auto best = brute_force_closest_pair(family, k, params, arc);
    g_hard_pairs.push_back({L, k, best});
    const auto padded = pad_and_bound(best.x, best.y, 4 * L, params, k, default_arc_half_width(L));
    v.expect(padded.report.pass, "padding report L=" + std::to_string(L));
    v.expect(padded.circle_sup <= padded.unpadded_circle_sup, "padded <= unpadded at L=" + std::to_string(L));
    v.note << "L=" << L << " min sup " << fmt(best.sup) << " (" << best.pairs_total << " pairs, "
           << best.full_evaluations << " full) padded " << fmt(padded.circle_sup) << " <= " << fmt(padded.unpadded_circle_sup)
           << "; ";
  }
  v.expect(g_hard_pairs[0].best.sup > g_hard_pairs[1].best.sup, "L=8 > L=27");
  v.expect(g_hard_pairs[1].best.sup > g_hard_pairs[2].best.sup, "L=27 > L=64");
  v.note << "exhaustive scan, no sampling";
}

void criterion_pathway(Verdict& v) {
  const auto params = ChannelParams::with_deletion(0.5);
  if (g_hard_pairs.empty()) {
    v.expect(false, "no hard pairs available");
    return;
  }
  for (const auto& run : g_hard_pairs) {
    const auto rep = l1_pathway_check(run.best.x, run.best.y, run.k, params);
    v.expect(rep.pass, "L=" + std::to_string(run.L));
    v.note << "L=" << run.L << " l1 " << fmt(rep.lhs) << " <= " << fmt(rep.rhs) << "; ";
  }
}

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

DistributionFamily random_family(CounterRng& rng) {
  const std::size_t members = 2 + rng.below(7);
  const std::size_t size = 2 + rng.below(12);
  std::vector<std::string> domain;
  for (std::size_t s = 0; s < size; ++s) domain.push_back("o" + std::to_string(s));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < members; ++i) {
    std::vector<double> row(size);
    double total = 0.0;
    for (auto& e : row) total += (e = rng.uniform() < 0.4 ? 0.0 : -std::log(1.0 - rng.uniform()));
    if (total == 0.0) total = row[0] = 1.0;
    for (auto& e : row) e /= total;
    rows.push_back(row);
  }
  return DistributionFamily(domain, rows);
}

std::vector<BitString> all_strings(std::size_t n) {
  std::vector<BitString> out;
  for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) out.push_back(BitString::from_integer(xv, n));
  return out;
}

void criterion_optimality(Verdict& v) {
  for (std::size_t m : {2, 6, 20}) {
    const auto rep = optimality_bound_check(uniform_vs_points(m), 0, 1);
    v.expect(rep.pass, "uniform/point-mass m=" + std::to_string(m));
    v.expect(rep.details["prob_mle_null"].get<double>() == 0.0, "Pr[MLE=0] = 0");
    v.expect(std::abs(rep.details["bound"].get<double>()) <= 1e-12, "bound tight at 0");
  }
  CounterRng rng(88);
  int random_ok = 0;
  for (int trial = 0; trial < 20; ++trial) random_ok += optimality_bound_check(random_family(rng), 0, 1).pass;
  v.expect(random_ok == 20, "random families");
  const auto sources = all_strings(4);
  int product_ok = 0;
  for (std::size_t T = 1; T <= 3; ++T) {
    const auto rep = optimality_bound_check(trace_product_family(sources, ChannelParams::with_deletion(0.3), T), 0, 1);
    v.expect(rep.details["exact"].get<bool>(), "exact enumeration");
    product_ok += rep.pass;
  }
  v.expect(product_ok == 3, "trace product families");
  v.note << "point-mass families tight at 0 (m = 2, 6, 20); random " << random_ok << "/20; trace products n=4 T=1..3 "
         << product_ok << "/3 (exact)";
}

void criterion_lower_bound(Verdict& v) {
  for (auto [n, T] : {std::pair<std::size_t, std::size_t>{8, 2}, {12, 3}}) {
    const auto lb = lb_verify(n, T);
    const std::string tag = "n=" + std::to_string(n) + " T=" + std::to_string(T);
    v.expect(lb.claim_applies, tag + " in range");
    v.expect(lb.prob_mle_null == "0", tag + " Pr[MLE=0]");
    v.expect(lb.distinguisher_min == "2/3" && lb.distinguisher_max == "2/3", tag + " distinguisher on D_S");
    v.expect(lb.distinguisher_null == "1", tag + " distinguisher on D_0");
    v.expect(lb.pass, tag);
    v.note << tag << ": Pr[MLE=0] = " << lb.prob_mle_null << " over " << lb.multisets << " multisets, A = "
           << lb.distinguisher_min << " / " << lb.distinguisher_null << "; ";
  }
}

void criterion_trace_mle(Verdict& v) {
  const auto identity = ChannelParams::with_deletion(0.0);
  std::size_t sources = 0, correct = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (const auto& x : all_strings(n)) {
      const std::vector<Trace> traces{sample_trace(x, identity, sources)};
      correct += trace_mle_reconstruct(traces, n, identity).estimate == x ? 1 : 0;
      ++sources;
    }
  }
  v.expect(correct == sources, "p=0 success");

  CounterRng rng(808);
  std::vector<BitString> pool;
  for (int i = 0; i < 4; ++i) pool.push_back(oracle::random_string(rng, 8));
  const std::vector<std::size_t> grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  const auto curve = amplified_success_curve(pool, ChannelParams::with_deletion(0.2), grid, 500, 808);
  bool monotone = true;
  for (std::size_t i = 1; i < curve.smoothed.size(); ++i) monotone = monotone && curve.smoothed[i] >= curve.smoothed[i - 1];
  v.expect(monotone, "smoothed curve non-decreasing");
  v.expect(curve.trend_ok, "no significant raw decrease");
  v.expect(curve.smoothed[8] >= curve.smoothed[2], "T=256 vs T=4");
  std::size_t reach = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (curve.smoothed[i] >= 0.9) {
      reach = grid[i];
      break;
    }

  std::size_t map_ok = 0, map_runs = 0;
  for (const auto& family : {uniform_vs_points(8), trace_product_family(all_strings(4), ChannelParams::with_deletion(0.3), 1),
                             trace_product_family(all_strings(3), ChannelParams::with_deletion(0.5), 2)}) {
    map_ok += map_equals_mle_check(family, 1000, 5 + map_runs).pass;
    ++map_runs;
  }
  for (int trial = 0; trial < 3; ++trial, ++map_runs) map_ok += map_equals_mle_check(random_family(rng), 1000, rng()).pass;
  v.expect(map_ok == map_runs, "MAP equals MLE");
  v.note << "p=0: " << correct << "/" << sources << " sources (n <= 12); n=8 p=0.2 smoothed " << fmt(curve.smoothed.front())
         << " -> " << fmt(curve.smoothed.back()) << ", first T reaching 0.9: " << (reach ? std::to_string(reach) : "none")
         << "; MAP = MLE on " << map_ok << "/" << map_runs << " families x 1000 batches";
}

void criterion_distinctness(Verdict& v) {
  for (double p : {0.2, 0.5}) {
    const auto params = ChannelParams::with_deletion(p);
    double previous = INFINITY;
    v.note << "p=" << p << " min l1:";
    for (std::size_t n = 1; n <= 12; ++n) {
      const auto scan = distinctness_scan(n, params);
      v.expect(scan.min_l1 > 0.0, "positive at n=" + std::to_string(n));
      v.expect(scan.min_l1 <= previous * (1.0 + 1e-12), "non-increasing at n=" + std::to_string(n));
      previous = scan.min_l1;
      v.note << " " << fmt(scan.min_l1);
    }
    v.note << "; ";
  }
}

std::string stochastic_fingerprint(kernels::Exec exec) {
  json j;
  const auto params = ChannelParams::with_deletion(0.35);
  const auto x = BitString::from_ascii("0110100111010");
  const auto y = BitString::from_ascii("0110101011010");
  j["mean"] = empirical_mean_trace(x, params, 4000, 1, exec).mean;
  j["origin"] = contiguous_origin_frequency(x, BitString::from_ascii("10"), 2, params, 4000, 2, exec).hits;
  const auto rate = success_rate(x, y, params, Method{StatisticKind::Kgram, 2}, 20, 200, 3, exec);
  j["rate"] = {rate.successes, rate.ci_low, rate.ci_high};
  const std::vector<BitString> pool{BitString::from_ascii("011010"), BitString::from_ascii("110001")};
  const std::vector<std::size_t> grid{1, 4, 16};
  j["curve"] = success_curve_csv(amplified_success_curve(pool, params, grid, 60, 4, exec));
  const auto family = build_family(27);
  const auto arc = ArcSpec::with_default_grid(default_arc_half_width(27), 26);
  const auto best = brute_force_closest_pair(family, 3, ChannelParams::with_deletion(0.5), arc, exec);
  j["pair"] = to_json(best, 27, 3, 0.5);
  j["median"] = median_pair_sup(family, 3, ChannelParams::with_deletion(0.5), arc, 300, 6);
  j["scan"] = distinctness_scan(8, params, exec).min_l1;
  return j.dump();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion_reproducibility(Verdict& v) {
  kernels::set_thread_count(1);
  const std::string serial = stochastic_fingerprint(kernels::Exec::Serial);
  const std::string one = stochastic_fingerprint(kernels::Exec::Parallel);
  kernels::set_thread_count(4);
  const std::string four = stochastic_fingerprint(kernels::Exec::Parallel);
  const std::string again = stochastic_fingerprint(kernels::Exec::Parallel);
  v.expect(serial == one && one == four && four == again, "library fingerprints");

  const auto dir = std::filesystem::temp_directory_path() / "tracelab_acceptance";
  std::filesystem::create_directories(dir);
  const std::string bin = TRACELAB_CLI_PATH;
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "4", "1"}) {
    const auto out = dir / (std::string("run_") + threads + ".jsonl");
    std::filesystem::remove(out);
    const std::string cmd = bin + " distinguish --x 01101001 --y 01100101 --p 0.3 --T 4,16 --trials 100 --seed 42" +
                            " --threads " + threads + " --timestamp 2000-01-01T00:00:00Z --out " + out.string() +
                            " > /dev/null && " + bin + " mle --mode curve --n 6 --p 0.2 --T 1,8 --trials 40" +
                            " --seed 42 --threads " + threads + " --timestamp 2000-01-01T00:00:00Z --out " +
                            out.string() + " > /dev/null";
    const int status = std::system(cmd.c_str());
    v.expect(status == 0, "cli run");
    outputs.push_back(read_file(out));
  }
  v.expect(!outputs[0].empty() && outputs[0] == outputs[1] && outputs[1] == outputs[2], "cli records");
  v.note << "library fingerprint " << serial.size() << " bytes identical for serial, 1 and 4 threads and a rerun; "
         << "CLI records " << outputs[0].size() << " bytes identical across --threads 1/4";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"channel exactness", criterion_channel},
      {"density-map identities", criterion_density},
      {"generating-polynomial identity", criterion_genpoly},
      {"analytic toolkit", criterion_analytic},
      {"separated-family properties", criterion_family},
      {"hard-pair decay", criterion_decay},
      {"l1 pathway consistency", criterion_pathway},
      {"MLE optimality bound", criterion_optimality},
      {"MLE lower bound", criterion_lower_bound},
      {"trace MLE behaviour", criterion_trace_mle},
      {"distinctness at small n", criterion_distinctness},
      {"reproducibility", criterion_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.note << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += v.pass ? 0 : 1;
    std::string note = v.note.str();
    while (!note.empty() && (note.back() == ' ' || note.back() == ';')) note.pop_back();
    std::printf("%s %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                note.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
