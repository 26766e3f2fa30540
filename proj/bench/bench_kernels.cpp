// Serial reference against the OpenMP path for each parallel kernel. The
// first argument selects the path (0 serial, 1 parallel); the results of the
// two paths are identical, so only the timings differ.

#include <benchmark/benchmark.h>

#include <vector>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/distinguish.hpp"
#include "tracelab/genpoly.hpp"
#include "tracelab/hard_pairs.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/mle.hpp"

namespace {

using namespace tracelab;

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? kernels::Exec::Serial : kernels::Exec::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
  state.counters["threads"] = state.range(0) == 0 ? 1 : kernels::thread_count();
}

void BM_DistinctnessScan(benchmark::State& state) {
  const auto params = ChannelParams::with_deletion(0.5);
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(distinctness_scan(n, params, exec_of(state)).min_l1);
  label(state);
}
BENCHMARK(BM_DistinctnessScan)->ArgsProduct({{0, 1}, {8, 10}})->Unit(benchmark::kMillisecond);

void BM_ClosestPair(benchmark::State& state) {
  const auto family = build_family(27);
  const auto params = ChannelParams::with_deletion(0.5);
  const ArcSpec arc{default_arc_half_width(27), 64};
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_closest_pair(family, 3, params, arc, exec_of(state)).sup);
  label(state);
}
BENCHMARK(BM_ClosestPair)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SupOnArc(benchmark::State& state) {
  std::vector<double> c(200);
  for (std::size_t l = 0; l < c.size(); ++l) c[l] = (l % 3 == 0) ? 1.0 : -0.5;
  const auto f = PolyCoeffs::from_real(c);
  const ArcSpec arc{0.3, 4096};
  for (auto _ : state) benchmark::DoNotOptimize(sup_on_arc(f, arc, exec_of(state)).value);
  label(state);
}
BENCHMARK(BM_SupOnArc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SuccessRate(benchmark::State& state) {
  const auto x = BitString::from_ascii("0110100110010110");
  const auto y = BitString::from_ascii("0110100110010111");
  const auto params = ChannelParams::with_deletion(0.3);
  const Method method{StatisticKind::Kgram, 2};
  for (auto _ : state)
    benchmark::DoNotOptimize(success_rate(x, y, params, method, 64, 400, 7, exec_of(state)).rate);
  label(state);
}
BENCHMARK(BM_SuccessRate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SuccessCurve(benchmark::State& state) {
  const std::vector<BitString> pool{BitString::from_ascii("01101001"), BitString::from_ascii("10010110")};
  const std::vector<std::size_t> Ts{1, 4, 16};
  const auto params = ChannelParams::with_deletion(0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(amplified_success_curve(pool, params, Ts, 100, 3, exec_of(state)).pooled);
  label(state);
}
BENCHMARK(BM_SuccessCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
