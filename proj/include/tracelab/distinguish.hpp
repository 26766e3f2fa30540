#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/kernels.hpp"

namespace tracelab {

enum class StatisticKind { Mean, Kgram };

/// Mean statistic: one row keyed "" over positions 0..n-1.
/// Kgram statistic: one row per k-mer over trace positions 0..n-k.
struct StatisticVector {
  StatisticKind kind = StatisticKind::Mean;
  std::size_t k = 1;
  std::size_t n = 0;
  std::map<std::string, std::vector<double>> rows;
};

/// Mean kind averages the zero-padded traces. Kgram kind counts, per (w, i),
/// traces whose window trace[i..i+k-1] lies inside the trace and equals w.
/// Throws EmptyTraceSet.
StatisticVector empirical_statistic(std::span<const Trace> traces, std::size_t n,
                                    StatisticKind kind, std::size_t k = 1);

/// Pr[trace[i..i+k-1] = w] summed over every increasing source tuple that
/// spells w: exactly i survivors before the first bit, all k bits kept and
/// every bit strictly between them deleted. O(n^2 k).
double expected_kgram_statistic(const BitString& x, const BitString& w, std::size_t i,
                                const ChannelParams& params);

/// Exact expectation of the statistic for a candidate, restricted to the
/// given k-mers.
StatisticVector expected_statistic(const BitString& x, const ChannelParams& params,
                                   StatisticKind kind, std::size_t k,
                                   std::span<const std::string> kmers);

/// l1 distance between statistic vectors (missing rows read as zero).
double statistic_l1(const StatisticVector& a, const StatisticVector& b);

struct Method {
  StatisticKind kind = StatisticKind::Mean;
  std::size_t k = 1;
};

/// 0 when x's exact statistic is l1-closer to the empirical one, 1 for y.
/// Ties go to x.
int distinguish(std::span<const Trace> traces, const BitString& x, const BitString& y,
                const ChannelParams& params, const Method& method);

struct RateEstimate {
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

/// 95% Wilson score interval.
RateEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Trial t draws T traces from x when t is even and from y when odd, and
/// succeeds when distinguish() names the true source. Requires trials >= 30.
RateEstimate success_rate(const BitString& x, const BitString& y, const ChannelParams& params,
                          const Method& method, std::size_t T, std::uint64_t trials,
                          std::uint64_t seed, kernels::Exec exec = kernels::Exec::Parallel);

json to_json(const StatisticVector& s);

}  // namespace tracelab
