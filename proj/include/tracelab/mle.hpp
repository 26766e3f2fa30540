#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/report.hpp"

namespace tracelab {

/// Distributions over one shared, ordered domain. Member 0 plays the role of
/// the null distribution in the adversarial constructions.
class DistributionFamily {
 public:
  DistributionFamily() = default;
  DistributionFamily(std::vector<std::string> domain, std::vector<std::vector<double>> members);
  /// Merges the tables' domains in first-seen order.
  static DistributionFamily from_tables(std::span<const DistributionTable> tables);

  [[nodiscard]] std::span<const std::string> domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] std::span<const double> member(std::size_t i) const { return members_.at(i); }
  [[nodiscard]] std::optional<std::size_t> index_of(const std::string& outcome) const;
  [[nodiscard]] DistributionTable table(std::size_t i) const;

 private:
  std::vector<std::string> domain_;
  std::vector<std::vector<double>> members_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Samples as indices into a family's domain.
struct SampleBatch {
  std::vector<std::size_t> samples;
};

/// sum_j log D(x_j); -infinity once a sample has probability zero. Throws
/// DomainMismatch for outcomes outside the table's domain.
double log_likelihood(std::span<const std::string> samples, const DistributionTable& table);
double log_likelihood(const SampleBatch& batch, const DistributionFamily& family,
                      std::size_t member);

struct MleResult {
  std::size_t index = 0;
  bool degenerate = false;  ///< every member had likelihood zero
};

/// argmax of the likelihood, smallest index on ties. Throws EmptyFamily.
MleResult mle(const SampleBatch& batch, const DistributionFamily& family);

/// Exact Pr_{x ~ D_0}[MLE(x) = 0] (domain summation when |domain| <= 1e5,
/// Monte Carlo otherwise) against 1 - m eps, eps = 1 - min_i tv(D_0, D_i).
CheckReport optimality_bound_check(const DistributionFamily& family, std::uint64_t trials,
                                   std::uint64_t seed);

/// Family {D_x^{(x)T}} over T-tuples of traces; outcomes are the traces
/// joined by ','. Member order follows `sources`.
DistributionFamily trace_product_family(std::span<const BitString> sources,
                                        const ChannelParams& params, std::size_t T);

struct TraceMleResult {
  BitString estimate;
  double log_likelihood = 0.0;
  bool degenerate = false;
};

inline constexpr std::size_t kTraceMleGuard = 20;

/// argmax over candidates of sum_t log D_x(t); smallest candidate (in
/// lexicographic order) on ties. Without candidates the whole of {0,1}^n
/// is searched, guarded at n <= 20 (SizeGuard).
TraceMleResult trace_mle_reconstruct(std::span<const Trace> traces, std::size_t n,
                                     const ChannelParams& params,
                                     std::optional<std::span<const BitString>> candidates = {});

struct LowerBoundFamily {
  DistributionFamily family;
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t m = 0;
  std::size_t omega1 = 0;  ///< t-subsets
  std::size_t omega2 = 0;  ///< singletons [n]
  std::vector<std::uint32_t> subset_masks;  ///< member i >= 1 <-> subset mask
};

/// D_0 uniform on [n]; for every t-subset S (t = floor(n/4)),
/// D_S(S) = 2/3 and D_S(s) = 1/(3t) for s in S. Requires n >= 4.
LowerBoundFamily lb_family(std::size_t n);

struct LowerBoundReport {
  std::size_t n = 0;
  std::size_t T = 0;
  std::size_t t = 0;
  bool claim_applies = false;          ///< T <= floor(n/4)
  std::string prob_mle_null;           ///< exact rational Pr[MLE = 0]
  std::uint64_t tuples_mle_null = 0;   ///< sample multisets with MLE = 0
  std::uint64_t multisets = 0;
  bool uncovered_multiset = false;     ///< a multiset no t-subset covers
  std::string distinguisher_null;      ///< Pr_{D_0}[A = 0]
  std::string distinguisher_min;       ///< min_S Pr_{D_S}[A = S]
  std::string distinguisher_max;
  bool pass = false;
};

/// Exact verification with rational arithmetic over all sample multisets of
/// size T drawn from D_0. Requires 4 <= n <= 16 and T >= 1.
LowerBoundReport lb_verify(std::size_t n, std::size_t T);

/// Random batches; the uniform-prior posterior argmax must equal mle().
CheckReport map_equals_mle_check(const DistributionFamily& family, std::uint64_t trials,
                                 std::uint64_t seed);

struct SuccessRow {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t T = 0;
  std::string source;
  double success_rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct SuccessCurve {
  std::vector<SuccessRow> rows;
  /// Pooled (over sources) raw and isotonic-smoothed success per T.
  std::vector<std::size_t> T_grid;
  std::vector<double> pooled;
  std::vector<double> smoothed;
  bool trend_ok = false;  ///< no statistically significant decrease in T
};

/// Monte-Carlo success of full-space trace MLE for each source and T.
SuccessCurve amplified_success_curve(std::span<const BitString> pool, const ChannelParams& params,
                                     std::span<const std::size_t> T_grid, std::uint64_t trials,
                                     std::uint64_t seed,
                                     kernels::Exec exec = kernels::Exec::Parallel);

/// Pool-adjacent-violators fit (non-decreasing) with optional weights.
std::vector<double> isotonic_increasing(std::span<const double> values,
                                        std::span<const double> weights = {});

json to_json(const DistributionFamily& family);
std::string success_curve_csv(const SuccessCurve& curve);

}  // namespace tracelab
