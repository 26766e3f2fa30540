#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "tracelab/bitstring.hpp"

namespace tracelab {

using BigInt = boost::multiprecision::cpp_int;
using json = nlohmann::json;

/// Deletion channel parameters; q = 1 - p is stored alongside p.
struct ChannelParams {
  double p = 0.0;
  double q = 1.0;

  /// Throws InvalidArgument unless 0 <= p < 1.
  static ChannelParams with_deletion(double p);
};

/// A received subsequence, optionally with the source index of every bit.
struct Trace {
  BitString bits;
  std::vector<std::size_t> origins;

  [[nodiscard]] bool has_origins() const noexcept { return origins.size() == bits.size(); }
  /// Checks the origin invariants against the source string.
  [[nodiscard]] bool is_valid_embedding(const BitString& source) const;
};

/// Sends x through the channel once. Deterministic in (x, p, seed).
Trace sample_trace(const BitString& x, const ChannelParams& params, std::uint64_t seed);

/// Number of strictly increasing index tuples of x spelling t.
BigInt subsequence_count(const BitString& x, const BitString& t);

/// Same count when |x| <= 64, where it always fits in 64 bits.
std::uint64_t subsequence_count_u64(const BitString& x, const BitString& t);

/// D_x(t) = N(x,t) p^{|x|-|t|} q^{|t|}; evaluated in the log domain once
/// |x| > 64.
double trace_probability(const BitString& x, const BitString& t, const ChannelParams& params);

/// log D_x(t); -infinity when t is not a subsequence of x.
double trace_log_probability(const BitString& x, const BitString& t, const ChannelParams& params);

/// A finite distribution over string-labelled outcomes.
class DistributionTable {
 public:
  DistributionTable() = default;
  /// Validates: distinct outcomes, nonnegative probabilities, total mass
  /// within `tolerance` of 1.
  DistributionTable(std::vector<std::string> domain, std::vector<double> probs,
                    double tolerance = 1e-12);

  static DistributionTable from_map(const std::map<std::string, double>& entries,
                                    double tolerance = 1e-12);

  [[nodiscard]] std::span<const std::string> domain() const noexcept { return domain_; }
  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return domain_.size(); }
  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view outcome) const;
  /// Zero for outcomes outside the domain.
  [[nodiscard]] double probability(std::string_view outcome) const;
  [[nodiscard]] double total() const noexcept;

 private:
  std::vector<std::string> domain_;
  std::vector<double> probs_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kExactDistributionGuard = 20;

/// Exact trace distribution over the distinct subsequences of x, ordered by
/// (length, lexicographic). Throws LengthGuard when |x| > 20 unless
/// `allow_large` is set.
DistributionTable trace_distribution(const BitString& x, const ChannelParams& params,
                                     bool allow_large = false);

/// All distinct subsequences of x in (length, lexicographic) order.
std::vector<BitString> distinct_subsequences(const BitString& x);

/// Half the l1 distance, with domains merged by outcome label.
double tv_distance(const DistributionTable& a, const DistributionTable& b);

json to_json(const DistributionTable& table);
DistributionTable distribution_from_json(const json& j);

}  // namespace tracelab
