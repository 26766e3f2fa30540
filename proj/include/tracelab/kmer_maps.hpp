#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/kernels.hpp"

namespace tracelab {

/// W(j, i) = C(j, i) p^{j-i} q^i for 0 <= i <= j < n, i.e. the Bin(j, q)
/// pmf: the chance that exactly i of the first j source bits survive.
/// Rows come from the two-term recurrence for n <= 50 and from log-gamma
/// beyond.
class BinomialWeights {
 public:
  BinomialWeights(std::size_t n, const ChannelParams& params);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double operator()(std::size_t j, std::size_t i) const noexcept {
    return i > j ? 0.0 : data_[j * (j + 1) / 2 + i];
  }
  /// Entries i = 0..j of row j.
  [[nodiscard]] std::span<const double> row(std::size_t j) const noexcept {
    return {data_.data() + j * (j + 1) / 2, j + 1};
  }

  static constexpr std::size_t kRecurrenceLimit = 50;

 private:
  std::size_t n_;
  double p_;
  std::vector<double> data_;
};

/// Sparse k-mer density map: only k-mers occurring in x get a row, each of
/// length n. Rows are keyed (and therefore ordered) by the ASCII k-mer.
struct KmerDensityMap {
  std::size_t n = 0;
  std::size_t k = 0;
  double p = 0.0;
  std::map<std::string, std::vector<double>> rows;

  /// Null when w has no row (all entries zero).
  [[nodiscard]] const std::vector<double>* row(std::string_view w) const;
  [[nodiscard]] double at(std::string_view w, std::size_t i) const;
};

/// 1 iff x[j .. j+k-1] == w. Throws IndexOutOfRange when j > n - k.
int occurrence_indicator(const BitString& x, std::size_t j, const BitString& w);

/// Number of windows of x equal to w.
std::size_t subword_count(const BitString& x, const BitString& w);

/// K_{w,x}[i]. Requires 0 <= i < n.
double density_entry(const BitString& x, const BitString& w, std::size_t i,
                     const ChannelParams& params);

/// Throws InvalidK unless 1 <= k <= |x|.
KmerDensityMap density_map(const BitString& x, std::size_t k, const ChannelParams& params);
/// Reuses precomputed weights (weights.n() must equal |x|).
KmerDensityMap density_map(const BitString& x, std::size_t k, const BinomialWeights& weights);

/// Coefficients K_{w,x}[0..n-1] of a single row (zeros when w is absent).
std::vector<double> density_row(const BitString& x, const BitString& w,
                                const BinomialWeights& weights);

/// Sum/max of |A - B| over the union of both supports. Throws
/// ShapeMismatch when n, k or p differ.
double map_l1_distance(const KmerDensityMap& a, const KmerDensityMap& b);
double map_linf_distance(const KmerDensityMap& a, const KmerDensityMap& b);

/// E_j(x) for the zero-padded trace, via E_j = q * K_{1,x}[j].
std::vector<double> mean_trace(const BitString& x, const ChannelParams& params);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// Frequency of the event "some window j spelling w survives whole and lands
/// at trace position i"; its mean is q^k K_{w,x}[i].
McEstimate contiguous_origin_frequency(const BitString& x, const BitString& w, std::size_t i,
                                       const ChannelParams& params, std::uint64_t trials,
                                       std::uint64_t seed,
                                       kernels::Exec exec = kernels::Exec::Parallel);

/// Per-position empirical mean of zero-padded traces together with the
/// per-position standard errors.
struct EmpiricalMean {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::uint64_t trials = 0;
};
EmpiricalMean empirical_mean_trace(const BitString& x, const ChannelParams& params,
                                   std::uint64_t trials, std::uint64_t seed,
                                   kernels::Exec exec = kernels::Exec::Parallel);

/// Minimum l1 distance between density maps over all pairs of distinct
/// strings in {0,1}^n, with k = min(n, max(1, ceil(2 n^{1/5}))).
struct DistinctnessScan {
  std::size_t n = 0;
  std::size_t k = 0;
  double min_l1 = 0.0;
  BitString x, y;
  std::uint64_t pairs = 0;
};
std::size_t distinctness_k(std::size_t n);
DistinctnessScan distinctness_scan(std::size_t n, const ChannelParams& params,
                                   kernels::Exec exec = kernels::Exec::Parallel);

json to_json(const KmerDensityMap& map);

}  // namespace tracelab
