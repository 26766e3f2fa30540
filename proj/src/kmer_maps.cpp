#include "tracelab/kmer_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracelab/error.hpp"

namespace tracelab {

BinomialWeights::BinomialWeights(std::size_t n, const ChannelParams& params)
    : n_(n), p_(params.p), data_(n * (n + 1) / 2, 0.0) {
  if (n == 0) return;
  const double p = params.p;
  const double q = params.q;
  if (p == 0.0) {
    for (std::size_t j = 0; j < n; ++j) data_[j * (j + 1) / 2 + j] = 1.0;
    return;
  }
  if (n <= kRecurrenceLimit) {
    data_[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t prev = (j - 1) * j / 2;
      const std::size_t cur = j * (j + 1) / 2;
      for (std::size_t i = 0; i <= j; ++i) {
        const double stay = i < j ? p * data_[prev + i] : 0.0;
        const double move = i > 0 ? q * data_[prev + i - 1] : 0.0;
        data_[cur + i] = stay + move;
      }
    }
    return;
  }
  const double lp = std::log(p);
  const double lq = std::log(q);
  for (std::size_t j = 0; j < n; ++j) {
    const double lj = std::lgamma(static_cast<double>(j) + 1.0);
    for (std::size_t i = 0; i <= j; ++i) {
      const double log_w = lj - std::lgamma(static_cast<double>(i) + 1.0) -
                           std::lgamma(static_cast<double>(j - i) + 1.0) +
                           static_cast<double>(j - i) * lp + static_cast<double>(i) * lq;
      data_[j * (j + 1) / 2 + i] = std::exp(log_w);
    }
  }
}

const std::vector<double>* KmerDensityMap::row(std::string_view w) const {
  const auto it = rows.find(std::string(w));
  return it == rows.end() ? nullptr : &it->second;
}

double KmerDensityMap::at(std::string_view w, std::size_t i) const {
  const auto* r = row(w);
  if (i >= n) throw Error(ErrorCode::IndexOutOfRange, "position past the map length");
  return r ? (*r)[i] : 0.0;
}

int occurrence_indicator(const BitString& x, std::size_t j, const BitString& w) {
  if (w.empty() || w.size() > x.size() || j > x.size() - w.size())
    throw Error(ErrorCode::IndexOutOfRange, "window at " + std::to_string(j) + " overruns x");
  return x.window_equals(j, w) ? 1 : 0;
}

std::size_t subword_count(const BitString& x, const BitString& w) {
  if (w.empty() || w.size() > x.size()) return 0;
  std::size_t count = 0;
  for (std::size_t j = 0; j + w.size() <= x.size(); ++j) count += x.window_equals(j, w) ? 1 : 0;
  return count;
}

double density_entry(const BitString& x, const BitString& w, std::size_t i,
                     const ChannelParams& params) {
  if (i >= x.size()) throw Error(ErrorCode::IndexOutOfRange, "position past |x|");
  if (w.empty() || w.size() > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  const BinomialWeights weights(x.size(), params);
  double sum = 0.0;
  for (std::size_t j = i; j + w.size() <= x.size(); ++j)
    if (x.window_equals(j, w)) sum += weights(j, i);
  return sum;
}

std::vector<double> density_row(const BitString& x, const BitString& w,
                                const BinomialWeights& weights) {
  if (weights.n() != x.size()) throw Error(ErrorCode::ShapeMismatch, "weights built for another length");
  if (w.empty() || w.size() > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  std::vector<double> row(x.size(), 0.0);
  for (std::size_t j = 0; j + w.size() <= x.size(); ++j) {
    if (!x.window_equals(j, w)) continue;
    const auto wj = weights.row(j);
    for (std::size_t i = 0; i <= j; ++i) row[i] += wj[i];
  }
  return row;
}

KmerDensityMap density_map(const BitString& x, std::size_t k, const BinomialWeights& weights) {
  const std::size_t n = x.size();
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidK, "need 1 <= k <= |x|");
  if (weights.n() != n) throw Error(ErrorCode::ShapeMismatch, "weights built for another length");
  KmerDensityMap map;
  map.n = n;
  map.k = k;
  map.p = weights.p();
  for (std::size_t j = 0; j + k <= n; ++j) {
    auto& row = map.rows[x.slice(j, k).to_ascii()];
    if (row.empty()) row.assign(n, 0.0);
    const auto wj = weights.row(j);
    for (std::size_t i = 0; i <= j; ++i) row[i] += wj[i];
  }
  return map;
}

KmerDensityMap density_map(const BitString& x, std::size_t k, const ChannelParams& params) {
  if (k < 1 || k > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= k <= |x|");
  return density_map(x, k, BinomialWeights(x.size(), params));
}

namespace {

template <class Combine>
double map_distance(const KmerDensityMap& a, const KmerDensityMap& b, Combine combine) {
  if (a.n != b.n || a.k != b.k || a.p != b.p)
    throw Error(ErrorCode::ShapeMismatch, "maps differ in n, k or p");
  double acc = 0.0;
  auto ia = a.rows.begin();
  auto ib = b.rows.begin();
  // Merge-walk the two sorted supports; a missing row reads as zero.
  while (ia != a.rows.end() || ib != b.rows.end()) {
    const std::vector<double>* ra = nullptr;
    const std::vector<double>* rb = nullptr;
    if (ib == b.rows.end() || (ia != a.rows.end() && ia->first < ib->first)) {
      ra = &(ia++)->second;
    } else if (ia == a.rows.end() || ib->first < ia->first) {
      rb = &(ib++)->second;
    } else {
      ra = &(ia++)->second;
      rb = &(ib++)->second;
    }
    for (std::size_t i = 0; i < a.n; ++i)
      acc = combine(acc, std::abs((ra ? (*ra)[i] : 0.0) - (rb ? (*rb)[i] : 0.0)));
  }
  return acc;
}

}  // namespace

double map_l1_distance(const KmerDensityMap& a, const KmerDensityMap& b) {
  return map_distance(a, b, [](double acc, double v) { return acc + v; });
}

double map_linf_distance(const KmerDensityMap& a, const KmerDensityMap& b) {
  return map_distance(a, b, [](double acc, double v) { return std::max(acc, v); });
}

std::vector<double> mean_trace(const BitString& x, const ChannelParams& params) {
  std::vector<double> mean(x.size(), 0.0);
  if (x.empty()) return mean;
  const auto row = density_row(x, BitString::from_ascii("1"), BinomialWeights(x.size(), params));
  for (std::size_t j = 0; j < x.size(); ++j) mean[j] = params.q * row[j];
  return mean;
}

McEstimate contiguous_origin_frequency(const BitString& x, const BitString& w, std::size_t i,
                                       const ChannelParams& params, std::uint64_t trials,
                                       std::uint64_t seed, kernels::Exec exec) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  if (w.empty() || w.size() > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  const std::size_t k = w.size();
  const auto counts = kernels::accumulate_trials(
      trials, seed, 1,
      [&](std::uint64_t s, std::span<std::uint64_t> acc) {
        const Trace t = sample_trace(x, params, s);
        if (i + k > t.bits.size()) return;
        // The source window is pinned by the origin of trace position i.
        const std::size_t j = t.origins[i];
        for (std::size_t l = 1; l < k; ++l)
          if (t.origins[i + l] != j + l) return;
        if (x.window_equals(j, w)) ++acc[0];
      },
      exec);
  McEstimate est;
  est.hits = counts[0];
  est.trials = trials;
  est.estimate = static_cast<double>(counts[0]) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

EmpiricalMean empirical_mean_trace(const BitString& x, const ChannelParams& params,
                                   std::uint64_t trials, std::uint64_t seed, kernels::Exec exec) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  const std::size_t n = x.size();
  const auto counts = kernels::accumulate_trials(
      trials, seed, n,
      [&](std::uint64_t s, std::span<std::uint64_t> acc) {
        const Trace t = sample_trace(x, params, s);
        for (std::size_t j = 0; j < t.bits.size(); ++j) acc[j] += t.bits[j];
      },
      exec);
  EmpiricalMean out;
  out.trials = trials;
  out.mean.resize(n);
  out.std_error.resize(n);
  const auto T = static_cast<double>(trials);
  for (std::size_t j = 0; j < n; ++j) {
    out.mean[j] = static_cast<double>(counts[j]) / T;
    out.std_error[j] = std::sqrt(out.mean[j] * (1.0 - out.mean[j]) / T);
  }
  return out;
}

std::size_t distinctness_k(std::size_t n) {
  if (n == 0) return 1;
  const auto k = static_cast<std::size_t>(std::ceil(2.0 * std::pow(static_cast<double>(n), 0.2)));
  return std::min(n, std::max<std::size_t>(1, k));
}

DistinctnessScan distinctness_scan(std::size_t n, const ChannelParams& params, kernels::Exec exec) {
  if (n < 1 || n > 16) throw Error(ErrorCode::SizeGuard, "distinctness scan needs 1 <= n <= 16");
  const std::size_t k = distinctness_k(n);
  const std::size_t count = std::size_t{1} << n;
  const std::size_t width = (std::size_t{1} << k) * n;
  const BinomialWeights weights(n, params);
  // Dense layout: row index is the k-mer read as a binary number.
  std::vector<double> dense(count * width, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    const BitString x = BitString::from_integer(s, n);
    double* base = dense.data() + s * width;
    for (std::size_t j = 0; j + k <= n; ++j) {
      std::size_t code = 0;
      for (std::size_t l = 0; l < k; ++l) code = (code << 1) | x[j + l];
      const auto wj = weights.row(j);
      for (std::size_t i = 0; i <= j; ++i) base[code * n + i] += wj[i];
    }
  }
  auto l1 = [&](std::size_t a, std::size_t b) {
    const double* pa = dense.data() + a * width;
    const double* pb = dense.data() + b * width;
    double sum = 0.0;
    for (std::size_t e = 0; e < width; ++e) sum += std::abs(pa[e] - pb[e]);
    return sum;
  };
  // best[a] = min over b > a, first b on ties.
  std::vector<double> best(count, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> partner(count, 0);
  auto scan_row = [&](std::size_t a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const double d = l1(a, b);
      if (d < best[a]) {
        best[a] = d;
        partner[a] = b;
      }
    }
  };
  const auto rows = static_cast<std::int64_t>(count);
  if (exec == kernels::Exec::Serial) {
    for (std::int64_t a = 0; a < rows; ++a) scan_row(static_cast<std::size_t>(a));
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t a = 0; a < rows; ++a) scan_row(static_cast<std::size_t>(a));
  }
  DistinctnessScan out;
  out.n = n;
  out.k = k;
  out.pairs = static_cast<std::uint64_t>(count) * (count - 1) / 2;
  out.min_l1 = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t a = 0; a + 1 < count; ++a) {
    if (best[a] < out.min_l1) {
      out.min_l1 = best[a];
      arg = a;
    }
  }
  if (count >= 2) {
    out.x = BitString::from_integer(arg, n);
    out.y = BitString::from_integer(partner[arg], n);
  }
  return out;
}

json to_json(const KmerDensityMap& map) {
  json rows = json::object();
  for (const auto& [w, values] : map.rows) rows[w] = values;
  return json{{"n", map.n}, {"k", map.k}, {"p", map.p}, {"rows", rows}};
}

}  // namespace tracelab
