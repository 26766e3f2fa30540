#include "tracelab/distinguish.hpp"

#include <algorithm>
#include <cmath>

#include "tracelab/error.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

constexpr std::size_t kMaxK = 16;

void validate_k(std::size_t n, StatisticKind kind, std::size_t k) {
  if (kind == StatisticKind::Kgram && (k < 1 || k > n || k > kMaxK))
    throw Error(ErrorCode::InvalidK, "need 1 <= k <= min(n, 16)");
}

// Expected statistics for both candidates, restricted to rows where either
// is nonzero.
struct Expected {
  StatisticVector x, y;
};

Expected expected_pair(const BitString& x, const BitString& y, const ChannelParams& params,
                       const Method& method) {
  Expected out;
  if (method.kind == StatisticKind::Mean) {
    out.x = expected_statistic(x, params, method.kind, 1, {});
    out.y = expected_statistic(y, params, method.kind, 1, {});
    return out;
  }
  std::vector<std::string> all;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << method.k); ++v)
    all.push_back(BitString::from_integer(v, method.k).to_ascii());
  out.x = expected_statistic(x, params, method.kind, method.k, all);
  out.y = expected_statistic(y, params, method.kind, method.k, all);
  auto all_zero = [](const std::vector<double>& row) {
    return std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
  };
  for (const auto& w : all) {
    if (all_zero(out.x.rows[w]) && all_zero(out.y.rows[w])) {
      out.x.rows.erase(w);
      out.y.rows.erase(w);
    }
  }
  return out;
}

int decide(const StatisticVector& empirical, const Expected& expected) {
  return statistic_l1(empirical, expected.x) <= statistic_l1(empirical, expected.y) ? 0 : 1;
}

}  // namespace

StatisticVector empirical_statistic(std::span<const Trace> traces, std::size_t n, StatisticKind kind,
                                    std::size_t k) {
  if (traces.empty()) throw Error(ErrorCode::EmptyTraceSet, "no traces");
  validate_k(n, kind, k);
  StatisticVector out;
  out.kind = kind;
  out.n = n;
  const double inv = 1.0 / static_cast<double>(traces.size());
  if (kind == StatisticKind::Mean) {
    out.k = 1;
    auto& row = out.rows[""];
    row.assign(n, 0.0);
    for (const auto& t : traces)
      for (std::size_t j = 0; j < std::min(n, t.bits.size()); ++j) row[j] += t.bits[j];
    for (auto& v : row) v *= inv;
    return out;
  }
  out.k = k;
  const std::size_t positions = n - k + 1;
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < positions && i + k <= t.bits.size(); ++i) {
      auto& row = out.rows[t.bits.slice(i, k).to_ascii()];
      if (row.empty()) row.assign(positions, 0.0);
      row[i] += inv;
    }
  }
  return out;
}

double expected_kgram_statistic(const BitString& x, const BitString& w, std::size_t i,
                                const ChannelParams& params) {
  const std::size_t n = x.size();
  const std::size_t k = w.size();
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  if (i + k > n) return 0.0;
  const BinomialWeights weights(n, params);
  const double p = params.p;
  const double q = params.q;
  // f[j]: tuples spelling w[0..l] ending at source j with the bit at trace
  // position i + l.
  std::vector<double> f(n, 0.0);
  for (std::size_t j = i; j < n; ++j) f[j] = x[j] == w[0] ? weights(j, i) * q : 0.0;
  for (std::size_t l = 1; l < k; ++l) {
    std::vector<double> next(n, 0.0);
    // carry = sum_{j' < j} f[j'] p^{j - 1 - j'}
    double carry = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] == w[l]) next[j] = q * carry;
      carry = p * carry + f[j];
    }
    f = std::move(next);
  }
  double total = 0.0;
  for (double v : f) total += v;
  return total;
}

StatisticVector expected_statistic(const BitString& x, const ChannelParams& params, StatisticKind kind,
                                   std::size_t k, std::span<const std::string> kmers) {
  const std::size_t n = x.size();
  StatisticVector out;
  out.kind = kind;
  out.n = n;
  if (kind == StatisticKind::Mean) {
    out.k = 1;
    out.rows[""] = mean_trace(x, params);
    return out;
  }
  validate_k(n, kind, k);
  out.k = k;
  for (const auto& ascii : kmers) {
    const BitString w = BitString::from_ascii(ascii);
    if (w.size() != k) throw Error(ErrorCode::InvalidK, "k-mer length differs from k");
    std::vector<double> row(n - k + 1);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = expected_kgram_statistic(x, w, i, params);
    out.rows[ascii] = std::move(row);
  }
  return out;
}

double statistic_l1(const StatisticVector& a, const StatisticVector& b) {
  double sum = 0.0;
  auto add_row = [&](const std::vector<double>* ra, const std::vector<double>* rb) {
    const std::size_t len = std::max(ra ? ra->size() : 0, rb ? rb->size() : 0);
    for (std::size_t i = 0; i < len; ++i) {
      const double va = ra && i < ra->size() ? (*ra)[i] : 0.0;
      const double vb = rb && i < rb->size() ? (*rb)[i] : 0.0;
      sum += std::abs(va - vb);
    }
  };
  for (const auto& [w, row] : a.rows) {
    const auto it = b.rows.find(w);
    add_row(&row, it == b.rows.end() ? nullptr : &it->second);
  }
  for (const auto& [w, row] : b.rows)
    if (!a.rows.contains(w)) add_row(nullptr, &row);
  return sum;
}

int distinguish(std::span<const Trace> traces, const BitString& x, const BitString& y,
                const ChannelParams& params, const Method& method) {
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "candidates differ in length");
  const auto empirical = empirical_statistic(traces, x.size(), method.kind, method.k);
  return decide(empirical, expected_pair(x, y, params, method));
}

RateEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  RateEstimate out;
  out.successes = successes;
  out.trials = trials;
  if (trials == 0) return out;
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (phat + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z * z / (4.0 * nt * nt)) / denom;
  out.rate = phat;
  out.ci_low = std::max(0.0, centre - half);
  out.ci_high = std::min(1.0, centre + half);
  return out;
}

RateEstimate success_rate(const BitString& x, const BitString& y, const ChannelParams& params,
                          const Method& method, std::size_t T, std::uint64_t trials, std::uint64_t seed,
                          kernels::Exec exec) {
  if (trials < 30) throw Error(ErrorCode::InvalidArgument, "need trials >= 30");
  if (T == 0) throw Error(ErrorCode::InvalidArgument, "need T >= 1");
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "candidates differ in length");
  validate_k(x.size(), method.kind, method.k);
  const Expected expected = expected_pair(x, y, params, method);
  const auto outcomes = kernels::tabulate(
      trials,
      [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        const int truth = static_cast<int>(t % 2);
        const BitString& source = truth == 0 ? x : y;
        std::vector<Trace> traces;
        traces.reserve(T);
        for (std::size_t j = 0; j < T; ++j) traces.push_back(sample_trace(source, params, derive_seed(trial_seed, j)));
        const auto empirical = empirical_statistic(traces, x.size(), method.kind, method.k);
        return decide(empirical, expected) == truth ? 1.0 : 0.0;
      },
      exec);
  std::uint64_t successes = 0;
  for (double v : outcomes) successes += v > 0.5 ? 1 : 0;
  return wilson_interval(successes, trials);
}

json to_json(const StatisticVector& s) {
  json rows = json::object();
  for (const auto& [w, values] : s.rows) rows[w] = values;
  return json{{"kind", s.kind == StatisticKind::Mean ? "mean" : "kgram"}, {"k", s.k}, {"n", s.n}, {"rows", rows}};
}

}  // namespace tracelab
