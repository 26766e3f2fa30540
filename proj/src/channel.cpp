#include "tracelab/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tracelab/error.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// GCC misreads the cpp_int shift below as an out-of-bounds copy.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
[[gnu::noinline]] double log_of(const BigInt& value) {
  if (value <= 0) return kNegInf;
  const auto bits = boost::multiprecision::msb(value);
  if (bits < 16000) return static_cast<double>(std::log(value.convert_to<long double>()));
  const auto shift = bits - 64;
  BigInt top = value;
  top >>= shift;
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0);
}
#pragma GCC diagnostic pop

// Log-probability of one fixed keep pattern with m kept out of n.
double log_pattern(std::size_t n, std::size_t m, const ChannelParams& params) {
  double out = 0.0;
  if (n > m) out += static_cast<double>(n - m) * std::log(params.p);
  if (m > 0) out += static_cast<double>(m) * std::log(params.q);
  return out;
}

}  // namespace

ChannelParams ChannelParams::with_deletion(double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw Error(ErrorCode::InvalidArgument, "deletion probability must lie in [0, 1)");
  return ChannelParams{p, 1.0 - p};
}

bool Trace::is_valid_embedding(const BitString& source) const {
  if (!has_origins() || bits.size() > source.size()) return false;
  for (std::size_t j = 0; j < origins.size(); ++j) {
    if (origins[j] >= source.size()) return false;
    if (j > 0 && origins[j] <= origins[j - 1]) return false;
    if (source[origins[j]] != bits[j]) return false;
  }
  return true;
}

Trace sample_trace(const BitString& x, const ChannelParams& params, std::uint64_t seed) {
  CounterRng rng(seed);
  const BernoulliThreshold keep(params.q);
  std::vector<std::uint8_t> bits;
  Trace trace;
  bits.reserve(x.size());
  trace.origins.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (keep(rng)) {
      bits.push_back(x[j]);
      trace.origins.push_back(j);
    }
  }
  trace.bits = BitString(std::move(bits));
  return trace;
}

BigInt subsequence_count(const BitString& x, const BitString& t) {
  const std::size_t m = t.size();
  if (m > x.size()) return 0;
  // dp[j] = embeddings of t[0..j) into the prefix read so far.
  std::vector<BigInt> dp(m + 1, 0);
  dp[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t hi = std::min(m, i + 1);
    for (std::size_t j = hi; j >= 1; --j)
      if (x[i] == t[j - 1]) dp[j] += dp[j - 1];
  }
  return dp[m];
}

std::uint64_t subsequence_count_u64(const BitString& x, const BitString& t) {
  if (x.size() > 64) throw Error(ErrorCode::LengthGuard, "64-bit count requires |x| <= 64");
  const std::size_t m = t.size();
  if (m > x.size()) return 0;
  std::vector<std::uint64_t> dp(m + 1, 0);
  dp[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t hi = std::min(m, i + 1);
    for (std::size_t j = hi; j >= 1; --j)
      if (x[i] == t[j - 1]) dp[j] += dp[j - 1];
  }
  return dp[m];
}

double trace_probability(const BitString& x, const BitString& t, const ChannelParams& params) {
  const std::size_t n = x.size();
  const std::size_t m = t.size();
  if (m > n) return 0.0;
  if (n > 64) return std::exp(trace_log_probability(x, t, params));
  const std::uint64_t count = subsequence_count_u64(x, t);
  if (count == 0) return 0.0;
  double prob = static_cast<double>(count);
  if (n > m) prob *= std::pow(params.p, static_cast<double>(n - m));
  prob *= std::pow(params.q, static_cast<double>(m));
  return prob;
}

double trace_log_probability(const BitString& x, const BitString& t, const ChannelParams& params) {
  if (t.size() > x.size()) return kNegInf;
  double log_count;
  if (x.size() <= 64) {
    const std::uint64_t count = subsequence_count_u64(x, t);
    if (count == 0) return kNegInf;
    log_count = std::log(static_cast<double>(count));
  } else {
    log_count = log_of(subsequence_count(x, t));
    if (log_count == kNegInf) return kNegInf;
  }
  return log_count + log_pattern(x.size(), t.size(), params);
}

DistributionTable::DistributionTable(std::vector<std::string> domain, std::vector<double> probs,
                                     double tolerance)
    : domain_(std::move(domain)), probs_(std::move(probs)) {
  if (domain_.size() != probs_.size())
    throw Error(ErrorCode::ShapeMismatch, "domain and probabilities differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
      throw Error(ErrorCode::InvalidArgument, "negative or non-finite probability");
    if (!index_.emplace(domain_[i], i).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate outcome '" + domain_[i] + "'");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > tolerance)
    throw Error(ErrorCode::InvalidArgument, "probabilities do not sum to 1");
}

DistributionTable DistributionTable::from_map(const std::map<std::string, double>& entries,
                                              double tolerance) {
  std::vector<std::string> domain;
  std::vector<double> probs;
  for (const auto& [outcome, prob] : entries) {
    domain.push_back(outcome);
    probs.push_back(prob);
  }
  return DistributionTable(std::move(domain), std::move(probs), tolerance);
}

std::optional<std::size_t> DistributionTable::index_of(std::string_view outcome) const {
  const auto it = index_.find(std::string(outcome));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double DistributionTable::probability(std::string_view outcome) const {
  const auto idx = index_of(outcome);
  return idx ? probs_[*idx] : 0.0;
}

double DistributionTable::total() const noexcept {
  double total = 0.0;
  for (double v : probs_) total += v;
  return total;
}

std::vector<BitString> distinct_subsequences(const BitString& x) {
  const std::size_t n = x.size();
  // next[i][b]: first index >= i holding bit b, or n.
  std::vector<std::array<std::size_t, 2>> next(n + 1, {n, n});
  for (std::size_t i = n; i-- > 0;) {
    next[i] = next[i + 1];
    next[i][x[i]] = i;
  }
  std::vector<BitString> out;
  std::vector<std::uint8_t> prefix;
  // Each distinct subsequence has exactly one leftmost (greedy) embedding.
  auto visit = [&](auto&& self, std::size_t pos) -> void {
    out.emplace_back(prefix);
    for (std::uint8_t b = 0; b < 2; ++b) {
      const std::size_t at = next[pos][b];
      if (at == n) continue;
      prefix.push_back(b);
      self(self, at + 1);
      prefix.pop_back();
    }
  };
  visit(visit, 0);
  std::sort(out.begin(), out.end(), [](const BitString& a, const BitString& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

DistributionTable trace_distribution(const BitString& x, const ChannelParams& params,
                                     bool allow_large) {
  if (x.size() > kExactDistributionGuard && !allow_large)
    throw Error(ErrorCode::LengthGuard,
                "exact distribution needs |x| <= " + std::to_string(kExactDistributionGuard));
  const auto subsequences = distinct_subsequences(x);
  std::vector<std::string> domain;
  std::vector<double> probs;
  domain.reserve(subsequences.size());
  probs.reserve(subsequences.size());
  for (const auto& t : subsequences) {
    domain.push_back(t.to_ascii());
    probs.push_back(trace_probability(x, t, params));
  }
  return DistributionTable(std::move(domain), std::move(probs), allow_large ? 1e-9 : 1e-12);
}

double tv_distance(const DistributionTable& a, const DistributionTable& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += std::abs(a.probs()[i] - b.probability(a.domain()[i]));
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!a.index_of(b.domain()[i])) sum += b.probs()[i];
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

json to_json(const DistributionTable& table) {
  json j = json::object();
  for (std::size_t i = 0; i < table.size(); ++i) j[table.domain()[i]] = table.probs()[i];
  return j;
}

DistributionTable distribution_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "distribution must be a JSON object");
  std::map<std::string, double> entries;
  for (const auto& [key, value] : j.items()) entries[key] = value.get<double>();
  return DistributionTable::from_map(entries);
}

}  // namespace tracelab
