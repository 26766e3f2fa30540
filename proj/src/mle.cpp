#include "tracelab/mle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "tracelab/error.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using Rational = boost::multiprecision::cpp_rational;

std::size_t sample_index(std::span<const double> probs, CounterRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

// argmax with the first index winning ties; NaN-free inputs.
MleResult first_argmax(std::span<const double> scores) {
  MleResult result;
  double best = kNegInf;
  bool any = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == kNegInf) continue;
    if (!any || scores[i] > best) {
      best = scores[i];
      result.index = i;
      any = true;
    }
  }
  result.degenerate = !any;
  return result;
}

std::size_t trace_id(const BitString& t) {
  std::size_t value = 0;
  for (auto b : t) value = (value << 1) | b;
  return (std::size_t{1} << t.size()) - 1 + value;
}

}  // namespace

DistributionFamily::DistributionFamily(std::vector<std::string> domain,
                                       std::vector<std::vector<double>> members)
    : domain_(std::move(domain)), members_(std::move(members)) {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (!index_.emplace(domain_[i], i).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate outcome '" + domain_[i] + "'");
  for (const auto& member : members_) {
    if (member.size() != domain_.size())
      throw Error(ErrorCode::ShapeMismatch, "member length differs from the domain");
    double total = 0.0;
    for (double v : member) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, "negative or non-finite probability");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "member not normalized");
  }
}

DistributionFamily DistributionFamily::from_tables(std::span<const DistributionTable> tables) {
  std::vector<std::string> domain;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& table : tables)
    for (const auto& outcome : table.domain())
      if (index.emplace(outcome, domain.size()).second) domain.push_back(outcome);
  std::vector<std::vector<double>> members;
  for (const auto& table : tables) {
    std::vector<double> row(domain.size(), 0.0);
    for (std::size_t i = 0; i < table.size(); ++i) row[index.at(table.domain()[i])] = table.probs()[i];
    members.push_back(std::move(row));
  }
  return DistributionFamily(std::move(domain), std::move(members));
}

std::optional<std::size_t> DistributionFamily::index_of(const std::string& outcome) const {
  const auto it = index_.find(outcome);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DistributionTable DistributionFamily::table(std::size_t i) const {
  return DistributionTable(domain_, members_.at(i), 1e-9);
}

double log_likelihood(std::span<const std::string> samples, const DistributionTable& table) {
  double sum = 0.0;
  for (const auto& s : samples) {
    const auto idx = table.index_of(s);
    if (!idx) throw Error(ErrorCode::DomainMismatch, "sample '" + s + "' outside the domain");
    const double prob = table.probs()[*idx];
    if (prob <= 0.0) return kNegInf;
    sum += std::log(prob);
  }
  return sum;
}

double log_likelihood(const SampleBatch& batch, const DistributionFamily& family, std::size_t member) {
  const auto probs = family.member(member);
  double sum = 0.0;
  for (std::size_t s : batch.samples) {
    if (s >= probs.size()) throw Error(ErrorCode::DomainMismatch, "sample index outside the domain");
    if (probs[s] <= 0.0) return kNegInf;
    sum += std::log(probs[s]);
  }
  return sum;
}

MleResult mle(const SampleBatch& batch, const DistributionFamily& family) {
  if (family.size() == 0) throw Error(ErrorCode::EmptyFamily, "empty family");
  std::vector<double> scores(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) scores[i] = log_likelihood(batch, family, i);
  return first_argmax(scores);
}

CheckReport optimality_bound_check(const DistributionFamily& family, std::uint64_t trials,
                                   std::uint64_t seed) {
  if (family.size() == 0) throw Error(ErrorCode::EmptyFamily, "empty family");
  const std::size_t m = family.size() - 1;
  const DistributionTable null_table = family.table(0);
  double min_tv = 1.0;
  for (std::size_t i = 1; i < family.size(); ++i)
    min_tv = std::min(min_tv, tv_distance(null_table, family.table(i)));
  const double eps = 1.0 - min_tv;
  const auto null = family.member(0);

  CheckReport report;
  report.check = "mle_optimality_bound";
  report.inputs = {{"members", family.size()}, {"domain", family.domain().size()},
                   {"trials", trials}, {"seed", seed}};
  double prob = 0.0;
  double std_error = 0.0;
  const bool exact = family.domain().size() <= 100000;
  if (exact) {
    for (std::size_t x = 0; x < null.size(); ++x) {
      if (null[x] <= 0.0) continue;
      if (mle(SampleBatch{{x}}, family).index == 0) prob += null[x];
    }
  } else {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "Monte-Carlo path needs trials >= 1");
    const auto hits = kernels::accumulate_trials(
        trials, seed, 1,
        [&](std::uint64_t s, std::span<std::uint64_t> acc) {
          CounterRng rng(s);
          if (mle(SampleBatch{{sample_index(null, rng)}}, family).index == 0) ++acc[0];
        },
        kernels::Exec::Parallel);
    prob = static_cast<double>(hits[0]) / static_cast<double>(trials);
    std_error = std::sqrt(prob * (1.0 - prob) / static_cast<double>(trials));
  }
  const double bound = 1.0 - static_cast<double>(m) * eps;
  // Absolute 1e-12 absorbs rounding in eps; Monte Carlo adds 4 standard errors.
  report.require(bound - 1e-12, prob + 4.0 * std_error, "Pr[MLE = 0] >= 1 - m eps");
  report.details["epsilon"] = eps;
  report.details["m"] = m;
  report.details["prob_mle_null"] = prob;
  report.details["bound"] = bound;
  report.details["exact"] = exact;
  if (!exact) report.details["std_error"] = std_error;
  return report;
}

DistributionFamily trace_product_family(std::span<const BitString> sources, const ChannelParams& params,
                                        std::size_t T) {
  if (sources.empty()) throw Error(ErrorCode::EmptyFamily, "no sources");
  if (T == 0) throw Error(ErrorCode::InvalidArgument, "need T >= 1");
  std::vector<DistributionTable> tables;
  for (const auto& x : sources) tables.push_back(trace_distribution(x, params));
  const DistributionFamily base = DistributionFamily::from_tables(tables);
  const std::size_t d = base.domain().size();
  double cells = 1.0;
  for (std::size_t t = 0; t < T; ++t) cells *= static_cast<double>(d);
  if (cells > 1e6) throw Error(ErrorCode::SizeGuard, "product domain exceeds 1e6 outcomes");
  const auto total = static_cast<std::size_t>(cells);
  std::vector<std::string> domain(total);
  std::vector<std::vector<double>> members(sources.size(), std::vector<double>(total, 1.0));
  std::vector<std::size_t> digits(T, 0);
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::string label;
    for (std::size_t t = 0; t < T; ++t) {
      if (t > 0) label += ',';
      label += base.domain()[digits[t]];
      for (std::size_t i = 0; i < sources.size(); ++i) members[i][cell] *= base.member(i)[digits[t]];
    }
    domain[cell] = std::move(label);
    for (std::size_t t = T; t-- > 0;) {
      if (++digits[t] < d) break;
      digits[t] = 0;
    }
  }
  return DistributionFamily(std::move(domain), std::move(members));
}

TraceMleResult trace_mle_reconstruct(std::span<const Trace> traces, std::size_t n,
                                     const ChannelParams& params,
                                     std::optional<std::span<const BitString>> candidates) {
  std::vector<BitString> pool;
  if (candidates) {
    pool.assign(candidates->begin(), candidates->end());
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  } else {
    if (n > kTraceMleGuard)
      throw Error(ErrorCode::SizeGuard, "full-space search needs n <= " + std::to_string(kTraceMleGuard));
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) pool.push_back(BitString::from_integer(v, n));
  }
  if (pool.empty()) throw Error(ErrorCode::EmptyFamily, "no candidates");
  // Distinct traces in (length, lexicographic) order with multiplicities.
  std::map<std::pair<std::size_t, BitString>, std::uint64_t> counts;
  for (const auto& t : traces) ++counts[{t.bits.size(), t.bits}];
  std::vector<double> scores(pool.size());
  for (std::size_t c = 0; c < pool.size(); ++c) {
    double sum = 0.0;
    for (const auto& [key, count] : counts) {
      const double ll = trace_log_probability(pool[c], key.second, params);
      if (ll == kNegInf) {
        sum = kNegInf;
        break;
      }
      sum += static_cast<double>(count) * ll;
    }
    scores[c] = sum;
  }
  const MleResult best = first_argmax(scores);
  return TraceMleResult{pool[best.index], best.degenerate ? kNegInf : scores[best.index], best.degenerate};
}

LowerBoundFamily lb_family(std::size_t n) {
  if (n < 4) throw Error(ErrorCode::InvalidArgument, "need n >= 4");
  if (n > 24) throw Error(ErrorCode::SizeGuard, "lower-bound family needs n <= 24");
  LowerBoundFamily out;
  out.n = n;
  out.t = n / 4;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask)
    if (static_cast<std::size_t>(std::popcount(mask)) == out.t) out.subset_masks.push_back(mask);
  // Combination order: sort masks by their element lists.
  auto elements = [n](std::uint32_t mask) {
    std::vector<std::size_t> e;
    for (std::size_t s = 0; s < n; ++s)
      if (mask >> s & 1U) e.push_back(s);
    return e;
  };
  std::sort(out.subset_masks.begin(), out.subset_masks.end(),
            [&](std::uint32_t a, std::uint32_t b) { return elements(a) < elements(b); });
  out.m = out.subset_masks.size();
  out.omega1 = out.m;
  out.omega2 = n;
  std::vector<std::string> domain;
  for (std::uint32_t mask : out.subset_masks) {
    std::string label = "{";
    bool first = true;
    for (std::size_t s : elements(mask)) {
      label += (first ? "" : ",") + std::to_string(s);
      first = false;
    }
    domain.push_back(label + "}");
  }
  for (std::size_t s = 0; s < n; ++s) domain.push_back(std::to_string(s));
  const std::size_t size = domain.size();
  std::vector<std::vector<double>> members;
  std::vector<double> null(size, 0.0);
  for (std::size_t s = 0; s < n; ++s) null[out.omega1 + s] = 1.0 / static_cast<double>(n);
  members.push_back(std::move(null));
  const double singleton = 1.0 / (3.0 * static_cast<double>(out.t));
  for (std::size_t i = 0; i < out.m; ++i) {
    std::vector<double> row(size, 0.0);
    row[i] = 2.0 / 3.0;
    for (std::size_t s : elements(out.subset_masks[i])) row[out.omega1 + s] = singleton;
    members.push_back(std::move(row));
  }
  out.family = DistributionFamily(std::move(domain), std::move(members));
  return out;
}

namespace {

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) os << '/' << boost::multiprecision::denominator(r);
  return os.str();
}

Rational rational_power(const Rational& base, std::size_t e) {
  Rational out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

LowerBoundReport lb_verify(std::size_t n, std::size_t T) {
  if (n < 4 || n > 16) throw Error(ErrorCode::InvalidArgument, "need 4 <= n <= 16");
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "need T >= 1");
  const LowerBoundFamily lb = lb_family(n);
  LowerBoundReport report;
  report.n = n;
  report.T = T;
  report.t = lb.t;
  report.claim_applies = T <= lb.t;

  const Rational null_point(1, static_cast<long>(n));
  const Rational singleton(1, static_cast<long>(3 * lb.t));
  const Rational subset_mass(2, 3);
  const Rational null_likelihood = rational_power(null_point, T);
  const Rational subset_likelihood = rational_power(singleton, T);

  // Multisets of size T from [n] as non-decreasing index tuples.
  std::vector<std::size_t> tuple(T, 0);
  Rational prob_null = 0;
  std::vector<BigInt> factorial(T + 1, 1);
  for (std::size_t i = 1; i <= T; ++i) factorial[i] = factorial[i - 1] * static_cast<unsigned>(i);
  while (true) {
    ++report.multisets;
    std::uint32_t support = 0;
    for (std::size_t s : tuple) support |= std::uint32_t{1} << s;
    // Covering: the best subset likelihood is (1/(3t))^T when some S contains
    // the support, else zero.
    bool covered = false;
    for (std::uint32_t mask : lb.subset_masks)
      if ((support & ~mask) == 0) {
        covered = true;
        break;
      }
    if (!covered) report.uncovered_multiset = true;
    const Rational best_alternative = covered ? subset_likelihood : Rational(0);
    // Ties go to index 0, so D_0 wins unless strictly beaten.
    if (!(best_alternative > null_likelihood)) {
      ++report.tuples_mle_null;
      BigInt arrangements = factorial[T];
      for (std::size_t i = 0, j = 0; i < T; i = j) {
        j = i;
        while (j < T && tuple[j] == tuple[i]) ++j;
        arrangements /= factorial[j - i];
      }
      prob_null += Rational(arrangements) * null_likelihood;
    }
    std::size_t pos = T;
    while (pos > 0 && tuple[pos - 1] == n - 1) --pos;
    if (pos == 0) break;
    const std::size_t v = ++tuple[pos - 1];
    for (std::size_t i = pos; i < T; ++i) tuple[i] = v;
  }
  report.prob_mle_null = rational_string(prob_null);

  // Distinguisher: outcome S in Omega_1 -> S, singleton in Omega_2 -> 0.
  const Rational null_success = Rational(static_cast<long>(n)) * null_point;
  Rational min_success = 1;
  Rational max_success = 0;
  bool normalized = true;
  for (std::size_t i = 0; i < lb.m; ++i) {
    const Rational success = subset_mass;
    const Rational total = subset_mass + Rational(static_cast<long>(lb.t)) * singleton;
    normalized = normalized && total == 1;
    min_success = std::min(min_success, success);
    max_success = std::max(max_success, success);
  }
  report.distinguisher_null = rational_string(null_success);
  report.distinguisher_min = rational_string(min_success);
  report.distinguisher_max = rational_string(max_success);
  const bool distinguisher_ok = null_success == 1 && min_success == Rational(2, 3) &&
                                max_success == Rational(2, 3) && normalized;
  report.pass = distinguisher_ok && (!report.claim_applies || prob_null == 0);
  return report;
}

CheckReport map_equals_mle_check(const DistributionFamily& family, std::uint64_t trials,
                                 std::uint64_t seed) {
  if (family.size() == 0) throw Error(ErrorCode::EmptyFamily, "empty family");
  const std::size_t m = family.size();
  const auto mismatches = kernels::accumulate_trials(
      trials, seed, 1,
      [&](std::uint64_t s, std::span<std::uint64_t> acc) {
        CounterRng rng(s);
        const std::size_t truth = rng.below(m);
        SampleBatch batch;
        const std::size_t size = 1 + rng.below(8);
        for (std::size_t j = 0; j < size; ++j) batch.samples.push_back(sample_index(family.member(truth), rng));
        std::vector<double> ll(m);
        for (std::size_t i = 0; i < m; ++i) ll[i] = log_likelihood(batch, family, i);
        // Log posterior: log prior + log likelihood - log evidence.
        double top = kNegInf;
        for (double v : ll) top = std::max(top, v);
        double evidence = 0.0;
        if (top != kNegInf)
          for (double v : ll) evidence += std::exp(v - top) / static_cast<double>(m);
        const double shift = top == kNegInf ? 0.0 : -std::log(static_cast<double>(m)) - (top + std::log(evidence));
        std::vector<double> posterior(m);
        for (std::size_t i = 0; i < m; ++i) posterior[i] = ll[i] + shift;
        if (first_argmax(posterior).index != mle(batch, family).index) ++acc[0];
      },
      kernels::Exec::Parallel);
  CheckReport report;
  report.check = "map_equals_mle";
  report.inputs = {{"members", m}, {"trials", trials}, {"seed", seed}};
  report.require(static_cast<double>(mismatches[0]), 0.0, "mismatching batches");
  report.details["mismatches"] = mismatches[0];
  return report;
}

std::vector<double> isotonic_increasing(std::span<const double> values, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != values.size())
    throw Error(ErrorCode::ShapeMismatch, "weights and values differ in length");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights.empty() ? 1.0 : weights[i], 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

SuccessCurve amplified_success_curve(std::span<const BitString> pool, const ChannelParams& params,
                                     std::span<const std::size_t> T_grid, std::uint64_t trials,
                                     std::uint64_t seed, kernels::Exec exec) {
  if (pool.empty()) throw Error(ErrorCode::EmptyFamily, "empty source pool");
  const std::size_t n = pool.front().size();
  for (const auto& x : pool)
    if (x.size() != n) throw Error(ErrorCode::ShapeMismatch, "sources differ in length");
  if (n > 16) throw Error(ErrorCode::SizeGuard, "success curves need n <= 16");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "need trials >= 1");

  // Cached log-likelihoods: table[id * candidates + c] = log D_c(trace id).
  constexpr std::size_t kCacheLimit = 10;
  const bool cached = n <= kCacheLimit;
  const std::size_t candidates = std::size_t{1} << n;
  std::vector<double> table;
  if (cached) {
    const std::size_t ids = (std::size_t{1} << (n + 1)) - 1;
    table.resize(ids * candidates);
    std::vector<BitString> cands(candidates);
    for (std::size_t c = 0; c < candidates; ++c) cands[c] = BitString::from_integer(c, n);
    const auto rows = static_cast<std::int64_t>(ids);
    auto fill = [&](std::size_t id) {
      std::size_t len = 0;
      while ((std::size_t{1} << (len + 1)) - 1 <= id) ++len;
      const BitString t = BitString::from_integer(id - ((std::size_t{1} << len) - 1), len);
      for (std::size_t c = 0; c < candidates; ++c) table[id * candidates + c] = trace_log_probability(cands[c], t, params);
    };
    if (exec == kernels::Exec::Serial) {
      for (std::int64_t id = 0; id < rows; ++id) fill(static_cast<std::size_t>(id));
    } else {
#pragma omp parallel for schedule(dynamic, 8)
      for (std::int64_t id = 0; id < rows; ++id) fill(static_cast<std::size_t>(id));
    }
  }

  auto reconstruct = [&](std::span<const Trace> traces) -> BitString {
    if (!cached) return trace_mle_reconstruct(traces, n, params).estimate;
    std::map<std::size_t, std::uint64_t> counts;
    for (const auto& t : traces) ++counts[trace_id(t.bits)];
    std::vector<double> scores(candidates);
    for (std::size_t c = 0; c < candidates; ++c) {
      double sum = 0.0;
      for (const auto& [id, count] : counts) {
        const double ll = table[id * candidates + c];
        if (ll == kNegInf) {
          sum = kNegInf;
          break;
        }
        sum += static_cast<double>(count) * ll;
      }
      scores[c] = sum;
    }
    return BitString::from_integer(first_argmax(scores).index, n);
  };

  SuccessCurve curve;
  curve.T_grid.assign(T_grid.begin(), T_grid.end());
  for (std::size_t g = 0; g < T_grid.size(); ++g) {
    const std::size_t T = T_grid[g];
    std::uint64_t pooled_hits = 0;
    for (std::size_t s = 0; s < pool.size(); ++s) {
      const std::uint64_t cell_seed = derive_seed(seed, g * pool.size() + s);
      const auto hits = kernels::accumulate_trials(
          trials, cell_seed, 1,
          [&](std::uint64_t trial_seed, std::span<std::uint64_t> acc) {
            std::vector<Trace> traces;
            traces.reserve(T);
            for (std::size_t j = 0; j < T; ++j) traces.push_back(sample_trace(pool[s], params, derive_seed(trial_seed, j)));
            if (reconstruct(traces) == pool[s]) ++acc[0];
          },
          exec);
      pooled_hits += hits[0];
      curve.rows.push_back(SuccessRow{n, params.p, T, pool[s].to_ascii(),
                                      static_cast<double>(hits[0]) / static_cast<double>(trials), trials,
                                      cell_seed});
    }
    curve.pooled.push_back(static_cast<double>(pooled_hits) /
                           static_cast<double>(trials * pool.size()));
  }
  const double per_cell = static_cast<double>(trials * pool.size());
  std::vector<double> weights(curve.pooled.size(), per_cell);
  curve.smoothed = isotonic_increasing(curve.pooled, weights);
  // A raw drop counts only beyond 3 standard errors; the variance is floored
  // at 1/N so rates pinned at 0 or 1 are not treated as exact.
  curve.trend_ok = true;
  for (std::size_t a = 0; a < curve.pooled.size(); ++a) {
    for (std::size_t b = a + 1; b < curve.pooled.size(); ++b) {
      if (curve.T_grid[b] < curve.T_grid[a]) continue;
      auto var = [&](double r) { return std::max(r * (1.0 - r), 1.0 / per_cell) / per_cell; };
      const double sd = std::sqrt(var(curve.pooled[a]) + var(curve.pooled[b]));
      if (curve.pooled[a] - curve.pooled[b] > 3.0 * sd) curve.trend_ok = false;
    }
  }
  for (std::size_t i = 1; i < curve.smoothed.size(); ++i)
    if (curve.smoothed[i] < curve.smoothed[i - 1]) curve.trend_ok = false;
  return curve;
}

json to_json(const DistributionFamily& family) {
  json members = json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto m = family.member(i);
    members.push_back(std::vector<double>(m.begin(), m.end()));
  }
  return json{{"domain", std::vector<std::string>(family.domain().begin(), family.domain().end())},
              {"members", members}};
}

std::string success_curve_csv(const SuccessCurve& curve) {
  std::ostringstream os;
  os << "n,p,T,source,success_rate,trials,seed\n";
  for (const auto& r : curve.rows)
    os << r.n << ',' << r.p << ',' << r.T << ',' << r.source << ',' << r.success_rate << ',' << r.trials
       << ',' << r.seed << '\n';
  return os.str();
}

}  // namespace tracelab
