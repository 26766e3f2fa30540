#include "tracelab/hard_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "tracelab/error.hpp"
#include "tracelab/kmer_maps.hpp"
#include "tracelab/rng.hpp"

namespace tracelab {

namespace {

__extension__ using I128 = __int128;

constexpr double kPi = std::numbers::pi;
// Lengths up to this use exact 128-bit binomial moments.
constexpr std::size_t kExactMomentLimit = 120;
constexpr std::size_t kCoarsePoints = 33;

std::vector<std::size_t> unit_positions(const BitString& x, std::size_t k) {
  std::vector<std::size_t> out;
  if (k == 0 || k > x.size()) return out;
  const BitString ek = unit_kmer(k, k);
  for (std::size_t j = 0; j + k <= x.size(); ++j)
    if (x.window_equals(j, ek)) out.push_back(j);
  return out;
}

// S_m = sum over occurrence positions j of C(j, m), m = 0..n-1.
struct Moments {
  std::vector<I128> exact;
  std::vector<long double> approx;
};

Moments binomial_moments(const std::vector<std::size_t>& positions, std::size_t n) {
  Moments out;
  const bool exact = n <= kExactMomentLimit;
  if (exact)
    out.exact.assign(n, 0);
  else
    out.approx.assign(n, 0.0L);
  if (positions.empty()) return out;
  const std::size_t top = positions.back();
  std::vector<I128> row_i{1};
  std::vector<long double> row_f{1.0L};
  std::size_t next = 0;
  for (std::size_t j = 0; j <= top; ++j) {
    if (j > 0) {
      if (exact) {
        row_i.push_back(1);
        for (std::size_t m = j - 1; m >= 1; --m) row_i[m] += row_i[m - 1];
      } else {
        row_f.push_back(1.0L);
        for (std::size_t m = j - 1; m >= 1; --m) row_f[m] += row_f[m - 1];
      }
    }
    if (next < positions.size() && positions[next] == j) {
      for (std::size_t m = 0; m <= j; ++m) {
        if (exact)
          out.exact[m] += row_i[m];
        else
          out.approx[m] += row_f[m];
      }
      ++next;
    }
  }
  return out;
}

std::vector<double> q_powers(double q, std::size_t n) {
  std::vector<double> out(n, 1.0);
  for (std::size_t m = 1; m < n; ++m) out[m] = out[m - 1] * q;
  return out;
}

OneCenteredPoly moment_difference(const Moments& a, const Moments& b, std::span<const double> qpow) {
  std::vector<double> t(qpow.size(), 0.0);
  for (std::size_t m = 0; m < t.size(); ++m) {
    const double d = a.exact.empty() ? static_cast<double>(a.approx[m] - b.approx[m])
                                     : static_cast<double>(a.exact[m] - b.exact[m]);
    t[m] = qpow[m] * d;
  }
  while (!t.empty() && t.back() == 0.0) t.pop_back();
  return OneCenteredPoly(std::move(t));
}

Complex unit_delta(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, std::sin(theta)};
}

}  // namespace

std::optional<std::size_t> exact_cube_root(std::size_t L) {
  for (std::size_t c = 0; c * c * c <= L; ++c)
    if (c * c * c == L) return c;
  return std::nullopt;
}

SeparatedFamily build_family(std::size_t L) {
  const auto c = exact_cube_root(L);
  if (!c || *c < 2) throw Error(ErrorCode::InvalidL, "L must be a cube with L >= 8");
  const std::size_t free_bits = *c * *c - 1;
  if (free_bits > 24) throw Error(ErrorCode::SizeGuard, "family too large to enumerate");
  SeparatedFamily family;
  family.L = L;
  family.r = *c - 1;
  family.cube_root = *c;
  const std::size_t count = std::size_t{1} << free_bits;
  family.members.reserve(count);
  for (std::size_t v = 0; v < count; ++v) {
    std::vector<std::uint8_t> bits;
    bits.reserve(L);
    for (std::size_t i = 0; i < free_bits; ++i) {
      bits.insert(bits.end(), *c - 1, 0);
      bits.push_back(static_cast<std::uint8_t>((v >> (free_bits - 1 - i)) & 1U));
    }
    bits.insert(bits.end(), *c - 1, 0);
    bits.push_back(0);
    family.members.emplace_back(std::move(bits));
  }
  return family;
}

std::uint64_t general_family_size(std::size_t n, std::size_t r) {
  // f[m + r + 1] holds f(m) so that negative arguments index the prefix.
  std::vector<std::uint64_t> f(n + r + 2, 1);
  for (std::size_t m = 1; m <= n; ++m) f[m + r + 1] = f[m + r] + f[m];
  return f[n + r + 1];
}

SeparatedFamily build_general_family(std::size_t n, std::size_t r) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1");
  if (general_family_size(n, r) > (std::uint64_t{1} << 22))
    throw Error(ErrorCode::SizeGuard, "family too large to enumerate");
  SeparatedFamily family;
  family.L = n;
  family.r = r;
  std::vector<std::uint8_t> bits;
  // gap = zeros written since the last 1 (r when no 1 yet).
  auto extend = [&](auto&& self, std::size_t gap) -> void {
    if (bits.size() == n) {
      family.members.emplace_back(bits);
      return;
    }
    bits.push_back(0);
    self(self, std::min(gap + 1, r));
    bits.pop_back();
    if (gap >= r) {
      bits.push_back(1);
      self(self, 0);
      bits.pop_back();
    }
  };
  extend(extend, r);
  return family;
}

bool is_separated(const BitString& x, std::size_t r) {
  std::optional<std::size_t> last;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 1) continue;
    if (last && j - *last - 1 < r) return false;
    last = j;
  }
  return true;
}

CheckReport family_properties_check(const SeparatedFamily& family, std::size_t k,
                                    const ChannelParams& params, std::uint64_t seed) {
  if (k == 0 || k > family.r + 1 || k > family.L)
    throw Error(ErrorCode::InvalidK, "need 1 <= k <= r + 1");
  CheckReport report;
  report.check = "family_properties";
  report.slack = 1e-9;
  report.inputs = {{"L", family.L}, {"r", family.r}, {"k", k}, {"p", params.p},
                   {"members", family.members.size()}, {"seed", seed}};
  const std::size_t L = family.L;
  const BinomialWeights weights(L, params);
  const PolyCoeffs channel_factor = PolyCoeffs::from_real(std::vector<double>{params.p, params.q});

  constexpr std::size_t kPoints = 64;
  CounterRng rng(seed);
  std::vector<Complex> points(kPoints);
  for (std::size_t g = 0; g < kPoints; ++g) {
    const double radius = g < 8 ? 1.0 : std::sqrt(rng.uniform());
    points[g] = std::polar(radius, 2.0 * kPi * rng.uniform() - kPi);
  }
  // powers[g][s] = (p + q z_g)^s.
  std::vector<std::vector<Complex>> powers(kPoints, std::vector<Complex>(L, 1.0));
  std::vector<Complex> x_independent(kPoints, 0.0);
  for (std::size_t g = 0; g < kPoints; ++g) {
    const Complex u = params.p + params.q * points[g];
    for (std::size_t s = 1; s < L; ++s) powers[g][s] = powers[g][s - 1] * u;
    for (std::size_t s = 0; s + k <= L; ++s) x_independent[g] += powers[g][s];
  }

  std::uint64_t multi_one_windows = 0;
  std::uint64_t shift_failures = 0;
  double worst_coeff = 0.0;
  double worst_sum = 0.0;
  std::vector<Complex> prev_zero, prev_unit;
  for (std::size_t idx = 0; idx < family.members.size(); ++idx) {
    const BitString& x = family.members[idx];
    // Window classes: -1 for 0^k, j-1 for e_j, -2 for two or more 1s.
    std::vector<int> cls(L - k + 1);
    for (std::size_t s = 0; s + k <= L; ++s) {
      int ones = 0;
      int where = -1;
      for (std::size_t l = 0; l < k; ++l)
        if (x[s + l]) {
          ++ones;
          where = static_cast<int>(l);
        }
      cls[s] = ones == 0 ? -1 : (ones == 1 ? where : -2);
      if (ones >= 2) ++multi_one_windows;
    }
    // Item 2: e_j at s <=> e_{j+1} at s-1, then the coefficient identity.
    for (std::size_t j = 1; j < k; ++j) {
      for (std::size_t s = 0; s + k <= L; ++s) {
        const bool lhs = cls[s] == static_cast<int>(j - 1);
        const bool rhs = s >= 1 && cls[s - 1] == static_cast<int>(j);
        if (lhs != rhs) ++shift_failures;
      }
      const auto pj = PolyCoeffs::from_real(density_row(x, unit_kmer(k, j), weights));
      const auto pj1 = PolyCoeffs::from_real(density_row(x, unit_kmer(k, j + 1), weights));
      const auto diff = pj - channel_factor * pj1;
      const double scale = std::max(1.0, pj.max_abs_coeff());
      worst_coeff = std::max(worst_coeff, diff.max_abs_coeff() / scale);
    }
    // Item 3 through the x-independent sum and the neighbouring member.
    std::vector<Complex> zero_vals(kPoints, 0.0), unit_vals(kPoints, 0.0);
    for (std::size_t g = 0; g < kPoints; ++g) {
      Complex total = 0.0;
      for (std::size_t s = 0; s + k <= L; ++s) {
        if (cls[s] == -2) continue;
        total += powers[g][s];
        if (cls[s] == -1) zero_vals[g] += powers[g][s];
        if (cls[s] == static_cast<int>(k - 1)) unit_vals[g] += powers[g][s];
      }
      worst_sum = std::max(worst_sum, std::abs(total - x_independent[g]) / static_cast<double>(L));
    }
    if (idx > 0) {
      for (std::size_t g = 0; g < kPoints; ++g) {
        const double lhs = std::abs(zero_vals[g] - prev_zero[g]);
        const double rhs = static_cast<double>(k) * std::abs(unit_vals[g] - prev_unit[g]);
        // Absolute floor for rounding in sums of size ~L.
        report.require(lhs, rhs + 1e-12 * static_cast<double>(L));
      }
    }
    prev_zero = std::move(zero_vals);
    prev_unit = std::move(unit_vals);
  }
  report.require_true(multi_one_windows == 0, "item 1: windows with two 1s");
  report.require_true(shift_failures == 0, "item 2: occurrence shift");
  report.require_true(worst_coeff <= 1e-12, "item 2: coefficient identity");
  report.require_true(worst_sum <= 1e-12, "item 3: x-independent sum");
  report.details["multi_one_windows"] = multi_one_windows;
  report.details["shift_failures"] = shift_failures;
  report.details["max_coefficient_error"] = worst_coeff;
  report.details["max_sum_error"] = worst_sum;
  return report;
}

EllipseChoice default_feature_param(std::size_t L) {
  const double a = std::pow(static_cast<double>(L), -2.0 / 3.0);
  if (a > 0.125) return {0.125, true};
  return {a, false};
}

double default_arc_half_width(std::size_t L) {
  return std::numbers::ln2 / 150.0 * std::pow(static_cast<double>(L), -2.0 / 3.0);
}

PolyCoeffs indicator_polynomial(const BitString& x, std::size_t k) {
  if (k == 0 || k > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= k <= |x|");
  std::vector<double> c(x.size() - k + 1, 0.0);
  for (std::size_t j : unit_positions(x, k)) c[j] = 1.0;
  return PolyCoeffs::from_real(c);
}

FeatureVector feature_vector(const BitString& x, std::size_t k, double a, std::size_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "need d >= 1");
  const PolyCoeffs g = indicator_polynomial(x, k);
  const std::size_t max_degree = std::max<std::size_t>(d - 1, static_cast<std::size_t>(std::max(g.degree(), 0)));
  const auto coeffs = chebyshev_coeffs(g, a, max_degree);
  FeatureVector fv;
  fv.a = a;
  for (std::size_t j = 0; j < coeffs.size(); ++j) (j < d ? fv.values : fv.tail).push_back(coeffs[j].real());
  return fv;
}

PigeonholeResult pigeonhole_search(const SeparatedFamily& family, std::size_t k, double a,
                                   std::size_t d, double cube_side) {
  if (!(cube_side > 0.0)) throw Error(ErrorCode::InvalidArgument, "cube side must be positive");
  if (family.members.empty()) throw Error(ErrorCode::EmptyFamily, "empty family");
  const double span = 4.0 * static_cast<double>(family.L);
  PigeonholeResult result;
  const double per_axis = std::ceil(span / cube_side);
  result.log2_cube_count = static_cast<double>(d) * std::log2(per_axis);
  result.log2_family_size = std::log2(static_cast<double>(family.members.size()));
  result.guaranteed = result.log2_cube_count < result.log2_family_size;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  std::vector<std::vector<double>> features(family.members.size());
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    features[i] = feature_vector(family.members[i], k, a, d).values;
    std::vector<std::int64_t> bucket(d);
    for (std::size_t j = 0; j < d; ++j)
      bucket[j] = static_cast<std::int64_t>(
          std::floor((features[i][j] + 2.0 * static_cast<double>(family.L)) / cube_side));
    const auto [it, inserted] = seen.emplace(bucket, i);
    if (!inserted && !result.first) {
      result.first = it->second;
      result.second = i;
      result.bucket = bucket;
    }
  }
  result.distinct_buckets = seen.size();
  if (result.first) {
    for (std::size_t j = 0; j < d; ++j)
      result.max_coordinate_gap = std::max(
          result.max_coordinate_gap, std::abs(features[*result.first][j] - features[*result.second][j]));
  }
  return result;
}

OneCenteredPoly unit_kmer_difference(const BitString& x, const BitString& y, std::size_t k,
                                     const ChannelParams& params) {
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "strings differ in length");
  if (k == 0 || k > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= k <= |x|");
  const std::size_t n = x.size();
  const auto qpow = q_powers(params.q, n);
  const auto pos_x = unit_positions(x, k);
  const auto pos_y = unit_positions(y, k);
  const OneCenteredPoly taylor_only =
      moment_difference(binomial_moments(pos_x, n), binomial_moments(pos_y, n), qpow);
  // Monomial coefficients over positions in exactly one of the two sets.
  const BinomialWeights weights(n, params);
  std::vector<double> c(n, 0.0);
  auto add = [&](const std::vector<std::size_t>& mine, const std::vector<std::size_t>& other,
                 double sign) {
    for (std::size_t j : mine) {
      if (std::binary_search(other.begin(), other.end(), j)) continue;
      const auto row = weights.row(j);
      for (std::size_t l = 0; l < row.size(); ++l) c[l] += sign * row[l];
    }
  };
  add(pos_x, pos_y, 1.0);
  add(pos_y, pos_x, -1.0);
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  const auto t = taylor_only.taylor();
  return OneCenteredPoly(std::vector<double>(t.begin(), t.end()), std::move(c));
}

namespace {

struct PairScanData {
  std::vector<Moments> moments;
  std::vector<double> qpow;
};

PairScanData prepare_pair_scan(const SeparatedFamily& family, std::size_t k,
                               const ChannelParams& params, kernels::Exec exec) {
  const std::size_t count = family.members.size();
  if (count < 2) throw Error(ErrorCode::EmptyFamily, "need at least two members");
  if (count > kPairScanGuard)
    throw Error(ErrorCode::SizeGuard, "pair scan limited to " + std::to_string(kPairScanGuard) + " members");
  if (k == 0 || k > family.L) throw Error(ErrorCode::InvalidK, "need 1 <= k <= L");
  PairScanData data;
  data.moments.resize(count);
  data.qpow = q_powers(params.q, family.L);
  const auto n = static_cast<std::int64_t>(count);
  if (exec == kernels::Exec::Serial) {
    for (std::int64_t i = 0; i < n; ++i)
      data.moments[i] = binomial_moments(unit_positions(family.members[i], k), family.L);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      data.moments[i] = binomial_moments(unit_positions(family.members[i], k), family.L);
  }
  return data;
}

SupResult pair_sup(const PairScanData& data, std::size_t a, std::size_t b, const ArcSpec& arc) {
  const auto diff = moment_difference(data.moments[a], data.moments[b], data.qpow);
  return sup_on_arc(diff, arc, kernels::Exec::Serial);
}

struct Candidate {
  double sup;
  std::size_t first;
  std::size_t second;
  double theta;
};

bool better(const Candidate& a, const Candidate& b) {
  return std::tie(a.sup, a.first, a.second) < std::tie(b.sup, b.first, b.second);
}

ClosestPair finish(const SeparatedFamily& family, const Candidate& best, std::uint64_t evaluations) {
  ClosestPair out;
  out.first = best.first;
  out.second = best.second;
  out.x = family.members[best.first];
  out.y = family.members[best.second];
  out.sup = best.sup;
  out.theta = best.theta;
  const auto count = static_cast<std::uint64_t>(family.members.size());
  out.pairs_total = count * (count - 1) / 2;
  out.full_evaluations = evaluations;
  return out;
}

Candidate evaluate_all(const PairScanData& data, const ArcSpec& arc,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       kernels::Exec exec) {
  std::vector<Candidate> results(pairs.size());
  auto eval = [&](std::size_t c) {
    const auto [a, b] = pairs[c];
    const SupResult s = pair_sup(data, a, b, arc);
    results[c] = Candidate{s.value, std::min(a, b), std::max(a, b), s.theta};
  };
  const auto n = static_cast<std::int64_t>(pairs.size());
  if (exec == kernels::Exec::Serial) {
    for (std::int64_t c = 0; c < n; ++c) eval(static_cast<std::size_t>(c));
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t c = 0; c < n; ++c) eval(static_cast<std::size_t>(c));
  }
  Candidate best{std::numeric_limits<double>::infinity(), 0, 0, 0.0};
  for (const auto& r : results)
    if (better(r, best)) best = r;
  return best;
}

}  // namespace

ClosestPair closest_pair_reference(const SeparatedFamily& family, std::size_t k,
                                   const ChannelParams& params, const ArcSpec& arc) {
  arc.validate();
  const auto data = prepare_pair_scan(family, k, params, kernels::Exec::Serial);
  const std::size_t count = family.members.size();
  Candidate best{std::numeric_limits<double>::infinity(), 0, 0, 0.0};
  std::uint64_t evaluations = 0;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      const SupResult s = pair_sup(data, a, b, arc);
      ++evaluations;
      const Candidate c{s.value, a, b, s.theta};
      if (better(c, best)) best = c;
    }
  }
  return finish(family, best, evaluations);
}

ClosestPair brute_force_closest_pair(const SeparatedFamily& family, std::size_t k,
                                     const ChannelParams& params, const ArcSpec& arc,
                                     kernels::Exec exec) {
  arc.validate();
  const auto data = prepare_pair_scan(family, k, params, exec);
  const std::size_t count = family.members.size();
  const std::size_t L = family.L;

  // Coarse angles: an evenly spread subset of the fine arc grid, end points
  // included, so a coarse maximum never exceeds the fine one.
  const std::size_t coarse = std::min(kCoarsePoints, arc.grid_points);
  std::vector<Complex> deltas(coarse);
  const double step = 2.0 * arc.theta_max / static_cast<double>(arc.grid_points - 1);
  for (std::size_t c = 0; c < coarse; ++c) {
    const std::size_t g = c * (arc.grid_points - 1) / (coarse - 1);
    const double theta = g + 1 == arc.grid_points ? arc.theta_max
                                                  : -arc.theta_max + step * static_cast<double>(g);
    deltas[c] = unit_delta(theta);
  }
  // values[i * coarse + c]: member i at coarse angle c without its constant
  // term, which is kept exactly in base[i].
  std::vector<Complex> values(count * coarse);
  std::vector<double> base(count);
  auto fill = [&](std::size_t i) {
    const Moments& mo = data.moments[i];
    std::vector<double> t(L);
    for (std::size_t m = 0; m < L; ++m)
      t[m] = data.qpow[m] * (mo.exact.empty() ? static_cast<double>(mo.approx[m])
                                              : static_cast<double>(mo.exact[m]));
    base[i] = t[0];
    for (std::size_t c = 0; c < coarse; ++c) {
      Complex acc{};
      for (std::size_t m = L; m-- > 1;) acc = acc * deltas[c] + t[m];
      values[i * coarse + c] = acc * deltas[c];
    }
  };
  const auto n = static_cast<std::int64_t>(count);
  if (exec == kernels::Exec::Serial) {
    for (std::int64_t i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  }
  auto coarse_distance = [&](std::size_t a, std::size_t b, double cutoff) {
    const double db = base[a] - base[b];
    double worst = 0.0;
    for (std::size_t c = coarse; c-- > 0;) {
      worst = std::max(worst, std::abs(db + (values[a * coarse + c] - values[b * coarse + c])));
      if (worst > cutoff) break;
    }
    return worst;
  };

  // Sort by the imaginary part at theta_max: the key gap lower-bounds the
  // coarse distance.
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  auto key = [&](std::size_t i) { return values[i * coarse + coarse - 1].imag(); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(key(a), a) < std::make_pair(key(b), b);
  });

  // Phase 1: an incumbent from the coarse-best near neighbours in key order.
  constexpr std::size_t kNeighbours = 4;
  constexpr std::size_t kSeedPairs = 64;
  std::vector<std::tuple<double, std::size_t, std::size_t>> near;
  for (std::size_t s = 0; s + 1 < count; ++s) {
    for (std::size_t t = s + 1; t < std::min(count, s + 1 + kNeighbours); ++t) {
      const std::size_t a = std::min(order[s], order[t]);
      const std::size_t b = std::max(order[s], order[t]);
      near.emplace_back(coarse_distance(a, b, std::numeric_limits<double>::infinity()), a, b);
    }
  }
  const std::size_t seeds = std::min(kSeedPairs, near.size());
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(seeds), near.end());
  std::vector<std::pair<std::size_t, std::size_t>> seed_pairs;
  for (std::size_t s = 0; s < seeds; ++s) seed_pairs.emplace_back(std::get<1>(near[s]), std::get<2>(near[s]));
  const Candidate incumbent = evaluate_all(data, arc, seed_pairs, exec);

  // Phase 2: every pair whose coarse lower bound can still tie or beat the
  // incumbent, with a margin covering rounding in the per-member values.
  const double threshold = incumbent.sup + 1e-13 + 1e-12 * incumbent.sup;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> found(count);
  auto sweep = [&](std::size_t s) {
    for (std::size_t t = s + 1; t < count; ++t) {
      if (key(order[t]) - key(order[s]) > threshold) break;
      const std::size_t a = std::min(order[s], order[t]);
      const std::size_t b = std::max(order[s], order[t]);
      if (coarse_distance(a, b, threshold) <= threshold) found[s].emplace_back(a, b);
    }
  };
  if (exec == kernels::Exec::Serial) {
    for (std::int64_t s = 0; s < n; ++s) sweep(static_cast<std::size_t>(s));
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t s = 0; s < n; ++s) sweep(static_cast<std::size_t>(s));
  }
  std::vector<std::pair<std::size_t, std::size_t>> survivors;
  for (auto& f : found) survivors.insert(survivors.end(), f.begin(), f.end());
  Candidate best = evaluate_all(data, arc, survivors, exec);
  if (better(incumbent, best)) best = incumbent;
  return finish(family, best, seed_pairs.size() + survivors.size());
}

double median_pair_sup(const SeparatedFamily& family, std::size_t k, const ChannelParams& params,
                       const ArcSpec& arc, std::size_t samples, std::uint64_t seed) {
  arc.validate();
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const auto data = prepare_pair_scan(family, k, params, kernels::Exec::Parallel);
  const std::uint64_t count = family.members.size();
  auto sups = kernels::tabulate(
      samples,
      [&](std::size_t s) {
        CounterRng rng(derive_seed(seed, s));
        const std::uint64_t a = rng.below(count);
        std::uint64_t b = rng.below(count - 1);
        if (b >= a) ++b;
        return pair_sup(data, a, b, arc).value;
      },
      kernels::Exec::Parallel);
  std::sort(sups.begin(), sups.end());
  const std::size_t mid = samples / 2;
  return samples % 2 == 1 ? sups[mid] : 0.5 * (sups[mid - 1] + sups[mid]);
}

PaddedPair pad_and_bound(const BitString& x_prime, const BitString& y_prime, std::size_t n,
                         const ChannelParams& params, std::size_t k, double arc_half_width) {
  const std::size_t L = x_prime.size();
  if (y_prime.size() != L || L > n) throw Error(ErrorCode::ShapeMismatch, "need |x'| = |y'| <= n");
  if (k == 0 || k > L) throw Error(ErrorCode::InvalidK, "need 1 <= k <= L");
  if (!(arc_half_width > 0.0 && arc_half_width < kPi))
    throw Error(ErrorCode::InvalidArgument, "arc half-width must lie in (0, pi)");
  PaddedPair out;
  out.x = BitString::zeros(n - L) + x_prime;
  out.y = BitString::zeros(n - L) + y_prime;
  const double pad = static_cast<double>(n - L);
  const OneCenteredPoly inner = unit_kmer_difference(x_prime, y_prime, k, params);
  auto damping = [&](double theta) { return std::pow(std::abs(params.p + params.q * std::polar(1.0, theta)), pad); };
  auto padded_abs = [&](double theta) { return damping(theta) * std::abs(inner.on_circle(theta)); };

  const std::size_t grid = ArcSpec::default_grid(static_cast<int>(n));
  const SupResult arc = maximize_on_interval(padded_abs, -arc_half_width, arc_half_width, grid, false);
  // |f(e^{-i theta})| = |f(e^{i theta})| for real coefficients.
  const SupResult outer = maximize_on_interval(padded_abs, arc_half_width, kPi, grid, false);
  const SupResult unpadded = maximize_on_interval(
      [&](double t) { return std::abs(inner.on_circle(t)); }, -kPi, kPi, grid, true);
  out.arc_sup = arc.value;
  out.outer_sup = outer.value;
  out.circle_sup = std::max(arc.value, outer.value);
  const double padded_theta = arc.value >= outer.value ? arc.theta : outer.theta;
  out.unpadded_circle_sup = std::max(unpadded.value, std::abs(inner.on_circle(padded_theta)));

  const BitString ek = unit_kmer(k, k);
  const double scale = static_cast<double>(subword_count(out.x, ek) + subword_count(out.y, ek));
  double worst = 0.0;
  for (std::size_t g = 0; g < 64; ++g) {
    const double theta = -kPi + 2.0 * kPi * static_cast<double>(g) / 64.0;
    const Complex z = std::polar(1.0, theta);
    const Complex direct = eval_subword_form(out.x, ek, params, z) - eval_subword_form(out.y, ek, params, z);
    const Complex factor = std::pow(params.p + params.q * z, pad);
    const Complex product =
        factor * (eval_subword_form(x_prime, ek, params, z) - eval_subword_form(y_prime, ek, params, z));
    worst = std::max(worst, std::abs(direct - product) / std::max(scale, 1.0));
  }
  out.factorization_error = worst;

  CheckReport& report = out.report;
  report.check = "pad_and_bound";
  report.slack = kAnalyticSlack;
  report.inputs = {{"x_prime", x_prime.to_ascii()}, {"y_prime", y_prime.to_ascii()}, {"n", n},
                   {"k", k}, {"p", params.p}, {"arc_half_width", arc_half_width}};
  report.require(out.circle_sup, out.unpadded_circle_sup, "padded vs unpadded");
  report.require_true(worst <= 1e-8, "factorization");
  report.details["arc_sup"] = out.arc_sup;
  report.details["outer_sup"] = out.outer_sup;
  report.details["factorization_error"] = worst;
  return out;
}

double max_kmer_circle_sup(const BitString& x, const BitString& y, std::size_t k,
                           const ChannelParams& params) {
  if (x.size() != y.size()) throw Error(ErrorCode::ShapeMismatch, "strings differ in length");
  if (k == 0 || k > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= k <= |x|");
  std::map<std::string, BitString> kmers;
  for (const BitString* s : {&x, &y})
    for (std::size_t j = 0; j + k <= s->size(); ++j) {
      BitString w = s->slice(j, k);
      kmers.emplace(w.to_ascii(), w);
    }
  const BinomialWeights weights(x.size(), params);
  double best = 0.0;
  for (const auto& [name, w] : kmers) {
    const auto diff = PolyCoeffs::from_real(density_row(x, w, weights)) -
                      PolyCoeffs::from_real(density_row(y, w, weights));
    if (diff.is_zero()) continue;
    best = std::max(best, sup_on_circle(diff, 1.0, 0, kernels::Exec::Serial).value);
  }
  return best;
}

CheckReport l1_pathway_check(const BitString& x, const BitString& y, std::size_t k,
                             const ChannelParams& params) {
  const std::size_t n = x.size();
  const double l1 = map_l1_distance(density_map(x, k, params), density_map(y, k, params));
  const double sup = max_kmer_circle_sup(x, y, k, params);
  CheckReport report;
  report.check = "l1_pathway";
  report.slack = kAnalyticSlack;
  report.inputs = {{"x", x.to_ascii()}, {"y", y.to_ascii()}, {"k", k}, {"p", params.p}};
  const double bound = 2.0 * static_cast<double>(n) * static_cast<double>(n - k + 1) * sup;
  report.require(l1, bound, "l1 vs circle sup");
  report.details["l1_distance"] = l1;
  report.details["max_circle_sup"] = sup;
  return report;
}

json to_json(const ClosestPair& pair, std::size_t L, std::size_t k, double p) {
  return json{{"L", L},
              {"k", k},
              {"p", p},
              {"x", pair.x.to_ascii()},
              {"y", pair.y.to_ascii()},
              {"first", pair.first},
              {"second", pair.second},
              {"arc_sup", pair.sup},
              {"theta", pair.theta},
              {"pairs_total", pair.pairs_total},
              {"full_evaluations", pair.full_evaluations}};
}

}  // namespace tracelab
