#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/genpoly.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/report.hpp"

namespace tracelab {

/// Binary strings in which any two 1s are separated by at least r zeros.
struct SeparatedFamily {
  std::size_t L = 0;           ///< member length
  std::size_t r = 0;           ///< minimum zero run between two 1s
  std::size_t cube_root = 0;   ///< L^{1/3} for the canonical family, else 0
  std::vector<BitString> members;
};

/// Integer c with c^3 == L, if any.
std::optional<std::size_t> exact_cube_root(std::size_t L);

/// s0 b_1 s0 b_2 ... s0 b_{c^2-1} s0 0 with s0 = 0^{c-1}, c = L^{1/3},
/// enumerated in lexicographic order of (b_1, ...). Throws InvalidL.
SeparatedFamily build_family(std::size_t L);

/// Every n-bit string with 1s separated by >= r zeros, lexicographic order.
SeparatedFamily build_general_family(std::size_t n, std::size_t r);

/// |build_general_family(n, r)| from f(m) = f(m-1) + f(m-1-r) for m >= 1, f(m <= 0) = 1.
std::uint64_t general_family_size(std::size_t n, std::size_t r);

/// True when every pair of 1s in x has at least r zeros between them.
bool is_separated(const BitString& x, std::size_t r);

/// Checks, for every member: (1) every window has at most one 1, so every
/// k-mer with two or more 1s has the zero polynomial; (2) the coefficient
/// identity P_{e_j} = (p + qz) P_{e_{j+1}} for 1 <= j < k; (3) the bound
/// |P_{0^k,x} - P_{0^k,y}| <= k |P_{e_k,x} - P_{e_k,y}| at 64 seeded points
/// of the closed unit disk. Item (3) is checked through the x-independent
/// sum of P_w over {0^k, e_1..e_k} for every member and directly on
/// neighbouring pairs. Throws InvalidK when k > r + 1 or k == 0.
CheckReport family_properties_check(const SeparatedFamily& family, std::size_t k,
                                    const ChannelParams& params, std::uint64_t seed = 1);

/// Default ellipse parameter a = L^{-2/3}, clamped to 1/8. `clamped` is set
/// when the clamp was applied.
struct EllipseChoice {
  double a = 0.0;
  bool clamped = false;
};
EllipseChoice default_feature_param(std::size_t L);

/// Half-width alpha L^{-2/3} of the sub-arc, alpha = ln 2 / 150.
double default_arc_half_width(std::size_t L);

/// g_x(z) = sum_j 1[x[j..j+k-1] = e_k] z^j.
PolyCoeffs indicator_polynomial(const BitString& x, std::size_t k);

struct FeatureVector {
  double a = 0.0;
  std::vector<double> values;  ///< first d Chebyshev coefficients of f_x
  std::vector<double> tail;    ///< the remaining coefficients
};

/// Chebyshev coordinates of f_x(z) = g_x(1 - 4a + 4a z).
FeatureVector feature_vector(const BitString& x, std::size_t k, double a, std::size_t d);

struct PigeonholeResult {
  std::optional<std::size_t> first;   ///< earlier member of the collision
  std::optional<std::size_t> second;  ///< later member of the collision
  std::vector<std::int64_t> bucket;   ///< shared sub-cube coordinates
  double max_coordinate_gap = 0.0;    ///< max_j |a_j(x) - a_j(y)| for the pair
  double log2_cube_count = 0.0;       ///< log2 of the number of sub-cubes
  double log2_family_size = 0.0;
  bool guaranteed = false;            ///< cube count < family size
  std::size_t distinct_buckets = 0;
};

/// Buckets phi(x) by floor((value + 2L) / side) per coordinate and returns
/// the first collision in enumeration order.
PigeonholeResult pigeonhole_search(const SeparatedFamily& family, std::size_t k, double a,
                                   std::size_t d, double cube_side);

/// Difference P_{e_k,x} - P_{e_k,y} in the one-centred basis, built from
/// exact binomial moments of the indicator coefficients, with monomial
/// coefficients attached for use away from z = 1.
OneCenteredPoly unit_kmer_difference(const BitString& x, const BitString& y, std::size_t k,
                                     const ChannelParams& params);

struct ClosestPair {
  std::size_t first = 0;
  std::size_t second = 0;
  BitString x, y;
  double sup = 0.0;
  double theta = 0.0;
  std::uint64_t pairs_total = 0;
  std::uint64_t full_evaluations = 0;
};

inline constexpr std::size_t kPairScanGuard = std::size_t{1} << 15;

/// The pair of distinct members minimising the arc supremum of
/// P_{e_k,x} - P_{e_k,y}; ties go to the lexicographically first index
/// pair. Exact over all pairs: a coarse sub-grid gives a lower bound used to
/// discard pairs that cannot beat the incumbent. Throws SizeGuard above
/// kPairScanGuard members.
ClosestPair brute_force_closest_pair(const SeparatedFamily& family, std::size_t k,
                                     const ChannelParams& params, const ArcSpec& arc,
                                     kernels::Exec exec = kernels::Exec::Parallel);

/// Serial reference: evaluates every pair in full.
ClosestPair closest_pair_reference(const SeparatedFamily& family, std::size_t k,
                                   const ChannelParams& params, const ArcSpec& arc);

/// Median arc supremum over `samples` seeded random distinct pairs.
double median_pair_sup(const SeparatedFamily& family, std::size_t k,
                       const ChannelParams& params, const ArcSpec& arc, std::size_t samples,
                       std::uint64_t seed);

struct PaddedPair {
  BitString x, y;
  double arc_sup = 0.0;           ///< |theta| <= arc half-width, padded
  double outer_sup = 0.0;         ///< |theta| > arc half-width, padded
  double circle_sup = 0.0;        ///< max of the two
  double unpadded_circle_sup = 0.0;
  double factorization_error = 0.0;  ///< relative, over 64 angles
  CheckReport report;
};

/// x = 0^{n-L} x', y = 0^{n-L} y'. Verifies the factorisation
/// P_x - P_y = (p + q e^{i theta})^{n-L} (P_x' - P_y') for w = e_k at 64
/// angles and measures the padded circle supremum in both regimes.
PaddedPair pad_and_bound(const BitString& x_prime, const BitString& y_prime, std::size_t n,
                         const ChannelParams& params, std::size_t k, double arc_half_width);

/// max over every k-mer w occurring in x or y of sup_{|z|=1} |P_{w,x} - P_{w,y}|.
double max_kmer_circle_sup(const BitString& x, const BitString& y, std::size_t k,
                           const ChannelParams& params);

/// l1(K_x, K_y) <= 2 n (n-k+1) max_w sup_{|z|=1} |P_{w,x} - P_{w,y}|.
CheckReport l1_pathway_check(const BitString& x, const BitString& y, std::size_t k,
                             const ChannelParams& params);

json to_json(const ClosestPair& pair, std::size_t L, std::size_t k, double p);

}  // namespace tracelab
