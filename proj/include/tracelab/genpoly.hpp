#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "tracelab/bitstring.hpp"
#include "tracelab/channel.hpp"
#include "tracelab/kernels.hpp"
#include "tracelab/report.hpp"

namespace tracelab {

using Complex = std::complex<double>;

/// Dense polynomial sum_l c_l z^l. Trailing zeros are dropped on
/// construction; the zero polynomial has no coefficients and degree -1.
class PolyCoeffs {
 public:
  PolyCoeffs() = default;
  explicit PolyCoeffs(std::vector<Complex> coeffs);
  static PolyCoeffs from_real(std::span<const double> coeffs);
  static PolyCoeffs monomial(std::size_t degree, Complex scale = 1.0);

  [[nodiscard]] std::span<const Complex> coeffs() const noexcept { return c_; }
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
  [[nodiscard]] Complex operator[](std::size_t l) const noexcept {
    return l < c_.size() ? c_[l] : Complex{};
  }
  /// Horner evaluation.
  [[nodiscard]] Complex operator()(Complex z) const noexcept;
  [[nodiscard]] double max_abs_coeff() const noexcept;

  friend PolyCoeffs operator+(const PolyCoeffs& a, const PolyCoeffs& b);
  friend PolyCoeffs operator-(const PolyCoeffs& a, const PolyCoeffs& b);
  friend PolyCoeffs operator*(const PolyCoeffs& a, const PolyCoeffs& b);

 private:
  std::vector<Complex> c_;
};

/// The same polynomial written around z = 1: sum_m t_m (z-1)^m. On the unit
/// circle z - 1 is formed without cancellation, so values of polynomials
/// that nearly vanish near z = 1 keep their relative accuracy. Far from 1
/// the Taylor form loses accuracy; when monomial coefficients are supplied,
/// evaluation switches to them wherever their error bound sum |c_l| |z|^l
/// is the smaller one.
class OneCenteredPoly {
 public:
  OneCenteredPoly() = default;
  explicit OneCenteredPoly(std::vector<double> taylor, std::vector<double> monomial = {});
  /// Taylor shift of a monomial-basis polynomial with real coefficients.
  static OneCenteredPoly from_monomial(const PolyCoeffs& f);

  [[nodiscard]] std::span<const double> taylor() const noexcept { return t_; }
  [[nodiscard]] std::span<const double> monomial() const noexcept { return c_; }
  [[nodiscard]] Complex operator()(Complex z) const noexcept;
  /// Value at e^{i theta}.
  [[nodiscard]] Complex on_circle(double theta) const noexcept;
  /// |z - 1| beyond which the monomial form is used on the unit circle;
  /// infinite without monomial coefficients.
  [[nodiscard]] double crossover() const noexcept { return crossover_; }

 private:
  std::vector<double> t_;
  std::vector<double> c_;
  double crossover_ = std::numeric_limits<double>::infinity();
};

/// Sub-arc {e^{i theta} : |theta| <= theta_max} sampled with grid_points.
struct ArcSpec {
  double theta_max = 0.0;
  std::size_t grid_points = 64;

  /// Grid of 4096 * (degree/64 + 1) points.
  static ArcSpec with_default_grid(double theta_max, int degree);
  static std::size_t default_grid(int degree);
  void validate() const;
};

struct EllipseParams {
  double a = 0.125;
  double rho = 2.0;
  void validate() const;
};

/// A supremum found by grid search plus golden-section refinement. It is a
/// lower bound on the true supremum, attained at `theta`.
struct SupResult {
  double value = 0.0;
  double theta = 0.0;
};

/// Grid-and-refine maximiser of a nonnegative function of theta on
/// [lo, hi]. The grid includes both end points unless `periodic`, in which
/// case hi is identified with lo.
template <class AbsFn>
SupResult maximize_on_interval(AbsFn&& abs_fn, double lo, double hi, std::size_t grid,
                               bool periodic, kernels::Exec exec = kernels::Exec::Parallel);

/// P_{w,x}(z) = sum_l K_{w,x}[l] z^l. Throws InvalidK when |w| > |x|.
PolyCoeffs generating_polynomial(const BitString& x, const BitString& w,
                                 const ChannelParams& params);

/// sum_j 1[x[j..j+k-1] = w] (p + q z)^j by Horner in u = p + q z.
Complex eval_subword_form(const BitString& x, const BitString& w, const ChannelParams& params,
                          Complex z);

SupResult sup_on_arc(const PolyCoeffs& f, const ArcSpec& arc,
                     kernels::Exec exec = kernels::Exec::Parallel);
SupResult sup_on_arc(const OneCenteredPoly& f, const ArcSpec& arc,
                     kernels::Exec exec = kernels::Exec::Parallel);
/// grid_points == 0 selects the default grid for deg f.
SupResult sup_on_circle(const PolyCoeffs& f, double radius, std::size_t grid_points = 0,
                        kernels::Exec exec = kernels::Exec::Parallel);

/// f(z) = g(c + s z) in the monomial basis.
PolyCoeffs affine_substitute(const PolyCoeffs& g, Complex c, Complex s);
/// Exact change of basis from monomials to Chebyshev polynomials T_d.
std::vector<Complex> monomial_to_chebyshev(const PolyCoeffs& f);
/// Chebyshev coordinates of f(z) = g(1 - 4a + 4a z), padded with zeros to
/// max_degree + 1 entries. Throws InvalidA unless a in (0, 1/8] and
/// InvalidArgument when max_degree < deg g.
std::vector<Complex> chebyshev_coeffs(const PolyCoeffs& g, double a, std::size_t max_degree);
/// Clenshaw evaluation of sum_d a_d T_d(z).
Complex chebyshev_eval(std::span<const Complex> a, Complex z);

/// Points of the boundary of the ellipse (1-4a) + 4a (u + 1/u)/2, |u| = rho.
std::vector<Complex> ellipse_boundary(const EllipseParams& params, std::size_t count);
/// Points (u + 1/u)/2 with u = rho e^{i theta}: the Bernstein ellipse.
std::vector<Complex> bernstein_boundary(double rho, std::size_t count);

inline constexpr double kAnalyticSlack = 1e-6;

/// |a_0| <= M, |a_d| <= 2 M rho^{-d} with M the sup of |f| on the Bernstein
/// ellipse boundary, and |a_d| <= 2 sup_{[-1,1]} |f|.
CheckReport cheb_coeff_bounds_check(std::span<const Complex> coeffs, const PolyCoeffs& f,
                                    double rho);
/// max |z| on the boundary against 1 + 2a(rho-1)^2/rho, and containment of
/// the disk of that radius around 1 (via the focal-distance form).
CheckReport ellipse_geometry_check(const EllipseParams& params);
/// M(r)^{log(r2/r1)} <= M(r1)^{log(r2/r)} M(r2)^{log(r/r1)}.
CheckReport hadamard_three_circles_check(const PolyCoeffs& f, double r1, double r, double r2);
/// sup over the boundary of the (a, 2) ellipse <= exp(5an/2) sqrt(sup over
/// [1-8a, 1]). `n` is the coefficient count in the statement (defaults to
/// deg f + 1). Throws CoefficientBound if some |c_j| > 1.
CheckReport ellipse_to_interval_check(const PolyCoeffs& f, double a,
                                      std::optional<std::size_t> n = std::nullopt);
/// max_l |c_l| <= sup_{|z|=1} |f|.
CheckReport contour_coefficient_bound_check(const PolyCoeffs& f);
/// Modulus identities for z0 = e^{i theta} used when moving between the
/// trace variable and the channel variable p + q z.
CheckReport circle_arc_arithmetic_checks(const ChannelParams& params, double theta,
                                         std::size_t n);

json to_json(const PolyCoeffs& f);
PolyCoeffs poly_from_json(const json& j);

// ---------------------------------------------------------------------------

template <class AbsFn>
SupResult maximize_on_interval(AbsFn&& abs_fn, double lo, double hi, std::size_t grid,
                               bool periodic, kernels::Exec exec) {
  if (grid < 2 || !(hi > lo)) return {abs_fn(lo), lo};
  const double step = periodic ? (hi - lo) / static_cast<double>(grid)
                               : (hi - lo) / static_cast<double>(grid - 1);
  auto theta_at = [&](std::size_t g) {
    return (!periodic && g + 1 == grid) ? hi : lo + step * static_cast<double>(g);
  };
  const auto values = kernels::tabulate(grid, [&](std::size_t g) { return abs_fn(theta_at(g)); }, exec);
  const std::size_t best = kernels::argmax(values);
  SupResult result{values[best], theta_at(best)};

  // Golden-section search on the bracket around the best grid point.
  double left = result.theta - step;
  double right = result.theta + step;
  if (!periodic) {
    left = std::max(left, lo);
    right = std::min(right, hi);
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double c = right - kInvPhi * (right - left);
  double d = left + kInvPhi * (right - left);
  double fc = abs_fn(c);
  double fd = abs_fn(d);
  for (int it = 0; it < 200 && (right - left) > 1e-15 * std::max(1.0, std::abs(result.theta)); ++it) {
    if (fc >= fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - kInvPhi * (right - left);
      fc = abs_fn(c);
    } else {
      left = c;
      c = d;
      fc = fd;
      d = left + kInvPhi * (right - left);
      fd = abs_fn(d);
    }
  }
  if (fc > result.value) result = {fc, c};
  if (fd > result.value) result = {fd, d};
  return result;
}

}  // namespace tracelab
