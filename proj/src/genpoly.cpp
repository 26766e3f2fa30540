#include "tracelab/genpoly.hpp"

#include <numbers>

#include "tracelab/error.hpp"
#include "tracelab/kmer_maps.hpp"

namespace tracelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBoundaryGrid = 4096;

void trim(std::vector<Complex>& c) {
  while (!c.empty() && c.back() == Complex{}) c.pop_back();
}

// Sup of |f| over a closed parametrised curve theta -> point(theta).
template <class Point>
double curve_sup(const PolyCoeffs& f, Point&& point, std::size_t grid = kBoundaryGrid) {
  return maximize_on_interval([&](double t) { return std::abs(f(point(t))); }, -kPi, kPi, grid,
                              true, kernels::Exec::Serial)
      .value;
}

// Sup of |f| over the real segment [lo, hi], parametrised by a cosine so the
// grid clusters at the end points.
double segment_sup(const PolyCoeffs& f, double lo, double hi, std::size_t grid = kBoundaryGrid) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  return maximize_on_interval([&](double t) { return std::abs(f(Complex(mid + half * std::cos(t), 0.0))); },
                              0.0, kPi, grid, false, kernels::Exec::Serial)
      .value;
}

}  // namespace

PolyCoeffs::PolyCoeffs(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  for (const auto& v : c_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
  trim(c_);
}

PolyCoeffs PolyCoeffs::from_real(std::span<const double> coeffs) {
  return PolyCoeffs(std::vector<Complex>(coeffs.begin(), coeffs.end()));
}

PolyCoeffs PolyCoeffs::monomial(std::size_t degree, Complex scale) {
  std::vector<Complex> c(degree + 1);
  c[degree] = scale;
  return PolyCoeffs(std::move(c));
}

Complex PolyCoeffs::operator()(Complex z) const noexcept {
  Complex acc{};
  for (std::size_t l = c_.size(); l-- > 0;) acc = acc * z + c_[l];
  return acc;
}

double PolyCoeffs::max_abs_coeff() const noexcept {
  double best = 0.0;
  for (const auto& v : c_) best = std::max(best, std::abs(v));
  return best;
}

PolyCoeffs operator+(const PolyCoeffs& a, const PolyCoeffs& b) {
  std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t l = 0; l < c.size(); ++l) c[l] = a[l] + b[l];
  return PolyCoeffs(std::move(c));
}

PolyCoeffs operator-(const PolyCoeffs& a, const PolyCoeffs& b) {
  std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t l = 0; l < c.size(); ++l) c[l] = a[l] - b[l];
  return PolyCoeffs(std::move(c));
}

PolyCoeffs operator*(const PolyCoeffs& a, const PolyCoeffs& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return PolyCoeffs(std::move(c));
}

namespace {

// Error bound sum |t_m| r^m of the Taylor form at distance r from 1.
double taylor_bound(std::span<const double> t, double r) {
  double acc = 0.0;
  for (std::size_t m = t.size(); m-- > 0;) acc = acc * r + std::abs(t[m]);
  return acc;
}

Complex horner_real(std::span<const double> c, Complex z) {
  Complex acc{};
  for (std::size_t l = c.size(); l-- > 0;) acc = acc * z + c[l];
  return acc;
}

}  // namespace

OneCenteredPoly::OneCenteredPoly(std::vector<double> taylor, std::vector<double> monomial)
    : t_(std::move(taylor)), c_(std::move(monomial)) {
  if (c_.empty()) return;
  double mono = 0.0;
  for (double v : c_) mono += std::abs(v);
  // taylor_bound is increasing in r; bisect for the crossing on [0, 2].
  if (taylor_bound(t_, 2.0) <= mono) return;
  double lo = 0.0, hi = 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (taylor_bound(t_, mid) <= mono ? lo : hi) = mid;
  }
  crossover_ = lo;
}

OneCenteredPoly OneCenteredPoly::from_monomial(const PolyCoeffs& f) {
  std::vector<double> c(f.coeffs().size());
  for (std::size_t l = 0; l < c.size(); ++l) c[l] = f[l].real();
  std::vector<double> t = c;
  // Repeated synthetic division by (z - 1).
  for (std::size_t m = 0; m < t.size(); ++m)
    for (std::size_t l = t.size() - 1; l > m; --l) t[l - 1] += t[l];
  return OneCenteredPoly(std::move(t), std::move(c));
}

Complex OneCenteredPoly::operator()(Complex z) const noexcept {
  const Complex delta = z - 1.0;
  if (!c_.empty() && taylor_bound(t_, std::abs(delta)) > taylor_bound(c_, std::abs(z)))
    return horner_real(c_, z);
  return horner_real(t_, delta);
}

Complex OneCenteredPoly::on_circle(double theta) const noexcept {
  const double s = std::sin(0.5 * theta);
  if (2.0 * std::abs(s) > crossover_) return horner_real(c_, std::polar(1.0, theta));
  return horner_real(t_, Complex(-2.0 * s * s, std::sin(theta)));
}

std::size_t ArcSpec::default_grid(int degree) {
  return 4096 * (static_cast<std::size_t>(std::max(degree, 0)) / 64 + 1);
}

ArcSpec ArcSpec::with_default_grid(double theta_max, int degree) {
  return ArcSpec{theta_max, default_grid(degree)};
}

void ArcSpec::validate() const {
  if (!(theta_max > 0.0 && theta_max <= kPi))
    throw Error(ErrorCode::InvalidArgument, "arc half-width must lie in (0, pi]");
  if (grid_points < 64) throw Error(ErrorCode::InvalidArgument, "arc grid needs >= 64 points");
}

void EllipseParams::validate() const {
  if (!(a > 0.0 && a <= 0.125)) throw Error(ErrorCode::InvalidA, "a must lie in (0, 1/8]");
  if (!(rho >= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must be >= 1");
}

PolyCoeffs generating_polynomial(const BitString& x, const BitString& w,
                                 const ChannelParams& params) {
  if (w.empty() || w.size() > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  const auto row = density_row(x, w, BinomialWeights(x.size(), params));
  return PolyCoeffs::from_real(row);
}

Complex eval_subword_form(const BitString& x, const BitString& w, const ChannelParams& params,
                          Complex z) {
  if (w.empty() || w.size() > x.size()) throw Error(ErrorCode::InvalidK, "need 1 <= |w| <= |x|");
  const Complex u = params.p + params.q * z;
  Complex acc{};
  for (std::size_t j = x.size() - w.size() + 1; j-- > 0;)
    acc = acc * u + (x.window_equals(j, w) ? 1.0 : 0.0);
  return acc;
}

SupResult sup_on_arc(const PolyCoeffs& f, const ArcSpec& arc, kernels::Exec exec) {
  arc.validate();
  return maximize_on_interval([&](double t) { return std::abs(f(std::polar(1.0, t))); },
                              -arc.theta_max, arc.theta_max, arc.grid_points, false, exec);
}

SupResult sup_on_arc(const OneCenteredPoly& f, const ArcSpec& arc, kernels::Exec exec) {
  arc.validate();
  return maximize_on_interval([&](double t) { return std::abs(f.on_circle(t)); }, -arc.theta_max,
                              arc.theta_max, arc.grid_points, false, exec);
}

SupResult sup_on_circle(const PolyCoeffs& f, double radius, std::size_t grid_points,
                        kernels::Exec exec) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (grid_points == 0) grid_points = ArcSpec::default_grid(f.degree());
  if (grid_points < 64) throw Error(ErrorCode::InvalidArgument, "circle grid needs >= 64 points");
  return maximize_on_interval([&](double t) { return std::abs(f(std::polar(radius, t))); }, -kPi,
                              kPi, grid_points, true, exec);
}

PolyCoeffs affine_substitute(const PolyCoeffs& g, Complex c, Complex s) {
  const auto gc = g.coeffs();
  std::vector<Complex> acc;
  for (std::size_t l = gc.size(); l-- > 0;) {
    // acc <- acc * (c + s z) + g_l
    std::vector<Complex> next(acc.size() + 1);
    for (std::size_t m = 0; m < acc.size(); ++m) {
      next[m] += acc[m] * c;
      next[m + 1] += acc[m] * s;
    }
    next[0] += gc[l];
    acc = std::move(next);
  }
  return PolyCoeffs(std::move(acc));
}

std::vector<Complex> monomial_to_chebyshev(const PolyCoeffs& f) {
  const auto fc = f.coeffs();
  std::vector<Complex> b;
  // Horner in the Chebyshev basis: z T_0 = T_1, z T_d = (T_{d+1} + T_{d-1}) / 2.
  for (std::size_t l = fc.size(); l-- > 0;) {
    std::vector<Complex> next(b.size() + 1);
    for (std::size_t d = 0; d < b.size(); ++d) {
      if (d == 0) {
        next[1] += b[0];
      } else {
        next[d + 1] += 0.5 * b[d];
        next[d - 1] += 0.5 * b[d];
      }
    }
    next[0] += fc[l];
    b = std::move(next);
  }
  return b;
}

std::vector<Complex> chebyshev_coeffs(const PolyCoeffs& g, double a, std::size_t max_degree) {
  if (!(a > 0.0 && a <= 0.125)) throw Error(ErrorCode::InvalidA, "a must lie in (0, 1/8]");
  if (g.degree() > static_cast<int>(max_degree))
    throw Error(ErrorCode::InvalidArgument, "max_degree below deg g");
  auto coeffs = monomial_to_chebyshev(affine_substitute(g, 1.0 - 4.0 * a, 4.0 * a));
  coeffs.resize(max_degree + 1);
  return coeffs;
}

Complex chebyshev_eval(std::span<const Complex> a, Complex z) {
  if (a.empty()) return {};
  Complex b1{}, b2{};
  for (std::size_t d = a.size(); d-- > 1;) {
    const Complex b0 = a[d] + 2.0 * z * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return a[0] + z * b1 - b2;
}

std::vector<Complex> bernstein_boundary(double rho, std::size_t count) {
  std::vector<Complex> pts(count);
  for (std::size_t j = 0; j < count; ++j) {
    const Complex u = std::polar(rho, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count));
    pts[j] = 0.5 * (u + 1.0 / u);
  }
  return pts;
}

std::vector<Complex> ellipse_boundary(const EllipseParams& params, std::size_t count) {
  params.validate();
  auto pts = bernstein_boundary(params.rho, count);
  for (auto& z : pts) z = (1.0 - 4.0 * params.a) + 4.0 * params.a * z;
  return pts;
}

CheckReport cheb_coeff_bounds_check(std::span<const Complex> coeffs, const PolyCoeffs& f,
                                    double rho) {
  if (!(rho >= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must be >= 1");
  CheckReport report;
  report.check = "cheb_coeff_bounds";
  report.slack = kAnalyticSlack;
  report.inputs = {{"rho", rho}, {"degree", f.degree()}, {"coefficients", coeffs.size()}};
  const double M = curve_sup(f, [&](double t) {
    const Complex u = std::polar(rho, t);
    return 0.5 * (u + 1.0 / u);
  });
  const double interval = segment_sup(f, -1.0, 1.0);
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    const double ad = std::abs(coeffs[d]);
    const double ellipse_bound = d == 0 ? M : 2.0 * M * std::pow(rho, -static_cast<double>(d));
    report.require(ad, ellipse_bound, "ellipse d=" + std::to_string(d));
    report.require(ad, 2.0 * interval, "interval d=" + std::to_string(d));
  }
  report.details["ellipse_sup"] = M;
  report.details["interval_sup"] = interval;
  if (!report.pass) report.details["error"] = std::string(to_string(ErrorCode::BoundViolation));
  return report;
}

CheckReport ellipse_geometry_check(const EllipseParams& params) {
  params.validate();
  const double a = params.a;
  const double rho = params.rho;
  const double r0 = 2.0 * a * (rho - 1.0) * (rho - 1.0) / rho;
  CheckReport report;
  report.check = "ellipse_geometry";
  report.slack = kAnalyticSlack;
  report.inputs = {{"a", a}, {"rho", rho}};
  const double max_modulus =
      maximize_on_interval(
          [&](double t) {
            const Complex u = std::polar(rho, t);
            return std::abs((1.0 - 4.0 * a) + 2.0 * a * (u + 1.0 / u));
          },
          -kPi, kPi, kBoundaryGrid, true, kernels::Exec::Serial)
          .value;
  report.require(max_modulus, 1.0 + r0 + 1e-9, "max modulus");
  // Disk of radius r0 about 1 against the focal-sum description of the ellipse.
  const double focal_sum = 8.0 * a + 4.0 * a * (rho - 1.0) * (rho - 1.0) / rho;
  double worst = 0.0;
  for (std::size_t j = 0; j < kBoundaryGrid; ++j) {
    for (double frac : {0.5, 1.0}) {
      const Complex z = 1.0 + std::polar(frac * r0, 2.0 * kPi * static_cast<double>(j) / kBoundaryGrid);
      worst = std::max(worst, std::abs(z - (1.0 - 8.0 * a)) + std::abs(z - 1.0));
    }
  }
  report.require(worst, focal_sum + 1e-12, "disk containment");
  report.details["max_modulus"] = max_modulus;
  report.details["disk_radius"] = r0;
  report.details["max_focal_sum"] = worst;
  report.details["ellipse_focal_sum"] = focal_sum;
  return report;
}

CheckReport hadamard_three_circles_check(const PolyCoeffs& f, double r1, double r, double r2) {
  if (!(r1 > 0.0 && r1 <= r && r <= r2))
    throw Error(ErrorCode::InvalidArgument, "need 0 < r1 <= r <= r2");
  CheckReport report;
  report.check = "hadamard_three_circles";
  report.slack = kAnalyticSlack;
  report.inputs = {{"r1", r1}, {"r", r}, {"r2", r2}, {"degree", f.degree()}};
  const std::size_t grid = std::max<std::size_t>(kBoundaryGrid, ArcSpec::default_grid(f.degree()));
  const double m1 = sup_on_circle(f, r1, grid, kernels::Exec::Serial).value;
  const double m = sup_on_circle(f, r, grid, kernels::Exec::Serial).value;
  const double m2 = sup_on_circle(f, r2, grid, kernels::Exec::Serial).value;
  const double lhs = std::pow(m, std::log(r2 / r1));
  const double rhs = std::pow(m1, std::log(r2 / r)) * std::pow(m2, std::log(r / r1));
  report.require(lhs, rhs, "three circles");
  report.details["M_r1"] = m1;
  report.details["M_r"] = m;
  report.details["M_r2"] = m2;
  return report;
}

CheckReport ellipse_to_interval_check(const PolyCoeffs& f, double a, std::optional<std::size_t> n) {
  if (!(a > 0.0 && a <= 0.125)) throw Error(ErrorCode::InvalidA, "a must lie in (0, 1/8]");
  for (const auto& c : f.coeffs())
    if (std::abs(c) > 1.0 + 1e-12)
      throw Error(ErrorCode::CoefficientBound, "coefficients must satisfy |c_j| <= 1");
  const std::size_t count = n.value_or(static_cast<std::size_t>(std::max(f.degree() + 1, 1)));
  CheckReport report;
  report.check = "ellipse_to_interval";
  report.slack = kAnalyticSlack;
  report.inputs = {{"a", a}, {"n", count}, {"degree", f.degree()}};
  const double ellipse = curve_sup(f, [&](double t) {
    const Complex u = std::polar(2.0, t);
    return (1.0 - 4.0 * a) + 2.0 * a * (u + 1.0 / u);
  });
  const double interval = segment_sup(f, 1.0 - 8.0 * a, 1.0);
  const double nd = static_cast<double>(count);
  const double rhs = std::exp(2.5 * a * nd) * std::sqrt(interval);
  report.require(ellipse, rhs, "ellipse vs interval");
  // The statement rests on n (1 + 4.5a)^n <= exp(5an); record whether it holds.
  const bool premise = std::log(nd) + nd * std::log1p(4.5 * a) <= 5.0 * a * nd;
  report.details["ellipse_sup"] = ellipse;
  report.details["interval_sup"] = interval;
  report.details["growth_premise"] = premise;
  return report;
}

CheckReport contour_coefficient_bound_check(const PolyCoeffs& f) {
  CheckReport report;
  report.check = "contour_coefficient_bound";
  report.slack = kAnalyticSlack;
  report.inputs = {{"degree", f.degree()}};
  const double circle = sup_on_circle(f, 1.0, 0, kernels::Exec::Serial).value;
  report.require(f.max_abs_coeff(), circle, "max coefficient");
  return report;
}

CheckReport circle_arc_arithmetic_checks(const ChannelParams& params, double theta, std::size_t n) {
  if (!(std::abs(theta) <= kPi)) throw Error(ErrorCode::InvalidArgument, "need |theta| <= pi");
  const double p = params.p;
  const double q = params.q;
  CheckReport report;
  report.check = "circle_arc_arithmetic";
  report.slack = kAnalyticSlack;
  report.inputs = {{"p", p}, {"theta", theta}, {"n", n}};
  const Complex z0 = std::polar(1.0, theta);
  const double s = std::sin(0.5 * theta);
  const double ratio = std::abs((z0 - p) / q);
  report.require(1.0, ratio * (1.0 + 1e-15), "ratio lower");
  report.require(ratio, std::sqrt(1.0 + p * theta * theta / (q * q)), "ratio upper");
  report.require_true(std::abs(ratio * ratio - (1.0 + 4.0 * p * s * s / (q * q))) <= 1e-12,
                      "ratio identity");
  const double damp = std::norm(p + q * z0);
  report.require_true(std::abs(damp - (1.0 - 2.0 * p * q * (1.0 - std::cos(theta)))) <= 1e-12,
                      "damping identity");
  report.require(std::sqrt(damp), 1.0, "damping modulus");
  if (n >= 1 && std::abs(theta) <= std::pow(static_cast<double>(n), -0.4)) {
    const double nd = static_cast<double>(n);
    report.require(nd * std::log(ratio), p / (2.0 * q * q) * std::pow(nd, 0.2), "n-power (log)");
    report.details["n_power_checked"] = true;
  } else {
    report.details["n_power_checked"] = false;
  }
  report.details["ratio"] = ratio;
  report.details["damping_sq"] = damp;
  return report;
}

json to_json(const PolyCoeffs& f) {
  json arr = json::array();
  for (const auto& c : f.coeffs()) arr.push_back({c.real(), c.imag()});
  return arr;
}

PolyCoeffs poly_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "polynomial must be a JSON array");
  std::vector<Complex> c;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw Error(ErrorCode::ParseError, "coefficient must be a [re, im] pair");
    c.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return PolyCoeffs(std::move(c));
}

}  // namespace tracelab
