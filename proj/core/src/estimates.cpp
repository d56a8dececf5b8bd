#include "annular/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "annular/radial.hpp"

namespace annular::estimates {
namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void require_dim(std::span<const double> x, int n, const char* what) {
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument(std::string(what) + ": point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
  }
}

double radius_in(std::span<const double> x, double a, double b, const char* what) {
  const double r = norm(x);
  const double tol = 1e-12 * b;
  if (r < a - tol || r > b + tol) {
    throw std::domain_error(std::string(what) + ": |x| = " + std::to_string(r) + " outside [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
  }
  return std::clamp(r, a, b);
}

void check_annulus(int n, double a, double b, const char* what) {
  if (n < 2 || !(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw std::invalid_argument(std::string(what) + ": need n >= 2 and 0 < a < b < inf");
  }
}

using Vec3 = std::array<double, 3>;
double dot3(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
Vec3 cross3(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}
Vec3 unit3(Vec3 v) {
  const double s = std::sqrt(dot3(v, v));
  if (!(s > 0.0)) throw std::invalid_argument("SphericalTriangle: degenerate vertices");
  for (double& c : v) c /= s;
  return v;
}

double eval(const ThinAnnulus& c, std::span<const double> x) {
  check_annulus(c.n, c.a, c.b, "ThinAnnulus");
  if (c.b / c.a > 2.0 + 1e-12) throw std::invalid_argument("ThinAnnulus: needs b/a <= 2");
  require_dim(x, c.n, "ThinAnnulus");
  const double r = radius_in(x, c.a, c.b, "ThinAnnulus");
  return std::pow(c.a, -(0.5 * c.n + 1.0)) * std::min(r - c.a, c.b - r) / std::pow(c.b / c.a - 1.0, 1.5);
}

double eval(const NonThinAnnulus& c, std::span<const double> x) {
  check_annulus(c.n, c.a, c.b, "NonThinAnnulus");
  if (c.b / c.a < 2.0 - 1e-12) throw std::invalid_argument("NonThinAnnulus: needs b/a >= 2");
  require_dim(x, c.n, "NonThinAnnulus");
  const double r = radius_in(x, c.a, c.b, "NonThinAnnulus");
  if (c.n == 2) return std::log(r / c.a) * (1.0 - r / c.b) / (c.b * std::log(1.0 + c.b / (4.0 * c.a)));
  return std::pow(c.b, -0.5 * c.n) * (1.0 - std::pow(c.a / r, c.n - 2)) * (1.0 - r / c.b);
}

double eval(const BoxCaricature& c, std::span<const double> x) {
  if (c.half_widths.empty()) throw std::invalid_argument("BoxCaricature: no dimensions");
  require_dim(x, static_cast<int>(c.half_widths.size()), "BoxCaricature");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = c.half_widths[i];
    if (!(h > 0.0)) throw std::invalid_argument("BoxCaricature: half widths must be positive");
    if (std::fabs(x[i]) > h * (1.0 + 1e-12)) throw std::domain_error("BoxCaricature: point outside the box");
    v *= std::cos(pi * std::clamp(x[i], -h, h) / (2.0 * h)) / std::sqrt(h);
  }
  return v;
}

double eval(const ThinAnnularProduct& c, std::span<const double> x) {
  check_annulus(c.n, c.a, c.b, "ThinAnnularProduct");
  require_dim(x, c.n, "ThinAnnularProduct");
  const double r = radius_in(x, c.a, c.b, "ThinAnnularProduct");
  std::vector<double> unit(x.begin(), x.end());
  for (double& u : unit) u /= r;
  if (!bases::contains(c.base, unit, true)) throw std::domain_error("ThinAnnularProduct: direction outside base");
  const double pref = std::pow(c.prefactor == RadialPrefactor::pointwise ? r : c.a, -0.5 * (c.n - 1));
  const double radial = std::sqrt(2.0 / (c.b - c.a)) * std::cos(pi * (r - 0.5 * (c.a + c.b)) / (c.b - c.a));
  // sphere rectangles need a grid solve, so keep the last base around
  thread_local std::string cached_key;
  thread_local bases::BaseEigenData cached;
  const std::string key = bases::describe(c.base);
  if (key != cached_key) {
    cached = bases::base_eigendata(c.base);
    cached_key = key;
  }
  return pref * radial * cached.phi0(unit);
}

double eval(const OrthantProduct& c, std::span<const double> x) {
  if (c.n < 2 || c.k < 1 || c.k > c.n) throw std::invalid_argument("OrthantProduct: need 1 <= k <= n, n >= 2");
  require_dim(x, c.n, "OrthantProduct");
  const double r = norm(x);
  if (!(r > 0.0)) throw std::domain_error("OrthantProduct: zero vector");
  double v = 1.0;
  for (int i = 0; i < c.k; ++i) {
    if (x[i] < -1e-12 * r) throw std::domain_error("OrthantProduct: point outside the orthant");
    v *= std::asin(std::clamp(x[i] / r, 0.0, 1.0));
  }
  return v;
}

double eval(const SphericalTriangle& c, std::span<const double> x) {
  const TriangleGeometry g = triangle_geometry(c, x);
  const auto& d = g.distances;
  const auto& al = g.angles;
  const double num = d[0] * d[1] * d[2] * std::pow(d[0] + d[2], pi / al[1] - 2.0) *
                     std::pow(d[1] + d[2], pi / al[0] - 2.0) * std::pow(d[0] + d[1], pi / al[2] - 2.0);
  return num / std::pow(g.diameter, pi / al[0] + pi / al[1] + pi / al[2] - 2.0);
}

}  // namespace

std::string kind_name(const CaricatureFn& fn) {
  return std::visit(overloaded{[](const ThinAnnulus&) { return std::string("ThinAnnulus"); },
                               [](const NonThinAnnulus& c) {
                                 return std::string(c.n == 2 ? "NonThinAnnulusN2" : "NonThinAnnulusN3plus");
                               },
                               [](const BoxCaricature&) { return std::string("Box"); },
                               [](const ThinAnnularProduct&) { return std::string("ThinAnnularProduct"); },
                               [](const OrthantProduct&) { return std::string("OrthantProduct"); },
                               [](const SphericalTriangle&) { return std::string("SphericalTriangle"); }},
                    fn);
}

double caricature_eval(const CaricatureFn& fn, std::span<const double> x) {
  return std::visit([&](const auto& c) { return eval(c, x); }, fn);
}

TriangleGeometry triangle_geometry(const SphericalTriangle& tri, std::span<const double> unit) {
  if (unit.size() != 3) throw std::invalid_argument("SphericalTriangle: points live on S^2");
  std::array<Vec3, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = unit3(tri.vertices[i]);
  const Vec3 x = unit3({unit[0], unit[1], unit[2]});
  TriangleGeometry g{};
  g.diameter = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3& p = v[i];
    const Vec3& q = v[(i + 1) % 3];
    const Vec3& s = v[(i + 2) % 3];
    auto tangent = [&](const Vec3& w) {
      const double c = dot3(p, w);
      return unit3({w[0] - c * p[0], w[1] - c * p[1], w[2] - c * p[2]});
    };
    g.angles[i] = std::acos(std::clamp(dot3(tangent(q), tangent(s)), -1.0, 1.0));
    Vec3 nrm = unit3(cross3(q, s));
    if (dot3(nrm, p) < 0) {
      for (double& c : nrm) c = -c;
    }
    const double side = dot3(x, nrm);
    if (side < -1e-12) throw std::domain_error("SphericalTriangle: point outside the triangle");
    g.distances[i] = std::asin(std::clamp(side, 0.0, 1.0));
    g.diameter = std::max(g.diameter, std::acos(std::clamp(dot3(q, s), -1.0, 1.0)));
  }
  return g;
}

ComparabilityResult comparability_audit(std::span<const ComparabilitySample> samples, const CaricatureFn& fn,
                                        double interior_margin) {
  if (!(interior_margin >= 0.0) || interior_margin >= 0.5) {
    throw std::invalid_argument("comparability_audit: margin must lie in [0, 0.5)");
  }
  ComparabilityResult res{0.0, std::numeric_limits<double>::infinity(), 0.0, 0};
  for (const auto& s : samples) {
    if (s.boundary_fraction < interior_margin) continue;
    const double car = caricature_eval(fn, s.point);
    if (!(car > 0.0)) continue;
    const double q = s.value / car;
    res.sup_ratio = std::max(res.sup_ratio, q);
    res.inf_ratio = std::min(res.inf_ratio, q);
    ++res.used;
  }
  if (res.used == 0) throw std::invalid_argument("comparability_audit: no samples left after margin exclusion");
  res.spread = res.sup_ratio / res.inf_ratio;
  return res;
}

ComparabilityResult radial_comparability(int n, double a, double b, const CaricatureFn& fn, double interior_margin,
                                         std::size_t N) {
  check_annulus(n, a, b, "radial_comparability");
  const auto sol = radial::solve_radial(n, a, b, 0.0, N, 1).front();
  const double phi0 = 1.0 / std::sqrt(bases::sphere_area(n));
  std::vector<ComparabilitySample> samples;
  samples.reserve(sol.grid.size());
  for (std::size_t i = 1; i + 1 < sol.grid.size(); ++i) {
    const double r = sol.grid[i];
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x[0] = r;
    samples.push_back({std::move(x), sol.f[i] * phi0, std::min(r - a, b - r) / (b - a)});
  }
  return comparability_audit(samples, fn, interior_margin);
}

double c1(int n, double x) {
  if (n < 2 || !(x > 1.0)) throw std::invalid_argument("C1: need n >= 2 and x > 1");
  const double al = (n - 1.0) * (n - 3.0) / 4.0;
  const double q = 1.0 - 1.0 / x;
  const double first = n * pi * pi / 4.0 * q * q;
  const double second = n >= 3 ? pi * pi + al * q * q : pi * pi + al * (x - 1.0) * (x - 1.0);
  return std::max(first, second);
}

double c2(int n, double x) {
  if (n < 2 || !(x > 1.0)) throw std::invalid_argument("C2: need n >= 2 and x > 1");
  const double al = (n - 1.0) * (n - 3.0) / 4.0;
  const double q = 1.0 - 1.0 / x;
  const double second = n >= 3 ? pi * pi + al * (x - 1.0) * (x - 1.0) : pi * pi + al * q * q;
  return std::min(n * n * pi * pi, second);
}

Interval annulus_eigenvalue_bounds(int n, double a, double b) {
  check_annulus(n, a, b, "annulus_eigenvalue_bounds");
  const double w2 = (b - a) * (b - a);
  return {c1(n, b / a) / w2, c2(n, b / a) / w2};
}

Interval decomposition_bounds(double lambda_annulus, double lambda0, double a, double b) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("decomposition_bounds: need 0 < a < b");
  if (!(lambda0 >= 0.0)) throw std::invalid_argument("decomposition_bounds: need lambda0 >= 0");
  return {lambda_annulus + lambda0 / (b * b), lambda_annulus + lambda0 / (a * a)};
}

BoundsReport sandwich_check(std::string quantity, double value, Interval bounds, double rel_slack) {
  return BoundsReport::make(std::move(quantity), value, bounds.lower, bounds.upper, rel_slack * std::fabs(value));
}

SupNormCheck supnorm_bounds_check(double lambda, double volume, double phi_sup, int n) {
  if (!(lambda > 0.0) || !(volume > 0.0) || !(phi_sup > 0.0) || n < 1) {
    throw std::invalid_argument("supnorm_bounds_check: inputs must be positive");
  }
  const double s2 = phi_sup * phi_sup;
  return {BoundsReport::make("phi_sup^2 >= 1/|U|", s2, 1.0 / volume, std::numeric_limits<double>::infinity(), 0.0),
          s2 / std::pow(lambda, 0.5 * n)};
}

std::vector<HadamardRow> hadamard_scan(int n, std::span<const double> t_grid, std::size_t N) {
  std::vector<HadamardRow> rows;
  for (double t : t_grid) {
    if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("hadamard_scan: t must lie in (0, 1]");
    const double h = t / 100.0;
    auto phi1 = [&](double s) { return radial::solve_radial(n, 1.0, 1.0 + s, 0.0, N, 1)[0].lambda; };
    HadamardRow row;
    row.t = t;
    row.lambda = phi1(t);
    row.derivative = (phi1(t + h) - phi1(t - h)) / (2.0 * h);
    row.normalized = t * t * t * std::fabs(row.derivative);
    rows.push_back(row);
  }
  return rows;
}

EigenGap eigengap(int n, double eps, double a_eps, double b_eps, std::size_t N) {
  if (!(eps > 0.0) || !(a_eps >= 0.0) || !(b_eps >= 0.0) || a_eps >= 1.0) {
    throw std::invalid_argument("eigengap: need eps > 0, 0 <= a_eps < 1, b_eps >= 0");
  }
  EigenGap g;
  g.lambda_a = radial::solve_radial(n, 1.0, 1.0 + eps, 0.0, N, 1)[0].lambda;
  g.lambda_b = radial::solve_radial(n, 1.0 - a_eps, 1.0 + eps + b_eps, 0.0, N, 1)[0].lambda;
  g.gap = g.lambda_a - g.lambda_b;
  return g;
}

}  // namespace annular::estimates
