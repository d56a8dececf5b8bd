#include "annular/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "annular/numerics.hpp"
#include "annular/specfun.hpp"

namespace annular::bases {
namespace {

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * pi);
  if (t < 0) t += 2.0 * pi;
  return t;
}

void require_unit(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("base point has dimension " + std::to_string(x.size()) + ", expected " +
                                std::to_string(n));
  }
}

// Hyperspherical coordinates: x1 = cos p1, ..., x_{n-1} = prod sin(p) cos t, x_n = prod sin(p) sin t.
std::vector<double> hyperspherical_point(std::span<const double> psi, double t) {
  const std::size_t n = psi.size() + 2;
  std::vector<double> x(n);
  double s = 1.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    x[i] = s * std::cos(psi[i]);
    s *= std::sin(psi[i]);
  }
  x[n - 2] = s * std::cos(t);
  x[n - 1] = s * std::sin(t);
  return x;
}

double hyperspherical_jacobian(std::span<const double> psi) {
  const std::size_t m = psi.size();  // n - 2
  double j = 1.0;
  for (std::size_t i = 0; i < m; ++i) j *= std::pow(std::sin(psi[i]), static_cast<double>(m - i));
  return j;
}

struct AngleBox {
  std::vector<std::pair<double, double>> psi;
  std::pair<double, double> t;
};

BaseQuadrature product_quadrature(const AngleBox& box, std::size_t nodes) {
  std::vector<numerics::QuadratureRule> rules;
  for (const auto& [lo, hi] : box.psi) rules.push_back(numerics::gauss_legendre(nodes, lo, hi));
  const auto trule = numerics::gauss_legendre(nodes, box.t.first, box.t.second);
  BaseQuadrature q;
  const std::size_t m = rules.size();
  std::vector<std::size_t> idx(m, 0);
  std::vector<double> psi(m);
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      psi[i] = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
    }
    w *= hyperspherical_jacobian(psi);
    for (std::size_t j = 0; j < trule.nodes.size(); ++j) {
      q.points.push_back(hyperspherical_point(psi, trule.nodes[j]));
      q.weights.push_back(w * trule.weights[j]);
    }
    std::size_t d = 0;
    while (d < m && ++idx[d] == nodes) idx[d++] = 0;
    if (d == m) break;
  }
  return q;
}

BaseQuadrature s2_quadrature(double t_lo, double t_hi, double p_lo, double p_hi, std::size_t nodes) {
  const auto tr = numerics::gauss_legendre(nodes, t_lo, t_hi);
  const auto pr = numerics::gauss_legendre(nodes, p_lo, p_hi);
  BaseQuadrature q;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = 0; j < nodes; ++j) {
      q.points.push_back(sphere_point(tr.nodes[i], pr.nodes[j]));
      q.weights.push_back(tr.weights[i] * pr.weights[j] * std::sin(pr.nodes[j]));
    }
  }
  return q;
}

AngleBox orthant_box(int n, int k) {
  AngleBox box;
  for (int i = 0; i < n - 2; ++i) box.psi.push_back({0.0, i < k ? pi / 2 : pi});
  if (k == n) {
    box.t = {0.0, pi / 2};
  } else if (k == n - 1) {
    box.t = {-pi / 2, pi / 2};
  } else {
    box.t = {0.0, 2.0 * pi};
  }
  return box;
}

double wedge_norm_constant(double alpha) {
  const double p = pi / alpha;
  const double log_polar = 0.5 * std::log(pi) + specfun::log_gamma(p + 1.0) - specfun::log_gamma(p + 1.5);
  return 1.0 / std::sqrt(0.5 * alpha * std::exp(log_polar));
}

}  // namespace

std::vector<double> sphere_point(double theta, double phi) {
  return {std::cos(theta) * std::sin(phi), std::sin(theta) * std::sin(phi), std::cos(phi)};
}

double planar_angle(std::span<const double> unit) { return wrap_angle(std::atan2(unit[1], unit[0])); }

double sphere_area(int n) {
  if (n < 2) throw std::invalid_argument("sphere_area: need n >= 2");
  return 2.0 * std::exp(0.5 * n * std::log(pi) - specfun::log_gamma(0.5 * n));
}

void validate(const BaseDomain& base) {
  std::visit(overloaded{
                 [](const FullSphere& b) {
                   if (b.n < 2) throw std::invalid_argument("FullSphere: need n >= 2");
                 },
                 [](const OrthantIntersection& b) {
                   if (b.n < 2) throw std::invalid_argument("OrthantIntersection: need n >= 2");
                   if (b.k < 1 || b.k > b.n) throw std::invalid_argument("OrthantIntersection: need 1 <= k <= n");
                 },
                 [](const CircleArc& b) {
                   if (!(b.theta1 > 0.0 && b.theta1 <= 2.0 * pi)) {
                     throw std::invalid_argument("CircleArc: need 0 < theta1 <= 2 pi");
                   }
                 },
                 [](const SphereWedge& b) {
                   if (!(b.alpha > 0.0 && b.alpha <= 2.0 * pi)) {
                     throw std::invalid_argument("SphereWedge: need 0 < alpha <= 2 pi");
                   }
                 },
                 [](const SphereRectangle& b) {
                   if (!(b.theta1 > 0.0 && b.theta1 <= 2.0 * pi)) {
                     throw std::invalid_argument("SphereRectangle: need 0 < theta1 <= 2 pi");
                   }
                   if (!(b.phi_lo >= 0.0 && b.phi_lo < b.phi_hi && b.phi_hi <= pi)) {
                     throw std::invalid_argument("SphereRectangle: need phi range inside (0, pi)");
                   }
                   if (b.grid < 16) throw std::invalid_argument("SphereRectangle: grid too coarse (N < 16)");
                 },
             },
             base);
}

int ambient_dimension(const BaseDomain& base) {
  return std::visit(overloaded{
                        [](const FullSphere& b) { return b.n; },
                        [](const OrthantIntersection& b) { return b.n; },
                        [](const CircleArc&) { return 2; },
                        [](const SphereWedge&) { return 3; },
                        [](const SphereRectangle&) { return 3; },
                    },
                    base);
}

std::string describe(const BaseDomain& base) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const FullSphere& b) { os << "FullSphere(n=" << b.n << ")"; },
                 [&](const OrthantIntersection& b) { os << "OrthantIntersection(n=" << b.n << ",k=" << b.k << ")"; },
                 [&](const CircleArc& b) { os << "CircleArc(theta1=" << b.theta1 << ")"; },
                 [&](const SphereWedge& b) { os << "SphereWedge(alpha=" << b.alpha << ")"; },
                 [&](const SphereRectangle& b) {
                   os << "SphereRectangle(theta1=" << b.theta1 << ",phi=(" << b.phi_lo << "," << b.phi_hi
                      << "),N=" << b.grid << ")";
                 },
             },
             base);
  return os.str();
}

bool contains(const BaseDomain& base, std::span<const double> x, bool closed) {
  require_unit(x, ambient_dimension(base));
  const double tol = closed ? 1e-12 : 0.0;
  auto positive = [&](double v) { return closed ? v >= -tol : v > 0.0; };
  return std::visit(overloaded{
                        [&](const FullSphere&) { return true; },
                        [&](const OrthantIntersection& b) {
                          for (int i = 0; i < b.k; ++i) {
                            if (!positive(x[static_cast<std::size_t>(i)])) return false;
                          }
                          return true;
                        },
                        [&](const CircleArc& b) {
                          const double t = planar_angle(x);
                          if (closed) return t <= b.theta1 + tol || t >= 2.0 * pi - tol;
                          return t > 0.0 && t < b.theta1;
                        },
                        [&](const SphereWedge& b) {
                          const double t = wrap_angle(std::atan2(x[1], x[0]));
                          if (closed) return t <= b.alpha + tol || t >= 2.0 * pi - tol;
                          return t > 0.0 && t < b.alpha && std::fabs(x[2]) < 1.0;
                        },
                        [&](const SphereRectangle& b) {
                          const double t = wrap_angle(std::atan2(x[1], x[0]));
                          const double p = std::acos(std::clamp(x[2], -1.0, 1.0));
                          if (closed) {
                            return (t <= b.theta1 + tol || t >= 2.0 * pi - tol) && p >= b.phi_lo - tol &&
                                   p <= b.phi_hi + tol;
                          }
                          return t > 0.0 && t < b.theta1 && p > b.phi_lo && p < b.phi_hi;
                        },
                    },
                    base);
}

BaseQuadrature base_quadrature(const BaseDomain& base, std::size_t nodes) {
  validate(base);
  return std::visit(overloaded{
                        [&](const FullSphere& b) {
                          if (b.n > 5) throw std::invalid_argument("base_quadrature: FullSphere supported for n <= 5");
                          AngleBox box;
                          for (int i = 0; i < b.n - 2; ++i) box.psi.push_back({0.0, pi});
                          box.t = {0.0, 2.0 * pi};
                          return product_quadrature(box, nodes);
                        },
                        [&](const OrthantIntersection& b) {
                          if (b.n > 5) {
                            throw std::invalid_argument("base_quadrature: OrthantIntersection supported for n <= 5");
                          }
                          return product_quadrature(orthant_box(b.n, b.k), nodes);
                        },
                        [&](const CircleArc& b) {
                          AngleBox box;
                          box.t = {0.0, b.theta1};
                          return product_quadrature(box, nodes);
                        },
                        [&](const SphereWedge& b) { return s2_quadrature(0.0, b.alpha, 0.0, pi, nodes); },
                        [&](const SphereRectangle& b) {
                          return s2_quadrature(0.0, b.theta1, b.phi_lo, b.phi_hi, nodes);
                        },
                    },
                    base);
}

BaseEigenData base_eigendata(const BaseDomain& base) {
  validate(base);
  return std::visit(
      overloaded{
          [](const FullSphere& b) -> BaseEigenData {
            const double area = sphere_area(b.n);
            const double c = 1.0 / std::sqrt(area);
            const int n = b.n;
            return {0.0, [c, n](std::span<const double> x) {
                      require_unit(x, n);
                      return c;
                    },
                    area, pi, c};
          },
          [](const OrthantIntersection& b) -> BaseEigenData {
            if (b.n > 5) {
              throw std::invalid_argument("OrthantIntersection eigendata supported for n <= 5 (normalization quadrature)");
            }
            const int n = b.n, k = b.k;
            const auto q = product_quadrature(orthant_box(n, k), 24);
            double norm2 = 0.0;
            for (std::size_t i = 0; i < q.points.size(); ++i) {
              double p = 1.0;
              for (int j = 0; j < k; ++j) p *= q.points[i][static_cast<std::size_t>(j)];
              norm2 += q.weights[i] * p * p;
            }
            const double c = 1.0 / std::sqrt(norm2);
            return {static_cast<double>(k * (k + n - 2)),
                    [c, n, k](std::span<const double> x) {
                      require_unit(x, n);
                      double p = c;
                      for (int j = 0; j < k; ++j) {
                        const double v = x[static_cast<std::size_t>(j)];
                        if (v <= 0.0) return 0.0;
                        p *= v;
                      }
                      return p;
                    },
                    sphere_area(n) / std::pow(2.0, k), pi / 2, c};
          },
          [](const CircleArc& b) -> BaseEigenData {
            const double t1 = b.theta1;
            const double c = std::sqrt(2.0 / t1);
            return {pi * pi / (t1 * t1),
                    [c, t1](std::span<const double> x) {
                      require_unit(x, 2);
                      const double t = planar_angle(x);
                      return t < t1 ? c * std::sin(pi * t / t1) : 0.0;
                    },
                    t1, std::min(t1, pi), c};
          },
          [](const SphereWedge& b) -> BaseEigenData {
            const double alpha = b.alpha;
            const double p = pi / alpha;
            const double c = wedge_norm_constant(alpha);
            return {p * (p + 1.0),
                    [c, alpha, p](std::span<const double> x) {
                      require_unit(x, 3);
                      const double t = wrap_angle(std::atan2(x[1], x[0]));
                      if (t >= alpha) return 0.0;
                      const double s = std::sqrt(std::max(0.0, 1.0 - x[2] * x[2]));
                      return c * std::sin(p * t) * std::pow(s, p);
                    },
                    2.0 * alpha, pi, c};
          },
          [](const SphereRectangle& b) -> BaseEigenData {
            auto sol = std::make_shared<SphereRectangleSolution>(
                solve_sphere_rectangle(b.theta1, b.phi_lo, b.phi_hi, b.grid));
            const double area = b.theta1 * (std::cos(b.phi_lo) - std::cos(b.phi_hi));
            return {sol->lambda0,
                    [sol](std::span<const double> x) {
                      require_unit(x, 3);
                      const double t = wrap_angle(std::atan2(x[1], x[0]));
                      const double p = std::acos(std::clamp(x[2], -1.0, 1.0));
                      return sol->at(t, p);
                    },
                    area, b.phi_hi - b.phi_lo, 1.0};
          },
      },
      base);
}

std::vector<BaseLevel> base_spectrum(const BaseDomain& base, std::size_t count) {
  validate(base);
  if (count < 1) throw std::invalid_argument("base_spectrum: need M >= 1");
  if (const auto* s = std::get_if<FullSphere>(&base); s && s->n == 2) {
    std::vector<BaseLevel> levels;
    const double c0 = 1.0 / std::sqrt(2.0 * pi);
    const double c = 1.0 / std::sqrt(pi);
    levels.push_back({0.0, 1, {[c0](double) { return c0; }}});
    for (std::size_t m = 1; m < count; ++m) {
      const double dm = static_cast<double>(m);
      levels.push_back({dm * dm, 2,
                        {[c, dm](double t) { return c * std::cos(dm * t); },
                         [c, dm](double t) { return c * std::sin(dm * t); }}});
    }
    return levels;
  }
  if (const auto* arc = std::get_if<CircleArc>(&base)) {
    std::vector<BaseLevel> levels;
    const double t1 = arc->theta1;
    const double c = std::sqrt(2.0 / t1);
    for (std::size_t j = 1; j <= count; ++j) {
      const double w = static_cast<double>(j) * pi / t1;
      levels.push_back({w * w, 1, {[c, w, t1](double t) {
                          t = wrap_angle(t);
                          return t < t1 ? c * std::sin(w * t) : 0.0;
                        }}});
    }
    return levels;
  }
  throw std::invalid_argument("base_spectrum: spectrum unavailable for " + describe(base) +
                              " (supported: FullSphere with n=2, CircleArc)");
}

double SphereRectangleSolution::at(double theta, double phi) const {
  const double ht = theta1 / static_cast<double>(n);
  const double hp = (phi_hi - phi_lo) / static_cast<double>(n);
  if (theta < 0.0 || theta > theta1 || phi < phi_lo || phi > phi_hi) return 0.0;
  const double u = theta / ht, v = (phi - phi_lo) / hp;
  const std::size_t i = std::min(static_cast<std::size_t>(u), n - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(v), n - 1);
  const double fu = u - static_cast<double>(i), fv = v - static_cast<double>(j);
  auto val = [&](std::size_t a, std::size_t b) { return values[a * (n + 1) + b]; };
  return (1 - fu) * (1 - fv) * val(i, j) + fu * (1 - fv) * val(i + 1, j) + (1 - fu) * fv * val(i, j + 1) +
         fu * fv * val(i + 1, j + 1);
}

SphereRectangleSolution solve_sphere_rectangle(double theta1, double phi_lo, double phi_hi, std::size_t n) {
  validate(SphereRectangle{theta1, phi_lo, phi_hi, n});
  const double ht = theta1 / static_cast<double>(n);
  const double hp = (phi_hi - phi_lo) / static_cast<double>(n);
  const std::size_t m = n - 1;  // interior nodes per direction
  auto index = [m](std::size_t i, std::size_t j) { return (i - 1) * m + (j - 1); };
  auto phi = [&](double j) { return phi_lo + hp * j; };

  // Symmetric form: K u = lambda S u with S = diag(sin phi_j); we solve
  // S^{-1/2} K S^{-1/2} v = lambda v.
  std::vector<numerics::Triplet> trip;
  trip.reserve(5 * m * m);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double s = std::sin(phi(static_cast<double>(j)));
      const double sp = std::sin(phi(static_cast<double>(j) + 0.5));
      const double sm = std::sin(phi(static_cast<double>(j) - 0.5));
      const std::size_t row = index(i, j);
      trip.push_back({row, row, ((sp + sm) / (hp * hp) + 2.0 / (s * ht * ht)) / s});
      if (i > 1) trip.push_back({row, index(i - 1, j), -1.0 / (s * ht * ht) / s});
      if (i < m) trip.push_back({row, index(i + 1, j), -1.0 / (s * ht * ht) / s});
      if (j > 1) {
        const double s2 = std::sin(phi(static_cast<double>(j) - 1.0));
        trip.push_back({row, index(i, j - 1), -sm / (hp * hp) / std::sqrt(s * s2)});
      }
      if (j < m) {
        const double s2 = std::sin(phi(static_cast<double>(j) + 1.0));
        trip.push_back({row, index(i, j + 1), -sp / (hp * hp) / std::sqrt(s * s2)});
      }
    }
  }
  const auto op = numerics::SparseSymmetricOperator::from_triplets(m * m, std::move(trip));
  const auto pairs = numerics::sparse_smallest_eigenpairs(op, 1, 0.0);

  SphereRectangleSolution sol{pairs[0].value, n, theta1, phi_lo, phi_hi, std::vector<double>((n + 1) * (n + 1), 0.0)};
  double norm2 = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double s = std::sin(phi(static_cast<double>(j)));
      const double u = pairs[0].vector[index(i, j)] / std::sqrt(s);
      sol.values[i * (n + 1) + j] = u;
      norm2 += u * u * s * ht * hp;
    }
  }
  const double c = 1.0 / std::sqrt(norm2);
  for (double& v : sol.values) v *= c;
  // The sampler is the bilinear interpolant; normalize that, with 3 x 3 Gauss
  // points per cell (the nodal sum above differs by O(h^2)).
  const auto g = numerics::gauss_legendre(3, 0.0, 1.0);
  double inter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
          const double t = ht * (static_cast<double>(i) + g.nodes[p]);
          const double f = phi(static_cast<double>(j) + g.nodes[q]);
          const double u = sol.at(t, f);
          inter += g.weights[p] * g.weights[q] * u * u * std::sin(f) * ht * hp;
        }
      }
    }
  }
  const double c2 = 1.0 / std::sqrt(inter);
  for (double& v : sol.values) v *= c2;
  return sol;
}

}  // namespace annular::bases
