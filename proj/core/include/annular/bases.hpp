#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace annular::bases {

struct FullSphere {
  int n;
};
// {x in S^{n-1} : x_1 > 0, ..., x_k > 0}
struct OrthantIntersection {
  int n;
  int k;
};
// {(cos t, sin t) : 0 < t < theta1}
struct CircleArc {
  double theta1;
};
// {(cos t sin p, sin t sin p, cos p) : 0 < t < alpha}
struct SphereWedge {
  double alpha;
};
// {(cos t sin p, sin t sin p, cos p) : 0 < t < theta1, phi_lo < p < phi_hi}
struct SphereRectangle {
  double theta1;
  double phi_lo;
  double phi_hi;
  std::size_t grid = 64;
};

using BaseDomain = std::variant<FullSphere, OrthantIntersection, CircleArc, SphereWedge, SphereRectangle>;

void validate(const BaseDomain& base);
int ambient_dimension(const BaseDomain& base);
std::string describe(const BaseDomain& base);
// Membership of a unit vector (closed domain when `closed`).
bool contains(const BaseDomain& base, std::span<const double> unit, bool closed = false);

using BaseSampler = std::function<double(std::span<const double>)>;

struct BaseEigenData {
  double lambda0;
  BaseSampler phi0;      // L^2(U0)-normalized, argument a unit vector in R^n
  double measure;        // sigma_{n-1}(U0)
  double diam_lower;
  double norm_constant;  // phi0 = norm_constant * (unnormalized profile)
};

BaseEigenData base_eigendata(const BaseDomain& base);

// Quadrature nodes (unit vectors) and weights over U0, product Gauss-Legendre in
// hyperspherical angles. n <= 5 for sphere-type bases.
struct BaseQuadrature {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};
BaseQuadrature base_quadrature(const BaseDomain& base, std::size_t nodes_per_angle);

double sphere_area(int n);  // sigma(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)

// Eigenlevels of circle bases; samplers take the angle t.
struct BaseLevel {
  double lambda0;
  int multiplicity;
  std::vector<std::function<double(double)>> functions;
};
std::vector<BaseLevel> base_spectrum(const BaseDomain& base, std::size_t count);

struct SphereRectangleSolution {
  double lambda0;
  std::size_t n;                 // intervals per direction
  double theta1, phi_lo, phi_hi;
  std::vector<double> values;    // (n+1) x (n+1), row-major in theta, boundary zeros
  double at(double theta, double phi) const;  // bilinear interpolation
};
SphereRectangleSolution solve_sphere_rectangle(double theta1, double phi_lo, double phi_hi, std::size_t n);

// Spherical coordinates used by the S^2 bases.
std::vector<double> sphere_point(double theta, double phi);
// Angle in [0, 2 pi) of a planar unit vector.
double planar_angle(std::span<const double> unit);

}  // namespace annular::bases
