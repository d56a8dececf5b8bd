#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "annular/bases.hpp"
#include "annular/report.hpp"

namespace annular::estimates {

// Thin annulus a < |x| < b, b/a <= 2:
//   a^{-(n/2+1)} min{|x|-a, b-|x|} / (b/a - 1)^{3/2}
struct ThinAnnulus {
  int n;
  double a, b;
};
// Non-thin annulus, b/a >= 2. n >= 3: b^{-n/2} (1 - (a/|x|)^{n-2}) (1 - |x|/b);
// n = 2: b^{-1} log(|x|/a) (1 - |x|/b) / log(1 + b/(4a)).
struct NonThinAnnulus {
  int n;
  double a, b;
};
// Box prod (-h_i, h_i): prod h_i^{-1/2} cos(pi x_i / (2 h_i)).
struct BoxCaricature {
  std::vector<double> half_widths;
};
// (a, b) x U0 with the cosine radial profile times the base eigenfunction. The
// radial prefactor is a^{-(n-1)/2} (inner radius) or |x|^{-(n-1)/2} (pointwise);
// the pointwise form is exact for n = 3.
enum class RadialPrefactor { inner_radius, pointwise };
struct ThinAnnularProduct {
  int n;
  double a, b;
  bases::BaseDomain base;
  RadialPrefactor prefactor = RadialPrefactor::inner_radius;
};
// prod_{i <= k} dist(x/|x|, {x_i = 0}) on the unit sphere.
struct OrthantProduct {
  int n;
  int k;
};
// Geodesic triangle on S^2 given by its vertices (unit vectors). Side i is
// opposite vertex i; alpha_i is the angle at vertex i.
struct SphericalTriangle {
  std::array<std::array<double, 3>, 3> vertices;
};

using CaricatureFn =
    std::variant<ThinAnnulus, NonThinAnnulus, BoxCaricature, ThinAnnularProduct, OrthantProduct, SphericalTriangle>;

std::string kind_name(const CaricatureFn& fn);
// Throws std::domain_error when the point lies outside the closed domain.
double caricature_eval(const CaricatureFn& fn, std::span<const double> x);

struct TriangleGeometry {
  std::array<double, 3> angles;     // alpha_i at vertex i
  std::array<double, 3> distances;  // d_i to side i
  double diameter;
};
TriangleGeometry triangle_geometry(const SphericalTriangle& tri, std::span<const double> unit);

struct ComparabilitySample {
  std::vector<double> point;
  double value;
  double boundary_fraction;  // distance to the boundary over the local thickness
};
struct ComparabilityResult {
  double sup_ratio;
  double inf_ratio;
  double spread;  // sup / inf
  std::size_t used;
};
// Samples with boundary_fraction < interior_margin are skipped.
ComparabilityResult comparability_audit(std::span<const ComparabilitySample> samples, const CaricatureFn& fn,
                                        double interior_margin);

// phi = f(|x|) phi0 on A_{a,b} with the full sphere as base, sampled along a ray
// at the radial grid nodes; boundary fraction min(r - a, b - r) / (b - a).
ComparabilityResult radial_comparability(int n, double a, double b, const CaricatureFn& fn, double interior_margin,
                                         std::size_t N = 2048);

struct Interval {
  double lower;
  double upper;
};
double c1(int n, double x);
double c2(int n, double x);
// [C1(n, b/a), C2(n, b/a)] / (b - a)^2
Interval annulus_eigenvalue_bounds(int n, double a, double b);
// [lambda(A_{a,b}) + lambda0 / b^2, lambda(A_{a,b}) + lambda0 / a^2]
Interval decomposition_bounds(double lambda_annulus, double lambda0, double a, double b);

// Additive slack rel_slack * |value| on both sides.
BoundsReport sandwich_check(std::string quantity, double value, Interval bounds, double rel_slack = 1e-6);

struct SupNormCheck {
  BoundsReport lower;  // phi_sup^2 >= 1/|U|
  double constant;     // phi_sup^2 / lambda^{n/2}
};
SupNormCheck supnorm_bounds_check(double lambda, double volume, double phi_sup, int n);

struct HadamardRow {
  double t;
  double lambda;      // lambda(A_{1,1+t})
  double derivative;  // central difference, step t/100
  double normalized;  // t^3 |derivative|
};
std::vector<HadamardRow> hadamard_scan(int n, std::span<const double> t_grid, std::size_t N = 2048);

struct EigenGap {
  double lambda_a;  // lambda(A_{1,1+eps})
  double lambda_b;  // lambda(A_{1-a_eps,1+eps+b_eps})
  double gap;
};
EigenGap eigengap(int n, double eps, double a_eps, double b_eps, std::size_t N = 2048);

}  // namespace annular::estimates
