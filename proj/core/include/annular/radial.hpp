#pragma once

#include <cstddef>
#include <vector>

#include "annular/bases.hpp"
#include "annular/spectrum.hpp"

namespace annular::radial {

struct AnnularDomainSpec {
  int n;
  double a;
  double b;
  bases::BaseDomain base;

  void validate() const;
  // Thin regime b/a <= 2.
  bool thin() const { return b / a <= 2.0; }
};

struct RadialEigenResult {
  double lambda;              // Richardson-refined over (N, 2N)
  double lambda_grid;         // value on the N grid
  std::vector<double> grid;   // r_0 = a, ..., r_N = b
  std::vector<double> f;      // int f^2 r^{n-1} dr = 1
  std::vector<double> ftilde; // int ftilde^2 dr = 1
  double alpha;               // (n-3)(n-1)/4

  // Cubic interpolation of f at r in [a, b] (zero outside).
  double f_at(double r) const;
  double sup_f() const;
};

double transform_alpha(int n);

// k smallest eigenpairs of -f'' - (n-1)/r f' + lambda0/r^2 f = lambda f, f(a) = f(b) = 0,
// computed through ftilde = r^{(n-1)/2} f on a uniform grid with N intervals.
std::vector<RadialEigenResult> solve_radial(int n, double a, double b, double lambda0, std::size_t N = 1024,
                                            std::size_t k = 1);

// Cross-check oracle: discretizes -(r^{n-1} f')' + lambda0 r^{n-3} f = lambda r^{n-1} f
// directly, symmetrized by the weight, with the same Richardson step.
double solve_radial_weighted(int n, double a, double b, double lambda0, std::size_t N = 1024);

// Product spectrum of (a, b) x U0 for n = 2 circle bases.
Spectrum assemble_spectrum(const AnnularDomainSpec& spec, std::size_t m_base, std::size_t k_radial,
                           std::size_t N = 1024);

}  // namespace annular::radial
