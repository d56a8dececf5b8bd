#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "annular/auditors.hpp"
#include "annular/geometry.hpp"
#include "annular/report.hpp"
#include "annular/spectrum.hpp"

namespace annular::heatkernel {

// Dirichlet spectrum of the box prod (-h_i, h_i) from its product eigenfunctions,
// with `per_dim` one-dimensional modes per direction. Every product mode below
// the cutoff is listed.
Spectrum box_spectrum(std::span<const double> half_widths, std::size_t per_dim);

struct KernelValue {
  double p;
  double tail;  // truncation bound plus a rounding allowance for the sum
};
// Throws NumericalError when tail > 1e-8 |p|.
KernelValue kernel_eval(const Spectrum& spectrum, double t, std::span<const double> x, std::span<const double> y);
// e^{lambda_1 t} p(t, x, y) / (phi_1(x) phi_1(y)), with the truncation bound
// carried into the same normalization.
KernelValue normalized_kernel(const Spectrum& spectrum, double t, std::span<const double> x,
                              std::span<const double> y);
// normalized_kernel - 1 summed directly over k >= 2 (no cancellation).
double equilibrium_deviation(const Spectrum& spectrum, double t, std::span<const double> x, std::span<const double> y);

// Rows: t, sup_deviation. Summary: fitted_rate (log-linear slope over the last
// half of t_grid), spectral_gap, rate_error (relative).
AuditReport equilibration_audit(const Spectrum& spectrum, std::span<const std::vector<double>> samples,
                                std::span<const double> t_grid);

// Exact one-dimensional normalized kernel on (-a, a), summed until the terms
// drop below 1e-17 relative.
double box_ratio_1d(double a, double t, double x, double y);

// Rows: t, min_ratio, max_ratio, lower_envelope, upper_envelope, C_dev.
// C_dev = max |ratio - 1| / (prod(1 + (a_i/sqrt t)^3) - 1). Summary: C_max over
// t >= max a_i^2, C_lower (implied constant of the lower envelope), C_upper,
// product_identity_defect (n-dimensional spectral sum vs product of 1D ratios).
AuditReport box_kernel_bounds_check(std::span<const double> half_widths, std::span<const double> t_grid,
                                    std::size_t samples_per_dim);

struct HkeSample {
  auditors::ChartPoint x;
  auditors::ChartPoint y;
};
// Fits c_lo e^{-u/c2} <= R <= c_hi e^{-u/c4}, u = sigma^2 / t,
// R = p~ sqrt(V(x, sqrt t) V(y, sqrt t)), over all (t, pair) samples. c_hi = e max R,
// c4 is the smallest value making the upper bound hold; c_lo = min_{u <= 1} R / e
// and c2 is the largest value making the lower bound hold. Rows: t, r_x, theta_x,
// r_y, theta_y, sigma, p_tilde, R. Samples the spectrum cannot certify are
// skipped and counted.
AuditReport gaussian_hke_audit(const Spectrum& spectrum, const geometry::MassGrid& phi2_grid,
                               std::span<const double> t_grid, std::span<const HkeSample> pairs);

// Sample pairs used by the CLI and the acceptance suite: x at two radii, y swept
// in angle (0, eps, 2 eps, ... up to pi) and across the radial profile.
std::vector<HkeSample> standard_hke_pairs(const geometry::ProductGeometry& g);

}  // namespace annular::heatkernel
