#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "annular/report.hpp"

namespace annular::perturb {

struct BoxConditions {
  double c1_needed;     // smallest C1 with 1/a_i^2 - 1/b_i^2 <= C1 / max b_i^2 for all i
  double c2_needed;     // smallest C2 with a_i >= b_i / C2 for all i
  bool recthyp1;        // with the supplied C1
  bool recthyp2;        // with the supplied C2
  double implied_c2;    // sqrt(C1 + 1)
  bool implication_ok;  // recthyp1 (supplied C1) => a_i >= b_i / sqrt(C1 + 1)
};
// Boxes prod (-a_i, a_i) inside prod (-b_i, b_i).
BoxConditions check_box_conditions(std::span<const double> a, std::span<const double> b, double c1, double c2);

struct BoxScenario {
  std::string name;
  std::vector<double> b1;  // half widths of the inner box
  std::vector<double> b2;  // half widths of the outer box
  std::function<bool(double, double)> u_indicator;
  double h = 1.0 / 120.0;
  double c1 = 0.2;
  double c2 = 1.1;
  // Lower ratio over |x_i| < a_i - (b_i - a_i) (when nonempty) minus two cells;
  // otherwise over B1 minus two cells.
  bool corollary_trim = true;
};
BoxScenario identity_box_scenario(double h = 1.0 / 128.0);
// B1 = (-1,1)^2, B2 = (-1.05,1.05)^2, U = B2 without the four corners |x|,|y| > 1.
BoxScenario notched_box_scenario(double h = 1.0 / 120.0);
// B1 = (-delta, delta) x (-1, 1), U = B2 = (-1, 1)^2.
BoxScenario slab_box_scenario(double delta, double h = 1.0 / 120.0);

// Summary: lambda_B2, lambda_U, lambda_B1 (same grid), max_ratio_upper
// (max over U of phi_U / phi_B2, analytic phi_B2), min_ratio_lower (min over the
// trimmed B1 of phi_U / phi_B1), C (max of the upper ratio and the inverse lower
// ratio), plus the condition checker output.
AuditReport box_perturbation_audit(const BoxScenario& s);

// A = (1, 1+eps) x W, B = (1 - a_eps, 1 + eps + b_eps) x W(eta), U between, with
// W the full circle or the window (theta_lo, theta_hi).
struct AnnulusScenario {
  std::string name;
  double eps = 0.3;
  double a_eps = 0.027;
  double b_eps = 0.027;
  bool full_circle = true;
  double theta_lo = 0.0, theta_hi = 0.0;  // window of A when not full_circle
  double eta = 0.0;                       // B's window is widened by eta on both sides
  double u_theta_lo = 0.0, u_theta_hi = 0.0;
  std::function<double(double)> u_rmin;
  std::function<double(double)> u_rmax;
  double hr = 0.003;
  std::size_t ntheta = 720;
  bool regime_check = true;  // require a_eps <= c1 eps^3, b_eps <= c2 eps^3
  double c1 = 1.0, c2 = 1.0;
};
AnnulusScenario identity_annulus_scenario(double eps);
// r_min = 1 - a_eps amp (1 + sin k theta)/2, r_max = 1 + eps + b_eps amp (1 + cos k theta)/2,
// a_eps = b_eps = eps^p.
AnnulusScenario bumpy_annulus_scenario(double eps, double amplitude = 1.0, int k = 5, double p = 3.0);
// A = (1, 1+eps) x (0, 3 pi/4), B = (1 - eps^3, 1 + eps + eps^3) x (-eta, 3 pi/4 + eta).
AnnulusScenario arc_annulus_scenario(double eps, double eta = 0.05);

// Summary: lambda_B, lambda_U, lambda_A (common grid), max_ratio_upper (max over
// U of phi_U / phi_B), min_ratio_lower (min over trimmed A of phi_U / phi_A),
// core_spread (sup/inf of phi_U / Phi on the core, Phi the product caricature),
// core_spread_A (sup/inf of phi_U / phi_A on the core), C (max of the upper
// ratio and the inverse lower ratio).
AuditReport annulus_perturbation_audit(const AnnulusScenario& s);

}  // namespace annular::perturb
