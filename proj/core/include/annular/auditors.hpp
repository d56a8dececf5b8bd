#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "annular/geometry.hpp"
#include "annular/report.hpp"

namespace annular::auditors {

struct ChartPoint {
  double r;
  double theta;
};

// Centers at the inner boundary, near it, and across the radial profile, at the
// middle of the angular window (and near its edge for arcs).
std::vector<ChartPoint> standard_centers(const geometry::ProductGeometry& g);
// r_min, 2 r_min, 4 r_min, ... up to (and including) the diameter.
std::vector<double> dyadic_radii(double r_min, double r_max);

// Rows: r, theta, radius, V(radius), V(2 radius), ratio. Summary: D_hat (max ratio),
// min_ratio, skipped (rows with an empty small ball).
AuditReport doubling_profile(const geometry::MassGrid& grid, std::span<const ChartPoint> centers,
                             std::span<const double> radii);

struct PoincareEstimate {
  double mu2;    // smallest nonzero weighted Neumann eigenvalue
  double p_hat;  // 1 / (scale^2 mu2)
  std::size_t unknowns;
  std::size_t hops = 0;  // eccentricity of the center in the discrete ball
};

// Weighted Neumann problem -div(w grad f) = mu w f on the sigma-ball (a box in
// the chart) by finite volumes with `cells` cells per direction.
PoincareEstimate poincare_continuous(const geometry::ProductGeometry& g, const geometry::WeightFunction& w,
                                     ChartPoint center, double radius, std::size_t cells = 40);
// Graph version on the hop ball B(center, m): conductance m_x + m_y on every edge,
// vertex masses m_x, scale m.
PoincareEstimate poincare_discrete(const geometry::WeightedNet& net, std::size_t center, std::size_t m);

enum class PoincareMode { continuous_grid, discrete_net };

// Continuous mode rows: r, theta, radius, mu2, P_hat. Discrete mode picks the net
// vertex nearest to each center and uses hop radius m = max(1, round(radius /
// epsilon)); rows: r, theta, m, mu2, P_hat, matched_radius. Radii whose hop
// ball saturates (eccentricity below m) are skipped.
AuditReport poincare_profile(const geometry::ProductGeometry& g, const geometry::WeightFunction& w,
                             std::span<const ChartPoint> centers, std::span<const double> radii, PoincareMode mode,
                             double net_epsilon = 0.0);

// Discrete and continuous estimates on the same balls: the net vertex nearest
// each center, hop radius m = round(r / eps), chart radius m eps (the full ring
// when the hop ball wraps it).
// Summary max_factor = max over balls of max(P_d / P_c, P_c / P_d).
AuditReport poincare_matched(const geometry::ProductGeometry& g, const geometry::WeightFunction& w,
                             std::span<const ChartPoint> centers, std::span<const double> radii, double net_epsilon);

struct SectorResult {
  double beta;
  double nu;
  double alpha;                // first zero of J_nu
  double log_v_outer;          // log V(0, 1/alpha)
  double log_v_inner;          // log V(0, 1/(2 alpha))
  double predicted_log_outer;  // statement asymptotic
  double predicted_log_inner;
  double log_unnormalized_outer;  // log of (pi beta / 2) int_0^{1/alpha} J^2 r dr
  double predicted_log_unnormalized;  // 5 log beta - log 8 + (2/beta) log(e beta / 2)
  double ratio;                // V(1/alpha) / V(1/(2 alpha))
  double predicted_ratio;      // 4 * 2^{2/beta}
  double refinement_defect;    // relative change of log I under node doubling
};
SectorResult sector_counterexample(double beta, std::size_t panels = 256, std::size_t order = 16);
AuditReport sector_report(std::span<const double> betas);

}  // namespace annular::auditors
