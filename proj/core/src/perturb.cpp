#include "annular/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "annular/errors.hpp"
#include "annular/spectral2d.hpp"

namespace annular::perturb {

namespace {

using std::numbers::pi;
using spectral2d::CartesianDomain2D;
using spectral2d::PolarDomain2D;
using spectral2d::PolarGrid;

constexpr double inf = std::numeric_limits<double>::infinity();

// First Dirichlet eigenfunction of prod (-b_i, b_i), L^2 normalized.
double box_phi(std::span<const double> b, double x, double y) {
  const double px = std::cos(pi * x / (2.0 * b[0])) / std::sqrt(b[0]);
  const double py = std::cos(pi * y / (2.0 * b[1])) / std::sqrt(b[1]);
  return std::max(px, 0.0) * std::max(py, 0.0);
}

void require_boxes(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) throw std::invalid_argument("box conditions: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(b[i] >= a[i])) {
      throw std::invalid_argument("box conditions: need 0 < a_i <= b_i");
    }
  }
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

BoxConditions check_box_conditions(std::span<const double> a, std::span<const double> b, double c1, double c2) {
  require_boxes(a, b);
  if (!(c1 >= 0.0) || !(c2 >= 1.0)) throw std::invalid_argument("box conditions: need C1 >= 0, C2 >= 1");
  const double bmax = *std::max_element(b.begin(), b.end());
  BoxConditions out{};
  out.c1_needed = 0.0;
  out.c2_needed = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.c1_needed = std::max(out.c1_needed, (1.0 / (a[i] * a[i]) - 1.0 / (b[i] * b[i])) * bmax * bmax);
    out.c2_needed = std::max(out.c2_needed, b[i] / a[i]);
  }
  const double rtol = 1e-12;
  out.recthyp1 = out.c1_needed <= c1 * (1.0 + rtol);
  out.recthyp2 = out.c2_needed <= c2 * (1.0 + rtol);
  out.implied_c2 = std::sqrt(c1 + 1.0);
  out.implication_ok = !out.recthyp1 || out.c2_needed <= out.implied_c2 * (1.0 + rtol);
  return out;
}

BoxScenario identity_box_scenario(double h) {
  BoxScenario s;
  s.name = "identity-box";
  s.b1 = {1.0, 1.0};
  s.b2 = {1.0, 1.0};
  s.u_indicator = [](double x, double y) { return std::fabs(x) < 1.0 && std::fabs(y) < 1.0; };
  s.h = h;
  s.c1 = 0.0;
  s.c2 = 1.0;
  return s;
}

BoxScenario notched_box_scenario(double h) {
  BoxScenario s;
  s.name = "notched-box";
  s.b1 = {1.0, 1.0};
  s.b2 = {1.05, 1.05};
  s.u_indicator = [](double x, double y) {
    const double ax = std::fabs(x), ay = std::fabs(y);
    return ax < 1.05 && ay < 1.05 && !(ax >= 1.0 && ay >= 1.0);
  };
  s.h = h;
  s.c1 = 0.1025;
  s.c2 = 1.05;
  return s;
}

BoxScenario slab_box_scenario(double delta, double h) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("slab scenario: need 0 < delta <= 1");
  BoxScenario s;
  s.name = "slab-box";
  s.b1 = {delta, 1.0};
  s.b2 = {1.0, 1.0};
  s.u_indicator = [](double x, double y) { return std::fabs(x) < 1.0 && std::fabs(y) < 1.0; };
  s.h = h;
  s.c1 = 0.2;
  s.c2 = 1.1;
  s.corollary_trim = false;
  return s;
}

AuditReport box_perturbation_audit(const BoxScenario& s) {
  if (s.b1.size() != 2 || s.b2.size() != 2) throw std::invalid_argument("box audit: two-dimensional boxes only");
  require_boxes(s.b1, s.b2);
  if (!s.u_indicator) throw std::invalid_argument("box audit: missing U indicator");
  if (!(s.h > 0.0)) throw std::invalid_argument("box audit: need h > 0");

  AuditReport rep("perturb-box", {"x", "y", "phi_U", "ratio_upper", "ratio_lower"});
  rep.config["scenario"] = s.name;
  rep.config["h"] = fmt(s.h);
  rep.config["C1"] = fmt(s.c1);
  rep.config["C2"] = fmt(s.c2);

  const auto cond = check_box_conditions(s.b1, s.b2, s.c1, s.c2);
  rep.summary["C1_needed"] = cond.c1_needed;
  rep.summary["C2_needed"] = cond.c2_needed;
  rep.summary["C2_implied"] = cond.implied_c2;
  rep.check("implication recthyp1 => recthyp2 with sqrt(C1+1)", cond.implication_ok,
            "C2 needed " + fmt(cond.c2_needed) + ", implied " + fmt(cond.implied_c2));
  if (cond.recthyp1 && cond.recthyp2) {
    rep.report_only("box conditions hold", "C1 needed " + fmt(cond.c1_needed) + ", C2 needed " + fmt(cond.c2_needed));
  } else {
    rep.report_only("box conditions violated", "recthyp1 " + std::string(cond.recthyp1 ? "yes" : "no") +
                                                   ", recthyp2 " + (cond.recthyp2 ? "yes" : "no"));
  }

  // One lattice for all three domains: the bounding box of B2.
  const double X = s.b2[0], Y = s.b2[1];
  const std::vector<double> a = s.b1, b = s.b2;
  const auto solve = [&](std::function<bool(double, double)> ind) {
    CartesianDomain2D d{std::move(ind), -X, X, -Y, Y};
    return spectral2d::solve_cartesian(d, s.h, 1);
  };
  const auto sol_b2 = solve([X, Y](double x, double y) { return std::fabs(x) < X && std::fabs(y) < Y; });
  const auto sol_u = solve(s.u_indicator);
  const auto sol_b1 = solve([a](double x, double y) { return std::fabs(x) < a[0] && std::fabs(y) < a[1]; });
  for (std::size_t q = 0; q < sol_u.mask.size(); ++q) {
    if ((sol_b1.mask[q] && !sol_u.mask[q]) || (sol_u.mask[q] && !sol_b2.mask[q])) {
      throw std::invalid_argument("box audit: U is not between B1 and B2 on the grid");
    }
  }
  const double l2 = sol_b2.eigenvalues_grid[0], lu = sol_u.eigenvalues_grid[0], l1 = sol_b1.eigenvalues_grid[0];
  rep.summary["lambda_B2"] = l2;
  rep.summary["lambda_U"] = lu;
  rep.summary["lambda_B1"] = l1;
  const double etol = 1e-10 * l1;
  rep.check("lambda(B2) <= lambda(U) <= lambda(B1)", l2 <= lu + etol && lu <= l1 + etol,
            fmt(l2) + " <= " + fmt(lu) + " <= " + fmt(l1));

  const auto& g = sol_u.grid;
  const double hx = g.hx(), hy = g.hy();
  double tx = a[0], ty = a[1];
  if (s.corollary_trim) {
    const double cx = a[0] - (b[0] - a[0]), cy = a[1] - (b[1] - a[1]);
    if (cx > 2.0 * hx && cy > 2.0 * hy) {
      tx = cx;
      ty = cy;
    }
  }
  tx -= 2.0 * hx;
  ty -= 2.0 * hy;

  double upper = 0.0, lower = inf;
  std::size_t used_lower = 0;
  for (std::size_t i = 0; i <= g.nx; ++i) {
    for (std::size_t j = 0; j <= g.ny; ++j) {
      const std::size_t q = g.index(i, j);
      if (!sol_u.mask[q]) continue;
      const double x = g.x(i), y = g.y(j);
      const double pu = sol_u.eigenvectors[0][q];
      const double pb2 = box_phi(b, x, y);
      const double ru = pb2 > 0.0 ? pu / pb2 : std::numeric_limits<double>::quiet_NaN();
      if (pb2 > 0.0) upper = std::max(upper, ru);
      double rl = std::numeric_limits<double>::quiet_NaN();
      if (std::fabs(x) <= tx + 1e-12 && std::fabs(y) <= ty + 1e-12) {
        rl = pu / box_phi(a, x, y);
        lower = std::min(lower, rl);
        ++used_lower;
      }
      // Keep the table small: every fourth node per direction.
      if (i % 4 == 0 && j % 4 == 0) rep.add_row({x, y, pu, ru, rl});
    }
  }
  if (used_lower == 0) throw std::invalid_argument("box audit: trimmed inner box is empty at this resolution");
  rep.summary["max_ratio_upper"] = upper;
  rep.summary["min_ratio_lower"] = lower;
  rep.summary["trimmed_nodes"] = static_cast<double>(used_lower);
  rep.summary["C"] = std::max(upper, lower > 0.0 ? 1.0 / lower : inf);
  rep.report_only("ratio constant", "C = " + fmt(rep.summary["C"]));
  return rep;
}

AnnulusScenario identity_annulus_scenario(double eps) {
  AnnulusScenario s;
  s.name = "identity-annulus";
  s.eps = eps;
  s.a_eps = 0.0;
  s.b_eps = 0.0;
  s.u_rmin = [](double) { return 1.0; };
  s.u_rmax = [eps](double) { return 1.0 + eps; };
  s.hr = eps / 100.0;
  return s;
}

AnnulusScenario bumpy_annulus_scenario(double eps, double amplitude, int k, double p) {
  if (!(eps > 0.0)) throw std::invalid_argument("bumpy scenario: need eps > 0");
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) throw std::invalid_argument("bumpy scenario: need 0 <= amplitude <= 1");
  AnnulusScenario s;
  s.name = "bumpy-annulus";
  s.eps = eps;
  s.a_eps = std::pow(eps, p);
  s.b_eps = s.a_eps;
  const double ae = s.a_eps, be = s.b_eps, kk = k;
  s.u_rmin = [=](double t) { return 1.0 - ae * amplitude * 0.5 * (1.0 + std::sin(kk * t)); };
  s.u_rmax = [=](double t) { return 1.0 + eps + be * amplitude * 0.5 * (1.0 + std::cos(kk * t)); };
  s.hr = eps / 100.0;
  s.regime_check = p >= 3.0;
  return s;
}

AnnulusScenario arc_annulus_scenario(double eps, double eta) {
  AnnulusScenario s = bumpy_annulus_scenario(eps, 1.0, 5, 3.0);
  s.name = "arc-annulus";
  s.full_circle = false;
  s.theta_lo = 0.0;
  s.theta_hi = 0.75 * pi;
  s.eta = eta;
  s.u_theta_lo = -0.5 * eta;
  s.u_theta_hi = 0.75 * pi + 0.5 * eta;
  s.ntheta = 540;
  return s;
}

AuditReport annulus_perturbation_audit(const AnnulusScenario& s) {
  if (!(s.eps > 0.0)) throw std::invalid_argument("annulus audit: need eps > 0");
  if (!(s.a_eps >= 0.0) || !(s.b_eps >= 0.0) || !(s.a_eps < 1.0)) {
    throw std::invalid_argument("annulus audit: need 0 <= a_eps < 1, b_eps >= 0");
  }
  if (!s.u_rmin || !s.u_rmax) throw std::invalid_argument("annulus audit: missing U boundary");
  if (!(s.hr > 0.0) || s.ntheta < 16) throw std::invalid_argument("annulus audit: bad grid");
  if (!s.full_circle) {
    if (!(s.theta_hi > s.theta_lo) || !(s.eta >= 0.0)) throw std::invalid_argument("annulus audit: bad window");
    if (s.u_theta_lo > s.theta_lo || s.u_theta_hi < s.theta_hi || s.u_theta_lo < s.theta_lo - s.eta ||
        s.u_theta_hi > s.theta_hi + s.eta) {
      throw std::invalid_argument("annulus audit: U window must lie between the windows of A and B");
    }
  }
  if (s.eps / s.hr < 8.0) throw std::invalid_argument("annulus audit: fewer than 8 radial cells across A");

  const double eps = s.eps;
  AuditReport rep("perturb-annulus", {"r", "theta", "phi_U", "ratio_upper", "ratio_lower", "ratio_core"});
  rep.config["scenario"] = s.name;
  rep.config["eps"] = fmt(eps);
  rep.config["a_eps"] = fmt(s.a_eps);
  rep.config["b_eps"] = fmt(s.b_eps);
  rep.config["hr"] = fmt(s.hr);
  rep.config["ntheta"] = std::to_string(s.ntheta);
  if (!s.full_circle) rep.config["eta"] = fmt(s.eta);

  const double e3 = eps * eps * eps;
  if (s.regime_check) {
    rep.check("a_eps <= C1 eps^3", s.a_eps <= s.c1 * e3 * (1.0 + 1e-12), fmt(s.a_eps) + " vs " + fmt(s.c1 * e3));
    rep.check("b_eps <= C2 eps^3", s.b_eps <= s.c2 * e3 * (1.0 + 1e-12), fmt(s.b_eps) + " vs " + fmt(s.c2 * e3));
  } else {
    rep.report_only("regime flags off", "a_eps = " + fmt(s.a_eps) + ", b_eps = " + fmt(s.b_eps));
  }

  PolarGrid grid;
  grid.r_lo = 1.0 - s.a_eps;
  grid.r_hi = 1.0 + eps + s.b_eps;
  grid.nr = static_cast<std::size_t>(std::max<long long>(8, std::llround((grid.r_hi - grid.r_lo) / s.hr)));
  grid.ntheta = s.ntheta;
  grid.wrap = s.full_circle;
  grid.theta_lo = s.full_circle ? 0.0 : s.theta_lo - s.eta;
  grid.theta_hi = s.full_circle ? 2.0 * pi : s.theta_hi + s.eta;

  const double a_lo = 1.0, a_hi = 1.0 + eps;
  // The outer domain is the grid box itself, so pad by a node on each side.
  const double pad_r = grid.hr(), pad_t = s.full_circle ? 0.0 : grid.htheta();
  const double bl = grid.r_lo - pad_r, bh = grid.r_hi + pad_r;
  PolarGrid gext = grid;
  gext.r_lo = bl;
  gext.r_hi = bh;
  gext.nr = grid.nr + 2;
  if (!s.full_circle) {
    gext.theta_lo -= pad_t;
    gext.theta_hi += pad_t;
    gext.ntheta += 2;
  }

  PolarDomain2D dom_b{[lo = grid.r_lo](double) { return lo; }, [hi = grid.r_hi](double) { return hi; },
                      grid.theta_lo, grid.theta_hi, s.full_circle};
  PolarDomain2D dom_a{[](double) { return 1.0; }, [a_hi](double) { return a_hi; }, s.theta_lo, s.theta_hi,
                      s.full_circle};
  PolarDomain2D dom_u{s.u_rmin, s.u_rmax, s.u_theta_lo, s.u_theta_hi, s.full_circle};

  auto mb = spectral2d::rasterize(dom_b, gext).mask;
  auto mu = spectral2d::rasterize(dom_u, gext).mask;
  auto ma = spectral2d::rasterize(dom_a, gext).mask;
  for (std::size_t q = 0; q < mu.size(); ++q) {
    if ((ma[q] && !mu[q]) || (mu[q] && !mb[q])) {
      throw std::invalid_argument("annulus audit: U is not between A and B on the grid");
    }
  }
  const auto sol_b = spectral2d::solve_polar_mask(gext, std::move(mb), 1);
  const auto sol_u = spectral2d::solve_polar_mask(gext, std::move(mu), 1);
  const auto sol_a = spectral2d::solve_polar_mask(gext, std::move(ma), 1);

  const double lb = sol_b.eigenvalues_grid[0], lu = sol_u.eigenvalues_grid[0], la = sol_a.eigenvalues_grid[0];
  rep.summary["lambda_B"] = lb;
  rep.summary["lambda_U"] = lu;
  rep.summary["lambda_A"] = la;
  const double etol = 1e-10 * la;
  rep.check("lambda(B) <= lambda(U) <= lambda(A)", lb <= lu + etol && lu <= la + etol,
            fmt(lb) + " <= " + fmt(lu) + " <= " + fmt(la));

  const double hr = gext.hr(), ht = gext.htheta();
  const double margin_r = e3 + 2.0 * hr;
  const double margin_t = s.full_circle ? 0.0 : s.eta + 2.0 * ht;
  const double core_lo = a_lo + std::max(s.a_eps, 0.0) + 2.0 * hr;
  const double core_hi = a_hi - std::max(s.b_eps, 0.0) - 2.0 * hr;
  const double w = s.full_circle ? 2.0 * pi : s.theta_hi - s.theta_lo;
  const auto phi_a0 = [&](double t) {
    if (s.full_circle) return 1.0 / std::sqrt(2.0 * pi);
    return std::sqrt(2.0 / w) * std::sin(pi * (t - s.theta_lo) / w);
  };
  const auto in_window = [&](double t, double m) {
    return s.full_circle || (t >= s.theta_lo + m - 1e-12 && t <= s.theta_hi - m + 1e-12);
  };

  double upper = 0.0, lower = inf, core_max = 0.0, core_min = inf, ca_max = 0.0, ca_min = inf;
  std::size_t n_lower = 0, n_core = 0;
  const std::size_t stride_t = std::max<std::size_t>(1, gext.angular_nodes() / 48);
  const std::size_t stride_r = std::max<std::size_t>(1, gext.radial_nodes() / 24);
  for (std::size_t i = 0; i < gext.radial_nodes(); ++i) {
    const double r = gext.r(i);
    for (std::size_t j = 0; j < gext.angular_nodes(); ++j) {
      const std::size_t q = gext.index(i, j);
      if (!sol_u.mask[q]) continue;
      const double t = gext.theta(j);
      const double pu = sol_u.eigenvectors[0][q];
      const double pb = sol_b.eigenvectors[0][q];
      const double ru = pu / pb;
      upper = std::max(upper, ru);
      double rl = std::numeric_limits<double>::quiet_NaN(), rc = rl;
      if (sol_a.mask[q] && r >= a_lo + margin_r - 1e-12 && r <= a_hi - margin_r + 1e-12 && in_window(t, margin_t)) {
        rl = pu / sol_a.eigenvectors[0][q];
        lower = std::min(lower, rl);
        ++n_lower;
      }
      if (r >= core_lo - 1e-12 && r <= core_hi + 1e-12 && in_window(t, margin_t)) {
        const double big_phi = std::min(r - 1.0, 1.0 + eps - r) / std::pow(eps, 1.5) * phi_a0(t);
        if (sol_a.mask[q]) {
          const double ra = pu / sol_a.eigenvectors[0][q];
          ca_max = std::max(ca_max, ra);
          ca_min = std::min(ca_min, ra);
        }
        if (big_phi > 0.0) {
          rc = pu / big_phi;
          core_max = std::max(core_max, rc);
          core_min = std::min(core_min, rc);
          ++n_core;
        }
      }
      if (i % stride_r == 0 && j % stride_t == 0) rep.add_row({r, t, pu, ru, rl, rc});
    }
  }
  if (n_lower == 0 || n_core == 0) throw std::invalid_argument("annulus audit: trimmed region is empty");
  rep.summary["max_ratio_upper"] = upper;
  rep.summary["min_ratio_lower"] = lower;
  rep.summary["core_spread"] = core_max / core_min;
  rep.summary["core_min"] = core_min;
  rep.summary["core_max"] = core_max;
  rep.summary["core_spread_A"] = ca_max / ca_min;
  rep.summary["C"] = std::max(upper, lower > 0.0 ? 1.0 / lower : inf);
  rep.report_only("ratio constant", "C = " + fmt(rep.summary["C"]));
  return rep;
}

}  // namespace annular::perturb
