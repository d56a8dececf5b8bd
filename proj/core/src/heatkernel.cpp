#include "annular/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "annular/errors.hpp"

namespace annular::heatkernel {
namespace {

using std::numbers::pi;

double interval_lambda(double a, std::size_t k) {
  const double q = static_cast<double>(k) * pi / (2.0 * a);
  return q * q;
}
double interval_phi(double a, std::size_t k, double x) {
  return std::sin(static_cast<double>(k) * pi * (x + a) / (2.0 * a)) / std::sqrt(a);
}

std::vector<double> to_cartesian(const auditors::ChartPoint& p) {
  return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

}  // namespace

Spectrum box_spectrum(std::span<const double> half_widths, std::size_t per_dim) {
  const std::size_t n = half_widths.size();
  if (n < 1 || n > 3) throw std::invalid_argument("box_spectrum: dimension must be 1, 2 or 3");
  if (per_dim < 2) throw std::invalid_argument("box_spectrum: need at least two modes per direction");
  std::vector<double> h(half_widths.begin(), half_widths.end());
  double base = 0.0;
  for (double a : h) {
    if (!(a > 0.0)) throw std::invalid_argument("box_spectrum: half widths must be positive");
    base += interval_lambda(a, 1);
  }
  double cutoff = std::numeric_limits<double>::infinity();
  for (double a : h) cutoff = std::min(cutoff, base - interval_lambda(a, 1) + interval_lambda(a, per_dim + 1));

  struct Entry {
    double lambda;
    std::vector<std::size_t> k;
  };
  std::vector<Entry> entries;
  std::vector<std::size_t> k(n, 1);
  while (true) {
    double lam = 0.0;
    for (std::size_t i = 0; i < n; ++i) lam += interval_lambda(h[i], k[i]);
    if (lam < cutoff) entries.push_back({lam, k});
    std::size_t i = 0;
    while (i < n && ++k[i] > per_dim) k[i++] = 1;
    if (i == n) break;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.lambda < y.lambda; });
  Spectrum s;
  s.dimension = static_cast<int>(n);
  s.cutoff = cutoff;
  s.description = "box product spectrum, " + std::to_string(per_dim) + " modes per direction";
  for (auto& e : entries) {
    double sup = 1.0;
    for (double a : h) sup /= std::sqrt(a);
    s.modes.push_back({e.lambda,
                       [h, kk = e.k](std::span<const double> x) {
                         double v = 1.0;
                         for (std::size_t i = 0; i < h.size(); ++i) v *= interval_phi(h[i], kk[i], x[i]);
                         return v;
                       },
                       sup});
  }
  return s;
}

namespace {

// e^{shift t} p(t, x, y); shifting by lambda_1 keeps large lambda_1 t finite.
KernelValue shifted_kernel(const Spectrum& spectrum, double t, std::span<const double> x, std::span<const double> y,
                           double shift) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_eval: t must be positive");
  if (spectrum.modes.empty()) throw std::invalid_argument("kernel_eval: empty spectrum");
  double p = 0.0, mag = 0.0;
  for (const auto& m : spectrum.modes) {
    const double term = std::exp(-(m.lambda - shift) * t) * m.phi(x) * m.phi(y);
    p += term;
    mag += std::fabs(term);
  }
  // truncation plus a rounding allowance for the cancelling sum
  const double tail = spectrum.tail_bound(t, shift) + 1e3 * std::numeric_limits<double>::epsilon() * mag;
  if (!(tail <= 1e-8 * std::fabs(p))) {
    throw NumericalError("kernel_eval: spectrum too short at t = " + std::to_string(t) + " (tail bound " +
                         std::to_string(tail) + " vs |p| = " + std::to_string(std::fabs(p)) + ")");
  }
  return {p, tail};
}

}  // namespace

KernelValue kernel_eval(const Spectrum& spectrum, double t, std::span<const double> x, std::span<const double> y) {
  return shifted_kernel(spectrum, t, x, y, 0.0);
}

KernelValue normalized_kernel(const Spectrum& spectrum, double t, std::span<const double> x,
                              std::span<const double> y) {
  if (spectrum.modes.empty()) throw std::invalid_argument("normalized_kernel: empty spectrum");
  const auto& m1 = spectrum.modes.front();
  const double base = m1.phi(x) * m1.phi(y);
  if (base == 0.0) throw std::domain_error("normalized_kernel: sample on the nodal set of phi_1");
  const KernelValue k = shifted_kernel(spectrum, t, x, y, m1.lambda);
  return {k.p / base, k.tail / std::fabs(base)};
}

double equilibrium_deviation(const Spectrum& spectrum, double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw std::invalid_argument("equilibrium_deviation: t must be positive");
  const auto& m1 = spectrum.modes.front();
  const double base = m1.phi(x) * m1.phi(y);
  if (base == 0.0) throw std::domain_error("equilibrium_deviation: sample on the nodal set of phi_1");
  double s = 0.0;
  for (std::size_t k = 1; k < spectrum.modes.size(); ++k) {
    const auto& m = spectrum.modes[k];
    s += std::exp(-(m.lambda - m1.lambda) * t) * m.phi(x) * m.phi(y);
  }
  return s / base;
}

AuditReport equilibration_audit(const Spectrum& spectrum, std::span<const std::vector<double>> samples,
                                std::span<const double> t_grid) {
  if (t_grid.size() < 4) throw std::invalid_argument("equilibration_audit: need at least 4 times");
  if (samples.empty()) throw std::invalid_argument("equilibration_audit: no sample points");
  AuditReport rep("equilibration", {"t", "sup_deviation"});
  rep.config["spectrum"] = spectrum.description;
  std::vector<double> ts, logs;
  for (double t : t_grid) {
    double sup = 0.0;
    for (const auto& x : samples) {
      for (const auto& y : samples) sup = std::max(sup, std::fabs(equilibrium_deviation(spectrum, t, x, y)));
    }
    rep.add_row({t, sup});
    ts.push_back(t);
    logs.push_back(std::log(sup));
  }
  const std::size_t from = ts.size() / 2;
  double mt = 0.0, ml = 0.0;
  const double cnt = static_cast<double>(ts.size() - from);
  for (std::size_t i = from; i < ts.size(); ++i) {
    mt += ts[i];
    ml += logs[i];
  }
  mt /= cnt;
  ml /= cnt;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = from; i < ts.size(); ++i) {
    sxy += (ts[i] - mt) * (logs[i] - ml);
    sxx += (ts[i] - mt) * (ts[i] - mt);
  }
  const double rate = -sxy / sxx;
  const double gap = spectrum.spectral_gap();
  rep.summary["fitted_rate"] = rate;
  rep.summary["spectral_gap"] = gap;
  rep.summary["rate_error"] = std::fabs(rate - gap) / gap;
  rep.check("fitted rate within 5% of the spectral gap", std::fabs(rate - gap) <= 0.05 * gap);
  return rep;
}

double box_ratio_1d(double a, double t, double x, double y) {
  if (!(a > 0.0) || !(t > 0.0)) throw std::invalid_argument("box_ratio_1d: need a > 0, t > 0");
  if (std::fabs(x) >= a || std::fabs(y) >= a) throw std::domain_error("box_ratio_1d: points must be interior");
  const double l1 = interval_lambda(a, 1);
  const double base = interval_phi(a, 1, x) * interval_phi(a, 1, y);
  double s = 1.0;
  for (std::size_t k = 2; k < 10000000; ++k) {
    const double decay = std::exp(-(interval_lambda(a, k) - l1) * t);
    s += decay * interval_phi(a, k, x) * interval_phi(a, k, y) / base;
    const double kd = static_cast<double>(k);
    // |phi_k / phi_1| <= k, and later terms decay faster than geometrically
    if (kd * kd * decay <= 1e-17 * std::fabs(s) && (interval_lambda(a, k) - l1) * t > 1.0) break;
  }
  return s;
}

AuditReport box_kernel_bounds_check(std::span<const double> half_widths, std::span<const double> t_grid,
                                    std::size_t samples_per_dim) {
  const std::size_t n = half_widths.size();
  if (n < 1 || n > 3) throw std::invalid_argument("box_kernel_bounds_check: dimension must be 1, 2 or 3");
  if (samples_per_dim < 2) throw std::invalid_argument("box_kernel_bounds_check: need >= 2 samples per direction");
  double amax = 0.0;
  for (double a : half_widths) {
    if (!(a > 0.0)) throw std::invalid_argument("box_kernel_bounds_check: half widths must be positive");
    amax = std::max(amax, a);
  }
  AuditReport rep("box_kernel_bounds", {"t", "min_ratio", "max_ratio", "lower_envelope", "upper_envelope", "C_dev"});
  double c_max = 0.0, c_upper = 0.0, c_lower = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    double lo = 1.0, hi = 1.0, env_lo = 1.0, env_hi = 1.0;
    for (double a : half_widths) {
      double dlo = std::numeric_limits<double>::infinity(), dhi = 0.0;
      for (std::size_t i = 0; i < samples_per_dim; ++i) {
        const double x = -a + (static_cast<double>(i) + 0.5) * 2.0 * a / static_cast<double>(samples_per_dim);
        for (std::size_t j = 0; j < samples_per_dim; ++j) {
          const double y = -a + (static_cast<double>(j) + 0.5) * 2.0 * a / static_cast<double>(samples_per_dim);
          const double q = box_ratio_1d(a, t, x, y);
          dlo = std::min(dlo, q);
          dhi = std::max(dhi, q);
        }
      }
      lo *= dlo;
      hi *= dhi;
      const double c = std::pow(a / std::sqrt(t), 3.0);
      env_lo *= 1.0 - c;
      env_hi *= 1.0 + c;
    }
    const double cdev = std::max(std::fabs(hi - 1.0), std::fabs(lo - 1.0)) / (env_hi - 1.0);
    rep.add_row({t, lo, hi, env_lo, env_hi, cdev});
    c_upper = std::max(c_upper, hi / env_hi);
    if (t >= amax * amax) {
      c_max = std::max(c_max, cdev);
      if (env_lo > 0.0) c_lower = std::min(c_lower, lo / env_lo);
    }
  }
  rep.summary["C_max"] = c_max;
  rep.summary["C_upper"] = c_upper;
  rep.summary["C_lower"] = c_lower;

  // Product identity against the n-dimensional spectral sum.
  if (n >= 2) {
    const Spectrum s = box_spectrum(half_widths, 48);
    double defect = 0.0;
    for (double t : t_grid) {
      if (t < 0.25 * amax * amax) continue;
      for (double f : {-0.6, 0.1, 0.5}) {
        std::vector<double> x(n), y(n);
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          x[i] = f * half_widths[i];
          y[i] = -0.3 * half_widths[i] * static_cast<double>(i + 1) / static_cast<double>(n);
          prod *= box_ratio_1d(half_widths[i], t, x[i], y[i]);
        }
        const double full = 1.0 + equilibrium_deviation(s, t, x, y);
        defect = std::max(defect, std::fabs(full - prod) / prod);
      }
    }
    rep.summary["product_identity_defect"] = defect;
    rep.check("product identity to 1e-12", defect <= 1e-12);
  }
  rep.check("deviation constant C <= 10 for t >= a^2", c_max <= 10.0);
  return rep;
}

AuditReport gaussian_hke_audit(const Spectrum& spectrum, const geometry::MassGrid& phi2_grid,
                               std::span<const double> t_grid, std::span<const HkeSample> pairs) {
  if (phi2_grid.weight().tag != geometry::WeightTag::dirichlet_phi_squared) {
    throw std::invalid_argument("gaussian_hke_audit: volumes must use the phi^2 weight");
  }
  const auto& g = phi2_grid.geometry();
  AuditReport rep("gaussian_hke", {"t", "r_x", "theta_x", "r_y", "theta_y", "sigma", "p_tilde", "R"});
  rep.config["spectrum"] = spectrum.description;
  rep.config["metric"] = "surrogate max(|dr|, base arc)";
  struct Obs {
    double u, R;
  };
  std::vector<Obs> obs;
  std::size_t skipped = 0;
  for (double t : t_grid) {
    const double st = std::sqrt(t);
    for (const auto& pr : pairs) {
      const auto x = to_cartesian(pr.x), y = to_cartesian(pr.y);
      KernelValue k;
      try {
        k = normalized_kernel(spectrum, t, x, y);
      } catch (const NumericalError&) {
        ++skipped;
        continue;
      }
      const double sig = g.sigma(pr.x.r, pr.x.theta, pr.y.r, pr.y.theta);
      const double R = k.p * std::sqrt(phi2_grid.ball_measure(pr.x.r, pr.x.theta, st) *
                                       phi2_grid.ball_measure(pr.y.r, pr.y.theta, st));
      rep.add_row({t, pr.x.r, pr.x.theta, pr.y.r, pr.y.theta, sig, k.p, R});
      if (!(R > 0.0)) {
        rep.flag_last("nonpositive kernel");
        continue;
      }
      obs.push_back({sig * sig / t, R});
    }
  }
  rep.summary["skipped"] = static_cast<double>(skipped);
  rep.summary["samples"] = static_cast<double>(obs.size());
  if (obs.empty()) throw NumericalError("gaussian_hke_audit: no certified samples");

  double rmax = 0.0, near_min = std::numeric_limits<double>::infinity();
  for (const auto& o : obs) {
    rmax = std::max(rmax, o.R);
    if (o.u <= 1.0) near_min = std::min(near_min, o.R);
  }
  if (!std::isfinite(near_min)) throw NumericalError("gaussian_hke_audit: no near-diagonal samples");
  const double c_hi = std::exp(1.0) * rmax;
  const double c_lo = near_min / std::exp(1.0);
  double c4 = 0.0, c2 = std::numeric_limits<double>::infinity();
  for (const auto& o : obs) {
    c4 = std::max(c4, o.u / std::log(c_hi / o.R));
    if (o.R < c_lo) c2 = std::min(c2, o.u / std::log(c_lo / o.R));
  }
  rep.summary["c_lo"] = c_lo;
  rep.summary["c_hi"] = c_hi;
  rep.summary["c2"] = c2;
  rep.summary["c4"] = c4;
  const bool finite = std::isfinite(c2) && c2 > 0.0 && c4 > 0.0 && c_lo > 0.0 && std::isfinite(c_hi);
  rep.check("finite positive constants", finite, finite ? "" : "degenerate fit (no off-diagonal decay observed)");
  return rep;
}

std::vector<HkeSample> standard_hke_pairs(const geometry::ProductGeometry& g) {
  if (!g.angular) throw std::invalid_argument("standard_hke_pairs: needs an annular chart");
  const double w = g.r_hi - g.r_lo;
  const double t0 = g.periodic ? 0.0 : g.theta_lo + 0.5 * (g.theta_hi - g.theta_lo);
  const double reach = g.periodic ? pi : 0.5 * (g.theta_hi - g.theta_lo) * 0.95;
  std::vector<double> offsets{0.0};
  for (double d = 0.5 * w; d < reach; d *= 2.0) offsets.push_back(d);
  offsets.push_back(reach);
  std::vector<HkeSample> out;
  for (double rx : {g.r_lo + 0.5 * w, g.r_lo + 0.25 * w}) {
    for (double ry : {g.r_lo + 0.5 * w, g.r_lo + 0.25 * w, g.r_lo + 0.75 * w}) {
      for (double d : offsets) out.push_back({{rx, t0}, {ry, t0 + d}});
    }
  }
  return out;
}

}  // namespace annular::heatkernel
