// Acceptance suite: one PASS/FAIL line per criterion. `--only k[,k...]` runs a subset.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "annular/auditors.hpp"
#include "annular/bases.hpp"
#include "annular/estimates.hpp"
#include "annular/geometry.hpp"
#include "annular/heatkernel.hpp"
#include "annular/numerics.hpp"
#include "annular/perturb.hpp"
#include "annular/radial.hpp"
#include "oracles.hpp"

using namespace annular;
using oracle::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome radial_exactness() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double lam = radial::solve_radial(3, 1.0, 2.0, 0.0, 4096, 1)[0].lambda;
  const double dt = seconds_since(t0);
  const double rel = std::abs(lam - pi * pi) / (pi * pi);
  o.require(rel <= 1e-8, "relative error " + num(rel));
  o.require(dt < 1.0, "runtime " + num(dt) + " s");
  o.note("lambda " + num(lam) + ", rel " + num(rel) + ", " + num(dt) + " s");
  return o;
}

Outcome annulus_sandwich() {
  Outcome o;
  int passed = 0, total = 0;
  for (int n : {2, 3, 4, 5}) {
    for (double x : {1.05, 1.2, 1.5, 2.0, 3.0, 5.0, 10.0}) {
      const double lam = radial::solve_radial(n, 1.0, x, 0.0, 4096, 1)[0].lambda;
      const auto rep = estimates::sandwich_check("lambda", lam, estimates::annulus_eigenvalue_bounds(n, 1.0, x));
      ++total;
      if (rep.pass) ++passed;
      else o.require(false, "n=" + std::to_string(n) + " b/a=" + num(x) + " slack " + num(rep.slack));
    }
  }
  o.note(std::to_string(passed) + "/" + std::to_string(total));
  return o;
}

Outcome decomposition_sandwich() {
  Outcome o;
  const std::vector<bases::BaseDomain> bs{bases::CircleArc{pi}, bases::CircleArc{3 * pi / 4},
                                          bases::OrthantIntersection{3, 1}, bases::OrthantIntersection{3, 2}};
  int passed = 0, total = 0;
  for (const auto& base : bs) {
    const int n = bases::ambient_dimension(base);
    const double l0 = bases::base_eigendata(base).lambda0;
    for (auto [a, b] : {std::pair{1.0, 1.2}, {1.0, 2.0}}) {
      const double lam_a = radial::solve_radial(n, a, b, 0.0, 4096, 1)[0].lambda;
      const double lam = radial::solve_radial(n, a, b, l0, 4096, 1)[0].lambda;
      const auto rep = estimates::sandwich_check("lambda", lam, estimates::decomposition_bounds(lam_a, l0, a, b));
      ++total;
      if (rep.pass) ++passed;
      else o.require(false, bases::describe(base) + " (" + num(a) + "," + num(b) + ") slack " + num(rep.slack));
    }
  }
  o.note(std::to_string(passed) + "/" + std::to_string(total));
  return o;
}

Outcome thin_asymptotic() {
  Outcome o;
  const double eps = 0.01;
  for (int n : {2, 3, 4}) {
    const double v = radial::solve_radial(n, 1.0, 1.0 + eps, 0.0, 4096, 1)[0].lambda * eps * eps / (pi * pi);
    o.require(v >= 0.99 && v <= 1.01, "n=" + std::to_string(n) + " value " + num(v));
    o.note("n=" + std::to_string(n) + ": " + num(v));
  }
  return o;
}

Outcome caricature_comparability() {
  Outcome o;
  const double margin = 0.05;
  for (int n : {2, 3}) {
    const auto thin = estimates::radial_comparability(n, 1.0, 1.5, estimates::ThinAnnulus{n, 1.0, 1.5}, margin);
    const auto wide = estimates::radial_comparability(n, 1.0, 4.0, estimates::NonThinAnnulus{n, 1.0, 4.0}, margin);
    o.require(thin.spread <= 10.0, "thin n=" + std::to_string(n) + " spread " + num(thin.spread));
    o.require(wide.spread <= 10.0, "non-thin n=" + std::to_string(n) + " spread " + num(wide.spread));
    o.note("n=" + std::to_string(n) + " thin " + num(thin.spread) + ", non-thin " + num(wide.spread));
  }
  const auto cosine = estimates::radial_comparability(
      3, 1.0, 1.5,
      estimates::ThinAnnularProduct{3, 1.0, 1.5, bases::FullSphere{3}, estimates::RadialPrefactor::pointwise}, margin);
  const double dev = std::max(std::abs(cosine.sup_ratio - 1.0), std::abs(cosine.inf_ratio - 1.0));
  o.require(dev <= 1e-3, "cosine form deviates by " + num(dev));
  o.note("cosine deviation " + num(dev));
  return o;
}

Outcome hadamard() {
  Outcome o;
  const double ts[] = {0.05, 0.1, 0.5, 1.0};
  double lo = 1e300, hi = 0.0;
  for (const auto& r : estimates::hadamard_scan(3, ts)) {
    o.require(std::abs(r.normalized - 2 * pi * pi) <= 0.01 * 2 * pi * pi, "n=3 t=" + num(r.t) + ": " + num(r.normalized));
  }
  for (const auto& r : estimates::hadamard_scan(2, ts)) {
    lo = std::min(lo, r.normalized);
    hi = std::max(hi, r.normalized);
  }
  o.require(lo >= 10.0 && hi <= 40.0, "n=2 range [" + num(lo) + ", " + num(hi) + "]");
  o.note("n=2 range [" + num(lo) + ", " + num(hi) + "]");
  return o;
}

Outcome eigengap() {
  Outcome o;
  for (int n : {2, 3}) {
    for (double eps : {0.1, 0.2, 0.3}) {
      const double d = eps * eps * eps;
      const auto g = estimates::eigengap(n, eps, d, d);
      o.require(g.gap > 0.0 && g.gap <= 20.0, "n=" + std::to_string(n) + " eps=" + num(eps) + " gap " + num(g.gap));
      if (g.gap > 0.0 && g.gap <= 20.0) o.note("n=" + std::to_string(n) + " eps=" + num(eps) + " gap " + num(g.gap));
    }
  }
  return o;
}

// Brute-force doubling constant of the interval (0, 1) with weight 2 sin^2(pi x)
// on a dense midpoint grid.
double brute_interval_doubling(const std::vector<double>& centers, const std::vector<double>& radii) {
  const int n = 200000;
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n, s = std::sin(pi * x);
    cum[i + 1] = cum[i] + 2 * s * s / n;
  }
  auto mass = [&](double c, double r) {
    const double lo = std::clamp(c - r, 0.0, 1.0), hi = std::clamp(c + r, 0.0, 1.0);
    return cum[static_cast<int>(std::lround(hi * n))] - cum[static_cast<int>(std::lround(lo * n))];
  };
  double d = 0.0;
  for (double c : centers)
    for (double r : radii) d = std::max(d, mass(c, 2 * r) / mass(c, r));
  return d;
}

Outcome vd_audit() {
  Outcome o;
  std::map<geometry::WeightTag, std::vector<double>> ds;
  for (double eps : {1.0, 0.5, 0.25, 0.1}) {
    const auto g = geometry::ProductGeometry::annulus(1.0, 1.0 + eps);
    for (const auto& w : {geometry::WeightFunction::phi_squared(g), geometry::WeightFunction::uniform(g)}) {
      const auto grid = geometry::MassGrid::resolving(g, w, eps / 16.0, 8.0);
      const auto centers = auditors::standard_centers(g);
      const auto radii = auditors::dyadic_radii(eps / 16.0, g.diameter());
      ds[w.tag].push_back(auditors::doubling_profile(grid, centers, radii).summary_at("D_hat"));
    }
  }
  for (const auto& [tag, v] : ds) {
    const double worst = *std::max_element(v.begin(), v.end());
    double var = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) var = std::max(var, std::abs(v[i] - v[i - 1]) / v[i - 1]);
    o.require(worst < 64.0, geometry::to_string(tag) + " D_hat " + num(worst));
    o.require(var < 0.25, geometry::to_string(tag) + " variation " + num(var));
    o.note(geometry::to_string(tag) + ": max " + num(worst) + ", variation " + num(var));
  }
  const auto ig = geometry::ProductGeometry::interval(0.0, 1.0);
  const geometry::MassGrid grid(ig, geometry::WeightFunction::phi_squared(ig), 4096, 1);
  const std::vector<double> centers{0.0, 0.25, 0.5}, radii{0.5, 0.25, 0.125, 0.0625};
  std::vector<auditors::ChartPoint> cp;
  for (double c : centers) cp.push_back({c, 0.0});
  const double d = auditors::doubling_profile(grid, cp, radii).summary_at("D_hat");
  const double ref = brute_interval_doubling(centers, radii);
  o.require(std::abs(d - ref) <= 0.02 * ref, "interval D_hat " + num(d) + " vs brute force " + num(ref));
  o.note("interval " + num(d) + " vs " + num(ref));
  return o;
}

Outcome pi_audit() {
  Outcome o;
  double pmin = 1e300, pmax = 0.0, fmax = 1.0;
  for (double eps : {1.0, 0.5, 0.25, 0.1}) {
    const auto g = geometry::ProductGeometry::annulus(1.0, 1.0 + eps);
    for (const auto& w : {geometry::WeightFunction::phi_squared(g), geometry::WeightFunction::uniform(g)}) {
      const auto centers = auditors::standard_centers(g);
      const auto pc = auditors::poincare_profile(g, w, centers, auditors::dyadic_radii(eps / 2.0, g.diameter()),
                                                 auditors::PoincareMode::continuous_grid);
      const auto pm = auditors::poincare_matched(g, w, centers, auditors::dyadic_radii(eps, g.diameter()), eps);
      pmin = std::min(pmin, pc.summary_at("P_min"));
      pmax = std::max(pmax, pc.summary_at("P_max"));
      fmax = std::max(fmax, pm.summary_at("max_factor"));
    }
  }
  o.require(pmin >= 1.0 / 16.0 && pmax <= 4.0, "P_hat range [" + num(pmin) + ", " + num(pmax) + "]");
  o.require(fmax <= 4.0, "matched factor " + num(fmax));
  o.note("P_hat in [" + num(pmin) + ", " + num(pmax) + "], matched factor " + num(fmax));
  return o;
}

Outcome sector() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = auditors::sector_counterexample(0.125);
  const double rel = std::abs(e.log_v_outer - e.predicted_log_outer) / std::abs(e.predicted_log_outer);
  o.require(rel <= 0.25, "beta=1/8 log V off by " + num(rel));
  double prev = 0.0;
  for (double beta : {1.0 / 3, 1.0 / 4, 1.0 / 5}) {
    const auto s = auditors::sector_counterexample(beta);
    o.require(s.ratio >= 0.5 * s.predicted_ratio, "beta=" + num(beta) + " ratio " + num(s.ratio) + " < half of " +
                                                      num(s.predicted_ratio));
    o.require(s.ratio > prev, "ratio not increasing at beta=" + num(beta));
    prev = s.ratio;
  }
  o.require(e.ratio > prev, "ratio not increasing at beta=1/8");
  const double dt = seconds_since(t0);
  o.require(dt < 10.0, "runtime " + num(dt) + " s");
  o.note("beta=1/8 log rel " + num(rel) + ", " + num(dt) + " s");
  return o;
}

Outcome heat_oracle() {
  Outcome o;
  const double a = 1.0, hw[] = {a};
  const auto sp = heatkernel::box_spectrum(hw, 300);
  auto p = [&](double t, double x, double y) {
    const double xs[] = {x}, ys[] = {y};
    return heatkernel::kernel_eval(sp, t, xs, ys).p;
  };
  double worst = 0.0;
  for (double x = -0.95; x < 1.0; x += 0.1)
    for (double y = -0.95; y < 1.0; y += 0.1)
      worst = std::max(worst, std::abs(p(0.1, x, y) - oracle::interval_kernel_images(a, 0.1, x, y)));
  o.require(worst <= 1e-10, "images defect " + num(worst));
  // p(0.2, x, y) = int p(0.1, x, z) p(0.1, z, y) dz on interior Gauss nodes; the
  // pairs keep every factor large enough to be certified by kernel_eval
  const auto q = numerics::composite_gauss_legendre(200, 10, -a, a);
  double ck = 0.0;
  for (auto [x, y] : {std::pair{0.3, -0.2}, {-0.5, 0.4}, {0.0, 0.0}}) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) lhs += q.weights[i] * p(0.1, x, q.nodes[i]) * p(0.1, q.nodes[i], y);
    ck = std::max(ck, std::abs(lhs - p(0.2, x, y)) / p(0.2, x, y));
  }
  o.require(ck <= 1e-6, "Chapman-Kolmogorov defect " + num(ck));
  o.note("images " + num(worst) + ", CK " + num(ck));
  return o;
}

Outcome equilibration() {
  Outcome o;
  auto rate_error = [](const Spectrum& s, const std::vector<std::vector<double>>& samples) {
    std::vector<double> t;
    for (int i = 0; i < 12; ++i) t.push_back((0.5 + 0.5 * i) / s.spectral_gap());
    return heatkernel::equilibration_audit(s, samples, t).summary_at("rate_error");
  };
  const std::vector<double> hw{1.0, 0.7};
  const double box_err = rate_error(heatkernel::box_spectrum(hw, 40), {{0.0, 0.0}, {0.5, -0.21}, {-0.7, 0.294}});
  const radial::AnnularDomainSpec spec{2, 1.0, 1.1, bases::FullSphere{2}};
  std::vector<std::vector<double>> pts;
  for (double th : {0.0, 1.0, 2.5, 4.0})
    for (double f : {0.3, 0.5, 0.8}) pts.push_back({(1 + 0.1 * f) * std::cos(th), (1 + 0.1 * f) * std::sin(th)});
  const double ann_err = rate_error(radial::assemble_spectrum(spec, 40, 3, 1024), pts);
  o.require(box_err <= 0.05, "box rate error " + num(box_err));
  o.require(ann_err <= 0.05, "annulus rate error " + num(ann_err));
  const double ts[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  const double cmax = heatkernel::box_kernel_bounds_check(hw, ts, 16).summary_at("C_max");
  o.require(cmax <= 10.0, "box C " + num(cmax));
  o.note("rate errors " + num(box_err) + " / " + num(ann_err) + ", box C " + num(cmax));
  return o;
}

Outcome hke() {
  Outcome o;
  std::vector<std::array<double, 4>> cs;
  for (double eps : {0.1, 0.05}) {
    const radial::AnnularDomainSpec spec{2, 1.0, 1.0 + eps, bases::FullSphere{2}};
    const auto s = radial::assemble_spectrum(spec, 400, 6, 1024);
    const auto g = geometry::ProductGeometry::annulus(1.0, 1.0 + eps);
    const auto mg = geometry::MassGrid::resolving(g, geometry::WeightFunction::phi_squared(g), eps / 8.0);
    std::vector<double> t;
    for (double v = eps * eps / 2.0; v <= 2.0; v *= 2.0) t.push_back(v);
    const auto pairs = heatkernel::standard_hke_pairs(g);
    const auto rep = heatkernel::gaussian_hke_audit(s, mg, t, pairs);
    const std::array<double, 4> c{rep.summary_at("c_lo"), rep.summary_at("c_hi"), rep.summary_at("c2"),
                                  rep.summary_at("c4")};
    for (double v : c) o.require(std::isfinite(v) && v > 0.0, "eps=" + num(eps) + " constant " + num(v));
    o.note("eps=" + num(eps) + ": " + num(c[0]) + ", " + num(c[1]) + ", " + num(c[2]) + ", " + num(c[3]));
    cs.push_back(c);
  }
  double change = 0.0;
  for (std::size_t k = 0; k < 4; ++k) change = std::max(change, std::abs(cs[1][k] - cs[0][k]) / cs[0][k]);
  o.require(change < 0.5, "relative change " + num(change));
  o.note("change " + num(change));
  return o;
}

Outcome perturbation() {
  Outcome o;
  auto ordered = [&](const AuditReport& r, const char* outer, const char* mid, const char* inner) {
    const double b = r.summary_at(outer), u = r.summary_at(mid), a = r.summary_at(inner);
    o.require(b <= u * (1 + 1e-12) && u <= a * (1 + 1e-12), r.name + " eigenvalue order " + num(b) + ", " + num(u) +
                                                                ", " + num(a));
  };
  auto identity = [&](const AuditReport& r) {
    const double up = r.summary_at("max_ratio_upper"), lo = r.summary_at("min_ratio_lower");
    o.require(std::abs(up - 1.0) <= 2e-2 && std::abs(lo - 1.0) <= 2e-2, r.name + " ratios " + num(lo) + ", " + num(up));
  };
  auto bounded = [&](const AuditReport& r) {
    const double c = r.summary_at("C");
    o.require(std::isfinite(c) && c <= 10.0, r.name + " C " + num(c));
    o.note(r.name + " C " + num(c));
  };

  const auto id_box = perturb::box_perturbation_audit(perturb::identity_box_scenario());
  identity(id_box);
  bounded(id_box);
  ordered(id_box, "lambda_B2", "lambda_U", "lambda_B1");
  const auto notched = perturb::box_perturbation_audit(perturb::notched_box_scenario());
  bounded(notched);
  ordered(notched, "lambda_B2", "lambda_U", "lambda_B1");
  const auto slab = perturb::box_perturbation_audit(perturb::slab_box_scenario(0.1));
  ordered(slab, "lambda_B2", "lambda_U", "lambda_B1");

  const auto id_ann = perturb::annulus_perturbation_audit(perturb::identity_annulus_scenario(0.3));
  identity(id_ann);
  bounded(id_ann);
  ordered(id_ann, "lambda_B", "lambda_U", "lambda_A");
  const auto bumpy = perturb::annulus_perturbation_audit(perturb::bumpy_annulus_scenario(0.3));
  bounded(bumpy);
  o.require(bumpy.summary_at("core_spread") <= 10.0, "bumpy core spread " + num(bumpy.summary_at("core_spread")));
  ordered(bumpy, "lambda_B", "lambda_U", "lambda_A");
  const auto arc = perturb::annulus_perturbation_audit(perturb::arc_annulus_scenario(0.3));
  bounded(arc);
  o.require(std::isfinite(arc.summary_at("core_spread_A")), "arc core spread not finite");
  ordered(arc, "lambda_B", "lambda_U", "lambda_A");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "radial exactness", radial_exactness},
      {2, "annulus eigenvalue sandwich", annulus_sandwich},
      {3, "decomposition sandwich", decomposition_sandwich},
      {4, "thin-regime asymptotic", thin_asymptotic},
      {5, "caricature comparability", caricature_comparability},
      {6, "Hadamard scan", hadamard},
      {7, "eigengap", eigengap},
      {8, "volume doubling audit", vd_audit},
      {9, "Poincare audit", pi_audit},
      {10, "sector counterexample", sector},
      {11, "heat kernel oracle", heat_oracle},
      {12, "equilibration", equilibration},
      {13, "Gaussian heat kernel fit", hke},
      {14, "perturbation audits", perturbation},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: %s [--only k[,k...]]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failed;
    std::printf("criterion %2d %s  %s (%.1f s): %s\n", c.id, out.pass ? "PASS" : "FAIL", c.name, seconds_since(t0),
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
