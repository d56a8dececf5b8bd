#include "annular/spectral2d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "annular/errors.hpp"
#include "annular/numerics.hpp"
#include "annular/radial.hpp"

namespace annular::spectral2d {
namespace {

using std::numbers::pi;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * pi);
  if (t < 0) t += 2.0 * pi;
  return t;
}

struct Numbering {
  std::vector<std::size_t> unknown_of_node;
  std::vector<std::size_t> node_of_unknown;
};

Numbering number_unknowns(const std::vector<std::uint8_t>& mask) {
  Numbering num;
  num.unknown_of_node.assign(mask.size(), kNone);
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (mask[p]) {
      num.unknown_of_node[p] = num.node_of_unknown.size();
      num.node_of_unknown.push_back(p);
    }
  }
  if (num.node_of_unknown.empty()) throw std::invalid_argument("grid domain is empty");
  return num;
}

// Neighbours of a node in a 4-connected structured grid.
using NeighbourFn = std::function<void(std::size_t, std::vector<std::size_t>&)>;

void require_connected(const std::vector<std::uint8_t>& mask, const Numbering& num, const NeighbourFn& neighbours) {
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::deque<std::size_t> queue{num.node_of_unknown.front()};
  seen[queue.front()] = 1;
  std::size_t reached = 0;
  std::vector<std::size_t> nb;
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    ++reached;
    neighbours(p, nb);
    for (std::size_t q : nb) {
      if (mask[q] && !seen[q]) {
        seen[q] = 1;
        queue.push_back(q);
      }
    }
  }
  if (reached != num.node_of_unknown.size()) {
    throw std::invalid_argument("grid domain is disconnected (" + std::to_string(reached) + " of " +
                                std::to_string(num.node_of_unknown.size()) + " nodes reachable)");
  }
}

std::vector<int> distance_to_complement(const std::vector<std::uint8_t>& mask, const NeighbourFn& neighbours,
                                        int cap) {
  std::vector<int> dist(mask.size(), cap);
  std::deque<std::size_t> queue;
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (!mask[p]) {
      dist[p] = 0;
      queue.push_back(p);
    }
  }
  std::vector<std::size_t> nb;
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    if (dist[p] >= cap) continue;
    neighbours(p, nb);
    for (std::size_t q : nb) {
      if (dist[q] > dist[p] + 1) {
        dist[q] = dist[p] + 1;
        queue.push_back(q);
      }
    }
  }
  return dist;
}

NeighbourFn polar_neighbours(const PolarGrid& g) {
  return [g](std::size_t p, std::vector<std::size_t>& out) {
    out.clear();
    const std::size_t na = g.angular_nodes();
    const std::size_t i = p / na, j = p % na;
    if (i > 0) out.push_back(g.index(i - 1, j));
    if (i < g.nr) out.push_back(g.index(i + 1, j));
    if (j > 0) {
      out.push_back(g.index(i, j - 1));
    } else if (g.wrap) {
      out.push_back(g.index(i, na - 1));
    }
    if (j + 1 < na) {
      out.push_back(g.index(i, j + 1));
    } else if (g.wrap) {
      out.push_back(g.index(i, 0));
    }
  };
}

NeighbourFn cartesian_neighbours(const CartesianGrid& g) {
  return [g](std::size_t p, std::vector<std::size_t>& out) {
    out.clear();
    const std::size_t i = p / (g.ny + 1), j = p % (g.ny + 1);
    if (i > 0) out.push_back(g.index(i - 1, j));
    if (i < g.nx) out.push_back(g.index(i + 1, j));
    if (j > 0) out.push_back(g.index(i, j - 1));
    if (j < g.ny) out.push_back(g.index(i, j + 1));
  };
}

void clear_polar_edges(const PolarGrid& g, std::vector<std::uint8_t>& mask) {
  for (std::size_t j = 0; j < g.angular_nodes(); ++j) {
    mask[g.index(0, j)] = 0;
    mask[g.index(g.nr, j)] = 0;
  }
  if (!g.wrap) {
    for (std::size_t i = 0; i <= g.nr; ++i) {
      mask[g.index(i, 0)] = 0;
      mask[g.index(i, g.ntheta)] = 0;
    }
  }
}

struct Solved {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // in unknown numbering, unit 2-norm
};

Solved solve_assembled(std::size_t dim, std::vector<numerics::Triplet> trip, std::size_t k, double shift) {
  if (k > dim) throw std::invalid_argument("requested more eigenpairs than grid unknowns");
  const auto op = numerics::SparseSymmetricOperator::from_triplets(dim, std::move(trip));
  const auto pairs = numerics::sparse_smallest_eigenpairs(op, k, shift);
  Solved s;
  for (const auto& p : pairs) {
    s.values.push_back(p.value);
    s.vectors.push_back(p.vector);
  }
  return s;
}

PolarSolution solve_polar_core(const PolarGrid& g, std::vector<std::uint8_t> mask, std::size_t k) {
  if (!(g.r_lo > 0.0) || !(g.r_hi > g.r_lo) || g.nr < 2 || g.ntheta < 3) {
    throw std::invalid_argument("polar grid: need 0 < r_lo < r_hi, nr >= 2, ntheta >= 3");
  }
  if (mask.size() != g.size()) throw std::invalid_argument("polar mask size does not match grid");
  clear_polar_edges(g, mask);
  const Numbering num = number_unknowns(mask);
  const auto neighbours = polar_neighbours(g);
  require_connected(mask, num, neighbours);

  const double hr = g.hr(), ht = g.htheta();
  const std::size_t na = g.angular_nodes();
  std::vector<numerics::Triplet> trip;
  trip.reserve(5 * num.node_of_unknown.size());
  double r_in = g.r_hi, r_out = g.r_lo;
  for (std::size_t u = 0; u < num.node_of_unknown.size(); ++u) {
    const std::size_t p = num.node_of_unknown[u];
    const std::size_t i = p / na, j = p % na;
    const double r = g.r(i);
    r_in = std::min(r_in, r);
    r_out = std::max(r_out, r);
    const double rp = r + 0.5 * hr, rm = r - 0.5 * hr;
    // -(r u_r)_r - u_tt / r = lambda r u, symmetrized by r^{-1/2}.
    trip.push_back({u, u, ((rp + rm) / (hr * hr) + 2.0 / (r * ht * ht)) / r});
    auto couple = [&](std::size_t q, double k_pq, double rq) {
      const std::size_t v = num.unknown_of_node[q];
      if (v != kNone) trip.push_back({u, v, k_pq / std::sqrt(r * rq)});
    };
    couple(g.index(i - 1, j), -rm / (hr * hr), g.r(i - 1));
    couple(g.index(i + 1, j), -rp / (hr * hr), g.r(i + 1));
    const std::size_t jm = j > 0 ? j - 1 : (g.wrap ? na - 1 : kNone);
    const std::size_t jp = j + 1 < na ? j + 1 : (g.wrap ? 0 : kNone);
    if (jm != kNone) couple(g.index(i, jm), -1.0 / (r * ht * ht), r);
    if (jp != kNone) couple(g.index(i, jp), -1.0 / (r * ht * ht), r);
  }
  // lambda_1 of the mask dominates that of the enclosing full annulus.
  const double lower = radial::solve_radial(2, r_in - hr, r_out + hr, 0.0, 256, 1)[0].lambda;
  const Solved s = solve_assembled(num.node_of_unknown.size(), std::move(trip), k, 0.8 * lower);

  PolarSolution sol;
  sol.grid = g;
  sol.mask = std::move(mask);
  sol.eigenvalues = s.values;
  sol.eigenvalues_grid = s.values;
  for (const auto& v : s.vectors) {
    std::vector<double> full(g.size(), 0.0);
    double norm2 = 0.0;
    for (std::size_t u = 0; u < v.size(); ++u) {
      const std::size_t p = num.node_of_unknown[u];
      const double r = g.r(p / na);
      full[p] = v[u] / std::sqrt(r);
      norm2 += full[p] * full[p] * r * hr * ht;
    }
    // Orient by the largest-magnitude entry (positive principal function).
    std::size_t best = 0;
    for (std::size_t p = 1; p < full.size(); ++p) {
      if (std::fabs(full[p]) > std::fabs(full[best]) * (1.0 + 1e-12)) best = p;
    }
    const double c = (full[best] < 0 ? -1.0 : 1.0) / std::sqrt(norm2);
    for (double& x : full) x *= c;
    sol.eigenvectors.push_back(std::move(full));
  }
  return sol;
}

}  // namespace

PolarDomain2D PolarDomain2D::annulus(double a, double b) {
  return {[a](double) { return a; }, [b](double) { return b; }, 0.0, 2.0 * pi, true};
}

PolarDomain2D PolarDomain2D::sector(double a, double b, double theta_lo, double theta_hi) {
  return {[a](double) { return a; }, [b](double) { return b; }, theta_lo, theta_hi, false};
}

bool PolarDomain2D::contains(double r, double theta) const {
  if (!wrap && !(theta > theta_lo && theta < theta_hi)) return false;
  const double lo = r_min(theta), hi = r_max(theta);
  const double tol = 1e-12 * std::max(1.0, hi);
  return r > lo + tol && r < hi - tol;
}

double PolarGrid::hr() const { return (r_hi - r_lo) / static_cast<double>(nr); }
double PolarGrid::htheta() const {
  return wrap ? 2.0 * pi / static_cast<double>(ntheta) : (theta_hi - theta_lo) / static_cast<double>(ntheta);
}
double PolarGrid::r(std::size_t i) const { return r_lo + hr() * static_cast<double>(i); }
double PolarGrid::theta(std::size_t j) const { return theta_lo + htheta() * static_cast<double>(j); }

MeshMask rasterize(const PolarDomain2D& domain, const PolarGrid& grid) {
  MeshMask m{grid, std::vector<std::uint8_t>(grid.size(), 0)};
  for (std::size_t i = 0; i <= grid.nr; ++i) {
    for (std::size_t j = 0; j < grid.angular_nodes(); ++j) {
      m.mask[grid.index(i, j)] = domain.contains(grid.r(i), grid.theta(j)) ? 1 : 0;
    }
  }
  return m;
}

PolarSolution solve_polar_mask(const PolarGrid& grid, std::vector<std::uint8_t> mask, std::size_t k) {
  return solve_polar_core(grid, std::move(mask), k);
}

PolarSolution solve_polar(const PolarDomain2D& domain, std::size_t nr, std::size_t ntheta, std::size_t k,
                          const PolarOptions& options) {
  if (!domain.r_min || !domain.r_max) throw std::invalid_argument("solve_polar: radial boundary functions missing");
  if (!domain.wrap && !(domain.theta_hi > domain.theta_lo)) {
    throw std::invalid_argument("solve_polar: empty angular window");
  }
  if (nr < 8 || ntheta < 8) throw std::invalid_argument("solve_polar: grid too coarse");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, thin = std::numeric_limits<double>::infinity();
  const std::size_t samples = 8 * ntheta;
  for (std::size_t s = 0; s <= samples; ++s) {
    const double t = domain.wrap ? 2.0 * pi * static_cast<double>(s) / static_cast<double>(samples)
                                 : domain.theta_lo + (domain.theta_hi - domain.theta_lo) * static_cast<double>(s) /
                                                         static_cast<double>(samples);
    const double a = domain.r_min(t), b = domain.r_max(t);
    if (!(a > 0.0) || !(b > a)) {
      throw std::invalid_argument("solve_polar: need 0 < r_min(theta) < r_max(theta), violated at theta = " +
                                  std::to_string(t));
    }
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    thin = std::min(thin, b - a);
  }
  PolarGrid grid;
  grid.r_lo = options.r_lo.value_or(lo);
  grid.r_hi = options.r_hi.value_or(hi);
  if (grid.r_lo > lo + 1e-12 || grid.r_hi < hi - 1e-12) {
    throw std::invalid_argument("solve_polar: explicit radial range does not cover the domain");
  }
  grid.nr = nr;
  grid.ntheta = ntheta;
  grid.wrap = domain.wrap;
  grid.theta_lo = domain.wrap ? 0.0 : domain.theta_lo;
  grid.theta_hi = domain.wrap ? 2.0 * pi : domain.theta_hi;
  if (thin / grid.hr() < options.min_cells_across) {
    throw std::invalid_argument("solve_polar: grid does not resolve the domain (" + std::to_string(thin / grid.hr()) +
                                " radial cells across the thinnest part, need >= " +
                                std::to_string(options.min_cells_across) + ")");
  }
  PolarSolution sol = solve_polar_core(grid, rasterize(domain, grid).mask, k);
  if (options.richardson) {
    PolarGrid fine = grid;
    fine.nr *= 2;
    fine.ntheta *= 2;
    const PolarSolution f = solve_polar_core(fine, rasterize(domain, fine).mask, k);
    for (std::size_t j = 0; j < k; ++j) {
      sol.eigenvalues[j] = numerics::richardson(sol.eigenvalues_grid[j], f.eigenvalues_grid[j], 2);
    }
  }
  return sol;
}

double PolarSolution::interpolate(std::size_t k, double r, double theta) const {
  const PolarGrid& g = grid;
  if (r <= g.r_lo || r >= g.r_hi) return 0.0;
  const double u = (r - g.r_lo) / g.hr();
  std::size_t i = std::min(static_cast<std::size_t>(u), g.nr - 1);
  const double fu = u - static_cast<double>(i);
  double v;
  std::size_t j0, j1;
  if (g.wrap) {
    v = wrap_angle(theta - g.theta_lo) / g.htheta();
    j0 = std::min(static_cast<std::size_t>(v), g.ntheta - 1);
    j1 = (j0 + 1) % g.ntheta;
  } else {
    if (theta <= g.theta_lo || theta >= g.theta_hi) return 0.0;
    v = (theta - g.theta_lo) / g.htheta();
    j0 = std::min(static_cast<std::size_t>(v), g.ntheta - 1);
    j1 = j0 + 1;
  }
  const double fv = v - static_cast<double>(j0);
  const auto& e = eigenvectors[k];
  return (1 - fu) * (1 - fv) * e[g.index(i, j0)] + fu * (1 - fv) * e[g.index(i + 1, j0)] +
         (1 - fu) * fv * e[g.index(i, j1)] + fu * fv * e[g.index(i + 1, j1)];
}

std::vector<int> PolarSolution::boundary_distance(int cap) const {
  return distance_to_complement(mask, polar_neighbours(grid), cap);
}

Spectrum PolarSolution::spectrum() const {
  Spectrum s;
  s.dimension = 2;
  s.cutoff = eigenvalues.back();
  s.description = "polar grid solve";
  auto self = std::make_shared<const PolarSolution>(*this);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    double sup = 0.0;
    for (double v : eigenvectors[k]) sup = std::max(sup, std::fabs(v));
    s.modes.push_back({eigenvalues[k],
                       [self, k](std::span<const double> x) {
                         return self->interpolate(k, std::hypot(x[0], x[1]), wrap_angle(std::atan2(x[1], x[0])));
                       },
                       sup});
  }
  return s;
}

CartesianDomain2D CartesianDomain2D::box(double x_lo, double x_hi, double y_lo, double y_hi) {
  return {[=](double x, double y) { return x > x_lo && x < x_hi && y > y_lo && y < y_hi; }, x_lo, x_hi, y_lo, y_hi};
}

namespace {

CartesianSolution solve_cartesian_core(const CartesianDomain2D& domain, const CartesianGrid& g, std::size_t k,
                                       double min_cells) {
  std::vector<std::uint8_t> mask(g.size(), 0);
  const double hx = g.hx(), hy = g.hy();
  const double tol = 1e-12 * std::max({1.0, std::fabs(g.x_lo), std::fabs(g.x_hi), std::fabs(g.y_lo), std::fabs(g.y_hi)});
  for (std::size_t i = 1; i < g.nx; ++i) {
    for (std::size_t j = 1; j < g.ny; ++j) {
      const double x = g.x(i), y = g.y(j);
      // Nodes sitting on the boundary of the indicator count as outside.
      const bool in = domain.indicator(x, y) && domain.indicator(x + tol, y) && domain.indicator(x - tol, y) &&
                      domain.indicator(x, y + tol) && domain.indicator(x, y - tol);
      mask[g.index(i, j)] = in ? 1 : 0;
    }
  }
  // Resolution check: longest runs of interior nodes in both directions.
  std::size_t best_x = 0, best_y = 0;
  for (std::size_t j = 0; j <= g.ny; ++j) {
    std::size_t run = 0;
    for (std::size_t i = 0; i <= g.nx; ++i) {
      run = mask[g.index(i, j)] ? run + 1 : 0;
      best_x = std::max(best_x, run);
    }
  }
  for (std::size_t i = 0; i <= g.nx; ++i) {
    std::size_t run = 0;
    for (std::size_t j = 0; j <= g.ny; ++j) {
      run = mask[g.index(i, j)] ? run + 1 : 0;
      best_y = std::max(best_y, run);
    }
  }
  if (static_cast<double>(std::min(best_x, best_y) + 1) < min_cells) {
    throw std::invalid_argument("solve_cartesian: mesh does not resolve the domain (fewer than " +
                                std::to_string(min_cells) + " cells across)");
  }
  const Numbering num = number_unknowns(mask);
  const auto neighbours = cartesian_neighbours(g);
  require_connected(mask, num, neighbours);

  std::vector<numerics::Triplet> trip;
  trip.reserve(5 * num.node_of_unknown.size());
  std::size_t imin = g.nx, imax = 0, jmin = g.ny, jmax = 0;
  for (std::size_t u = 0; u < num.node_of_unknown.size(); ++u) {
    const std::size_t p = num.node_of_unknown[u];
    const std::size_t i = p / (g.ny + 1), j = p % (g.ny + 1);
    imin = std::min(imin, i);
    imax = std::max(imax, i);
    jmin = std::min(jmin, j);
    jmax = std::max(jmax, j);
    trip.push_back({u, u, 2.0 / (hx * hx) + 2.0 / (hy * hy)});
    auto couple = [&](std::size_t q, double c) {
      const std::size_t v = num.unknown_of_node[q];
      if (v != kNone) trip.push_back({u, v, c});
    };
    couple(g.index(i - 1, j), -1.0 / (hx * hx));
    couple(g.index(i + 1, j), -1.0 / (hx * hx));
    couple(g.index(i, j - 1), -1.0 / (hy * hy));
    couple(g.index(i, j + 1), -1.0 / (hy * hy));
  }
  // Discrete lambda_1 dominates that of the enclosing discrete rectangle.
  const double wx = hx * static_cast<double>(imax - imin + 2), wy = hy * static_cast<double>(jmax - jmin + 2);
  const double lx = (2.0 - 2.0 * std::cos(pi * hx / wx)) / (hx * hx);
  const double ly = (2.0 - 2.0 * std::cos(pi * hy / wy)) / (hy * hy);
  const Solved s = solve_assembled(num.node_of_unknown.size(), std::move(trip), k, 0.9 * (lx + ly));

  CartesianSolution sol;
  sol.grid = g;
  sol.mask = std::move(mask);
  sol.eigenvalues = s.values;
  sol.eigenvalues_grid = s.values;
  for (const auto& v : s.vectors) {
    std::vector<double> full(g.size(), 0.0);
    std::size_t best = 0;
    for (std::size_t u = 0; u < v.size(); ++u) {
      full[num.node_of_unknown[u]] = v[u];
      if (std::fabs(v[u]) > std::fabs(v[best]) * (1.0 + 1e-12)) best = u;
    }
    const double c = (v[best] < 0 ? -1.0 : 1.0) / std::sqrt(hx * hy);
    for (double& x : full) x *= c;
    sol.eigenvectors.push_back(std::move(full));
  }
  return sol;
}

}  // namespace

CartesianSolution solve_cartesian(const CartesianDomain2D& domain, double h, std::size_t k,
                                  const CartesianOptions& options) {
  if (!domain.indicator) throw std::invalid_argument("solve_cartesian: indicator missing");
  if (!(domain.x_hi > domain.x_lo) || !(domain.y_hi > domain.y_lo)) {
    throw std::invalid_argument("solve_cartesian: empty bounding box");
  }
  if (!(h > 0.0)) throw std::invalid_argument("solve_cartesian: mesh width must be positive");
  CartesianGrid g;
  g.x_lo = domain.x_lo;
  g.x_hi = domain.x_hi;
  g.y_lo = domain.y_lo;
  g.y_hi = domain.y_hi;
  g.nx = static_cast<std::size_t>(std::max<long long>(2, std::llround((g.x_hi - g.x_lo) / h)));
  g.ny = static_cast<std::size_t>(std::max<long long>(2, std::llround((g.y_hi - g.y_lo) / h)));
  CartesianSolution sol = solve_cartesian_core(domain, g, k, options.min_cells_across);
  if (options.richardson) {
    CartesianGrid fine = g;
    fine.nx *= 2;
    fine.ny *= 2;
    const CartesianSolution f = solve_cartesian_core(domain, fine, k, options.min_cells_across);
    for (std::size_t j = 0; j < k; ++j) {
      sol.eigenvalues[j] = numerics::richardson(sol.eigenvalues_grid[j], f.eigenvalues_grid[j], 2);
    }
  }
  return sol;
}

double CartesianSolution::interpolate(std::size_t k, double x, double y) const {
  const CartesianGrid& g = grid;
  if (x <= g.x_lo || x >= g.x_hi || y <= g.y_lo || y >= g.y_hi) return 0.0;
  const double u = (x - g.x_lo) / g.hx(), v = (y - g.y_lo) / g.hy();
  const std::size_t i = std::min(static_cast<std::size_t>(u), g.nx - 1);
  const std::size_t j = std::min(static_cast<std::size_t>(v), g.ny - 1);
  const double fu = u - static_cast<double>(i), fv = v - static_cast<double>(j);
  const auto& e = eigenvectors[k];
  return (1 - fu) * (1 - fv) * e[g.index(i, j)] + fu * (1 - fv) * e[g.index(i + 1, j)] +
         (1 - fu) * fv * e[g.index(i, j + 1)] + fu * fv * e[g.index(i + 1, j + 1)];
}

std::vector<int> CartesianSolution::boundary_distance(int cap) const {
  return distance_to_complement(mask, cartesian_neighbours(grid), cap);
}

Spectrum CartesianSolution::spectrum() const {
  Spectrum s;
  s.dimension = 2;
  s.cutoff = eigenvalues.back();
  s.description = "cartesian grid solve";
  auto self = std::make_shared<const CartesianSolution>(*this);
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    double sup = 0.0;
    for (double v : eigenvectors[k]) sup = std::max(sup, std::fabs(v));
    s.modes.push_back(
        {eigenvalues[k], [self, k](std::span<const double> x) { return self->interpolate(k, x[0], x[1]); }, sup});
  }
  return s;
}

MeshMask read_mesh_mask(std::istream& in) {
  std::size_t rows = 0, cols = 0;
  double r_lo, r_hi, t_lo, t_hi;
  if (!(in >> rows >> cols >> r_lo >> r_hi >> t_lo >> t_hi)) {
    throw std::invalid_argument("mesh mask: malformed header (expected: Nr Ntheta r_lo r_hi theta_lo theta_hi)");
  }
  if (rows < 3 || cols < 3 || !(r_lo > 0.0) || !(r_hi > r_lo) || !(t_hi > t_lo)) {
    throw std::invalid_argument("mesh mask: invalid header values");
  }
  MeshMask m;
  m.grid.r_lo = r_lo;
  m.grid.r_hi = r_hi;
  m.grid.nr = rows - 1;
  m.grid.theta_lo = t_lo;
  m.grid.theta_hi = t_hi;
  m.grid.wrap = std::fabs((t_hi - t_lo) - 2.0 * pi) < 1e-9;
  m.grid.ntheta = m.grid.wrap ? cols : cols - 1;
  m.mask.resize(rows * cols);
  for (std::size_t p = 0; p < rows * cols; ++p) {
    int v = -1;
    if (!(in >> v) || (v != 0 && v != 1)) {
      throw std::invalid_argument("mesh mask: expected " + std::to_string(rows * cols) + " 0/1 entries, entry " +
                                  std::to_string(p) + " is malformed");
    }
    m.mask[p] = static_cast<std::uint8_t>(v);
  }
  return m;
}

void write_mesh_mask(std::ostream& out, const MeshMask& mesh) {
  const PolarGrid& g = mesh.grid;
  std::ostringstream head;
  head.precision(17);
  head << g.radial_nodes() << ' ' << g.angular_nodes() << ' ' << g.r_lo << ' ' << g.r_hi << ' ' << g.theta_lo << ' '
       << g.theta_hi << '\n';
  out << head.str();
  for (std::size_t i = 0; i <= g.nr; ++i) {
    for (std::size_t j = 0; j < g.angular_nodes(); ++j) {
      out << (j ? " " : "") << static_cast<int>(mesh.mask[g.index(i, j)]);
    }
    out << '\n';
  }
}

}  // namespace annular::spectral2d
