#include "annular/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <variant>

#include "annular/report.hpp"

namespace annular::geometry {
namespace {

using std::numbers::pi;

struct Piece {
  std::size_t c0, c1;
  double frac;
};

// Cells of [0, n) met by [u0, u1] (cell units), with the covered fraction.
void cover_segment(double s, double e, std::size_t n, std::vector<Piece>& out) {
  s = std::max(s, 0.0);
  e = std::min(e, static_cast<double>(n));
  if (!(e > s)) return;
  const auto is = std::min(static_cast<std::size_t>(std::floor(s)), n - 1);
  auto ie = static_cast<std::size_t>(std::ceil(e));
  ie = ie == 0 ? 0 : std::min(ie - 1, n - 1);
  if (is == ie) {
    out.push_back({is, is + 1, e - s});
    return;
  }
  out.push_back({is, is + 1, static_cast<double>(is + 1) - s});
  if (ie > is + 1) out.push_back({is + 1, ie, 1.0});
  out.push_back({ie, ie + 1, e - static_cast<double>(ie)});
}

void cover_cells(double u0, double u1, std::size_t n, bool periodic, std::vector<Piece>& out) {
  out.clear();
  const double nd = static_cast<double>(n);
  if (!periodic) {
    cover_segment(u0, u1, n, out);
    return;
  }
  if (u1 - u0 >= nd) {
    out.push_back({0, n, 1.0});
    return;
  }
  const double k = std::floor(u0 / nd);
  u0 -= k * nd;
  u1 -= k * nd;
  if (u1 <= nd) {
    cover_segment(u0, u1, n, out);
  } else {
    cover_segment(u0, nd, n, out);
    cover_segment(0.0, u1 - nd, n, out);
  }
}

// Uniform bucket grid over the chart for neighbour queries.
class PointHash {
 public:
  PointHash(const ProductGeometry& g, double cell) : g_(g) {
    cell_r_ = cell;
    nr_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((g.r_hi - g.r_lo) / cell)));
    if (!g.angular) {
      nt_ = 1;
      cell_t_ = 1.0;
    } else if (g.periodic) {
      nt_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(2.0 * pi / cell)));
      cell_t_ = 2.0 * pi / static_cast<double>(nt_);
    } else {
      nt_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((g.theta_hi - g.theta_lo) / cell)));
      cell_t_ = cell;
    }
  }

  void insert(std::size_t id, double r, double t) { buckets_[key(r_cell(r), t_cell(t))].push_back(id); }

  template <class F>
  void for_near(double r, double t, double radius, F&& f) const {
    const long kr = static_cast<long>(std::ceil(radius / cell_r_));
    const long ci = static_cast<long>(r_cell(r));
    const long cj = static_cast<long>(t_cell(t));
    long kt = g_.angular ? static_cast<long>(std::ceil(radius / cell_t_)) : 0;
    const bool all_t = g_.periodic && 2 * kt + 1 >= static_cast<long>(nt_);
    for (long i = ci - kr; i <= ci + kr; ++i) {
      if (i < 0 || i >= static_cast<long>(nr_)) continue;
      if (all_t) {
        for (std::size_t j = 0; j < nt_; ++j) visit(static_cast<std::size_t>(i), j, f);
        continue;
      }
      for (long j = cj - kt; j <= cj + kt; ++j) {
        long jj = j;
        if (g_.periodic) {
          jj = ((j % static_cast<long>(nt_)) + static_cast<long>(nt_)) % static_cast<long>(nt_);
        } else if (j < 0 || j >= static_cast<long>(nt_)) {
          continue;
        }
        visit(static_cast<std::size_t>(i), static_cast<std::size_t>(jj), f);
      }
    }
  }

 private:
  template <class F>
  void visit(std::size_t i, std::size_t j, F& f) const {
    const auto it = buckets_.find(key(i, j));
    if (it == buckets_.end()) return;
    for (std::size_t id : it->second) f(id);
  }
  std::size_t r_cell(double r) const {
    return std::min(nr_ - 1, static_cast<std::size_t>(std::max(0.0, (r - g_.r_lo) / cell_r_)));
  }
  std::size_t t_cell(double t) const {
    if (!g_.angular) return 0;
    return std::min(nt_ - 1, static_cast<std::size_t>(std::max(0.0, (t - g_.theta_lo) / cell_t_)));
  }
  std::size_t key(std::size_t i, std::size_t j) const { return i * nt_ + j; }

  const ProductGeometry& g_;
  double cell_r_, cell_t_;
  std::size_t nr_, nt_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets_;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ProductGeometry ProductGeometry::annulus(double a, double b) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("annulus: need 0 < a < b");
  return {a, b, 0.0, 2.0 * pi, true, true};
}

ProductGeometry ProductGeometry::arc(double a, double b, double theta1) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("arc domain: need 0 < a < b");
  if (!(theta1 > 0.0) || theta1 >= 2.0 * pi) throw std::invalid_argument("arc domain: need 0 < theta1 < 2 pi");
  return {a, b, 0.0, theta1, false, true};
}

ProductGeometry ProductGeometry::interval(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("interval: need a < b");
  return {a, b, 0.0, 0.0, false, false};
}

ProductGeometry ProductGeometry::from_spec(const radial::AnnularDomainSpec& spec) {
  spec.validate();
  if (spec.n != 2) throw std::invalid_argument("ProductGeometry: only n = 2 domains have a product chart here");
  return std::visit(overloaded{[&](const bases::FullSphere&) { return annulus(spec.a, spec.b); },
                               [&](const bases::CircleArc& c) { return arc(spec.a, spec.b, c.theta1); },
                               [&](const auto&) -> ProductGeometry {
                                 throw std::invalid_argument("ProductGeometry: base must be a circle or an arc");
                               }},
                    spec.base);
}

double ProductGeometry::angular_distance(double t1, double t2) const {
  if (!angular) return 0.0;
  double d = std::fabs(t1 - t2);
  if (periodic) {
    d = std::fmod(d, 2.0 * pi);
    d = std::min(d, 2.0 * pi - d);
  }
  return d;
}

double ProductGeometry::sigma(double r1, double t1, double r2, double t2) const {
  return std::max(std::fabs(r1 - r2), angular_distance(t1, t2));
}

double ProductGeometry::diameter() const {
  if (!angular) return r_hi - r_lo;
  return std::max(r_hi - r_lo, periodic ? pi : theta_hi - theta_lo);
}

double ProductGeometry::volume() const {
  if (!angular) return r_hi - r_lo;
  return 0.5 * (theta_hi - theta_lo) * (r_hi * r_hi - r_lo * r_lo);
}

std::string to_string(WeightTag tag) {
  return tag == WeightTag::uniform ? "uniform" : "dirichlet_phi_squared";
}

WeightFunction WeightFunction::uniform(const ProductGeometry& g) {
  const double w = 1.0 / g.volume();
  return {[w](double, double) { return w; }, WeightTag::uniform};
}

WeightFunction WeightFunction::phi_squared(const ProductGeometry& g, std::size_t N) {
  const double a = g.r_lo, b = g.r_hi;
  if (!g.angular) {
    const double L = b - a;
    return {[a, L](double r, double) {
              const double s = std::sin(pi * (r - a) / L);
              return 2.0 / L * s * s;
            },
            WeightTag::dirichlet_phi_squared};
  }
  if (g.periodic) {
    auto f = std::make_shared<radial::RadialEigenResult>(radial::solve_radial(2, a, b, 0.0, N, 1)[0]);
    return {[f](double r, double) {
              const double v = f->f_at(r);
              return v * v / (2.0 * pi);
            },
            WeightTag::dirichlet_phi_squared};
  }
  const double t1 = g.theta_hi - g.theta_lo, t0 = g.theta_lo;
  auto f = std::make_shared<radial::RadialEigenResult>(radial::solve_radial(2, a, b, (pi / t1) * (pi / t1), N, 1)[0]);
  return {[f, t0, t1](double r, double t) {
            const double v = f->f_at(r);
            const double s = std::sin(pi * (t - t0) / t1);
            return v * v * 2.0 / t1 * s * s;
          },
          WeightTag::dirichlet_phi_squared};
}

MassGrid::MassGrid(ProductGeometry geometry, WeightFunction weight, std::size_t nr, std::size_t ntheta)
    : geometry_(geometry), weight_(std::move(weight)), nr_(nr), ntheta_(geometry.angular ? ntheta : 1) {
  if (nr_ < 2 || ntheta_ < 1 || (geometry_.angular && ntheta_ < 4)) throw std::invalid_argument("MassGrid: grid too small");
  if (!weight_.density) throw std::invalid_argument("MassGrid: weight density missing");
  hr_ = (geometry_.r_hi - geometry_.r_lo) / static_cast<double>(nr_);
  ht_ = geometry_.angular ? (geometry_.theta_hi - geometry_.theta_lo) / static_cast<double>(ntheta_) : 1.0;
  mass_.resize(nr_ * ntheta_);
  for (std::size_t i = 0; i < nr_; ++i) {
    for (std::size_t j = 0; j < ntheta_; ++j) {
      const double w = weight_.density(r(i), theta(j));
      if (!(w >= 0.0)) throw std::invalid_argument("MassGrid: weight must be nonnegative");
      mass_[i * ntheta_ + j] = w * geometry_.jacobian(r(i)) * hr_ * ht_;
    }
  }
  prefix_.assign((nr_ + 1) * (ntheta_ + 1), 0.0L);
  for (std::size_t i = 0; i < nr_; ++i) {
    long double row = 0.0L;
    for (std::size_t j = 0; j < ntheta_; ++j) {
      row += mass_[i * ntheta_ + j];
      prefix_[(i + 1) * (ntheta_ + 1) + j + 1] = prefix_[i * (ntheta_ + 1) + j + 1] + row;
    }
  }
}

MassGrid MassGrid::resolving(const ProductGeometry& g, const WeightFunction& w, double scale, double nodes_per_scale) {
  if (!(scale > 0.0) || !(nodes_per_scale >= 1.0)) throw std::invalid_argument("MassGrid::resolving: bad scale");
  auto cells = [&](double extent) {
    const double across = std::min(scale, extent);
    return static_cast<std::size_t>(std::ceil(extent / across * nodes_per_scale));
  };
  const std::size_t nr = std::max<std::size_t>(4, cells(g.r_hi - g.r_lo));
  const std::size_t nt = g.angular ? std::max<std::size_t>(8, cells(g.theta_hi - g.theta_lo)) : 1;
  if (static_cast<double>(nr) * static_cast<double>(nt) > 5e7) {
    throw std::invalid_argument("MassGrid::resolving: scale " + std::to_string(scale) + " needs a grid that is too large");
  }
  return MassGrid(g, w, nr, nt);
}

double MassGrid::block(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const {
  const std::size_t w = ntheta_ + 1;
  return static_cast<double>(prefix_[i1 * w + j1] - prefix_[i0 * w + j1] - prefix_[i1 * w + j0] + prefix_[i0 * w + j0]);
}

double MassGrid::total_mass() const { return block(0, nr_, 0, ntheta_); }

double MassGrid::ball_measure(double rc, double tc, double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_measure: radius must be positive");
  std::vector<Piece> pr, pt;
  cover_cells((rc - radius - geometry_.r_lo) / hr_, (rc + radius - geometry_.r_lo) / hr_, nr_, false, pr);
  if (geometry_.angular) {
    cover_cells((tc - radius - geometry_.theta_lo) / ht_, (tc + radius - geometry_.theta_lo) / ht_, ntheta_,
                geometry_.periodic, pt);
  } else {
    pt.push_back({0, 1, 1.0});
  }
  double v = 0.0;
  for (const auto& a : pr) {
    for (const auto& c : pt) v += a.frac * c.frac * block(a.c0, a.c1, c.c0, c.c1);
  }
  return v;
}

std::size_t WeightedNet::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adjacency) d = std::max(d, a.size());
  return d;
}

std::vector<std::size_t> WeightedNet::hop_ball(std::size_t center, std::size_t m) const {
  if (center >= size()) throw std::out_of_range("hop_ball: center out of range");
  std::vector<std::size_t> dist(size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> out{center};
  dist[center] = 0;
  for (std::size_t q = 0; q < out.size(); ++q) {
    const std::size_t v = out[q];
    if (dist[v] == m) continue;
    for (std::size_t w : adjacency[v]) {
      if (dist[w] == std::numeric_limits<std::size_t>::max()) {
        dist[w] = dist[v] + 1;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool WeightedNet::connected() const {
  if (size() == 0) return false;
  return hop_ball(0, size()).size() == size();
}

WeightedNet build_net(const MassGrid& grid, double epsilon) {
  const ProductGeometry& g = grid.geometry();
  if (!(epsilon > 0.0)) throw std::invalid_argument("build_net: epsilon must be positive");
  const double need = 6.0;
  const double across_r = std::min(epsilon, g.r_hi - g.r_lo) / grid.hr();
  const double across_t = g.angular ? std::min(epsilon, g.theta_hi - g.theta_lo) / grid.htheta() : need;
  if (across_r < need - 1e-9 || across_t < need - 1e-9) {
    throw std::invalid_argument("build_net: quadrature grid too coarse for epsilon = " + std::to_string(epsilon) +
                                " (" + std::to_string(std::min(across_r, across_t)) + " nodes across, need >= 6)");
  }
  WeightedNet net;
  net.epsilon = epsilon;
  net.weight_tag = to_string(grid.weight().tag);
  PointHash hash(g, epsilon);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < grid.ntheta(); ++j) {
      const double r = grid.r(i), t = grid.theta(j);
      bool free = true;
      hash.for_near(r, t, epsilon, [&](std::size_t id) {
        if (free && g.sigma(r, t, net.r[id], net.theta[id]) < epsilon) free = false;
      });
      if (!free) continue;
      hash.insert(net.r.size(), r, t);
      net.r.push_back(r);
      net.theta.push_back(t);
    }
  }
  net.adjacency.resize(net.size());
  for (std::size_t v = 0; v < net.size(); ++v) {
    net.weights.push_back(grid.ball_measure(net.r[v], net.theta[v], epsilon));
    hash.for_near(net.r[v], net.theta[v], 2.0 * epsilon, [&](std::size_t w) {
      if (w <= v) return;
      const double s = g.sigma(net.r[v], net.theta[v], net.r[w], net.theta[w]);
      if (s <= 2.0 * epsilon) {
        net.edges.push_back({v, w, s});
        net.adjacency[v].push_back(w);
        net.adjacency[w].push_back(v);
      }
    });
  }
  std::sort(net.edges.begin(), net.edges.end(),
            [](const NetEdge& x, const NetEdge& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
  for (auto& a : net.adjacency) std::sort(a.begin(), a.end());
  return net;
}

NetInvariants verify_net(const MassGrid& grid, const WeightedNet& net) {
  const ProductGeometry& g = grid.geometry();
  PointHash hash(g, net.epsilon);
  for (std::size_t v = 0; v < net.size(); ++v) hash.insert(v, net.r[v], net.theta[v]);
  NetInvariants inv{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t v = 0; v < net.size(); ++v) {
    hash.for_near(net.r[v], net.theta[v], 2.0 * net.epsilon, [&](std::size_t w) {
      if (w != v) inv.min_separation = std::min(inv.min_separation, g.sigma(net.r[v], net.theta[v], net.r[w], net.theta[w]));
    });
  }
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    for (std::size_t j = 0; j < grid.ntheta(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      hash.for_near(grid.r(i), grid.theta(j), 2.0 * net.epsilon,
                    [&](std::size_t w) { best = std::min(best, g.sigma(grid.r(i), grid.theta(j), net.r[w], net.theta[w])); });
      inv.max_cover = std::max(inv.max_cover, best);
    }
  }
  return inv;
}

BaseNetCheck check_projected_base_net(const MassGrid& grid, const WeightedNet& net) {
  const ProductGeometry& g = grid.geometry();
  if (!g.angular) throw std::invalid_argument("check_projected_base_net: interval domains have no base");
  BaseNetCheck c{std::numeric_limits<double>::infinity(), 0.0, false, false};
  // the projection is a set: radial layers of the net share angles
  std::vector<double> ys = net.theta;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end(), [](double x, double y) { return std::fabs(x - y) <= 1e-12; }), ys.end());
  for (std::size_t k = 0; k + 1 < ys.size(); ++k) c.min_separation = std::min(c.min_separation, ys[k + 1] - ys[k]);
  if (g.periodic && ys.size() > 1) c.min_separation = std::min(c.min_separation, g.angular_distance(ys.back(), ys.front()));
  for (std::size_t j = 0; j < grid.ntheta(); ++j) {
    const double z = grid.theta(j);
    double best = std::numeric_limits<double>::infinity();
    const auto it = std::lower_bound(ys.begin(), ys.end(), z);
    if (it != ys.end()) best = std::min(best, g.angular_distance(z, *it));
    if (it != ys.begin()) best = std::min(best, g.angular_distance(z, *(it - 1)));
    if (g.periodic) best = std::min({best, g.angular_distance(z, ys.front()), g.angular_distance(z, ys.back())});
    c.max_cover = std::max(c.max_cover, best);
  }
  c.y1 = c.min_separation >= net.epsilon / 4.0;
  c.y2 = c.max_cover <= net.epsilon;
  return c;
}

void write_edge_list(std::ostream& out, const WeightedNet& net) {
  out << "# annular net epsilon " << format_double(net.epsilon) << " metric " << net.metric_tag << " weight "
      << net.weight_tag << '\n';
  out << "vertices " << net.size() << '\n';
  for (std::size_t v = 0; v < net.size(); ++v) {
    out << v << ' ' << format_double(net.r[v]) << ' ' << format_double(net.theta[v]) << ' '
        << format_double(net.weights[v]) << '\n';
  }
  out << "edges " << net.edges.size() << '\n';
  for (const auto& e : net.edges) out << e.i << ' ' << e.j << ' ' << format_double(e.sigma) << '\n';
}

double surrogate_distance(std::span<const double> x, std::span<const double> y, const radial::AnnularDomainSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.n);
  if (x.size() != n || y.size() != n) throw std::invalid_argument("surrogate_distance: dimension mismatch");
  auto unit_of = [&](std::span<const double> p, double& r) {
    r = 0.0;
    for (double v : p) r += v * v;
    r = std::sqrt(r);
    const double tol = 1e-12 * spec.b;
    if (r < spec.a - tol || r > spec.b + tol) throw std::domain_error("surrogate_distance: point outside the domain");
    std::vector<double> u(p.begin(), p.end());
    for (double& v : u) v /= r;
    if (!bases::contains(spec.base, u, true)) throw std::domain_error("surrogate_distance: direction outside the base");
    return u;
  };
  double rx, ry;
  const auto ux = unit_of(x, rx);
  const auto uy = unit_of(y, ry);
  double d;
  if (std::holds_alternative<bases::CircleArc>(spec.base)) {
    const double t1 = std::get<bases::CircleArc>(spec.base).theta1;
    auto angle = [t1](const std::vector<double>& u) {
      const double t = bases::planar_angle(u);
      return t > t1 && t > pi ? t - 2.0 * pi : t;  // directions just below theta = 0
    };
    d = std::fabs(angle(ux) - angle(uy));
  } else {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += ux[i] * uy[i];
    d = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return std::max(std::fabs(rx - ry), d);
}

}  // namespace annular::geometry
