#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "annular/radial.hpp"

namespace annular::geometry {

// Product chart (r, theta) of an n = 2 annular domain, or a plain interval when
// `angular` is false. Distances use the surrogate metric
//   sigma = max(|r1 - r2|, d_base(theta1, theta2)),
// with arc distance on the base (wrapping only for the full circle).
struct ProductGeometry {
  double r_lo = 0.0, r_hi = 1.0;
  double theta_lo = 0.0, theta_hi = 0.0;
  bool periodic = false;
  bool angular = true;

  static ProductGeometry annulus(double a, double b);
  static ProductGeometry arc(double a, double b, double theta1);
  static ProductGeometry interval(double a, double b);
  // n = 2 with a FullSphere or CircleArc base.
  static ProductGeometry from_spec(const radial::AnnularDomainSpec& spec);

  double angular_distance(double t1, double t2) const;
  double sigma(double r1, double t1, double r2, double t2) const;
  double diameter() const;
  double jacobian(double r) const { return angular ? r : 1.0; }
  double volume() const;
};

enum class WeightTag { dirichlet_phi_squared, uniform };
std::string to_string(WeightTag tag);

struct WeightFunction {
  std::function<double(double, double)> density;  // (r, theta) -> w >= 0
  WeightTag tag;

  // 1/|U|, the squared first Neumann eigenfunction.
  static WeightFunction uniform(const ProductGeometry& g);
  // Square of the L^2-normalized principal Dirichlet eigenfunction.
  static WeightFunction phi_squared(const ProductGeometry& g, std::size_t N = 2048);
};

// Midpoint-rule masses on an nr x ntheta cell grid with prefix sums, so that
// measures of sigma-balls (boxes in the chart) cost O(1). Partially covered
// cells contribute in proportion to the covered length in each direction.
class MassGrid {
 public:
  MassGrid(ProductGeometry geometry, WeightFunction weight, std::size_t nr, std::size_t ntheta);
  // Cell widths at most scale / nodes_per_scale in each direction (or across the
  // full extent when that is shorter than scale).
  static MassGrid resolving(const ProductGeometry& geometry, const WeightFunction& weight, double scale,
                            double nodes_per_scale = 6.5);

  const ProductGeometry& geometry() const { return geometry_; }
  const WeightFunction& weight() const { return weight_; }
  std::size_t nr() const { return nr_; }
  std::size_t ntheta() const { return ntheta_; }
  double hr() const { return hr_; }
  double htheta() const { return ht_; }
  double r(std::size_t i) const { return geometry_.r_lo + (static_cast<double>(i) + 0.5) * hr_; }
  double theta(std::size_t j) const { return geometry_.theta_lo + (static_cast<double>(j) + 0.5) * ht_; }
  double mass(std::size_t i, std::size_t j) const { return mass_[i * ntheta_ + j]; }
  double total_mass() const;
  double ball_measure(double r, double theta, double radius) const;

 private:
  double block(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) const;

  ProductGeometry geometry_;
  WeightFunction weight_;
  std::size_t nr_, ntheta_;
  double hr_, ht_;
  std::vector<double> mass_;
  std::vector<long double> prefix_;  // (nr + 1) x (ntheta + 1)
};

struct NetEdge {
  std::size_t i, j;
  double sigma;
};

struct WeightedNet {
  std::vector<double> r, theta;
  std::vector<double> weights;  // m(x) = measure of the sigma-ball of radius epsilon
  std::vector<NetEdge> edges;   // i < j, sigma <= 2 epsilon
  std::vector<std::vector<std::size_t>> adjacency;
  double epsilon = 0.0;
  std::string metric_tag = "surrogate max(|dr|, base arc)";
  std::string weight_tag;

  std::size_t size() const { return r.size(); }
  std::size_t max_degree() const;
  bool connected() const;
  // Vertices within graph distance m of `center`.
  std::vector<std::size_t> hop_ball(std::size_t center, std::size_t m) const;
};

// Greedy maximal epsilon-separated subset of the grid nodes, visited r-major.
WeightedNet build_net(const MassGrid& grid, double epsilon);

struct NetInvariants {
  double min_separation;  // over net pairs
  double max_cover;       // max over grid nodes of the distance to the net
};
NetInvariants verify_net(const MassGrid& grid, const WeightedNet& net);

// Projection of the net onto the base: (Y1) pairwise base distance >= eps/4,
// (Y2) every base node within eps of a projected point.
struct BaseNetCheck {
  double min_separation;
  double max_cover;
  bool y1;
  bool y2;
};
BaseNetCheck check_projected_base_net(const MassGrid& grid, const WeightedNet& net);

// Text export: "# annular net ..." header, "vertices N" then "id r theta weight",
// "edges M" then "i j sigma".
void write_edge_list(std::ostream& out, const WeightedNet& net);

// sigma(x, y) for Cartesian points of the closed domain.
double surrogate_distance(std::span<const double> x, std::span<const double> y, const radial::AnnularDomainSpec& spec);

}  // namespace annular::geometry
