#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "annular/spectrum.hpp"

namespace annular::spectral2d {

struct PolarDomain2D {
  std::function<double(double)> r_min;
  std::function<double(double)> r_max;
  double theta_lo = 0.0;
  double theta_hi = 0.0;  // ignored when wrap
  bool wrap = true;

  static PolarDomain2D annulus(double a, double b);
  static PolarDomain2D sector(double a, double b, double theta_lo, double theta_hi);
  bool contains(double r, double theta) const;
};

struct PolarGrid {
  double r_lo = 0.0, r_hi = 0.0;
  std::size_t nr = 0;  // radial intervals; nodes i = 0..nr
  double theta_lo = 0.0, theta_hi = 0.0;
  std::size_t ntheta = 0;  // angular intervals; nodes j = 0..ntheta-1 (wrap) or 0..ntheta
  bool wrap = true;

  double hr() const;
  double htheta() const;
  double r(std::size_t i) const;
  double theta(std::size_t j) const;
  std::size_t radial_nodes() const { return nr + 1; }
  std::size_t angular_nodes() const { return wrap ? ntheta : ntheta + 1; }
  std::size_t size() const { return radial_nodes() * angular_nodes(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * angular_nodes() + j; }
};

struct PolarOptions {
  std::optional<double> r_lo;  // explicit grid range (common grids across domains)
  std::optional<double> r_hi;
  bool richardson = false;     // also solve on the doubled grid and extrapolate eigenvalues
  double min_cells_across = 8.0;
};

struct PolarSolution {
  PolarGrid grid;
  std::vector<std::uint8_t> mask;
  std::vector<double> eigenvalues;       // Richardson-refined when requested
  std::vector<double> eigenvalues_grid;  // on this grid
  std::vector<std::vector<double>> eigenvectors;  // full grid, zero off the mask, L^2(r dr dtheta)

  double value(std::size_t k, std::size_t i, std::size_t j) const {
    return eigenvectors[k][grid.index(i, j)];
  }
  double interpolate(std::size_t k, double r, double theta) const;
  // Distance in cells from node (i, j) to the nearest masked-out node (capped).
  std::vector<int> boundary_distance(int cap) const;
  Spectrum spectrum() const;
};

PolarSolution solve_polar(const PolarDomain2D& domain, std::size_t nr, std::size_t ntheta, std::size_t k,
                          const PolarOptions& options = {});
// Same solver on a precomputed mask.
PolarSolution solve_polar_mask(const PolarGrid& grid, std::vector<std::uint8_t> mask, std::size_t k);

struct CartesianDomain2D {
  std::function<bool(double, double)> indicator;
  double x_lo, x_hi, y_lo, y_hi;

  static CartesianDomain2D box(double x_lo, double x_hi, double y_lo, double y_hi);
};

struct CartesianGrid {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  std::size_t nx = 0, ny = 0;  // intervals

  double hx() const { return (x_hi - x_lo) / static_cast<double>(nx); }
  double hy() const { return (y_hi - y_lo) / static_cast<double>(ny); }
  double x(std::size_t i) const { return x_lo + hx() * static_cast<double>(i); }
  double y(std::size_t j) const { return y_lo + hy() * static_cast<double>(j); }
  std::size_t size() const { return (nx + 1) * (ny + 1); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * (ny + 1) + j; }
};

struct CartesianOptions {
  bool richardson = false;
  double min_cells_across = 8.0;
};

struct CartesianSolution {
  CartesianGrid grid;
  std::vector<std::uint8_t> mask;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvalues_grid;
  std::vector<std::vector<double>> eigenvectors;  // L^2(dx dy)

  double value(std::size_t k, std::size_t i, std::size_t j) const {
    return eigenvectors[k][grid.index(i, j)];
  }
  double interpolate(std::size_t k, double x, double y) const;
  std::vector<int> boundary_distance(int cap) const;
  Spectrum spectrum() const;
};

CartesianSolution solve_cartesian(const CartesianDomain2D& domain, double h, std::size_t k,
                                  const CartesianOptions& options = {});

// Mesh-mask text format:
//   header: Nr Ntheta r_lo r_hi theta_lo theta_hi   (node counts per direction)
//   then Nr rows (radial index) of Ntheta 0/1 tokens (angular index).
// A theta range of length 2 pi is periodic, with nodes theta_lo + j 2pi/Ntheta.
struct MeshMask {
  PolarGrid grid;
  std::vector<std::uint8_t> mask;
};
MeshMask read_mesh_mask(std::istream& in);
void write_mesh_mask(std::ostream& out, const MeshMask& mesh);
MeshMask rasterize(const PolarDomain2D& domain, const PolarGrid& grid);

}  // namespace annular::spectral2d
