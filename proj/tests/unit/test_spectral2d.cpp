#include <cmath>
#include <stdexcept>
#include <sstream>

#include "annular/radial.hpp"
#include "annular/spectral2d.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::spectral2d;
using oracle::pi;

TEST_SUITE("spectral2d") {
  TEST_CASE("polar annulus matches the radial solver") {
    const auto sol = solve_polar(PolarDomain2D::annulus(1.0, 1.5), 64, 256, 3);
    const double l0 = annular::radial::solve_radial(2, 1.0, 1.5, 0.0)[0].lambda;
    const double l1 = annular::radial::solve_radial(2, 1.0, 1.5, 1.0)[0].lambda;
    CHECK(std::abs(sol.eigenvalues[0] - l0) / l0 <= 1e-3);
    CHECK(std::abs(sol.eigenvalues[1] - l1) / l1 <= 1e-3);
    CHECK(std::abs(sol.eigenvalues[2] - l1) / l1 <= 1e-3);
  }

  TEST_CASE("polar sector matches the assembled product spectrum") {
    const double t1 = 3.0 * pi / 4.0;
    const auto sol = solve_polar(PolarDomain2D::sector(1.0, 1.5, 0.0, t1), 64, 192, 2);
    const annular::radial::AnnularDomainSpec spec{2, 1.0, 1.5, annular::bases::CircleArc{t1}};
    const auto sp = annular::radial::assemble_spectrum(spec, 3, 2);
    CHECK(std::abs(sol.eigenvalues[0] - sp.modes[0].lambda) / sp.modes[0].lambda <= 1e-3);
    CHECK(std::abs(sol.eigenvalues[1] - sp.modes[1].lambda) / sp.modes[1].lambda <= 1e-3);
  }

  TEST_CASE("polar eigenfunction is positive and normalized") {
    const auto sol = solve_polar(PolarDomain2D::annulus(1.0, 2.0), 48, 128, 1);
    double s = 0.0;
    const auto& g = sol.grid;
    for (std::size_t i = 0; i < g.radial_nodes(); ++i)
      for (std::size_t j = 0; j < g.angular_nodes(); ++j) {
        const double v = sol.value(0, i, j);
        if (sol.mask[g.index(i, j)]) CHECK(v > 0.0);
        s += v * v * g.r(i) * g.hr() * g.htheta();
      }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    // the principal mode of an annulus is rotation invariant
    CHECK(sol.interpolate(0, 1.5, 0.3) == doctest::Approx(sol.interpolate(0, 1.5, 2.9)).epsilon(1e-6));
  }

  TEST_CASE("dilation") {
    const auto a = solve_cartesian(CartesianDomain2D::box(-1.0, 1.0, -0.5, 0.5), 1.0 / 32, 2);
    const auto b = solve_cartesian(CartesianDomain2D::box(-2.0, 2.0, -1.0, 1.0), 1.0 / 16, 2);
    for (int k = 0; k < 2; ++k) CHECK(b.eigenvalues[k] * 4.0 == doctest::Approx(a.eigenvalues[k]).epsilon(1e-10));
    const auto p = solve_polar(PolarDomain2D::annulus(1.0, 1.5), 32, 128, 1);
    const auto q = solve_polar(PolarDomain2D::annulus(3.0, 4.5), 32, 128, 1);
    CHECK(q.eigenvalues[0] * 9.0 == doctest::Approx(p.eigenvalues[0]).epsilon(1e-10));
  }

  TEST_CASE("boxes") {
    CartesianOptions opts;
    opts.richardson = true;
    const auto sq = solve_cartesian(CartesianDomain2D::box(-1.0, 1.0, -1.0, 1.0), 1.0 / 32, 1, opts);
    CHECK(sq.eigenvalues[0] == doctest::Approx(pi * pi / 2.0).epsilon(1e-4));
    CHECK(sq.interpolate(0, 0.0, 0.0) == doctest::Approx(1.0).epsilon(2e-3));
    const auto thin = solve_cartesian(CartesianDomain2D::box(-1.0, 1.0, -0.1, 0.1), 1.0 / 80, 1, opts);
    CHECK(thin.eigenvalues[0] == doctest::Approx(pi * pi / 4.0 * 101.0).epsilon(1e-3));
    const auto unit = solve_cartesian(CartesianDomain2D::box(0.0, 1.0, 0.0, 1.0), 1.0 / 128, 1, opts);
    CHECK(std::abs(unit.eigenvalues[0] - 2.0 * pi * pi) / (2.0 * pi * pi) <= 2e-3);
  }

  TEST_CASE("second-order convergence") {
    const double exact = pi * pi / 2.0;
    double errs[3];
    int i = 0;
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32})
      errs[i++] = std::abs(solve_cartesian(CartesianDomain2D::box(-1.0, 1.0, -1.0, 1.0), h, 1).eigenvalues[0] - exact);
    CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("domain monotonicity") {
    const double h = 1.0 / 40;
    const auto big = solve_cartesian(CartesianDomain2D::box(-1.0, 1.0, -1.0, 1.0), h, 1);
    CartesianDomain2D disk{[](double x, double y) { return x * x + y * y < 1.0; }, -1.0, 1.0, -1.0, 1.0};
    const auto mid = solve_cartesian(disk, h, 1);
    CartesianDomain2D small{[](double x, double y) { return x * x + y * y < 0.64; }, -1.0, 1.0, -1.0, 1.0};
    const auto sm = solve_cartesian(small, h, 1);
    CHECK(big.eigenvalues[0] < mid.eigenvalues[0]);
    CHECK(mid.eigenvalues[0] < sm.eigenvalues[0]);
    // disk: j_{0,1}^2
    CHECK(mid.eigenvalues[0] == doctest::Approx(2.404825557695773 * 2.404825557695773).epsilon(2e-2));
    const auto a = solve_polar(PolarDomain2D::annulus(1.0, 2.0), 32, 128, 1);
    const auto b = solve_polar(PolarDomain2D::annulus(1.0, 1.8), 32, 128, 1, {1.0, 2.0});
    CHECK(a.eigenvalues[0] < b.eigenvalues[0]);
  }

  TEST_CASE("spectrum samplers") {
    const auto sol = solve_cartesian(CartesianDomain2D::box(0.0, 2.0, 0.0, 1.0), 1.0 / 32, 3);
    const auto sp = sol.spectrum();
    REQUIRE(sp.size() == 3);
    CHECK(sp.modes[0].sup_norm > 0.0);
    const double x[] = {1.0, 0.5};
    CHECK(sp.modes[0].phi(x) == doctest::Approx(sol.interpolate(0, 1.0, 0.5)));
    const auto dist = sol.boundary_distance(4);
    CHECK(dist[sol.grid.index(0, 5)] == 0);
    CHECK(dist[sol.grid.index(32, 16)] == 4);
  }

  TEST_CASE("mesh mask round trip") {
    PolarGrid g;
    g.r_lo = 1.0;
    g.r_hi = 1.5;
    g.nr = 16;
    g.theta_lo = 0.0;
    g.theta_hi = 2.0 * pi;
    g.ntheta = 64;
    g.wrap = true;
    const auto mesh = rasterize(PolarDomain2D::annulus(1.0, 1.5), g);
    std::stringstream ss;
    write_mesh_mask(ss, mesh);
    const auto back = read_mesh_mask(ss);
    CHECK(back.mask == mesh.mask);
    CHECK(back.grid.nr == g.nr);
    CHECK(back.grid.wrap);
    const auto a = solve_polar_mask(back.grid, back.mask, 1);
    const auto b = solve_polar_mask(mesh.grid, mesh.mask, 1);
    CHECK(a.eigenvalues[0] == doctest::Approx(b.eigenvalues[0]).epsilon(1e-10));
    std::stringstream bad("3 4 1 2 0\n");
    CHECK_THROWS_AS(read_mesh_mask(bad), std::invalid_argument);
  }
}
