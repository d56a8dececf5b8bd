#include <cmath>
#include <stdexcept>
#include <random>
#include <sstream>

#include "annular/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::geometry;
using oracle::pi;

TEST_SUITE("geometry") {
  TEST_CASE("surrogate distance") {
    const auto g = ProductGeometry::annulus(1.0, 1.1);
    CHECK(g.sigma(1.05, 0.0, 1.02, pi / 2) == doctest::Approx(pi / 2));
    CHECK(g.sigma(1.05, 0.7, 1.02, 0.7) == doctest::Approx(0.03));
    CHECK(g.angular_distance(0.1, 2 * pi - 0.1) == doctest::Approx(0.2));
    const auto arc = ProductGeometry::arc(1.0, 1.1, 6.0);
    CHECK(arc.angular_distance(0.1, 5.9) == doctest::Approx(5.8));
    CHECK(g.diameter() == doctest::Approx(pi));
    CHECK(ProductGeometry::interval(0.0, 1.0).diameter() == doctest::Approx(1.0));
    const annular::radial::AnnularDomainSpec spec{2, 1.0, 1.1, annular::bases::FullSphere{2}};
    const double x[] = {1.05, 0.0}, y[] = {0.0, 1.02};
    CHECK(surrogate_distance(x, y, spec) == doctest::Approx(pi / 2));
  }

  TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(2024);
    for (const auto& g : {ProductGeometry::annulus(1.0, 1.3), ProductGeometry::arc(1.0, 2.0, 2.0)}) {
      std::uniform_real_distribution<double> ur(g.r_lo, g.r_hi), ut(g.theta_lo, g.theta_hi);
      for (int i = 0; i < 1000; ++i) {
        const double r[] = {ur(rng), ur(rng), ur(rng)}, t[] = {ut(rng), ut(rng), ut(rng)};
        const double ab = g.sigma(r[0], t[0], r[1], t[1]);
        const double bc = g.sigma(r[1], t[1], r[2], t[2]);
        const double ac = g.sigma(r[0], t[0], r[2], t[2]);
        CHECK(ac <= ab + bc + 1e-15);
        CHECK(ab == g.sigma(r[1], t[1], r[0], t[0]));
        CHECK(g.sigma(r[0], t[0], r[0], t[0]) == 0.0);
      }
    }
  }

  TEST_CASE("ball measures") {
    const auto g = ProductGeometry::annulus(1.0, 2.0);
    const MassGrid phi2(g, WeightFunction::phi_squared(g), 200, 400);
    CHECK(phi2.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(phi2.ball_measure(1.5, 1.0, g.diameter()) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(phi2.ball_measure(1.5, 1.0, 10.0) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (double r = 0.01; r < 4.0; r *= 1.2) {
      const double v = phi2.ball_measure(1.2, 2.0, r);
      CHECK(v >= prev);
      prev = v;
    }
    const MassGrid uni(g, WeightFunction::uniform(g), 400, 800);
    CHECK(uni.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(uni.ball_measure(1.5, 3.0, 0.02) / uni.ball_measure(1.5, 3.0, 0.01) == doctest::Approx(4.0).epsilon(1e-2));
    // chart box of half widths rho: (1/|U|) int r dr dtheta
    const double rho = 0.1;
    const double exact = (std::pow(1.5 + rho, 2) - std::pow(1.5 - rho, 2)) / 2.0 * 2.0 * rho / g.volume();
    CHECK(uni.ball_measure(1.5, 3.0, rho) == doctest::Approx(exact).epsilon(1e-6));
  }

  TEST_CASE("thin annulus ball measure factorizes") {
    const auto g = ProductGeometry::annulus(1.0, 1.1);
    const MassGrid grid = MassGrid::resolving(g, WeightFunction::phi_squared(g), 0.01);
    const auto f = annular::radial::solve_radial(2, 1.0, 1.1, 0.0)[0];
    for (double r0 : {1.0, 1.03, 1.05}) {
      for (double rho : {0.01, 0.02, 0.05}) {
        const double lo = std::max(1.0, r0 - rho), hi = std::min(1.1, r0 + rho);
        const double radial = oracle::simpson([&](double r) { return f.f_at(r) * f.f_at(r) * r; }, lo, hi, 400);
        const double angular = 2.0 * rho / (2.0 * pi);
        CHECK(grid.ball_measure(r0, 1.0, rho) == doctest::Approx(radial * angular).epsilon(0.1));
      }
    }
  }

  TEST_CASE("net covering the whole domain") {
    const auto g = ProductGeometry::annulus(1.0, 2.0);
    const auto grid = MassGrid::resolving(g, WeightFunction::phi_squared(g), 1.0);
    const auto net = build_net(grid, 3.2);
    CHECK(net.size() == 1);
    CHECK(net.weights[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(net.connected());
  }

  TEST_CASE("thin annulus nets") {
    const auto g = ProductGeometry::annulus(1.0, 1.1);
    const auto w = WeightFunction::phi_squared(g);
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
      const auto grid = MassGrid::resolving(g, w, eps);
      const auto net = build_net(grid, eps);
      CHECK(net.max_degree() <= 20);
      CHECK(net.connected());
      const auto inv = verify_net(grid, net);
      CHECK(inv.min_separation >= eps - 1e-12);
      CHECK(inv.max_cover < eps);
      const auto base = check_projected_base_net(grid, net);
      CHECK(base.y1);
      CHECK(base.y2);
      if (eps == 0.05) {
        CHECK(net.size() >= 126 / 4);
        CHECK(net.size() <= 126 * 4);
      }
      for (const auto& e : net.edges) CHECK(e.sigma <= 2 * eps);
    }
  }

  TEST_CASE("hop balls and edge list export") {
    const auto g = ProductGeometry::annulus(1.0, 1.1);
    const auto grid = MassGrid::resolving(g, WeightFunction::uniform(g), 0.2);
    const auto net = build_net(grid, 0.2);
    CHECK(net.hop_ball(0, 0).size() == 1);
    CHECK(net.hop_ball(0, 1).size() == net.adjacency[0].size() + 1);
    CHECK(net.hop_ball(0, net.size()).size() == net.size());
    std::ostringstream out;
    write_edge_list(out, net);
    CHECK(out.str().rfind("# annular net", 0) == 0);
    CHECK(out.str().find("vertices " + std::to_string(net.size())) != std::string::npos);
  }

  TEST_CASE("coarse grids are rejected") {
    const auto g = ProductGeometry::annulus(1.0, 2.0);
    const MassGrid grid(g, WeightFunction::uniform(g), 10, 20);
    CHECK_THROWS_AS(build_net(grid, 0.05), std::invalid_argument);
  }
}
