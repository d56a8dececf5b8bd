#include <cmath>
#include <stdexcept>
#include <random>

#include "annular/radial.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::radial;
using annular::bases::CircleArc;
using annular::bases::FullSphere;
using oracle::pi;

TEST_SUITE("radial") {
  TEST_CASE("n = 3 reduces to the interval") {
    const auto r = solve_radial(3, 1.0, 2.0, 0.0);
    CHECK(std::abs(r[0].lambda - pi * pi) <= 1e-8);
    CHECK(transform_alpha(3) == 0.0);
    CHECK(transform_alpha(2) == -0.25);
  }

  TEST_CASE("n = 2 lies between the shifted interval bounds") {
    const double l = solve_radial(2, 1.0, 2.0, 0.0)[0].lambda;
    CHECK(l >= pi * pi - 0.25);
    CHECK(l <= pi * pi - 1.0 / 16.0);
  }

  TEST_CASE("angular term shifts the eigenvalue") {
    const double l = solve_radial(3, 1.0, 2.0, 2.0)[0].lambda;
    CHECK(l >= pi * pi + 0.5);
    CHECK(l <= pi * pi + 2.0);
  }

  TEST_CASE("agrees with a shooting oracle") {
    for (auto [n, l0] : {std::pair{2, 0.0}, {2, 1.0}, {3, 2.0}, {4, 0.0}, {5, 3.0}}) {
      const double ref = oracle::shoot_radial(n, 1.0, 1.7, l0, 1.0, 60.0);
      CHECK(solve_radial(n, 1.0, 1.7, l0)[0].lambda == doctest::Approx(ref).epsilon(1e-8));
    }
  }

  TEST_CASE("weighted discretization agrees") {
    for (int n : {2, 3, 4, 6}) {
      for (double l0 : {0.0, 1.0, 5.0}) {
        const double a = solve_radial(n, 0.5, 2.0, l0)[0].lambda;
        const double b = solve_radial_weighted(n, 0.5, 2.0, l0);
        CHECK(std::abs(a - b) / a <= 1e-8);
      }
    }
  }

  TEST_CASE("scaling") {
    for (int n : {2, 3, 5}) {
      const double base = solve_radial(n, 1.0, 1.5, 1.0)[0].lambda;
      for (double c : {0.5, 2.0, 10.0}) {
        const double scaled = solve_radial(n, c, 1.5 * c, 1.0)[0].lambda;
        CHECK(std::abs(scaled * c * c - base) / base <= 1e-10);
      }
    }
  }

  TEST_CASE("eigenfunction normalization and positivity") {
    const auto res = solve_radial(4, 1.0, 3.0, 0.0, 1024, 3);
    const auto& r = res[0];
    double s = 0.0, st = 0.0;
    const double h = (r.grid.back() - r.grid.front()) / (r.grid.size() - 1);
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      s += r.f[i] * r.f[i] * std::pow(r.grid[i], 3) * h;
      st += r.ftilde[i] * r.ftilde[i] * h;
      if (i > 0 && i + 1 < r.grid.size()) CHECK(r.f[i] > 0.0);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(st == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.f_at(0.5) == 0.0);
    CHECK(r.f_at(2.0) == doctest::Approx(r.f[512]).epsilon(1e-10));
    CHECK(r.sup_f() >= r.f[300]);
    CHECK(res[0].lambda < res[1].lambda);
    CHECK(res[1].lambda < res[2].lambda);
  }

  TEST_CASE("assembled product spectrum") {
    const AnnularDomainSpec full{2, 1.0, 2.0, FullSphere{2}};
    const auto sp = assemble_spectrum(full, 4, 3);
    REQUIRE(sp.size() >= 4);
    CHECK(sp.modes[0].lambda == doctest::Approx(solve_radial(2, 1.0, 2.0, 0.0)[0].lambda).epsilon(1e-12));
    CHECK(sp.modes[1].lambda == doctest::Approx(solve_radial(2, 1.0, 2.0, 1.0)[0].lambda).epsilon(1e-12));
    CHECK(sp.modes[2].lambda == doctest::Approx(sp.modes[1].lambda).epsilon(1e-12));
    for (std::size_t i = 1; i < sp.size(); ++i) CHECK(sp.modes[i - 1].lambda <= sp.modes[i].lambda);

    const AnnularDomainSpec arc{2, 1.0, 2.0, CircleArc{pi}};
    const auto sa = assemble_spectrum(arc, 3, 2);
    CHECK(sa.modes[0].lambda > sp.modes[0].lambda);
    CHECK(sa.modes[0].lambda == doctest::Approx(solve_radial(2, 1.0, 2.0, 1.0)[0].lambda).epsilon(1e-12));
    const double x[] = {0.0, 1.5};
    CHECK(sa.modes[0].phi(x) > 0.0);
    const double y[] = {0.0, -1.5};
    CHECK(sa.modes[0].phi(y) == 0.0);
  }

  TEST_CASE("domain validation") {
    CHECK_THROWS_AS((AnnularDomainSpec{3, 1.0, 2.0, CircleArc{1.0}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((AnnularDomainSpec{2, 2.0, 1.0, FullSphere{2}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(1, 1.0, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(2, 1.0, 2.0, -1.0), std::invalid_argument);
    CHECK((AnnularDomainSpec{2, 1.0, 2.0, FullSphere{2}}.thin()));
    CHECK_FALSE((AnnularDomainSpec{2, 1.0, 2.01, FullSphere{2}}.thin()));
  }
}
