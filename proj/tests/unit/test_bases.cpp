#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "annular/bases.hpp"
#include "annular/estimates.hpp"
#include "annular/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::bases;
using oracle::pi;

namespace {

double l2_norm_squared(const BaseDomain& base, std::size_t nodes) {
  const auto data = base_eigendata(base);
  if (const auto* rect = std::get_if<SphereRectangle>(&base)) {
    // piecewise bilinear sampler: panels aligned with its cells
    const auto qt = annular::numerics::composite_gauss_legendre(rect->grid, 4, 0.0, rect->theta1);
    const auto qp = annular::numerics::composite_gauss_legendre(rect->grid, 4, rect->phi_lo, rect->phi_hi);
    double s = 0.0;
    for (std::size_t i = 0; i < qt.nodes.size(); ++i)
      for (std::size_t j = 0; j < qp.nodes.size(); ++j) {
        const double v = data.phi0(sphere_point(qt.nodes[i], qp.nodes[j]));
        s += qt.weights[i] * qp.weights[j] * std::sin(qp.nodes[j]) * v * v;
      }
    return s;
  }
  const auto q = base_quadrature(base, nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    const double v = data.phi0(q.points[i]);
    s += q.weights[i] * v * v;
  }
  return s;
}

// Uniform random direction in R^n.
std::vector<double> random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  double s = 0.0;
  for (auto& v : x) {
    v = g(rng);
    s += v * v;
  }
  for (auto& v : x) v /= std::sqrt(s);
  return x;
}

}  // namespace

TEST_SUITE("bases") {
  TEST_CASE("closed-form base eigenvalues") {
    const auto s3 = base_eigendata(FullSphere{3});
    CHECK(s3.lambda0 == 0.0);
    CHECK(s3.measure == doctest::Approx(4.0 * pi).epsilon(1e-14));
    CHECK(base_eigendata(CircleArc{3.0 * pi / 4.0}).lambda0 == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
    CHECK(base_eigendata(OrthantIntersection{3, 2}).lambda0 == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(base_eigendata(OrthantIntersection{4, 1}).lambda0 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(base_eigendata(SphereWedge{pi}).lambda0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(base_eigendata(SphereWedge{pi / 2}).lambda0 == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(sphere_area(2) == doctest::Approx(2.0 * pi));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * pi * pi));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(CircleArc{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(CircleArc{7.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(OrthantIntersection{3, 4}), std::invalid_argument);
    CHECK_THROWS_AS(validate(FullSphere{1}), std::invalid_argument);
    CHECK_THROWS_AS(validate(SphereRectangle{pi, 0.5, 0.2}), std::invalid_argument);
    CHECK(ambient_dimension(SphereWedge{1.0}) == 3);
  }

  TEST_CASE("circle spectra") {
    const auto s1 = base_spectrum(FullSphere{2}, 3);
    REQUIRE(s1.size() == 3);
    CHECK(s1[0].lambda0 == 0.0);
    CHECK(s1[0].multiplicity == 1);
    CHECK(s1[1].lambda0 == 1.0);
    CHECK(s1[1].multiplicity == 2);
    CHECK(s1[2].lambda0 == 4.0);
    CHECK(s1[2].multiplicity == 2);
    const auto arc = base_spectrum(CircleArc{pi}, 3);
    CHECK(arc[1].lambda0 == doctest::Approx(4.0));
    CHECK_THROWS_AS(base_spectrum(FullSphere{3}, 2), std::invalid_argument);
  }

  TEST_CASE("circle eigenfunctions are orthonormal and solve the equation") {
    for (const BaseDomain& base : {BaseDomain{FullSphere{2}}, BaseDomain{CircleArc{2.0}}}) {
      const double len = std::holds_alternative<FullSphere>(base) ? 2.0 * pi : 2.0;
      std::vector<std::pair<double, std::function<double(double)>>> fs;
      for (const auto& level : base_spectrum(base, 4))
        for (const auto& f : level.functions) fs.emplace_back(level.lambda0, f);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          const double dot = oracle::simpson([&](double t) { return fs[i].second(t) * fs[j].second(t); }, 0.0, len, 4000);
          CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-9);
        }
        const double t = 0.37 * len, h = 1e-4;
        const auto& f = fs[i].second;
        const double second = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
        CHECK(-second == doctest::Approx(fs[i].first * f(t)).epsilon(1e-5).scale(1e-5));
      }
    }
  }

  TEST_CASE("sphere rectangle finite differences") {
    const double exact = 6.0;
    double prev_err = 0.0;
    for (std::size_t n : {16, 32, 64}) {
      const auto a = solve_sphere_rectangle(pi, 1e-9, pi / 2, n);
      const auto b = solve_sphere_rectangle(pi / 2, 1e-9, pi, n);
      CHECK(a.lambda0 == doctest::Approx(exact).epsilon(5e-2));
      CHECK(b.lambda0 == doctest::Approx(exact).epsilon(5e-2));
      const double err = std::abs(a.lambda0 - exact);
      if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.25));
      prev_err = err;
    }
  }

  TEST_CASE("principal eigenfunctions are normalized and positive") {
    for (const BaseDomain& base : {BaseDomain{FullSphere{3}}, BaseDomain{OrthantIntersection{3, 2}},
                                   BaseDomain{OrthantIntersection{3, 3}}, BaseDomain{SphereWedge{2.0}},
                                   BaseDomain{CircleArc{1.0}}, BaseDomain{FullSphere{4}},
                                   BaseDomain{SphereRectangle{1.5, 0.4, 2.0}}}) {
      INFO(describe(base));
      CHECK(l2_norm_squared(base, 48) == doctest::Approx(1.0).epsilon(1e-6));
      const auto data = base_eigendata(base);
      const auto q = base_quadrature(base, 12);
      double area = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        CHECK(contains(base, q.points[i], true));
        CHECK(data.phi0(q.points[i]) > 0.0);
        area += q.weights[i];
      }
      CHECK(area == doctest::Approx(data.measure).epsilon(1e-8));
    }
  }

  TEST_CASE("orthant eigenfunction is comparable to the distance product") {
    std::mt19937_64 rng(11);
    for (auto [n, k] : {std::pair{3, 1}, {3, 2}, {3, 3}, {4, 2}}) {
      const OrthantIntersection base{n, k};
      const auto data = base_eigendata(base);
      const annular::estimates::CaricatureFn fn = annular::estimates::OrthantProduct{n, k};
      double lo = 1e300, hi = 0.0;
      int used = 0;
      while (used < 500) {
        auto x = random_unit(rng, n);
        if (!contains(base, x)) continue;
        const double ratio = data.phi0(x) / annular::estimates::caricature_eval(fn, x);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        ++used;
      }
      CHECK(hi / lo <= 10.0);
    }
  }

  TEST_CASE("angles and points") {
    const auto p = sphere_point(pi / 2, pi / 2);
    CHECK(p[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(p[1] == doctest::Approx(1.0));
    const double v[] = {0.0, -1.0};
    CHECK(planar_angle(v) == doctest::Approx(1.5 * pi));
    const double w[] = {std::cos(0.5), std::sin(0.5)};
    CHECK(contains(CircleArc{1.0}, w));
    CHECK_FALSE(contains(CircleArc{0.4}, w));
  }
}
