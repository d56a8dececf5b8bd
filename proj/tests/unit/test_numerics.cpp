#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "annular/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::numerics;
using oracle::pi;

namespace {

TridiagonalOperator dirichlet_1d(std::size_t intervals, double length = 1.0) {
  const double h = length / static_cast<double>(intervals);
  const std::size_t m = intervals - 1;
  return TridiagonalOperator(std::vector<double>(m, 2.0 / (h * h)), std::vector<double>(m - 1, -1.0 / (h * h)));
}

double discrete_dirichlet(std::size_t intervals, int k = 1) {
  const double h = 1.0 / static_cast<double>(intervals);
  const double s = std::sin(k * pi * h / 2.0);
  return 4.0 / (h * h) * s * s;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("tridiagonal small case") {
    const auto ev = tridiag_smallest_eigenvalues(dirichlet_1d(4), 1);
    CHECK(ev[0] == doctest::Approx(9.372583002030478).epsilon(1e-12));
    CHECK(ev[0] == doctest::Approx(16.0 * (2.0 - std::sqrt(2.0))).epsilon(1e-13));
  }

  TEST_CASE("diagonal operator returns the sorted diagonal") {
    TridiagonalOperator op({5.0, -1.0, 3.0, 0.5}, {0.0, 0.0, 0.0});
    const auto pairs = tridiag_smallest_eigenpairs(op, 4);
    const double expect[] = {-1.0, 0.5, 3.0, 5.0};
    for (int i = 0; i < 4; ++i) CHECK(pairs[i].value == doctest::Approx(expect[i]).epsilon(1e-14));
    CHECK(std::abs(pairs[0].vector[1]) == doctest::Approx(1.0));
  }

  TEST_CASE("discrete spectrum matches the closed form") {
    const auto ev = tridiag_smallest_eigenvalues(dirichlet_1d(100), 5);
    for (int k = 1; k <= 5; ++k) CHECK(ev[k - 1] == doctest::Approx(discrete_dirichlet(100, k)).epsilon(1e-11));
  }

  TEST_CASE("Richardson recovers pi^2") {
    const double coarse = tridiag_smallest_eigenvalues(dirichlet_1d(200), 1)[0];
    const double fine = tridiag_smallest_eigenvalues(dirichlet_1d(400), 1)[0];
    CHECK(std::abs(richardson(coarse, fine) - pi * pi) / (pi * pi) <= 1e-8);
  }

  TEST_CASE("random tridiagonal against the bisection oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 5 + trial * 3;
      std::vector<double> d(n), e(n - 1);
      for (auto& v : d) v = u(rng);
      for (auto& v : e) v = u(rng);
      const auto pairs = tridiag_smallest_eigenpairs(TridiagonalOperator(d, e), 1);
      CHECK(pairs[0].value == doctest::Approx(oracle::tridiag_min_eigenvalue(d, e)).epsilon(1e-10));
    }
  }

  TEST_CASE("eigenvectors are orthonormal with positive dominant entry") {
    const auto pairs = tridiag_smallest_eigenpairs(dirichlet_1d(300), 6);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      // symmetric modes tie in magnitude; the positive entry must reach the maximum
      double big = 0.0, top = 0.0;
      for (double v : pairs[i].vector) {
        big = std::max(big, std::abs(v));
        top = std::max(top, v);
      }
      CHECK(top >= big * (1.0 - 1e-10));
      for (std::size_t j = 0; j <= i; ++j) {
        double dot = 0.0;
        for (std::size_t q = 0; q < pairs[i].vector.size(); ++q) dot += pairs[i].vector[q] * pairs[j].vector[q];
        CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-8);
      }
    }
  }

  TEST_CASE("Sturm count and Gershgorin") {
    const auto op = dirichlet_1d(50);
    const auto ev = tridiag_smallest_eigenvalues(op, 10);
    CHECK(op.count_below(ev[4] + 1e-6) == 5);
    CHECK(op.count_below(ev[0] - 1e-6) == 0);
    CHECK(op.gershgorin_lower() <= ev[0]);
  }

  TEST_CASE("sparse shift-invert agrees with the tridiagonal solver") {
    const auto op = dirichlet_1d(256);
    const auto tri = tridiag_smallest_eigenpairs(op, 3);
    const auto sp = SparseSymmetricOperator::from_tridiagonal(op);
    for (bool cg : {false, true}) {
      SparseEigenOptions opts;
      opts.force_cg = cg;
      const auto pairs = sparse_smallest_eigenpairs(sp, 3, 0.0, opts);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(pairs[k].value - tri[k].value) / tri[k].value <= 1e-10);
    }
  }

  TEST_CASE("unit square as a Kronecker sum") {
    const std::size_t intervals = 64, m = intervals - 1;
    const double h = 1.0 / intervals, c = 1.0 / (h * h);
    std::vector<Triplet> t;
    auto id = [m](std::size_t i, std::size_t j) { return i * m + j; };
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        t.push_back({id(i, j), id(i, j), 4.0 * c});
        if (i + 1 < m) {
          t.push_back({id(i, j), id(i + 1, j), -c});
          t.push_back({id(i + 1, j), id(i, j), -c});
        }
        if (j + 1 < m) {
          t.push_back({id(i, j), id(i, j + 1), -c});
          t.push_back({id(i, j + 1), id(i, j), -c});
        }
      }
    }
    const auto op = SparseSymmetricOperator::from_triplets(m * m, std::move(t));
    CHECK(op.self_adjointness_defect(4, 3) < 1e-13);
    const auto pairs = sparse_smallest_eigenpairs(op, 3, 0.0);
    const double d1 = discrete_dirichlet(intervals, 1), d2 = discrete_dirichlet(intervals, 2);
    CHECK(pairs[0].value == doctest::Approx(2.0 * d1).epsilon(1e-10));
    CHECK(pairs[1].value == doctest::Approx(d1 + d2).epsilon(1e-10));
    CHECK(pairs[2].value == doctest::Approx(d1 + d2).epsilon(1e-10));
    CHECK(pairs[0].value == doctest::Approx(2.0 * pi * pi).epsilon(1e-3));
  }

  TEST_CASE("conjugate gradient solves a shifted system") {
    const auto sp = SparseSymmetricOperator::from_tridiagonal(dirichlet_1d(64));
    const std::size_t n = sp.dimension();
    std::vector<double> xs(n), b(n), x(n, 0.0), y(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = std::sin(0.3 * i) + 0.1;
    sp.apply(xs, b);
    for (std::size_t i = 0; i < n; ++i) b[i] += 2.0 * xs[i];  // shift -2
    conjugate_gradient(sp, -2.0, b, x, 1e-13, 10 * n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xs[i]).epsilon(1e-9));
  }

  TEST_CASE("quadrature rules") {
    auto r = integrate_adaptive([](double x) { return x; }, 0.0, 1.0, 1e-10, 1e-12);
    CHECK(std::abs(r.value - 0.5) <= 1e-6);
    r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-10, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) <= 1e-5);

    const auto x = uniform_nodes(8, 1.0, 2.0);
    const auto w = simpson_weights(8, 1.0, 2.0);
    std::vector<double> f(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) f[i] = x[i] * x[i] * x[i];
    CHECK(integrate_samples(f, w) == doctest::Approx(3.75).epsilon(1e-15));
    CHECK_THROWS_AS(simpson_weights(7, 0.0, 1.0), std::invalid_argument);

    const auto tw = trapezoid_weights(1000, 0.0, 1.0);
    const auto tx = uniform_nodes(1000, 0.0, 1.0);
    std::vector<double> g(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i) g[i] = std::exp(tx[i]);
    CHECK(integrate_samples(g, tw) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-6));
  }

  TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
    for (std::size_t n = 1; n <= 12; ++n) {
      const auto q = gauss_legendre(n, -0.5, 2.0);
      for (std::size_t p = 0; p < 2 * n; ++p) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], static_cast<double>(p));
        const double exact = (std::pow(2.0, p + 1.0) - std::pow(-0.5, p + 1.0)) / (p + 1.0);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
      }
    }
    const auto c = composite_gauss_legendre(10, 8, 0.0, pi);
    double s = 0.0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) s += c.weights[i] * std::sin(c.nodes[i]);
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("central difference") {
    CHECK(central_difference([](double x) { return x * x * x; }, 2.0, 1e-3) == doctest::Approx(12.0).epsilon(1e-6));
    CHECK_THROWS_AS(central_difference([](double x) { return x; }, 0.0, 0.0), std::invalid_argument);
  }
}
