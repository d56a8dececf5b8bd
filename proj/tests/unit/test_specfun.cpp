#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "annular/specfun.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annular::specfun;
using oracle::pi;

TEST_SUITE("specfun") {
  TEST_CASE("log_gamma known values") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-12));
    CHECK(log_gamma(11.0) == doctest::Approx(15.104412573075516).epsilon(1e-12));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
  }

  TEST_CASE("log_gamma recurrence") {
    for (double x = 0.1; x < 60.0; x *= 1.37) CHECK(log_gamma(x + 1.0) - log_gamma(x) == doctest::Approx(std::log(x)).epsilon(1e-11));
  }

  TEST_CASE("bessel closed forms") {
    CHECK(bessel_j(BesselOrder(0.0), 0.0) == 1.0);
    CHECK(bessel_j(BesselOrder(0.5), pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-13));
    // J_{1/2}(r) = sqrt(2/(pi r)) sin r
    for (double r = 0.1; r < 30.0; r += 0.73)
      CHECK(bessel_j(BesselOrder(0.5), r) == doctest::Approx(std::sqrt(2.0 / (pi * r)) * std::sin(r)).epsilon(1e-10));
    CHECK(bessel_j(BesselOrder(2.0), 0.0) == 0.0);
    CHECK_THROWS_AS(BesselOrder(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(BesselOrder(1.0), -0.5), std::domain_error);
  }

  TEST_CASE("series agrees with the integral representation") {
    CHECK(std::abs(bessel_j(BesselOrder(1.0), 1.0) - bessel_j_integral(BesselOrder(1.0), 1.0)) <= 1e-10);
    for (double nu : {1.0, 2.0, 5.0, 10.0}) {
      for (int i = 1; i <= 20; ++i) {
        const double r = 2.0 * nu * i / 20.0;
        CHECK(std::abs(bessel_j(BesselOrder(nu), r) - bessel_j_integral(BesselOrder(nu), r)) <= 1e-8);
      }
    }
  }

  TEST_CASE("bessel recurrence J_{nu-1} + J_{nu+1} = 2 nu / r J_nu") {
    for (double nu : {1.0, 2.5, 7.0, 15.0}) {
      for (double r : {0.3, 2.0, 9.0, 20.0}) {
        const double jm = bessel_j(BesselOrder(nu - 1), r), jp = bessel_j(BesselOrder(nu + 1), r);
        const double rhs = 2.0 * nu / r * bessel_j(BesselOrder(nu), r);
        CHECK(std::abs(jm + jp - rhs) <= 1e-10 * std::max(1.0, std::abs(jm) + std::abs(jp) + std::abs(rhs)));
      }
    }
  }

  TEST_CASE("log magnitude for tiny values") {
    const auto lm = bessel_j_log(BesselOrder(200.0), 1.0);
    CHECK(lm.sign == 1);
    // (r/2)^nu / Gamma(nu + 1) sum_k (-(r/2)^2)^k / (k! (nu + 1)...(nu + k)), four terms
    const double series = 1.0 - 0.25 / 201.0 + 0.0625 / (2.0 * 201.0 * 202.0) - 0.015625 / (6.0 * 201.0 * 202.0 * 203.0);
    CHECK(lm.log_abs == doctest::Approx(-200.0 * std::log(2.0) - std::lgamma(201.0) + std::log(series)).epsilon(1e-13));
    const auto ok = bessel_j_log(BesselOrder(1.0), 1.0);
    CHECK(ok.value() == doctest::Approx(bessel_j(BesselOrder(1.0), 1.0)).epsilon(1e-13));
  }

  TEST_CASE("first zeros") {
    CHECK(first_positive_zero(BesselOrder(0.5)) == doctest::Approx(pi).epsilon(1e-11));
    CHECK(first_positive_zero(BesselOrder(0.0)) == doctest::Approx(2.404825557695773).epsilon(1e-11));
    CHECK(first_positive_zero(BesselOrder(1.0)) == doctest::Approx(3.831705970207512).epsilon(1e-11));
    const double a10 = first_positive_zero(BesselOrder(10.0));
    CHECK(std::abs(a10 - 10.0 - 1.855757 * std::cbrt(10.0)) <= 1.0);
  }

  TEST_CASE("J is positive before its first zero and zeros increase with the order") {
    double prev = 0.0;
    for (double nu = 0.0; nu <= 30.0; nu += 0.75) {
      const double z = first_positive_zero(BesselOrder(nu));
      CHECK(z > prev);
      CHECK(std::abs(bessel_j(BesselOrder(nu), z)) < 1e-10);
      for (int i = 1; i < 50; ++i) CHECK(bessel_j_log(BesselOrder(nu), z * i / 50.0).sign == 1);
      prev = z;
    }
  }
}
