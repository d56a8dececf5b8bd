#include "annular/specfun.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "annular/errors.hpp"
#include "annular/numerics.hpp"

namespace annular::specfun {
namespace {

constexpr double kTruncationNats = 40.0;
// Cancellation (in nats) the alternating series may lose before we fall back to
// Schlaefli's integral, which is well conditioned for r beyond the order.
constexpr double kMaxCancellationNats = 12.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SeriesResult {
  LogMagnitude value;
  double cancellation;
};

SeriesResult bessel_series(double nu, double r) {
  if (r == 0.0) {
    if (nu == 0.0) return {{0.0, 1}, 0.0};
    return {{kNegInf, 0}, 0.0};
  }
  const double half = 0.5 * r;
  const double log_half = std::log(half);
  const double q = half * half;

  // Terms t_k = (r/2)^{nu+2k} / (k! Gamma(k+nu+1)), built by recurrence in log space.
  std::vector<double> logs;
  logs.reserve(64);
  double lt = nu * log_half - log_gamma(nu + 1.0);
  double max_log = lt;
  for (std::size_t k = 0;; ++k) {
    logs.push_back(lt);
    max_log = std::max(max_log, lt);
    const double kk = static_cast<double>(k);
    const bool decreasing = q < (kk + 1.0) * (kk + 1.0 + nu);
    if (decreasing && lt < max_log - kTruncationNats) break;
    if (k > 200000) throw NumericalError("bessel series failed to terminate");
    lt += 2.0 * log_half - std::log(kk + 1.0) - std::log(kk + 1.0 + nu);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const double term = std::exp(logs[k] - max_log);
    s += (k % 2 == 0) ? term : -term;
  }
  if (s == 0.0) return {{kNegInf, 0}, std::numeric_limits<double>::infinity()};
  const double log_abs = max_log + std::log(std::fabs(s));
  return {{log_abs, s > 0 ? 1 : -1}, max_log - log_abs};
}

// J_nu(r) = (1/pi) int_0^pi cos(nu t - r sin t) dt - sin(nu pi)/pi int_0^inf exp(-r sinh t - nu t) dt
double bessel_schlaefli(double nu, double r) {
  using std::numbers::pi;
  auto oscillatory = [nu, r](double t) { return std::cos(nu * t - r * std::sin(t)); };
  const auto first = numerics::integrate_adaptive(oscillatory, 0.0, pi, 1e-14, 1e-15, 50);
  double value = first.value / pi;
  const double s = std::sin(nu * pi);
  if (std::fabs(s) > 1e-15) {
    // exp(-r sinh t - nu t) is below e^-60 once r sinh t + nu t > 60.
    double upper = 1.0;
    while (r * std::sinh(upper) + nu * upper < 60.0) upper *= 2.0;
    auto tail = [nu, r](double t) { return std::exp(-r * std::sinh(t) - nu * t); };
    const auto second = numerics::integrate_adaptive(tail, 0.0, upper, 1e-14, 1e-16, 50);
    value -= s / pi * second.value;
  }
  return value;
}

void check_argument(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::domain_error("bessel_j: argument must be finite and nonnegative, got " + std::to_string(r));
  }
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("BesselOrder: order must be finite and nonnegative, got " + std::to_string(nu));
  }
}

double LogMagnitude::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

LogMagnitude bessel_j_log(BesselOrder order, double r) {
  check_argument(r);
  const double nu = order.value();
  const SeriesResult s = bessel_series(nu, r);
  if (s.cancellation <= kMaxCancellationNats) return s.value;
  const double v = bessel_schlaefli(nu, r);
  if (v == 0.0) return {kNegInf, 0};
  return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

double bessel_j(BesselOrder order, double r) { return bessel_j_log(order, r).value(); }

double bessel_j_integral(BesselOrder order, double r) {
  check_argument(r);
  using std::numbers::pi;
  const double nu = order.value();
  if (r == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double p = nu - 0.5;
  double integral = 0.0;
  const double rel = 1e-13;
  const double abs = 1e-16;
  if (p < 1.0) {
    // Algebraic endpoint behaviour: split at t = 1/2 and use t = sin(u) near t = 1.
    auto inner = [p, r](double t) { return std::pow(1.0 - t * t, p) * std::cos(r * t); };
    auto outer = [nu, r](double u) { return std::pow(std::cos(u), 2.0 * nu) * std::cos(r * std::sin(u)); };
    integral = numerics::integrate_adaptive(inner, 0.0, 0.5, rel, abs).value +
               numerics::integrate_adaptive(outer, pi / 6.0, pi / 2.0, rel, abs).value;
  } else {
    auto f = [p, r](double t) { return std::pow(1.0 - t * t, p) * std::cos(r * t); };
    integral = numerics::integrate_adaptive(f, 0.0, 1.0, rel, abs).value;
  }
  integral *= 2.0;
  if (integral == 0.0) return 0.0;
  const double log_prefactor = nu * std::log(0.5 * r) - log_gamma(nu + 0.5) - 0.5 * std::log(pi);
  const double sign = integral > 0 ? 1.0 : -1.0;
  return sign * std::exp(log_prefactor + std::log(std::fabs(integral)));
}

double first_positive_zero(BesselOrder order) {
  const double nu = order.value();
  const double lo_bound = nu;
  const double hi_bound = nu + 4.0 * std::cbrt(nu) + 6.0;
  constexpr double step = 0.25;  // zeros of J_nu are more than pi apart

  double x0 = lo_bound;
  int s0 = bessel_j_log(order, x0).sign;
  if (nu > 0.0 && s0 <= 0) throw NumericalError("first_positive_zero: J_nu(nu) is not positive");
  if (nu == 0.0) s0 = 1;
  double x1 = x0;
  bool bracketed = false;
  while (x0 < hi_bound) {
    x1 = std::min(x0 + step, hi_bound);
    const int s1 = bessel_j_log(order, x1).sign;
    if (s1 <= 0) {
      bracketed = true;
      break;
    }
    x0 = x1;
  }
  if (!bracketed) {
    throw NumericalError("first_positive_zero: no sign change on [nu, nu + 4 nu^(1/3) + 6] for nu = " +
                         std::to_string(nu));
  }
  double lo = x0, hi = x1;
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bessel_j_log(order, mid).sign > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace annular::specfun
