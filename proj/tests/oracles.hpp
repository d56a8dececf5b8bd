#pragma once
// Reference computations written independently of the library.
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Dirichlet heat kernel of (-a, a) by the method of images.
inline double interval_kernel_images(double a, double t, double x, double y) {
  const double L = 2.0 * a, X = x + a, Y = y + a;
  auto g = [t](double z) { return std::exp(-z * z / (4.0 * t)) / std::sqrt(4.0 * pi * t); };
  double p = 0.0;
  for (int k = -40; k <= 40; ++k) p += g(X - Y + 2.0 * k * L) - g(X + Y + 2.0 * k * L);
  return p;
}

// Principal Dirichlet eigenfunction of (-a, a), L^2 normalized.
inline double interval_phi(double a, double x) { return std::cos(pi * x / (2.0 * a)) / std::sqrt(a); }

// Smallest eigenvalue of the symmetric tridiagonal matrix by bisection on the
// Sturm sequence (plain recurrence, no pivot guard).
inline double tridiag_min_eigenvalue(const std::vector<double>& d, const std::vector<double>& e) {
  double lo = -1e6, hi = 1e6;
  auto count = [&](double x) {
    int c = 0;
    double q = d[0] - x;
    if (q < 0) ++c;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (q == 0.0) q = 1e-300;
      q = d[i] - x - e[i - 1] * e[i - 1] / q;
      if (q < 0) ++c;
    }
    return c;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (count(mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Radial eigenvalue of the annulus in R^n with a full-sphere base by a
// shooting method on the ODE f'' + (n-1)/r f' + (lambda - l0/r^2) f = 0.
inline double shoot_radial(int n, double a, double b, double l0, double guess_lo, double guess_hi, int steps = 4000) {
  auto end_value = [&](double lam) {
    const double h = (b - a) / steps;
    double r = a, f = 0.0, g = 1.0;
    auto rhs = [&](double rr, double ff, double gg, double& df, double& dg) {
      df = gg;
      dg = -(n - 1) / rr * gg - (lam - l0 / (rr * rr)) * ff;
    };
    for (int i = 0; i < steps; ++i) {
      double k1f, k1g, k2f, k2g, k3f, k3g, k4f, k4g;
      rhs(r, f, g, k1f, k1g);
      rhs(r + h / 2, f + h / 2 * k1f, g + h / 2 * k1g, k2f, k2g);
      rhs(r + h / 2, f + h / 2 * k2f, g + h / 2 * k2g, k3f, k3g);
      rhs(r + h, f + h * k3f, g + h * k3g, k4f, k4g);
      f += h / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
      g += h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
      r += h;
    }
    return f;
  };
  double lo = guess_lo, hi = guess_hi, flo = end_value(lo);
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi), fm = end_value(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
