#include "annular/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "annular/errors.hpp"

namespace annular {

double Spectrum::tail_bound(double t, double shift) const {
  if (!(t > 0.0)) throw std::invalid_argument("tail_bound: t must be positive");
  const std::size_t k = modes.size();
  if (k < 2) throw NumericalError("tail_bound: spectrum too short");
  const double d = static_cast<double>(dimension);
  const double half_d = 0.5 * d;

  // Weyl envelope from the upper half of the computed spectrum.
  double weyl = std::numeric_limits<double>::infinity();
  for (std::size_t i = k / 2; i < k; ++i) {
    const double idx = static_cast<double>(i + 1);
    weyl = std::min(weyl, modes[i].lambda / std::pow(idx, 2.0 / d));
  }
  double sup_const = 0.0;
  for (const auto& m : modes) {
    sup_const = std::max(sup_const, m.sup_norm * m.sup_norm / std::pow(std::max(m.lambda, 1e-300), half_d));
  }
  const double floor_lambda = std::max(cutoff, modes.back().lambda);
  // x^{d/2} e^{-x t} is decreasing for x > d / (2t).
  auto envelope = [&](double lower) {
    const double x = std::max(lower, half_d / t);
    return std::pow(x, half_d) * std::exp(-(x - shift) * t);
  };
  double sum = 0.0;
  for (std::size_t i = k + 1; i < k + 100000000; ++i) {
    const double lower = std::max(floor_lambda, weyl * std::pow(static_cast<double>(i), 2.0 / d));
    const double term = sup_const * envelope(lower);
    sum += term;
    if (lower > half_d / t && term <= 1e-18 * sum) break;
    if (term == 0.0) break;
  }
  return sum;
}

double Spectrum::spectral_gap() const {
  if (modes.empty()) throw NumericalError("spectral_gap: empty spectrum");
  const double l1 = modes.front().lambda;
  for (const auto& m : modes) {
    if (m.lambda > l1 * (1.0 + 1e-9) + 1e-12) return m.lambda - l1;
  }
  throw NumericalError("spectral_gap: no second distinct eigenvalue");
}

}  // namespace annular
