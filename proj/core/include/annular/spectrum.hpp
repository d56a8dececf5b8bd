#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace annular {

// Points are Cartesian coordinates in the ambient space of the domain.
using PointSampler = std::function<double(std::span<const double>)>;

struct Mode {
  double lambda;
  PointSampler phi;
  double sup_norm;  // ||phi||_inf, used by the tail bound
};

// Dirichlet eigenpairs in ascending order. Every eigenvalue below `cutoff` is
// present; modes not listed have lambda >= cutoff.
struct Spectrum {
  std::vector<Mode> modes;
  int dimension = 2;  // Weyl exponent d in lambda_k ~ k^{2/d}
  double cutoff = 0.0;
  std::string description;

  std::size_t size() const { return modes.size(); }
  // Bound for sum_{k > K} e^{-lambda_k t} ||phi_k||_inf^2 from a Weyl-type
  // envelope lambda_k >= c k^{2/d} fitted to the computed eigenvalues and a
  // sup-norm envelope ||phi_k||^2 <= S lambda_k^{d/2}. With a shift the bound
  // is for the sum times e^{shift t} (no overflow for large lambda_1 t).
  double tail_bound(double t, double shift = 0.0) const;
  // Gap to the next distinct eigenvalue above lambda_1.
  double spectral_gap() const;
};

}  // namespace annular
