#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace annular::numerics {

struct EigenPair {
  double value;
  std::vector<double> vector;
};

class TridiagonalOperator {
 public:
  TridiagonalOperator(std::vector<double> diag, std::vector<double> offdiag);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& offdiag() const { return offdiag_; }
  void apply(std::span<const double> x, std::span<double> y) const;
  // Number of eigenvalues strictly below x (Sturm count).
  std::size_t count_below(double x) const;
  double gershgorin_lower() const;
  double gershgorin_upper() const;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  double pivmin_ = 0.0;
};

// k smallest eigenpairs, ascending; unit 2-norm; the largest-magnitude component
// of every vector is positive.
std::vector<EigenPair> tridiag_smallest_eigenpairs(const TridiagonalOperator& op, std::size_t k);
// Eigenvalues only (cheaper: no inverse iteration).
std::vector<double> tridiag_smallest_eigenvalues(const TridiagonalOperator& op, std::size_t k);

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

// Symmetric operator known through its action. When built from triplets the
// assembled matrix is kept as well, and shift-invert uses a sparse LDL^T
// factorization instead of conjugate gradients.
class SparseSymmetricOperator {
 public:
  SparseSymmetricOperator(std::size_t dimension, LinearMap apply);
  // Triplets with duplicate (row, col) entries are summed. Both triangles must be
  // present.
  static SparseSymmetricOperator from_triplets(std::size_t dimension, std::vector<Triplet> triplets);
  static SparseSymmetricOperator from_tridiagonal(const TridiagonalOperator& op);

  std::size_t dimension() const { return dimension_; }
  void apply(std::span<const double> x, std::span<double> y) const;
  bool assembled() const { return !triplets_.empty(); }
  const std::vector<Triplet>& triplets() const { return triplets_; }
  // Largest relative asymmetry |<Av,w> - <v,Aw>| / (|A| |v| |w|) over random probes.
  double self_adjointness_defect(std::size_t probes, std::uint64_t seed) const;

 private:
  std::size_t dimension_;
  LinearMap apply_;
  std::vector<Triplet> triplets_;
};

struct SparseEigenOptions {
  double residual_tol = 1e-8;     // ||Av - lambda v|| <= tol * max(|lambda|, |lambda - shift|)
  double cg_tol = 1e-10;          // relative, inner solves
  std::size_t cg_cap_factor = 20; // iteration cap = factor * dimension
  std::size_t max_krylov = 0;     // 0: automatic
  std::size_t max_restarts = 8;
  bool force_cg = false;          // ignore the assembled matrix
  std::uint64_t seed = 12345;
};

// k smallest eigenpairs of a symmetric operator, shift-invert Lanczos with full
// reorthogonalization. shift must lie strictly below the spectrum of interest
// so that A - shift is positive definite.
std::vector<EigenPair> sparse_smallest_eigenpairs(const SparseSymmetricOperator& op, std::size_t k,
                                                  double shift, const SparseEigenOptions& options = {});

// Conjugate gradients for (A - shift) x = b, x holds the initial guess.
// Returns the iteration count; throws NumericalError past the cap.
std::size_t conjugate_gradient(const SparseSymmetricOperator& op, double shift, std::span<const double> b,
                               std::span<double> x, double rel_tol, std::size_t max_iter);

double integrate_samples(std::span<const double> values, std::span<const double> weights);

// Composite rules on n equal intervals (n + 1 nodes).
std::vector<double> trapezoid_weights(std::size_t intervals, double a, double b);
std::vector<double> simpson_weights(std::size_t intervals, double a, double b);
std::vector<double> uniform_nodes(std::size_t intervals, double a, double b);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a, double b);
// panels x order nodes.
QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t order, double a, double b);

struct AdaptiveResult {
  double value;
  double error_estimate;
  bool converged;
};
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_depth = 40);

// Richardson extrapolation of a quantity with error ~ C h^order, coarse at h and
// fine at h/2.
double richardson(double coarse, double fine, int order = 2);

// Second-order central difference f'(x) with step h.
double central_difference(const std::function<double(double)>& f, double x, double h);

}  // namespace annular::numerics
