// Shift-invert Lanczos for the smallest eigenpairs of sparse symmetric operators.
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "annular/errors.hpp"
#include "annular/numerics.hpp"

namespace annular::numerics {

SparseSymmetricOperator::SparseSymmetricOperator(std::size_t dimension, LinearMap apply)
    : dimension_(dimension), apply_(std::move(apply)) {
  if (dimension_ == 0) throw std::invalid_argument("SparseSymmetricOperator: dimension must be positive");
  if (!apply_) throw std::invalid_argument("SparseSymmetricOperator: empty linear map");
}

SparseSymmetricOperator SparseSymmetricOperator::from_triplets(std::size_t dimension,
                                                               std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= dimension || t.col >= dimension) {
      throw std::invalid_argument("SparseSymmetricOperator: triplet index out of range");
    }
  }
  // Compressed row storage for the matrix-free apply.
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& x, const Triplet& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
  std::vector<Triplet> merged;
  merged.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  auto rows = std::make_shared<std::vector<std::size_t>>(dimension + 1, 0);
  auto cols = std::make_shared<std::vector<std::size_t>>();
  auto vals = std::make_shared<std::vector<double>>();
  cols->reserve(merged.size());
  vals->reserve(merged.size());
  for (const auto& t : merged) {
    ++(*rows)[t.row + 1];
    cols->push_back(t.col);
    vals->push_back(t.value);
  }
  std::partial_sum(rows->begin(), rows->end(), rows->begin());
  LinearMap apply = [rows, cols, vals](std::span<const double> x, std::span<double> y) {
    const std::size_t n = rows->size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t p = (*rows)[i]; p < (*rows)[i + 1]; ++p) s += (*vals)[p] * x[(*cols)[p]];
      y[i] = s;
    }
  };
  SparseSymmetricOperator op(dimension, std::move(apply));
  op.triplets_ = std::move(merged);
  return op;
}

SparseSymmetricOperator SparseSymmetricOperator::from_tridiagonal(const TridiagonalOperator& t) {
  std::vector<Triplet> trip;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    trip.push_back({i, i, t.diag()[i]});
    if (i + 1 < n) {
      trip.push_back({i, i + 1, t.offdiag()[i]});
      trip.push_back({i + 1, i, t.offdiag()[i]});
    }
  }
  return from_triplets(n, std::move(trip));
}

void SparseSymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dimension_ || y.size() != dimension_) {
    throw std::invalid_argument("SparseSymmetricOperator::apply: size mismatch");
  }
  apply_(x, y);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// Power-iteration estimate of ||A||, used to scale the symmetry defect.
double estimate_norm(const SparseSymmetricOperator& op, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(op.dimension()), w(op.dimension());
  for (double& x : v) x = g(rng);
  double est = 0.0;
  for (int it = 0; it < 30; ++it) {
    const double n = norm2(v);
    for (double& x : v) x /= n;
    op.apply(v, w);
    est = norm2(w);
    if (est == 0.0) return 0.0;
    v.swap(w);
  }
  return est;
}

class ShiftInvertSolver {
 public:
  ShiftInvertSolver(const SparseSymmetricOperator& op, double shift, const SparseEigenOptions& options)
      : op_(op), shift_(shift), options_(options) {
    if (op.assembled() && !options.force_cg) {
      const auto n = static_cast<Eigen::Index>(op.dimension());
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(op.triplets().size() + op.dimension());
      for (const auto& t : op.triplets()) {
        trip.emplace_back(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col), t.value);
      }
      for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(i, i, -shift);
      Eigen::SparseMatrix<double> m(n, n);
      m.setFromTriplets(trip.begin(), trip.end());
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(m);
      if (ldlt_->info() != Eigen::Success) throw NumericalError("shift-invert: sparse factorization failed");
    }
  }

  void solve(std::span<const double> b, std::span<double> x) const {
    if (ldlt_) {
      Eigen::Map<const Eigen::VectorXd> bb(b.data(), static_cast<Eigen::Index>(b.size()));
      Eigen::Map<Eigen::VectorXd> xx(x.data(), static_cast<Eigen::Index>(x.size()));
      xx = ldlt_->solve(bb);
      return;
    }
    std::fill(x.begin(), x.end(), 0.0);
    conjugate_gradient(op_, shift_, b, x, options_.cg_tol, options_.cg_cap_factor * op_.dimension());
  }

 private:
  const SparseSymmetricOperator& op_;
  double shift_;
  SparseEigenOptions options_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
};

struct RitzPair {
  double theta;
  std::vector<double> vector;
  double residual_estimate;
};

// Largest `want` Ritz pairs of the Lanczos tridiagonal (alpha, beta).
std::vector<RitzPair> ritz(const std::vector<double>& alpha, const std::vector<double>& beta, double last_beta,
                           std::size_t want, const std::vector<std::vector<double>>& basis) {
  const std::size_t m = alpha.size();
  std::vector<std::pair<double, std::vector<double>>> small;
  if (m == 1) {
    small.push_back({alpha[0], {1.0}});
  } else {
    std::vector<double> d(m), e(m - 1);
    for (std::size_t i = 0; i < m; ++i) d[i] = -alpha[i];
    for (std::size_t i = 0; i + 1 < m; ++i) e[i] = -beta[i];
    const auto pairs = tridiag_smallest_eigenpairs(TridiagonalOperator(d, e), std::min(want, m));
    for (const auto& p : pairs) small.push_back({-p.value, p.vector});
  }
  std::vector<RitzPair> out;
  const std::size_t n = basis.front().size();
  for (auto& [theta, s] : small) {
    RitzPair rp{theta, std::vector<double>(n, 0.0), std::fabs(last_beta * s.back())};
    for (std::size_t j = 0; j < m; ++j) axpy(s[j], basis[j], rp.vector);
    out.push_back(std::move(rp));
  }
  return out;
}

struct PassResult {
  std::vector<EigenPair> pairs;
  double worst_residual;
};

// One Lanczos pass (with explicit restarts) for `want` eigenpairs orthogonal to `locked`.
PassResult lanczos_pass(const SparseSymmetricOperator& op, const ShiftInvertSolver& solver, double shift,
                        std::size_t want, const std::vector<EigenPair>& locked, const SparseEigenOptions& options,
                        std::mt19937_64& rng) {
  const std::size_t n = op.dimension();
  const std::size_t free_dim = n - locked.size();
  want = std::min(want, free_dim);
  std::size_t max_krylov = options.max_krylov ? options.max_krylov : std::max<std::size_t>(2 * want + 40, 80);
  max_krylov = std::min(max_krylov, free_dim);

  auto orthogonalize = [&](std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& l : locked) axpy(-dot(l.vector, w), l.vector, w);
      for (const auto& q : basis) axpy(-dot(q, w), q, w);
    }
  };

  std::normal_distribution<double> g;
  std::vector<double> start(n);
  for (double& x : start) x = g(rng);

  std::vector<RitzPair> best;
  double worst = 0.0;
  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    std::vector<double> q = start;
    orthogonalize(q, basis);
    double qn = norm2(q);
    if (qn == 0.0) throw NumericalError("lanczos: start vector collapsed");
    for (double& x : q) x /= qn;

    std::vector<double> w(n);
    double last_beta = 0.0;
    bool done = false;
    for (std::size_t j = 0; j < max_krylov && !done; ++j) {
      basis.push_back(q);
      solver.solve(q, w);
      const double a = dot(q, w);
      alpha.push_back(a);
      orthogonalize(w, basis);
      last_beta = norm2(w);
      const bool exhausted = last_beta <= 1e-14 * std::fabs(a) || basis.size() == max_krylov;
      if (exhausted || (j + 1) % 5 == 0) {
        best = ritz(alpha, beta, last_beta, want, basis);
        bool all = best.size() >= want;
        for (std::size_t i = 0; i < best.size() && i < want; ++i) {
          if (best[i].residual_estimate > 1e-13 * std::fabs(best[i].theta)) all = false;
        }
        if (all || exhausted) done = true;
      }
      if (!done) {
        beta.push_back(last_beta);
        for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / last_beta;
      }
    }

    // Polish with one shift-invert step per vector and a small Rayleigh-Ritz.
    std::vector<EigenPair> pairs;
    worst = 0.0;
    for (std::size_t i = 0; i < best.size() && i < want; ++i) {
      std::vector<double> v(n);
      solver.solve(best[i].vector, v);
      for (const auto& l : locked) axpy(-dot(l.vector, v), l.vector, v);
      for (const auto& p : pairs) axpy(-dot(p.vector, v), p.vector, v);
      const double vn = norm2(v);
      for (double& x : v) x /= vn;
      std::vector<double> av(n);
      op.apply(v, av);
      const double lambda = dot(v, av);
      axpy(-lambda, v, av);
      const double res = norm2(av);
      // relative to |lambda - shift| as well, so that a null eigenvalue is certifiable
      worst = std::max(worst, res / std::max({std::fabs(lambda), std::fabs(lambda - shift), 1e-300}));
      pairs.push_back({lambda, std::move(v)});
    }
    if (pairs.size() >= want && worst <= options.residual_tol) return {std::move(pairs), worst};
    std::fill(start.begin(), start.end(), 0.0);
    for (const auto& p : pairs) axpy(1.0, p.vector, start);
  }
  throw NumericalError("sparse_smallest_eigenpairs: no convergence, last relative residual " +
                       std::to_string(worst));
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::fabs(v[i]) > std::fabs(v[best]) * (1.0 + 1e-12)) best = i;
  }
  if (v[best] < 0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

double SparseSymmetricOperator::self_adjointness_defect(std::size_t probes, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  const double a_norm = estimate_norm(*this, rng);
  std::normal_distribution<double> g;
  std::vector<double> v(dimension_), w(dimension_), av(dimension_), aw(dimension_);
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    for (double& x : v) x = g(rng);
    for (double& x : w) x = g(rng);
    apply(v, av);
    apply(w, aw);
    const double scale = std::max(a_norm, 1e-300) * norm2(v) * norm2(w);
    worst = std::max(worst, std::fabs(dot(av, w) - dot(v, aw)) / scale);
  }
  return worst;
}

std::vector<EigenPair> sparse_smallest_eigenpairs(const SparseSymmetricOperator& op, std::size_t k, double shift,
                                                  const SparseEigenOptions& options) {
  const std::size_t n = op.dimension();
  if (k < 1 || k > n) throw std::invalid_argument("sparse_smallest_eigenpairs: need 1 <= k <= dimension");
  if (n <= 2) {
    // Degenerate sizes: the tiny dense problem is exact.
    std::vector<double> d(2, 0.0), e(1, 0.0), unit(n), col(n);
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      std::fill(unit.begin(), unit.end(), 0.0);
      unit[j] = 1.0;
      op.apply(unit, col);
      for (std::size_t i = 0; i < n; ++i) a[i][j] = col[i];
    }
    if (n == 1) return {{a[0][0], {1.0}}};
    if (std::fabs(a[0][1]) == 0.0) {
      std::vector<EigenPair> out{{a[0][0], {1.0, 0.0}}, {a[1][1], {0.0, 1.0}}};
      std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
      out.resize(k);
      return out;
    }
    auto pairs = tridiag_smallest_eigenpairs(TridiagonalOperator({a[0][0], a[1][1]}, {a[0][1]}), k);
    return pairs;
  }

  ShiftInvertSolver solver(op, shift, options);
  std::mt19937_64 rng(options.seed);

  // First pass, then locking passes that look for eigenvalues a single Krylov
  // sequence can miss (exact multiplicities).
  std::vector<EigenPair> found = lanczos_pass(op, solver, shift, k, {}, options, rng).pairs;
  for (int extra = 0; extra < 3 && found.size() < n; ++extra) {
    const std::vector<EigenPair> more = lanczos_pass(op, solver, shift, k, found, options, rng).pairs;
    const double kth = std::max_element(found.begin(), found.end(), [](const auto& x, const auto& y) {
                         return x.value < y.value;
                       })->value;
    bool improved = false;
    for (const auto& p : more) {
      if (p.value < kth * (1.0 - 1e-10) - 1e-14 || (found.size() < k)) improved = true;
    }
    for (const auto& p : more) found.push_back(p);
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
    if (!improved) break;
    if (found.size() > k + 4 * k) found.resize(5 * k);
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.value < y.value; });
  found.resize(std::min(found.size(), k));
  if (found.size() < k) throw NumericalError("sparse_smallest_eigenpairs: fewer eigenpairs than requested");
  for (auto& p : found) fix_sign(p.vector);
  return found;
}

}  // namespace annular::numerics
