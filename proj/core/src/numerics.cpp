#include "annular/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "annular/errors.hpp"

namespace annular::numerics {

TridiagonalOperator::TridiagonalOperator(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.size() < 2) throw std::invalid_argument("TridiagonalOperator: need N >= 2");
  if (offdiag_.size() + 1 != diag_.size()) {
    throw std::invalid_argument("TridiagonalOperator: offdiag must have length N-1");
  }
  double e2 = 1.0;
  for (double e : offdiag_) e2 = std::max(e2, e * e);
  pivmin_ = std::numeric_limits<double>::min() * e2;
}

void TridiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw std::invalid_argument("TridiagonalOperator::apply: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag_[i] * x[i];
    if (i > 0) v += offdiag_[i - 1] * x[i - 1];
    if (i + 1 < n) v += offdiag_[i] * x[i + 1];
    y[i] = v;
  }
}

std::size_t TridiagonalOperator::count_below(double x) const {
  const std::size_t n = size();
  std::size_t count = 0;
  double q = diag_[0] - x;
  if (std::fabs(q) < pivmin_) q = -pivmin_;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    q = diag_[i] - x - offdiag_[i - 1] * offdiag_[i - 1] / q;
    if (std::fabs(q) < pivmin_) q = -pivmin_;
    if (q < 0) ++count;
  }
  return count;
}

double TridiagonalOperator::gershgorin_lower() const {
  double lo = std::numeric_limits<double>::infinity();
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(offdiag_[i - 1]);
    if (i + 1 < n) r += std::fabs(offdiag_[i]);
    lo = std::min(lo, diag_[i] - r);
  }
  return lo;
}

double TridiagonalOperator::gershgorin_upper() const {
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(offdiag_[i - 1]);
    if (i + 1 < n) r += std::fabs(offdiag_[i]);
    hi = std::max(hi, diag_[i] + r);
  }
  return hi;
}

namespace {

// Runs to the resolution of the bracket: for graded operators (radial problems)
// the Sturm count resolves small eigenvalues far below eps * |T|.
double bisect_eigenvalue(const TridiagonalOperator& op, std::size_t j, double lo, double hi, double norm) {
  const double abs_floor = std::numeric_limits<double>::min() * std::max(norm, 1.0);
  for (int it = 0; it < 400; ++it) {
    const double width = hi - lo;
    if (width <= std::max(2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)),
                          abs_floor)) {
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (op.count_below(mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Partial-pivoting LU of (T - mu I), LAPACK gttrf layout.
struct TridiagLU {
  std::vector<double> dl, d, du, du2;
  std::vector<std::size_t> ipiv;

  TridiagLU(const TridiagonalOperator& op, double mu, double norm) {
    const std::size_t n = op.size();
    d.resize(n);
    dl.assign(op.offdiag().begin(), op.offdiag().end());
    du = dl;
    du2.assign(n >= 2 ? n - 2 : 0, 0.0);
    ipiv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = op.diag()[i] - mu;
      ipiv[i] = i;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(d[i]) >= std::fabs(dl[i])) {
        if (d[i] != 0.0) {
          const double fact = dl[i] / d[i];
          dl[i] = fact;
          d[i + 1] -= fact * du[i];
        }
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        ipiv[i] = i + 1;
      }
    }
    const double guard = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-300);
    for (double& v : d) {
      if (std::fabs(v) < guard) v = v < 0 ? -guard : guard;
    }
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (ipiv[i] == i) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n >= 3 ? n - 2 : 0; ii-- > 0;) {
      b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
  }
};

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& v) {
  const double nrm = std::sqrt(dot(v, v));
  if (nrm == 0.0) throw NumericalError("normalize: zero vector");
  for (double& x : v) x /= nrm;
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

std::vector<double> tridiag_smallest_eigenvalues(const TridiagonalOperator& op, std::size_t k) {
  if (k < 1 || k > op.size()) throw std::invalid_argument("tridiag_smallest_eigenvalues: need 1 <= k <= N");
  const double lo = op.gershgorin_lower();
  const double hi = op.gershgorin_upper();
  const double norm = std::max(std::fabs(lo), std::fabs(hi));
  std::vector<double> values(k);
  double floor = lo;
  for (std::size_t j = 0; j < k; ++j) {
    values[j] = bisect_eigenvalue(op, j, floor, hi, norm);
    floor = std::max(lo, values[j] - 1e-12 * std::max(1.0, std::fabs(values[j])));
  }
  return values;
}

std::vector<EigenPair> tridiag_smallest_eigenpairs(const TridiagonalOperator& op, std::size_t k) {
  const std::vector<double> values = tridiag_smallest_eigenvalues(op, k);
  const std::size_t n = op.size();
  const double norm = std::max(std::fabs(op.gershgorin_lower()), std::fabs(op.gershgorin_upper()));
  const double cluster_tol = 1e-9 * std::max(norm, 1.0);

  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    const double mu = values[j];
    TridiagLU lu(op, mu, norm);
    std::vector<double> x(n);
    for (double& v : x) v = 1.0 + 0.5 * unif(rng);
    for (int it = 0; it < 4; ++it) {
      lu.solve(x);
      for (const auto& prev : pairs) {
        if (std::fabs(prev.value - mu) <= cluster_tol) {
          const double c = dot(prev.vector, x);
          for (std::size_t i = 0; i < n; ++i) x[i] -= c * prev.vector[i];
        }
      }
      normalize(x);
    }
    fix_sign(x);
    pairs.push_back({mu, std::move(x)});
  }
  return pairs;
}

std::size_t conjugate_gradient(const SparseSymmetricOperator& op, double shift, std::span<const double> b,
                               std::span<double> x, double rel_tol, std::size_t max_iter) {
  const std::size_t n = op.dimension();
  std::vector<double> r(n), p(n), ap(n);
  op.apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - (ap[i] - shift * x[i]);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }
  p = r;
  double rr = dot(r, r);
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= rel_tol * bnorm) return it;
    op.apply(p, ap);
    for (std::size_t i = 0; i < n; ++i) ap[i] -= shift * p[i];
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw NumericalError("conjugate_gradient: operator not positive definite at the shift");
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= rel_tol * bnorm) return max_iter;
  throw NumericalError("conjugate_gradient: no convergence after " + std::to_string(max_iter) +
                       " iterations, relative residual " + std::to_string(std::sqrt(rr) / bnorm));
}

double integrate_samples(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("integrate_samples: values and weights differ in length (" +
                                std::to_string(values.size()) + " vs " + std::to_string(weights.size()) + ")");
  }
  return dot(values, weights);
}

std::vector<double> uniform_nodes(std::size_t intervals, double a, double b) {
  if (intervals < 1) throw std::invalid_argument("uniform_nodes: need at least one interval");
  std::vector<double> x(intervals + 1);
  const double h = (b - a) / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  return x;
}

std::vector<double> trapezoid_weights(std::size_t intervals, double a, double b) {
  if (intervals < 1) throw std::invalid_argument("trapezoid_weights: need at least one interval");
  const double h = (b - a) / static_cast<double>(intervals);
  std::vector<double> w(intervals + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_weights(std::size_t intervals, double a, double b) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("simpson_weights: need an even number of intervals");
  }
  const double h = (b - a) / static_cast<double>(intervals);
  std::vector<double> w(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    w[i] = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] *= h / 3.0;
  }
  return w;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t j = 2; j <= n; ++j) {
        const double dj = static_cast<double>(j);
        const double p2 = ((2.0 * dj - 1.0) * z * p1 - (dj - 1.0) * p0) / dj;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = dn * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t order, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need panels >= 1");
  const QuadratureRule ref = gauss_legendre(order, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t i = 0; i < order; ++i) {
      rule.nodes.push_back(lo + h * ref.nodes[i]);
      rule.weights.push_back(h * ref.weights[i]);
    }
  }
  return rule;
}

namespace {

const QuadratureRule& reference_rule() {
  static const QuadratureRule rule = gauss_legendre(15, 0.0, 1.0);
  return rule;
}

struct PanelEstimate {
  double value;
  double magnitude;
};

PanelEstimate panel(const std::function<double(double)>& f, double a, double b) {
  const QuadratureRule& ref = reference_rule();
  const double h = b - a;
  double s = 0.0, m = 0.0;
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    const double v = f(a + h * ref.nodes[i]);
    s += ref.weights[i] * v;
    m += ref.weights[i] * std::fabs(v);
  }
  return {h * s, h * m};
}

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

void adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth,
           Accumulator& acc) {
  const double mid = 0.5 * (a + b);
  const PanelEstimate left = panel(f, a, mid);
  const PanelEstimate right = panel(f, mid, b);
  const double refined = left.value + right.value;
  const double err = std::fabs(refined - whole);
  if (err <= tol || depth <= 0 || mid <= a || mid >= b) {
    if (err > tol) acc.converged = false;
    acc.value += refined;
    acc.error += err;
    return;
  }
  adapt(f, a, mid, left.value, 0.5 * tol, depth - 1, acc);
  adapt(f, mid, b, right.value, 0.5 * tol, depth - 1, acc);
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_depth) {
  if (a == b) return {0.0, 0.0, true};
  // Seed the tolerance from the integral of |f| on a coarse partition so that
  // cancelling integrands are judged against their natural scale.
  constexpr int seed_panels = 8;
  const double h = (b - a) / seed_panels;
  double magnitude = 0.0;
  std::vector<PanelEstimate> seeds;
  for (int i = 0; i < seed_panels; ++i) {
    seeds.push_back(panel(f, a + h * i, a + h * (i + 1)));
    magnitude += seeds.back().magnitude;
  }
  const double tol = std::max(abs_tol, rel_tol * magnitude);
  Accumulator acc;
  for (int i = 0; i < seed_panels; ++i) {
    adapt(f, a + h * i, a + h * (i + 1), seeds[static_cast<std::size_t>(i)].value, tol / seed_panels, max_depth,
          acc);
  }
  return {acc.value, acc.error, acc.converged};
}

double richardson(double coarse, double fine, int order) {
  const double factor = std::pow(2.0, order);
  return fine + (fine - coarse) / (factor - 1.0);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("central_difference: step must be positive");
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace annular::numerics
