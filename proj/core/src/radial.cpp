#include "annular/radial.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "annular/numerics.hpp"

namespace annular::radial {
namespace {

numerics::TridiagonalOperator transformed_operator(int n, double a, double b, double lambda0, std::size_t N) {
  const double h = (b - a) / static_cast<double>(N);
  const double potential = transform_alpha(n) + lambda0;
  std::vector<double> diag(N - 1), off(N - 2, -1.0 / (h * h));
  for (std::size_t i = 1; i < N; ++i) {
    const double r = a + h * static_cast<double>(i);
    diag[i - 1] = 2.0 / (h * h) + potential / (r * r);
  }
  return numerics::TridiagonalOperator(std::move(diag), std::move(off));
}

numerics::TridiagonalOperator weighted_operator(int n, double a, double b, double lambda0, std::size_t N) {
  const double h = (b - a) / static_cast<double>(N);
  const double p = static_cast<double>(n - 1);
  auto w = [p](double r) { return std::pow(r, p); };
  std::vector<double> diag(N - 1), off(N - 2);
  for (std::size_t i = 1; i < N; ++i) {
    const double r = a + h * static_cast<double>(i);
    const double k = (w(r + 0.5 * h) + w(r - 0.5 * h)) / (h * h) + lambda0 * std::pow(r, p - 2.0);
    diag[i - 1] = k / w(r);
    if (i + 1 < N) {
      const double r1 = r + h;
      off[i - 1] = -w(r + 0.5 * h) / (h * h) / std::sqrt(w(r) * w(r1));
    }
  }
  return numerics::TridiagonalOperator(std::move(diag), std::move(off));
}

void validate_inputs(int n, double a, double b, double lambda0, std::size_t N) {
  if (n < 2) throw std::invalid_argument("solve_radial: need n >= 2");
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw std::invalid_argument("solve_radial: invalid interval, need 0 < a < b < inf");
  }
  if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) throw std::invalid_argument("solve_radial: need lambda0 >= 0");
  if (N < 64) throw std::invalid_argument("solve_radial: grid too coarse (N < 64)");
}

}  // namespace

double transform_alpha(int n) { return static_cast<double>((n - 3) * (n - 1)) / 4.0; }

void AnnularDomainSpec::validate() const {
  if (n < 2) throw std::invalid_argument("AnnularDomainSpec: need n >= 2");
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw std::invalid_argument("AnnularDomainSpec: need 0 < a < b < inf");
  }
  bases::validate(base);
  if (bases::ambient_dimension(base) != n) {
    throw std::invalid_argument("AnnularDomainSpec: base lives in R^" + std::to_string(bases::ambient_dimension(base)) +
                                " but n = " + std::to_string(n));
  }
}

double RadialEigenResult::f_at(double r) const {
  const double a = grid.front(), b = grid.back();
  if (r <= a || r >= b) return 0.0;
  const std::size_t N = grid.size() - 1;
  const double h = (b - a) / static_cast<double>(N);
  const double u = (r - a) / h;
  std::size_t i = static_cast<std::size_t>(u);
  // four-point stencil i-1 .. i+2, clamped to the grid
  std::size_t lo = i >= 1 ? i - 1 : 0;
  if (lo + 3 > N) lo = N - 3;
  double value = 0.0;
  for (std::size_t p = lo; p < lo + 4; ++p) {
    double l = 1.0;
    for (std::size_t q = lo; q < lo + 4; ++q) {
      if (q != p) l *= (u - static_cast<double>(q)) / (static_cast<double>(p) - static_cast<double>(q));
    }
    value += l * f[p];
  }
  return value;
}

double RadialEigenResult::sup_f() const {
  double s = 0.0;
  for (double v : f) s = std::max(s, std::fabs(v));
  return s;
}

std::vector<RadialEigenResult> solve_radial(int n, double a, double b, double lambda0, std::size_t N,
                                            std::size_t k) {
  validate_inputs(n, a, b, lambda0, N);
  if (k < 1 || k > N - 1) throw std::invalid_argument("solve_radial: need 1 <= k <= N - 1");
  // Solved on the unit-width interval so that dilated annuli give the same
  // discrete problem; eigenvalues scale back by 1 / (b - a)^2.
  const double width = b - a, unit = 1.0 / (width * width);
  auto coarse = numerics::tridiag_smallest_eigenpairs(transformed_operator(n, a / width, b / width, lambda0, N), k);
  auto fine = numerics::tridiag_smallest_eigenvalues(transformed_operator(n, a / width, b / width, lambda0, 2 * N), k);
  for (auto& p : coarse) p.value *= unit;
  for (double& v : fine) v *= unit;
  const double h = (b - a) / static_cast<double>(N);
  const double half_power = 0.5 * static_cast<double>(n - 1);

  std::vector<RadialEigenResult> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    RadialEigenResult res;
    res.lambda_grid = coarse[j].value;
    res.lambda = numerics::richardson(coarse[j].value, fine[j], 2);
    res.alpha = transform_alpha(n);
    res.grid = numerics::uniform_nodes(N, a, b);
    res.ftilde.assign(N + 1, 0.0);
    res.f.assign(N + 1, 0.0);
    const double sign = coarse[j].vector.front() >= 0.0 ? 1.0 : -1.0;
    const double scale = sign / std::sqrt(h);
    for (std::size_t i = 1; i < N; ++i) {
      res.ftilde[i] = scale * coarse[j].vector[i - 1];
      res.f[i] = res.ftilde[i] * std::pow(res.grid[i], -half_power);
    }
    out.push_back(std::move(res));
  }
  return out;
}

double solve_radial_weighted(int n, double a, double b, double lambda0, std::size_t N) {
  validate_inputs(n, a, b, lambda0, N);
  const double width = b - a;
  const double coarse = numerics::tridiag_smallest_eigenvalues(weighted_operator(n, a / width, b / width, lambda0, N), 1)[0];
  const double fine = numerics::tridiag_smallest_eigenvalues(weighted_operator(n, a / width, b / width, lambda0, 2 * N), 1)[0];
  return numerics::richardson(coarse, fine, 2) / (width * width);
}

Spectrum assemble_spectrum(const AnnularDomainSpec& spec, std::size_t m_base, std::size_t k_radial, std::size_t N) {
  spec.validate();
  if (spec.n != 2) throw std::invalid_argument("assemble_spectrum: product spectra are available for n = 2 only");
  if (m_base < 1 || k_radial < 1) throw std::invalid_argument("assemble_spectrum: need M >= 1 and K >= 1");
  const auto levels = bases::base_spectrum(spec.base, m_base + 1);

  struct Entry {
    double lambda;
    std::size_t level, func, j;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<std::shared_ptr<const RadialEigenResult>>> radial(m_base);
  double cutoff = 0.0;
  for (std::size_t m = 0; m < m_base; ++m) {
    const std::size_t want = m == 0 ? k_radial + 1 : k_radial;
    auto res = solve_radial(2, spec.a, spec.b, levels[m].lambda0, N, want);
    if (m == 0) cutoff = res.back().lambda;
    for (std::size_t j = 0; j < k_radial; ++j) {
      radial[m].push_back(std::make_shared<const RadialEigenResult>(std::move(res[j])));
    }
  }
  cutoff = std::min(cutoff, solve_radial(2, spec.a, spec.b, levels[m_base].lambda0, N, 1)[0].lambda);

  for (std::size_t m = 0; m < m_base; ++m) {
    for (std::size_t g = 0; g < levels[m].functions.size(); ++g) {
      for (std::size_t j = 0; j < k_radial; ++j) {
        const double lambda = radial[m][j]->lambda;
        if (lambda < cutoff) entries.push_back({lambda, m, g, j});
      }
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.lambda < y.lambda; });

  Spectrum spectrum;
  spectrum.dimension = 2;
  spectrum.cutoff = cutoff;
  std::ostringstream os;
  os << "annulus n=2 a=" << spec.a << " b=" << spec.b << " base=" << bases::describe(spec.base) << " M=" << m_base
     << " K=" << k_radial << " N=" << N;
  spectrum.description = os.str();
  for (const auto& e : entries) {
    auto f = radial[e.level][e.j];
    auto g = levels[e.level].functions[e.func];
    double gsup = 0.0;
    for (int s = 0; s < 2048; ++s) gsup = std::max(gsup, std::fabs(g(2.0 * std::numbers::pi * (s + 0.5) / 2048.0)));
    Mode mode;
    mode.lambda = e.lambda;
    mode.sup_norm = f->sup_f() * gsup;
    mode.phi = [f, g](std::span<const double> x) {
      const double r = std::hypot(x[0], x[1]);
      return f->f_at(r) * g(std::atan2(x[1], x[0]));
    };
    spectrum.modes.push_back(std::move(mode));
  }
  return spectrum;
}

}  // namespace annular::radial
