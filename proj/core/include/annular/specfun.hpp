#pragma once

namespace annular::specfun {

class BesselOrder {
 public:
  explicit BesselOrder(double nu);
  double value() const { return nu_; }

 private:
  double nu_;
};

// sign * exp(log_abs); sign == 0 encodes an exact zero.
struct LogMagnitude {
  double log_abs;
  int sign;
  double value() const;
};

double log_gamma(double x);

// J_nu(r) for r >= 0. Underflows to 0 for tiny values; use bessel_j_log then.
double bessel_j(BesselOrder nu, double r);
LogMagnitude bessel_j_log(BesselOrder nu, double r);

// Independent evaluation through
//   J_nu(r) = (r/2)^nu / (Gamma(nu+1/2) sqrt(pi)) * int_{-1}^{1} (1-t^2)^{nu-1/2} cos(rt) dt
// used as a cross-check of the series.
double bessel_j_integral(BesselOrder nu, double r);

double first_positive_zero(BesselOrder nu);

}  // namespace annular::specfun
