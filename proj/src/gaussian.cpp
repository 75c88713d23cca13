#include "sindex/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sindex/errors.hpp"

namespace sindex {

double log_phi(double t) {
  const double z = 0.5 * t;
  if (t < 100.0)
    return 0.5 * std::log(2.0) + std::lgamma(z + 0.5) - std::lgamma(z);
  // lgamma carries an absolute error proportional to its (large) value, which
  // ruins the difference beyond n ~ 1e4. Form ln Gamma(z+1/2) - ln Gamma(z)
  // from the Stirling series directly; every term below is O(1) or smaller.
  const double zh = z + 0.5;
  double f = 0.5 * std::log(z) + z * std::log1p(0.5 / z) - 0.5;
  f += 1.0 / (12.0 * zh) - 1.0 / (12.0 * z);
  f -= 1.0 / (360.0 * zh * zh * zh) - 1.0 / (360.0 * z * z * z);
  const double z5 = z * z * z * z * z;
  const double zh5 = zh * zh * zh * zh * zh;
  f += 1.0 / (1260.0 * zh5) - 1.0 / (1260.0 * z5);
  return 0.5 * std::log(2.0) + f;
}

double phi_value(double t) {
  if (!(t > 0.0)) throw std::domain_error("phi_value: t must be positive");
  return std::exp(log_phi(t));
}

double gamma_mean_norm(int n) {
  if (n < 1) throw std::domain_error("gamma_mean_norm: n must be >= 1");
  return phi_value(static_cast<double>(n));
}

double phi_inverse(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("phi_inverse: x must be positive and finite");
  const double lx = std::log(x);
  double lo = 1e-300;
  double hi = std::fmax(4.0, 2.0 * x * x + 8.0);
  while (log_phi(hi) < lx) hi *= 2.0;
  // phi is strictly increasing, so plain bisection is safe.
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_phi(mid) < lx)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::fmax(1.0, lo)) break;
  }
  return 0.5 * (lo + hi);
}

Eigen::MatrixXd sample_design(int n, int p, const Rng& rng) {
  if (n < 1 || p < 1)
    throw std::domain_error("sample_design: dimensions must be >= 1");
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t row_base = static_cast<std::uint64_t>(i) * p;
    for (int j = 0; j < p; ++j) X(i, j) = rng.normal(row_base + j);
  }
  return X;
}

}  // namespace sindex
