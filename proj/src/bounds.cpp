#include "sindex/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "sindex/errors.hpp"

namespace sindex {

double kappa(const Regularizer& reg) { return reg.kappa(); }

RateCheck check_rate_condition(double n, double n0, double kappa) {
  if (!(n > 0.0) || !(n0 > 0.0))
    throw std::domain_error("check_rate_condition: n and n0 must be positive");
  RateCheck out;
  out.margin = n / (8.0 * kappa * kappa * n0);
  out.ok = out.margin >= 1.0;
  return out;
}

double pgd_bound(double tau, double n, double n0, double kappa, double eta,
                 double sigma, double gamma, double init_error) {
  const double rate = std::sqrt(8.0 * kappa * kappa * n0 / n);
  if (rate >= 1.0)
    throw NumericError("pgd_bound: geometric rate " + std::to_string(rate) +
                       " >= 1, the bound is undefined (need n >= 8 kappa^2 n0)");
  const double floor =
      kappa / (1.0 - rate) * eta * (sigma * std::sqrt(n0) + gamma) / std::sqrt(n);
  return std::pow(rate, tau) * init_error + floor;
}

double psgd_bound(double tau, double n, double n0, double p, double eta,
                  double sigma, double init_error_sq) {
  if (!(n > n0))
    throw NumericError("psgd_bound: requires n > n0");
  const double gap = 1.0 - std::sqrt(n0 / n);
  const double rate = 1.0 - gap * gap / (2.0 * p);
  const double floor = 1.01 / (gap * gap) * eta * eta * sigma * sigma;
  return std::pow(rate, tau) * init_error_sq + floor;
}

double prox_M_bound(double tau, double M0, double rho, double eta, double sigma,
                    double gamma, double n, double n0_lambda) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::domain_error("prox_M_bound: rho must lie in (0,1)");
  const double c = eta * (sigma * std::sqrt(n0_lambda) + gamma) / std::sqrt(n);
  return std::pow(rho, tau) * M0 + c / (1.0 - rho);
}

std::vector<double> pgd_bound_curve(int iters, double n, double n0, double kappa,
                                    double eta, double sigma, double gamma,
                                    double init_error) {
  std::vector<double> out(static_cast<std::size_t>(iters) + 1);
  for (int tau = 0; tau <= iters; ++tau)
    out[tau] = pgd_bound(tau, n, n0, kappa, eta, sigma, gamma, init_error);
  return out;
}

std::vector<double> psgd_bound_curve(int iters, double n, double n0, double p,
                                     double eta, double sigma,
                                     double init_error_sq) {
  std::vector<double> out(static_cast<std::size_t>(iters) + 1);
  for (int tau = 0; tau <= iters; ++tau)
    out[tau] = psgd_bound(tau, n, n0, p, eta, sigma, init_error_sq);
  return out;
}

}  // namespace sindex
