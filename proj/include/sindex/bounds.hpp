#pragma once

#include <vector>

#include "sindex/geometry.hpp"

namespace sindex {

// 1 for convex regularizers, 2 for nonconvex ones.
double kappa(const Regularizer& reg);

struct RateCheck {
  bool ok = false;
  double margin = 0.0;  // n / (8 kappa^2 n0)
};

// Sample-size condition n >= 8 kappa^2 n0.
RateCheck check_rate_condition(double n, double n0, double kappa);

// Convergence guarantee for the projected scheme:
//   rate^tau * init_error + kappa/(1-rate) * eta (sigma sqrt(n0) + gamma)/sqrt(n),
// rate = sqrt(8 kappa^2 n0 / n). Requires rate < 1.
double pgd_bound(double tau, double n, double n0, double kappa, double eta,
                 double sigma, double gamma, double init_error);

// Mean-squared-error guarantee for the stochastic scheme:
//   (1 - (1-sqrt(n0/n))^2/(2p))^tau * init_sq + 1.01/(1-sqrt(n0/n))^2 eta^2 sigma^2.
// Requires n > n0.
double psgd_bound(double tau, double n, double n0, double p, double eta,
                  double sigma, double init_error_sq);

// Collapsed form of the shrinkage recursion M_{tau+1} = rho M_tau + c with
// c = eta (sigma sqrt(n0(lambda)) + gamma)/sqrt(n):
//   rho^tau M0 + c/(1-rho).
// The geometric sum is bounded by 1/(1-rho); the raw recursion never
// exceeds this value.
double prox_M_bound(double tau, double M0, double rho, double eta, double sigma,
                    double gamma, double n, double n0_lambda);

// Bound values for tau = 0..iters, aligned with solver traces.
std::vector<double> pgd_bound_curve(int iters, double n, double n0, double kappa,
                                    double eta, double sigma, double gamma,
                                    double init_error);
std::vector<double> psgd_bound_curve(int iters, double n, double n0, double p,
                                     double eta, double sigma,
                                     double init_error_sq);

}  // namespace sindex
