#pragma once

#include <Eigen/Core>

#include "sindex/rng.hpp"

namespace sindex {

// b_n = sqrt(2) Gamma((n+1)/2) / Gamma(n/2), the mean Euclidean norm of an
// n-dimensional standard Gaussian. Evaluated through log-Gamma; the naive
// Gamma ratio overflows near n ~ 300.
double gamma_mean_norm(int n);

// phi(t) = sqrt(2) Gamma((t+1)/2) / Gamma(t/2) extended to real t > 0.
double phi_value(double t);
double log_phi(double t);

// Solves phi(t) = x for t > 0 by bisection on the log form. The result is
// not rounded; callers that need an integer sample count round up.
double phi_inverse(double x);

// n x p matrix of i.i.d. N(0,1) entries, deterministic in the generator.
// Entry (i, j) is addressed by counter i*p + j.
Eigen::MatrixXd sample_design(int n, int p, const Rng& rng);

}  // namespace sindex
