#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "sindex/rng.hpp"

namespace sindex {

enum class RegKind { l1_ball, sparsity, l2_ball };

// Structure prior in constraint form R(theta) <= level. l1/l2 balls are
// convex (kappa = 1), hard sparsity is not (kappa = 2).
struct Regularizer {
  RegKind kind = RegKind::l1_ball;
  double radius = 0.0;  // l1/l2 level
  int sparsity = 0;     // sparsity level s

  bool is_convex() const { return kind != RegKind::sparsity; }
  double kappa() const { return is_convex() ? 1.0 : 2.0; }

  // R(theta): the l1/l2 norm, or the support size for sparsity.
  double value(const Eigen::VectorXd& theta) const;

  // Constraint level of the feasible set.
  double level() const;

  Eigen::VectorXd project(const Eigen::VectorXd& v) const;

  std::string name() const;

  static Regularizer l1(double R);
  static Regularizer sparse(int s);
  static Regularizer l2(double R);
  // Same kind, level tuned so that the target is on the constraint boundary
  // (R = R(target)); the paper-style oracle tuning.
  Regularizer tuned_to(const Eigen::VectorXd& target) const;
};

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double R);
Eigen::VectorXd project_sparse(const Eigen::VectorXd& v, int s);
Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& v, double R);

// Elementwise soft threshold sign(v) max(|v|-lam, 0).
Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double lam);

// Exact Euclidean distance from g to lam * subdifferential of ||.||_1 at
// theta: on the support the subdifferential is the point lam*sign(theta_i),
// off the support the interval [-lam, lam].
double subgradient_distance_l1(const Eigen::VectorXd& g,
                               const Eigen::VectorXd& theta, double lam);

// Distance from g to lam * subdifferential of ||.||_2 at theta != 0.
double subgradient_distance_l2(const Eigen::VectorXd& g,
                               const Eigen::VectorXd& theta, double lam);

// G(lambda)^2 = E dist^2(g, lambda dR(theta*)), g ~ N(0, I_p).
struct GaussianDistance {
  double lambda = 0.0;
  double g_sq = 0.0;
  double std_err = 0.0;  // 0 on the analytic path
  enum class Method { analytic_l1, monte_carlo };
  Method method = Method::analytic_l1;
  long samples = 0;
};

// Closed form for the l1 norm at an s-sparse point in dimension p:
//   s (1 + lam^2) + (p - s) * 2 [(1 + lam^2) Phi(-lam) - lam phi(lam)].
double gaussian_distance_sq_l1(int s, int p, double lam);

GaussianDistance gaussian_distance_sq(const Regularizer& reg,
                                      const Eigen::VectorXd& theta, double lam,
                                      long samples, const Rng& rng);

// Minimal-sample quantities; n0 is kept real, callers round up when they
// need an integer sample count.
struct MinimalSamples {
  double n0 = 0.0;
  double t = 0.0;
  std::optional<double> lambda;  // argmin for the penalized route
  bool degenerate = false;       // theta* = 0: descent cone is all of R^p
};

// n0(lambda) = phi^{-1}(G(lambda) + 7t + sqrt(2)).
MinimalSamples minimal_samples_regularized(const Regularizer& reg,
                                           const Eigen::VectorXd& theta,
                                           double lam, double t,
                                           long mc_samples, const Rng& rng);

// Constraint-form surrogate. For the l1 ball: min over the lambda grid of
// n0(lambda) (the width of the descent cone satisfies
// omega(C cap B) ~ min_lambda G(lambda)). For the l2 ball the descent cone
// at an interior point is all of R^p, so n0 = phi^{-1}(b_p + t). For hard
// sparsity the tangent-cone supremum has a closed form per sample and the
// width is estimated by direct Monte Carlo.
MinimalSamples minimal_samples(const Regularizer& reg,
                               const Eigen::VectorXd& theta, double t,
                               const std::vector<double>& lambda_grid,
                               long mc_samples, const Rng& rng);

// 50 log-spaced points in [0.01, 10]; brackets the l1 optimum
// sqrt(2 log(p/s)) for all tested shapes.
std::vector<double> default_lambda_grid();

// Monte Carlo mean of sup_{v in C cap B} <g, v> for the sparsity tangent
// cone at theta (support S, |S| = s): members are supported on S plus at
// most one extra coordinate, paid for by a sign-constrained slot in S.
double sparse_cone_width_mc(const Eigen::VectorXd& theta, long samples,
                            const Rng& rng);

// Unit directions inside the l1 descent cone at a sparse theta:
// <sign(theta_S), h_S> + ||h_off||_1 <= 0. Used by the lemma validations;
// sampled suprema over these lower-bound the true cone supremum.
Eigen::MatrixXd sample_l1_cone_directions(const Eigen::VectorXd& theta,
                                          int count, const Rng& rng);

}  // namespace sindex
