#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "sindex/rng.hpp"

namespace sindex {

enum class LinkKind { linear, sign, quantize, tanh_scale, cubic, custom };

// Scalar link f applied elementwise to X theta. Evaluation is pure and
// deterministic; custom handles must be pure as well.
struct Link {
  LinkKind kind = LinkKind::linear;
  int levels = 0;      // quantize
  double clip = 0.0;   // quantize
  double scale = 1.0;  // tanh_scale
  std::function<double(double)> fn;  // custom

  double operator()(double z) const;

  static Link linear();
  static Link sign();                       // sign(0) := +1
  static Link quantize(int levels, double clip);
  static Link tanh_scale(double c);
  static Link cubic();
  static Link custom(std::function<double(double)> fn);

  std::string name() const;
};

Eigen::VectorXd apply_link(const Link& link, const Eigen::VectorXd& z);

// Nonlinearity triple for g ~ N(0,1):
//   mu       = E[f(g) g]
//   sigma_sq = E[(f(g) - mu g)^2]
//   gamma_sq = E[g^2 (f(g) - mu g)^2]
struct LinkStats {
  double mu = 0.0;
  double sigma_sq = 0.0;
  double gamma_sq = 0.0;
  enum class Source { analytic, monte_carlo };
  Source source = Source::analytic;
  long samples = 0;
  double se_mu = 0.0;
  double se_sigma_sq = 0.0;
  double se_gamma_sq = 0.0;

  double sigma() const;
  double gamma() const;
};

// Closed forms are registered for linear, sign and cubic.
LinkStats link_stats_analytic(const Link& link);

// Monte Carlo estimates with plug-in mu (the same sample set estimates mu
// first, then the residual moments). Reports standard errors.
LinkStats link_stats_mc(const Link& link, long samples, const Rng& rng);

// Analytic stats when registered, MC fallback otherwise.
LinkStats link_stats(const Link& link, long mc_samples, const Rng& rng);

// w = f(X theta*) - mu X theta*. Requires ||theta*|| = 1 (+-1e-8).
struct EffectiveNoise {
  Eigen::VectorXd w;
  double norm = 0.0;
};
EffectiveNoise effective_noise(const Link& link, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& theta_star, double mu);

// Empirical estimate of
//   p(eta) = P(||f(g)-mu g|| > eta b_n sigma)
//          + P(|g'(f(g)-mu g)| > eta b_n^2/sqrt(n) gamma)
// summing the two event frequencies, clipped at 1.
struct ConcentrationEstimate {
  double eta = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;
  long trials = 0;
  bool degenerate = false;  // sigma = gamma = 0: events are measure-zero
};
ConcentrationEstimate concentration_probe(const Link& link, const LinkStats& stats,
                                          int n, double eta, long trials,
                                          const Rng& rng);
ConcentrationEstimate concentration_probe(const Link& link, int n, double eta,
                                          long trials, const Rng& rng);

}  // namespace sindex
