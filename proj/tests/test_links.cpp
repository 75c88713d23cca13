#include <doctest.h>

#include <cmath>

#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"
#include "sindex/links.hpp"

using namespace sindex;
using Eigen::VectorXd;

TEST_CASE("apply_link basics") {
  VectorXd z(3);
  z << -0.5, 2.0, 0.0;
  const VectorXd s = apply_link(Link::sign(), z);
  CHECK(s[0] == -1.0);
  CHECK(s[1] == 1.0);
  CHECK(s[2] == 1.0);  // sign(0) := +1 by convention

  const VectorXd lin = apply_link(Link::linear(), z);
  CHECK(lin == z);

  VectorXd q(1);
  q << 0.3;
  CHECK(apply_link(Link::quantize(2, 1.0), q)[0] == doctest::Approx(0.5));
  // Saturation outside the clip range.
  q << 7.0;
  CHECK(apply_link(Link::quantize(2, 1.0), q)[0] == doctest::Approx(0.5));
  q << -7.0;
  CHECK(apply_link(Link::quantize(2, 1.0), q)[0] == doctest::Approx(-0.5));
  // 16 uniform midpoint levels on [-3, 3].
  const Link q16 = Link::quantize(16, 3.0);
  q << 0.0;
  CHECK(std::abs(apply_link(q16, q)[0]) == doctest::Approx(3.0 / 16.0));

  const Link bad = Link::custom([](double x) { return x > 1.0 ? NAN : x; });
  VectorXd v(3);
  v << 0.0, 2.0, 0.0;
  CHECK_THROWS_WITH_AS(apply_link(bad, v),
                       "apply_link: non-finite link output at index 1",
                       NumericError);
}

TEST_CASE("analytic link statistics") {
  const LinkStats lin = link_stats_analytic(Link::linear());
  CHECK(lin.mu == 1.0);
  CHECK(lin.sigma_sq == 0.0);
  CHECK(lin.gamma_sq == 0.0);

  const LinkStats sg = link_stats_analytic(Link::sign());
  CHECK(sg.mu == doctest::Approx(0.7978845608).epsilon(1e-9));
  CHECK(sg.sigma_sq == doctest::Approx(1.0 - 2.0 / M_PI).epsilon(1e-12));
  CHECK(sg.gamma_sq == doctest::Approx(1.0 - 2.0 / M_PI).epsilon(1e-12));

  const LinkStats cb = link_stats_analytic(Link::cubic());
  CHECK(cb.mu == 3.0);
  CHECK(cb.sigma_sq == 6.0);
  CHECK(cb.gamma_sq == 42.0);

  CHECK_THROWS_AS(link_stats_analytic(Link::tanh_scale(2.0)), UnsupportedError);
}

TEST_CASE("MC statistics agree with the closed forms within 5 SE") {
  const Rng rng(101);
  for (const Link& link : {Link::linear(), Link::sign(), Link::cubic()}) {
    const LinkStats an = link_stats_analytic(link);
    const LinkStats mc = link_stats_mc(link, 1000000, rng);
    CHECK(std::abs(mc.mu - an.mu) <= 5.0 * mc.se_mu + 1e-12);
    CHECK(std::abs(mc.sigma_sq - an.sigma_sq) <= 5.0 * mc.se_sigma_sq + 1e-12);
    CHECK(std::abs(mc.gamma_sq - an.gamma_sq) <= 5.0 * mc.se_gamma_sq + 1e-12);
  }
  // Residual of the linear link is identically zero.
  const LinkStats lin = link_stats_mc(Link::linear(), 10000, rng);
  CHECK(lin.sigma_sq < 1e-25);
  // Spec-level tolerances.
  const LinkStats sg = link_stats_mc(Link::sign(), 1000000, rng);
  CHECK(std::abs(sg.mu - 0.798) < 0.01);
  const LinkStats cb = link_stats_mc(Link::cubic(), 10000000, rng);
  CHECK(std::abs(cb.gamma_sq - 42.0) < 3.0);
  CHECK_THROWS_AS(link_stats_mc(Link::sign(), 10, rng), std::domain_error);
}

TEST_CASE("mu is the least-squares linear coefficient") {
  // E[(f(g) - c g)^2] >= sigma^2 with the minimum at c = mu, for any link.
  const Rng rng(77);
  const long N = 200000;
  for (const Link& link : {Link::sign(), Link::cubic(), Link::tanh_scale(1.5)}) {
    const LinkStats mc = link_stats_mc(link, N, rng);
    for (int k = -10; k <= 10; ++k) {
      const double c = mc.mu + 0.1 * k;
      double resid = 0.0;
      for (long i = 0; i < N; ++i) {
        const double g = rng.normal(static_cast<std::uint64_t>(i));
        const double r = link(g) - c * g;
        resid += r * r;
      }
      resid /= N;
      CHECK(resid >= mc.sigma_sq - 1e-4 * (1.0 + mc.sigma_sq));
    }
  }
}

TEST_CASE("effective noise") {
  const Rng rng(5);
  VectorXd theta = VectorXd::Zero(50);
  theta[3] = 0.6;
  theta[17] = -0.8;
  const Eigen::MatrixXd X = sample_design(200, 50, rng);

  const EffectiveNoise zero = effective_noise(Link::linear(), X, theta, 1.0);
  CHECK(zero.norm == 0.0);
  CHECK(zero.w.isZero(0.0));

  // ||w||^2 / n concentrates near sigma^2 = 1 - 2/pi for the sign link.
  const Eigen::MatrixXd X2 = sample_design(10000, 50, rng.stream(1));
  const EffectiveNoise en = effective_noise(Link::sign(), X2, theta,
                                            std::sqrt(2.0 / M_PI));
  const double ratio = en.norm * en.norm / 10000.0 / (1.0 - 2.0 / M_PI);
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.05);

  // Perturbing mu by delta moves the norm by at most |delta| ||X theta*||.
  const double delta = 0.05;
  const EffectiveNoise base = effective_noise(Link::sign(), X, theta, 0.7);
  const EffectiveNoise pert = effective_noise(Link::sign(), X, theta, 0.7 + delta);
  CHECK(std::abs(pert.norm - base.norm) <= delta * (X * theta).norm() + 1e-12);

  VectorXd bad = theta * 2.0;
  CHECK_THROWS_AS(effective_noise(Link::sign(), X, bad, 0.7), std::invalid_argument);
}

TEST_CASE("concentration probe") {
  const Rng rng(9);
  // Linear link: both events are measure-zero.
  const ConcentrationEstimate lin =
      concentration_probe(Link::linear(), 100, 1.0, 100, rng);
  CHECK(lin.p_hat == 0.0);
  CHECK(lin.degenerate);

  // Markov bound check at eta = 2 (upper bound, not equality).
  const ConcentrationEstimate sg =
      concentration_probe(Link::sign(), 1000, 2.0, 10000, rng);
  CHECK(sg.p_hat <= 0.5);
  CHECK_FALSE(sg.degenerate);

  // Nonincreasing in eta over a shared-seed grid.
  double prev = 1.0;
  for (const double eta : {1.0, 1.5, 2.0, 2.5, 3.0}) {
    const ConcentrationEstimate e =
        concentration_probe(Link::sign(), 1000, eta, 4000, rng);
    CHECK(e.p_hat <= prev + 1e-12);
    prev = e.p_hat;
  }
  CHECK_THROWS_AS(concentration_probe(Link::sign(), 0, 1.0, 10, rng),
                  std::domain_error);
}
