#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"
#include "sindex/geometry.hpp"

using namespace sindex;
using Eigen::VectorXd;
using test_oracles::l1_cone_projection;
using test_oracles::l1_projection;
using test_oracles::sparse_projection;

namespace {

VectorXd random_vector(int p, const Rng& rng, double scale = 1.0) {
  VectorXd v(p);
  for (int i = 0; i < p; ++i) v[i] = scale * rng.normal(i);
  return v;
}

}  // namespace

TEST_CASE("l1 ball projection examples and oracle") {
  VectorXd v(2);
  v << 3.0, 1.0;
  VectorXd want(2);
  want << 2.0, 0.0;
  CHECK((project_l1_ball(v, 2.0) - want).norm() < 1e-12);

  v << 0.5, -0.5;
  CHECK(project_l1_ball(v, 2.0) == v);

  VectorXd u(3);
  u << 1.0, 1.0, 1.0;
  VectorXd wu(3);
  wu << 0.5, 0.5, 0.5;
  CHECK((project_l1_ball(u, 1.5) - wu).norm() < 1e-12);

  const Rng rng(31);
  for (int k = 0; k < 1000; ++k) {
    const Rng kr = rng.stream(k);
    const int p = 2 + static_cast<int>(kr.bits(1000) % 5);  // p <= 6
    const VectorXd x = random_vector(p, kr, 1.0 + (k % 3));
    const double R = 0.1 + 2.0 * kr.uniform(2000);
    const VectorXd mine = project_l1_ball(x, R);
    const VectorXd oracle = l1_projection(x, R);
    if ((mine - oracle).norm() >= 1e-9)
      FAIL("l1 projection mismatch at instance ", k);
    CHECK(mine.lpNorm<1>() <= R + 1e-12);
  }
}

TEST_CASE("sparse projection examples and exhaustive oracle") {
  VectorXd v(3);
  v << 3.0, -1.0, 2.0;
  VectorXd want(3);
  want << 3.0, 0.0, 2.0;
  CHECK(project_sparse(v, 2) == want);
  CHECK(project_sparse(v, 3) == v);
  CHECK(project_sparse(v, 7) == v);

  VectorXd tie(2);
  tie << 1.0, -1.0;
  VectorXd tiew(2);
  tiew << 1.0, 0.0;
  CHECK(project_sparse(tie, 1) == tiew);  // lowest-index tie break

  const Rng rng(37);
  for (int k = 0; k < 1000; ++k) {
    const Rng kr = rng.stream(k);
    const int p = 3 + static_cast<int>(kr.bits(1000) % 10);  // p <= 12
    const int s = 1 + static_cast<int>(kr.bits(1001) % p);
    const VectorXd x = random_vector(p, kr);
    const VectorXd mine = project_sparse(x, s);
    const VectorXd oracle = sparse_projection(x, s);
    if ((mine - oracle).norm() >= 1e-9)
      FAIL("sparse projection mismatch at instance ", k);
  }
}

TEST_CASE("l2 ball projection") {
  VectorXd v(2);
  v << 3.0, 4.0;
  CHECK(project_l2_ball(v, 5.0) == v);
  VectorXd want(2);
  want << 0.6, 0.8;
  CHECK((project_l2_ball(v, 1.0) - want).norm() < 1e-12);
  VectorXd z = VectorXd::Zero(4);
  CHECK(project_l2_ball(z, 2.0) == z);
}

TEST_CASE("projection properties: idempotence, optimality, nonexpansiveness") {
  const Rng rng(41);
  for (int k = 0; k < 340; ++k) {
    const Rng kr = rng.stream(k);
    const int p = 4 + static_cast<int>(kr.bits(999) % 9);
    const VectorXd v = random_vector(p, kr, 2.0);
    const VectorXd u = random_vector(p, kr.stream(1), 2.0);
    const double R = 0.2 + 2.0 * kr.uniform(2001);
    const int s = 1 + static_cast<int>(kr.bits(1002) % p);

    const Regularizer regs[3] = {Regularizer::l1(R), Regularizer::l2(R),
                                 Regularizer::sparse(s)};
    for (const auto& reg : regs) {
      const VectorXd pv = reg.project(v);
      CHECK((reg.project(pv) - pv).norm() < 1e-10);  // idempotent
      // pv is the closest feasible point: no feasible u does better.
      const VectorXd uf = reg.project(u);
      CHECK((v - pv).norm() <= (v - uf).norm() + 1e-10);
    }
    // Nonexpansiveness of the convex projections only.
    CHECK((project_l1_ball(u, R) - project_l1_ball(v, R)).norm() <=
          (u - v).norm() + 1e-12);
    CHECK((project_l2_ball(u, R) - project_l2_ball(v, R)).norm() <=
          (u - v).norm() + 1e-12);
  }
}

TEST_CASE("soft threshold prox and its 1-d oracle") {
  VectorXd v(2);
  v << 3.0, -0.5;
  VectorXd want(2);
  want << 2.0, 0.0;
  CHECK((prox_l1(v, 1.0) - want).norm() < 1e-12);
  CHECK(prox_l1(v, 0.0) == v);
  VectorXd m(1);
  m << -2.0;
  CHECK(prox_l1(m, 5.0)[0] == 0.0);

  // Per coordinate the prox minimizes (1/2)(x-v)^2 + lam|x|; check against a
  // dense grid search at the grid resolution.
  const Rng rng(43);
  for (int k = 0; k < 50; ++k) {
    const double vi = 4.0 * (rng.uniform(2 * k) - 0.5);
    const double lam = 2.0 * rng.uniform(2 * k + 1);
    double best_x = 0.0, best_f = 1e300;
    for (int g = -4000; g <= 4000; ++g) {
      const double x = g * 1e-3;
      const double f = 0.5 * (x - vi) * (x - vi) + lam * std::abs(x);
      if (f < best_f) {
        best_f = f;
        best_x = x;
      }
    }
    VectorXd one(1);
    one << vi;
    CHECK(std::abs(prox_l1(one, lam)[0] - best_x) <= 1.1e-3);
  }
}

TEST_CASE("l1 subgradient distance") {
  VectorXd g(2), theta(2);
  g << 3.0, 0.5;
  theta << 1.0, 0.0;
  CHECK(subgradient_distance_l1(g, theta, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  g << 2.0, 3.0;
  CHECK(subgradient_distance_l1(g, theta, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  g << 3.0, 0.5;
  CHECK(subgradient_distance_l1(g, theta, 0.0) ==
        doctest::Approx(g.norm()).epsilon(1e-12));

  // Generic grid oracle on p = 2: the scaled subdifferential is the product
  // {lam sign(theta_0)} x [-lam, lam]; scan it densely.
  const Rng rng(47);
  for (int k = 0; k < 50; ++k) {
    const double lam = 2.0 * rng.uniform(3 * k);
    VectorXd x(2);
    x << 4.0 * (rng.uniform(3 * k + 1) - 0.5), 4.0 * (rng.uniform(3 * k + 2) - 0.5);
    double best = 1e300;
    for (int i = -1000; i <= 1000; ++i) {
      const double z1 = lam * i / 1000.0;  // off-support interval
      const double d1 = x[0] - lam;        // on support, sign +1
      const double d2 = x[1] - z1;
      best = std::fmin(best, std::sqrt(d1 * d1 + d2 * d2));
    }
    VectorXd th(2);
    th << 1.0, 0.0;
    CHECK(subgradient_distance_l1(x, th, lam) <= best + 1e-9);
    CHECK(subgradient_distance_l1(x, th, lam) >= best - 2.1e-3);
  }
}

TEST_CASE("Gaussian distance: analytic l1 path") {
  // G(0)^2 = p exactly.
  VectorXd theta = VectorXd::Zero(500);
  for (int i = 0; i < 10; ++i) theta[i] = 1.0;
  const Regularizer l1 = Regularizer::l1(1.0);
  CHECK(gaussian_distance_sq(l1, theta, 0.0, 0, Rng(1)).g_sq == 500.0);
  CHECK(gaussian_distance_sq_l1(1, 2, 1.0) ==
        doctest::Approx(2.150679566687541).epsilon(1e-10));

  // Continuity on a lambda grid.
  for (double lam = 0.0; lam < 5.0; lam += 0.25) {
    const double a = gaussian_distance_sq_l1(10, 500, lam);
    const double b = gaussian_distance_sq_l1(10, 500, lam + 1e-7);
    CHECK(std::abs(a - b) < 1e-3);
  }
  CHECK_THROWS_AS(gaussian_distance_sq(l1, theta, -1.0, 0, Rng(1)),
                  std::domain_error);
}

TEST_CASE("Gaussian distance: MC agrees with the closed form") {
  VectorXd theta = VectorXd::Zero(500);
  for (int i = 0; i < 10; ++i) theta[i] = (i % 2 == 0) ? 0.3 : -0.3;
  const Regularizer l1 = Regularizer::l1(1.0);
  const GaussianDistance mc = gaussian_distance_sq(l1, theta, 2.0, 200000, Rng(53));
  const double exact = gaussian_distance_sq_l1(10, 500, 2.0);
  CHECK(std::abs(mc.g_sq - exact) <= 3.0 * mc.std_err);

  // l2 subdifferential route: G^2 = p + lam^2.
  VectorXd t2 = VectorXd::Zero(40);
  t2[3] = 1.0;
  const GaussianDistance mc2 =
      gaussian_distance_sq(Regularizer::l2(1.0), t2, 1.5, 100000, Rng(54));
  CHECK(std::abs(mc2.g_sq - (40.0 + 2.25)) <= 3.0 * mc2.std_err);

  CHECK_THROWS_AS(
      gaussian_distance_sq(Regularizer::sparse(3), t2, 1.0, 100, Rng(1)),
      UnsupportedError);
}

TEST_CASE("minimal samples, penalized form") {
  VectorXd theta = VectorXd::Zero(500);
  for (int i = 0; i < 10; ++i) theta[i] = 0.31;
  const Regularizer l1 = Regularizer::l1(1.0);

  // lambda = 0, t = 0: phi^{-1}(sqrt(500) + sqrt(2)).
  const MinimalSamples at0 = minimal_samples_regularized(l1, theta, 0.0, 0.0, 0, Rng(1));
  CHECK(at0.n0 == doctest::Approx(565.7453320607822).epsilon(1e-9));
  CHECK(at0.n0 > 500.0);

  // Monotone in t.
  double prev = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0}) {
    const double v = minimal_samples_regularized(l1, theta, 1.0, t, 0, Rng(1)).n0;
    CHECK(v > prev);
    prev = v;
  }

  // Consistency with the classical sparse-recovery count 2s log(p/s) + 2s.
  const double lam = std::sqrt(2.0 * std::log(50.0));
  const double n0 = minimal_samples_regularized(l1, theta, lam, 0.0, 0, Rng(1)).n0;
  CHECK(std::abs(n0 - 98.2) / 98.2 < 0.25);
}

TEST_CASE("minimal samples, constraint form") {
  // l2 ball at an interior point: the cone is all of R^p, n0 = p exactly.
  VectorXd dense = VectorXd::Constant(120, 0.05);
  const MinimalSamples l2 = minimal_samples(Regularizer::l2(10.0), dense, 0.0,
                                            default_lambda_grid(), 0, Rng(1));
  CHECK(l2.n0 == doctest::Approx(120.0).epsilon(1e-8));

  // l1 at the standard shape: frozen regression value, inside the coarse
  // bracket [60, 140] from the width bound.
  VectorXd theta = VectorXd::Zero(500);
  for (int i = 0; i < 10; ++i) theta[i] = (i % 2 == 0) ? 0.31 : -0.31;
  const MinimalSamples l1 = minimal_samples(Regularizer::l1(1.0), theta, 0.0,
                                            default_lambda_grid(), 0, Rng(1));
  CHECK(l1.n0 > 60.0);
  CHECK(l1.n0 < 140.0);
  CHECK(l1.n0 == doctest::Approx(75.9046056).epsilon(1e-6));
  CHECK(l1.lambda.has_value());

  // Refining the grid never increases the minimum.
  std::vector<double> coarse, fine;
  for (int i = 0; i < 25; ++i)
    coarse.push_back(std::exp(std::log(0.01) + (std::log(10.0) - std::log(0.01)) * i / 24.0));
  fine = coarse;
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i)
    fine.push_back(0.5 * (coarse[i] + coarse[i + 1]));
  const double n_coarse =
      minimal_samples(Regularizer::l1(1.0), theta, 0.0, coarse, 0, Rng(1)).n0;
  const double n_fine =
      minimal_samples(Regularizer::l1(1.0), theta, 0.0, fine, 0, Rng(1)).n0;
  CHECK(n_fine <= n_coarse + 1e-12);

  // Degenerate theta* = 0 for a norm: cone is everything, flagged.
  VectorXd zero = VectorXd::Zero(80);
  const MinimalSamples dg = minimal_samples(Regularizer::l1(1.0), zero, 0.0,
                                            default_lambda_grid(), 0, Rng(1));
  CHECK(dg.degenerate);
  CHECK(dg.n0 == doctest::Approx(80.0).epsilon(1e-8));

  CHECK_THROWS_AS(
      minimal_samples(Regularizer::l1(1.0), theta, 0.0, {}, 0, Rng(1)),
      std::domain_error);
}

TEST_CASE("minimal samples for hard sparsity") {
  VectorXd theta = VectorXd::Zero(500);
  for (int i = 0; i < 5; ++i) theta[i] = (i % 2 == 0) ? 0.45 : -0.45;
  const MinimalSamples ms = minimal_samples(Regularizer::sparse(5), theta, 0.0,
                                            default_lambda_grid(), 100000, Rng(61));
  // Tangent-cone width for s=5, p=500 sits near 3.92, n0 near 15.9.
  CHECK(ms.n0 > 15.4);
  CHECK(ms.n0 < 16.4);
  CHECK_FALSE(ms.lambda.has_value());
}

TEST_CASE("projection comparison: descent set vs tangent cone") {
  // ||P_D(v)|| <= 2 ||P_C(v)|| with both projections from numerical oracles;
  // the l1 descent set is convex, so the sharper 1x comparison holds too.
  const Rng rng(67);
  for (int k = 0; k < 300; ++k) {
    const Rng kr = rng.stream(k);
    const int p = 3 + static_cast<int>(kr.bits(999) % 4);  // p <= 6
    const int s = 1 + static_cast<int>(kr.bits(1000) % 2);
    VectorXd theta = VectorXd::Zero(p);
    for (int i = 0; i < s; ++i)
      theta[i] = kr.normal(5000 + i) >= 0 ? 0.8 : -0.8;
    const VectorXd v = random_vector(p, kr, 1.5);

    const VectorXd pd =
        l1_projection(theta + v, theta.lpNorm<1>()) - theta;
    const VectorXd pc = l1_cone_projection(v, theta);
    CHECK(pd.norm() <= 2.0 * pc.norm() + 1e-9);
    CHECK(pd.norm() <= pc.norm() + 1e-9);
  }
}

TEST_CASE("l1 cone direction sampler stays inside the cone") {
  const Rng rng(71);
  VectorXd theta = VectorXd::Zero(60);
  for (int i = 0; i < 6; ++i) theta[i * 7] = (i % 2 == 0) ? 0.4 : -0.4;
  const Eigen::MatrixXd U = sample_l1_cone_directions(theta, 101, rng);
  CHECK(U.cols() == 101);
  for (int k = 0; k < U.cols(); ++k) {
    double c = 0.0;
    for (int i = 0; i < 60; ++i) {
      if (theta[i] != 0.0)
        c += U(i, k) * (theta[i] < 0.0 ? -1.0 : 1.0);
      else
        c += std::abs(U(i, k));
    }
    CHECK(c <= 1e-9);  // descent-cone membership
    CHECK(U.col(k).norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}
