#include <doctest.h>

#include <cmath>
#include <vector>

#include "sindex/gaussian.hpp"
#include "sindex/rng.hpp"

using namespace sindex;

TEST_CASE("gamma_mean_norm closed forms") {
  CHECK(gamma_mean_norm(1) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
  CHECK(gamma_mean_norm(2) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
  const double b100 = gamma_mean_norm(100);
  CHECK(b100 > 9.94);
  CHECK(b100 < 10.0);
  CHECK(std::abs(b100 - 10.0) / 10.0 < 0.003);
  CHECK_THROWS_AS(gamma_mean_norm(0), std::domain_error);
}

TEST_CASE("gamma_mean_norm matches the exact Gamma-ratio recurrence") {
  // b_{n+2} = b_n (n+1)/n exactly; run the recurrence in long double from
  // b_1, b_2 and compare at spot-check points up to 10^6.
  const std::vector<long> checkpoints = {1,   2,    3,    10,    100,  1000,
                                         10000, 100000, 1000000};
  long double b_odd = std::sqrt(2.0L / 3.14159265358979323846264338327950288L);
  long double b_even = std::sqrt(3.14159265358979323846264338327950288L / 2.0L);
  std::size_t ci = 0;
  for (long n = 1; n <= 1000000 && ci < checkpoints.size(); ++n) {
    const long double exact = (n % 2 == 1) ? b_odd : b_even;
    if (n == checkpoints[ci]) {
      const double mine = gamma_mean_norm(static_cast<int>(n));
      CHECK(std::abs(mine - static_cast<double>(exact)) /
                static_cast<double>(exact) <
            1e-12);
      ++ci;
    }
    if (n % 2 == 1)
      b_odd *= static_cast<long double>(n + 1) / n;
    else
      b_even *= static_cast<long double>(n + 1) / n;
  }
  CHECK(ci == checkpoints.size());
}

TEST_CASE("b_n window and the ratio inequality") {
  std::vector<double> b(1001);
  for (int n = 1; n <= 1000; ++n) {
    b[n] = gamma_mean_norm(n);
    CHECK(b[n] > 0.0);
    CHECK(b[n] < std::sqrt(static_cast<double>(n)));
  }
  // b_{n0}/b_n <= sqrt(n0/n) for every pair n0 <= n.
  for (int n0 = 1; n0 <= 1000; ++n0)
    for (int n = n0; n <= 1000; ++n)
      if (b[n0] / b[n] > std::sqrt(static_cast<double>(n0) / n) + 1e-12)
        FAIL("ratio inequality violated at n0=", n0, " n=", n);
  // b_n / sqrt(n) strictly increasing.
  for (int n = 2; n <= 1000; ++n)
    CHECK(b[n] / std::sqrt(static_cast<double>(n)) >
          b[n - 1] / std::sqrt(static_cast<double>(n - 1)));
}

TEST_CASE("phi_inverse round trip and monotonicity") {
  for (int n = 1; n <= 1000; ++n) {
    const double t = phi_inverse(gamma_mean_norm(n));
    CHECK(std::abs(t - n) / n < 1e-9);
  }
  CHECK(phi_inverse(0.7978845608028654) == doctest::Approx(1.0).epsilon(1e-6));
  // phi(phi_inverse(x)) = x to 1e-9 relative on a wide grid.
  for (double x : {0.1, 0.5, 1.0, 3.0, 22.36, 100.0, 999.0}) {
    CHECK(std::abs(phi_value(phi_inverse(x)) - x) / x < 1e-9);
  }
  double prev = 0.0;
  for (double x : {0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double t = phi_inverse(x);
    CHECK(t > prev);
    prev = t;
  }
  CHECK_THROWS_AS(phi_inverse(0.0), std::domain_error);
  CHECK_THROWS_AS(phi_inverse(-1.0), std::domain_error);
}

TEST_CASE("sample_design determinism") {
  const Rng rng(7);
  const Eigen::MatrixXd a = sample_design(2, 3, rng);
  const Eigen::MatrixXd b = sample_design(2, 3, rng);
  CHECK(a == b);
  const Eigen::MatrixXd c = sample_design(2, 3, Rng(8));
  CHECK(a != c);
  CHECK_THROWS_AS(sample_design(0, 3, rng), std::domain_error);
}

TEST_CASE("sample_design first and second moments") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Eigen::MatrixXd X = sample_design(2000, 1, Rng(seed));
    const double mean = X.mean();
    const double var = (X.array() - mean).square().sum() / (X.size() - 1);
    CHECK(std::abs(mean) < 0.08);
    CHECK(var > 0.9);
    CHECK(var < 1.1);
  }
  const Eigen::MatrixXd X = sample_design(500, 500, Rng(11));
  const double fro2 = X.squaredNorm();
  CHECK(fro2 > 0.95 * 500.0 * 500.0);
  CHECK(fro2 < 1.05 * 500.0 * 500.0);
}

TEST_CASE("sample_design column means at n = 1e5") {
  const int n = 100000, p = 8;
  const Eigen::MatrixXd X = sample_design(n, p, Rng(5));
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < p; ++j) CHECK(std::abs(X.col(j).mean()) < tol);
}

TEST_CASE("rng streams and counters are stable") {
  const Rng rng(42);
  CHECK(rng.normal(0) == rng.normal(0));
  CHECK(rng.uniform(5) > 0.0);
  CHECK(rng.uniform(5) < 1.0);
  const Rng s1 = rng.stream(1), s2 = rng.stream(2);
  CHECK(s1.normal(0) != s2.normal(0));
  // Box-Muller pair: counters 2k and 2k+1 share uniforms but differ.
  CHECK(rng.normal(2) != rng.normal(3));
}
