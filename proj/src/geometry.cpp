#include "sindex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"

namespace sindex {
namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

std::vector<int> support(const Eigen::VectorXd& theta) {
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (theta[i] != 0.0) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace

double Regularizer::value(const Eigen::VectorXd& theta) const {
  switch (kind) {
    case RegKind::l1_ball: return theta.lpNorm<1>();
    case RegKind::l2_ball: return theta.norm();
    case RegKind::sparsity: {
      int nnz = 0;
      for (Eigen::Index i = 0; i < theta.size(); ++i) nnz += theta[i] != 0.0;
      return static_cast<double>(nnz);
    }
  }
  throw std::logic_error("Regularizer: unknown kind");
}

double Regularizer::level() const {
  return kind == RegKind::sparsity ? static_cast<double>(sparsity) : radius;
}

Eigen::VectorXd Regularizer::project(const Eigen::VectorXd& v) const {
  switch (kind) {
    case RegKind::l1_ball: return project_l1_ball(v, radius);
    case RegKind::l2_ball: return project_l2_ball(v, radius);
    case RegKind::sparsity: return project_sparse(v, sparsity);
  }
  throw std::logic_error("Regularizer: unknown kind");
}

std::string Regularizer::name() const {
  switch (kind) {
    case RegKind::l1_ball: return "l1-ball";
    case RegKind::l2_ball: return "l2-ball";
    case RegKind::sparsity: return "sparsity";
  }
  return "?";
}

Regularizer Regularizer::l1(double R) {
  if (R < 0.0) throw std::domain_error("l1 ball: radius must be >= 0");
  return Regularizer{RegKind::l1_ball, R, 0};
}

Regularizer Regularizer::sparse(int s) {
  if (s < 1) throw std::domain_error("sparsity: s must be >= 1");
  return Regularizer{RegKind::sparsity, 0.0, s};
}

Regularizer Regularizer::l2(double R) {
  if (R < 0.0) throw std::domain_error("l2 ball: radius must be >= 0");
  return Regularizer{RegKind::l2_ball, R, 0};
}

Regularizer Regularizer::tuned_to(const Eigen::VectorXd& target) const {
  Regularizer out = *this;
  switch (kind) {
    case RegKind::l1_ball: out.radius = target.lpNorm<1>(); break;
    case RegKind::l2_ball: out.radius = target.norm(); break;
    case RegKind::sparsity: break;  // level is the sparsity count already
  }
  return out;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double R) {
  if (R < 0.0) throw std::domain_error("project_l1_ball: R must be >= 0");
  const Eigen::VectorXd a = v.cwiseAbs();
  if (a.sum() <= R) return v;
  if (R == 0.0) return Eigen::VectorXd::Zero(v.size());
  // Sort-based threshold search, O(p log p).
  std::vector<double> u(a.data(), a.data() + a.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double cand = (css - R) / static_cast<double>(k + 1);
    if (u[k] - cand > 0.0)
      tau = cand;
    else
      break;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::fmax(std::abs(v[i]) - tau, 0.0);
    out[i] = v[i] < 0.0 ? -m : m;
  }
  return out;
}

Eigen::VectorXd project_sparse(const Eigen::VectorXd& v, int s) {
  if (s < 1) throw std::domain_error("project_sparse: s must be >= 1");
  if (s >= v.size()) return v;
  std::vector<int> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  // Ties keep the lowest index: stable sort on descending magnitude.
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return std::abs(v[i]) > std::abs(v[j]);
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (int k = 0; k < s; ++k) out[idx[k]] = v[idx[k]];
  return out;
}

Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& v, double R) {
  if (R < 0.0) throw std::domain_error("project_l2_ball: R must be >= 0");
  const double nv = v.norm();
  if (nv <= R) return v;
  if (nv == 0.0) return v;
  return v * (R / nv);
}

Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double lam) {
  if (lam < 0.0) throw std::domain_error("prox_l1: lambda must be >= 0");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::fmax(std::abs(v[i]) - lam, 0.0);
    out[i] = v[i] < 0.0 ? -m : m;
  }
  return out;
}

double subgradient_distance_l1(const Eigen::VectorXd& g,
                               const Eigen::VectorXd& theta, double lam) {
  if (g.size() != theta.size())
    throw std::invalid_argument("subgradient_distance_l1: dimension mismatch");
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (theta[i] != 0.0) {
      const double r = g[i] - lam * (theta[i] < 0.0 ? -1.0 : 1.0);
      d2 += r * r;
    } else {
      const double r = std::fmax(std::abs(g[i]) - lam, 0.0);
      d2 += r * r;
    }
  }
  return std::sqrt(d2);
}

double subgradient_distance_l2(const Eigen::VectorXd& g,
                               const Eigen::VectorXd& theta, double lam) {
  const double nt = theta.norm();
  if (nt == 0.0)
    throw std::domain_error("subgradient_distance_l2: theta must be nonzero");
  return (g - (lam / nt) * theta).norm();
}

double gaussian_distance_sq_l1(int s, int p, double lam) {
  if (lam < 0.0) throw std::domain_error("gaussian_distance_sq_l1: lambda < 0");
  const double on = s * (1.0 + lam * lam);
  const double off = (p - s) * 2.0 *
                     ((1.0 + lam * lam) * normal_cdf(-lam) - lam * normal_pdf(lam));
  return on + off;
}

GaussianDistance gaussian_distance_sq(const Regularizer& reg,
                                      const Eigen::VectorXd& theta, double lam,
                                      long samples, const Rng& rng) {
  if (lam < 0.0) throw std::domain_error("gaussian_distance_sq: lambda < 0");
  GaussianDistance out;
  out.lambda = lam;
  const int p = static_cast<int>(theta.size());
  if (reg.kind == RegKind::l1_ball && samples <= 0) {
    const int s = static_cast<int>(support(theta).size());
    out.method = GaussianDistance::Method::analytic_l1;
    out.g_sq = gaussian_distance_sq_l1(s, p, lam);
    return out;
  }
  // Monte Carlo path: needs a subdifferential distance oracle.
  double (*dist)(const Eigen::VectorXd&, const Eigen::VectorXd&, double) = nullptr;
  switch (reg.kind) {
    case RegKind::l1_ball: dist = &subgradient_distance_l1; break;
    case RegKind::l2_ball: dist = &subgradient_distance_l2; break;
    case RegKind::sparsity:
      throw UnsupportedError(
          "gaussian_distance_sq: hard sparsity has no subdifferential; "
          "use minimal_samples for its cone width");
  }
  if (samples < 1)
    throw std::domain_error("gaussian_distance_sq: samples must be >= 1");
  double sum = 0.0, sum2 = 0.0;
  Eigen::VectorXd g(p);
  for (long k = 0; k < samples; ++k) {
    const Rng sr = rng.stream(static_cast<std::uint64_t>(k));
    for (int i = 0; i < p; ++i) g[i] = sr.normal(static_cast<std::uint64_t>(i));
    const double d = dist(g, theta, lam);
    sum += d * d;
    sum2 += d * d * d * d;
  }
  const double n = static_cast<double>(samples);
  out.method = GaussianDistance::Method::monte_carlo;
  out.samples = samples;
  out.g_sq = sum / n;
  out.std_err = std::sqrt(std::fmax(0.0, sum2 / n - out.g_sq * out.g_sq) / n);
  return out;
}

MinimalSamples minimal_samples_regularized(const Regularizer& reg,
                                           const Eigen::VectorXd& theta,
                                           double lam, double t,
                                           long mc_samples, const Rng& rng) {
  const GaussianDistance gd = gaussian_distance_sq(reg, theta, lam, mc_samples, rng);
  MinimalSamples out;
  out.t = t;
  out.lambda = lam;
  out.n0 = phi_inverse(std::sqrt(gd.g_sq) + 7.0 * t + std::sqrt(2.0));
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(50);
  const double lo = std::log(0.01), hi = std::log(10.0);
  for (int i = 0; i < 50; ++i)
    grid[i] = std::exp(lo + (hi - lo) * i / 49.0);
  return grid;
}

double sparse_cone_width_mc(const Eigen::VectorXd& theta, long samples,
                            const Rng& rng) {
  const std::vector<int> S = support(theta);
  const int s = static_cast<int>(S.size());
  const int p = static_cast<int>(theta.size());
  if (s == 0 || s >= p)
    throw std::domain_error("sparse_cone_width_mc: need 0 < s < p");
  if (samples < 1) throw std::domain_error("sparse_cone_width_mc: samples >= 1");
  // Per sample the supremum is closed-form: the cone holds vectors supported
  // on S plus at most one extra coordinate; adding the extra requires some
  // slot i in S with v_i * theta_i <= 0.
  double sum = 0.0;
  for (long k = 0; k < samples; ++k) {
    const Rng sr = rng.stream(static_cast<std::uint64_t>(k));
    double on2 = 0.0, pen = std::numeric_limits<double>::infinity();
    bool sign_free = false;
    for (int j = 0; j < s; ++j) {
      const double g = sr.normal(static_cast<std::uint64_t>(j));
      on2 += g * g;
      if (g * theta[S[j]] <= 0.0) sign_free = true;
      pen = std::fmin(pen, g * g);
    }
    double max2 = 0.0;
    std::uint64_t c = static_cast<std::uint64_t>(s);
    for (int j = 0; j < p - s; ++j) {
      const double g = sr.normal(c++);
      max2 = std::fmax(max2, g * g);
    }
    const double with_extra = std::sqrt(on2 - (sign_free ? 0.0 : pen) + max2);
    sum += std::fmax(std::sqrt(on2), with_extra);
  }
  return sum / static_cast<double>(samples);
}

MinimalSamples minimal_samples(const Regularizer& reg,
                               const Eigen::VectorXd& theta, double t,
                               const std::vector<double>& lambda_grid,
                               long mc_samples, const Rng& rng) {
  MinimalSamples out;
  out.t = t;
  const int p = static_cast<int>(theta.size());
  if (theta.norm() == 0.0) {
    // Descent cone of a norm at 0 is all of R^p.
    out.n0 = phi_inverse(gamma_mean_norm(p) + t);
    out.degenerate = true;
    return out;
  }
  switch (reg.kind) {
    case RegKind::l1_ball: {
      if (lambda_grid.empty())
        throw std::domain_error("minimal_samples: empty lambda grid");
      double best = std::numeric_limits<double>::infinity();
      double best_lam = lambda_grid.front();
      for (const double lam : lambda_grid) {
        const MinimalSamples cand =
            minimal_samples_regularized(reg, theta, lam, t, mc_samples, rng);
        if (cand.n0 < best) {
          best = cand.n0;
          best_lam = lam;
        }
      }
      out.n0 = best;
      out.lambda = best_lam;
      return out;
    }
    case RegKind::l2_ball: {
      // Interior point: the descent set contains a neighbourhood of 0, the
      // cone is all of R^p and the width is b_p exactly.
      out.n0 = phi_inverse(gamma_mean_norm(p) + t);
      return out;
    }
    case RegKind::sparsity: {
      const long samples = mc_samples > 0 ? mc_samples : 100000;
      const double w = sparse_cone_width_mc(theta, samples, rng.stream(0x5Bull));
      out.n0 = phi_inverse(w + t);
      return out;
    }
  }
  throw std::logic_error("minimal_samples: unknown regularizer");
}

Eigen::MatrixXd sample_l1_cone_directions(const Eigen::VectorXd& theta,
                                          int count, const Rng& rng) {
  const std::vector<int> S = support(theta);
  const int s = static_cast<int>(S.size());
  const int p = static_cast<int>(theta.size());
  if (s == 0) throw std::domain_error("sample_l1_cone_directions: theta = 0");
  if (count < 1) throw std::domain_error("sample_l1_cone_directions: count >= 1");
  Eigen::MatrixXd out(p, count);
  out.setZero();
  for (int k = 0; k < count; ++k) {
    const Rng sr = rng.stream(static_cast<std::uint64_t>(k));
    std::uint64_t c = 0;
    Eigen::VectorXd h = Eigen::VectorXd::Zero(p);
    double dot = 0.0;
    for (int j = 0; j < s; ++j) {
      h[S[j]] = sr.normal(c++);
      dot += h[S[j]] * (theta[S[j]] < 0.0 ? -1.0 : 1.0);
    }
    if (dot > 0.0) {
      // Reflect along the sign vector so <sign(theta_S), h_S> <= 0.
      for (int j = 0; j < s; ++j)
        h[S[j]] -= 2.0 * dot / s * (theta[S[j]] < 0.0 ? -1.0 : 1.0);
      dot = -dot;
    }
    if (k % 2 == 1 && -dot > 1e-12) {
      // Spend a random fraction of the budget off the support.
      const double budget = -dot * sr.uniform(c++);
      const int m = 1 + static_cast<int>(sr.bits(c++) %
                                         static_cast<std::uint64_t>(
                                             std::min(2 * s, p - s)));
      double l1 = 0.0;
      std::vector<int> off(m);
      std::vector<double> w(m);
      for (int j = 0; j < m; ++j) {
        // Rejection-free: random off-support index, duplicates harmless.
        int idx;
        do {
          idx = static_cast<int>(sr.bits(c++) % static_cast<std::uint64_t>(p));
        } while (theta[idx] != 0.0);
        off[j] = idx;
        w[j] = sr.normal(c++);
        l1 += std::abs(w[j]);
      }
      if (l1 > 0.0)
        for (int j = 0; j < m; ++j) h[off[j]] += w[j] / l1 * budget;
    }
    const double nh = h.norm();
    if (nh > 0.0) out.col(k) = h / nh;
  }
  return out;
}

}  // namespace sindex
