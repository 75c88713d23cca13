#include "sindex/links.hpp"

#include <cmath>
#include <stdexcept>

#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"

namespace sindex {

double Link::operator()(double z) const {
  switch (kind) {
    case LinkKind::linear:
      return z;
    case LinkKind::sign:
      return z < 0.0 ? -1.0 : 1.0;
    case LinkKind::quantize: {
      const double width = 2.0 * clip / levels;
      int cell = static_cast<int>(std::floor((z + clip) / width));
      if (cell < 0) cell = 0;
      if (cell >= levels) cell = levels - 1;
      return -clip + (cell + 0.5) * width;
    }
    case LinkKind::tanh_scale:
      return std::tanh(scale * z);
    case LinkKind::cubic:
      return z * z * z;
    case LinkKind::custom:
      return fn(z);
  }
  throw std::logic_error("Link: unknown kind");
}

Link Link::linear() { return Link{LinkKind::linear, 0, 0.0, 1.0, nullptr}; }
Link Link::sign() { return Link{LinkKind::sign, 0, 0.0, 1.0, nullptr}; }

Link Link::quantize(int levels, double clip) {
  if (levels < 2) throw std::domain_error("quantize: levels must be >= 2");
  if (!(clip > 0.0)) throw std::domain_error("quantize: clip must be positive");
  return Link{LinkKind::quantize, levels, clip, 1.0, nullptr};
}

Link Link::tanh_scale(double c) {
  return Link{LinkKind::tanh_scale, 0, 0.0, c, nullptr};
}

Link Link::cubic() { return Link{LinkKind::cubic, 0, 0.0, 1.0, nullptr}; }

Link Link::custom(std::function<double(double)> fn) {
  return Link{LinkKind::custom, 0, 0.0, 1.0, std::move(fn)};
}

std::string Link::name() const {
  switch (kind) {
    case LinkKind::linear: return "linear";
    case LinkKind::sign: return "sign";
    case LinkKind::quantize: return "quantize";
    case LinkKind::tanh_scale: return "tanh-scale";
    case LinkKind::cubic: return "cubic";
    case LinkKind::custom: return "custom";
  }
  return "?";
}

Eigen::VectorXd apply_link(const Link& link, const Eigen::VectorXd& z) {
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out[i] = link(z[i]);
    if (!std::isfinite(out[i]))
      throw NumericError("apply_link: non-finite link output at index " +
                         std::to_string(i));
  }
  return out;
}

double LinkStats::sigma() const { return std::sqrt(sigma_sq); }
double LinkStats::gamma() const { return std::sqrt(gamma_sq); }

LinkStats link_stats_analytic(const Link& link) {
  LinkStats st;
  st.source = LinkStats::Source::analytic;
  switch (link.kind) {
    case LinkKind::linear:
      st.mu = 1.0;
      st.sigma_sq = 0.0;
      st.gamma_sq = 0.0;
      return st;
    case LinkKind::sign:
      // mu = E|g| = sqrt(2/pi); sigma^2 = 1 - mu^2; gamma^2 works out to the
      // same value via E|g|^3 = 2 sqrt(2/pi) and E g^4 = 3.
      st.mu = std::sqrt(2.0 / M_PI);
      st.sigma_sq = 1.0 - 2.0 / M_PI;
      st.gamma_sq = 1.0 - 2.0 / M_PI;
      return st;
    case LinkKind::cubic:
      // mu = E g^4 = 3; sigma^2 = E(g^3-3g)^2 = 15 - 18 + 9 = 6;
      // gamma^2 = E g^2 (g^3-3g)^2 = 105 - 90 + 27 = 42.
      st.mu = 3.0;
      st.sigma_sq = 6.0;
      st.gamma_sq = 42.0;
      return st;
    default:
      throw UnsupportedError("link_stats_analytic: no closed form for '" +
                             link.name() + "'; use link_stats_mc");
  }
}

LinkStats link_stats_mc(const Link& link, long samples, const Rng& rng) {
  if (samples < 1000)
    throw std::domain_error("link_stats_mc: need at least 1000 samples");
  // Pass 1: mu as the sample least-squares coefficient sum f(g)g / sum g^2
  // (E g^2 = 1, so this estimates E[f(g)g]; it also makes the linear-link
  // residual vanish identically).
  double sum_fg = 0.0, sum_g2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double g = rng.normal(static_cast<std::uint64_t>(i));
    const double v = link(g) * g;
    if (!std::isfinite(v))
      throw NumericError("link_stats_mc: non-finite link output at sample " +
                         std::to_string(i));
    sum_fg += v;
    sum_g2 += g * g;
  }
  const double n = static_cast<double>(samples);
  const double mu = sum_fg / sum_g2;
  // Pass 2: residual moments with the plug-in mu.
  double s_r2 = 0.0, s_r4 = 0.0, s_g2r2 = 0.0, s_g4r4 = 0.0, s_q2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double g = rng.normal(static_cast<std::uint64_t>(i));
    const double r = link(g) - mu * g;
    const double r2 = r * r;
    const double g2 = g * g;
    s_r2 += r2;
    s_r4 += r2 * r2;
    s_g2r2 += g2 * r2;
    s_g4r4 += g2 * r2 * g2 * r2;
    s_q2 += r * g * r * g;  // regression-score variance for se(mu)
  }
  LinkStats st;
  st.source = LinkStats::Source::monte_carlo;
  st.samples = samples;
  st.mu = mu;
  st.sigma_sq = s_r2 / n;
  st.gamma_sq = s_g2r2 / n;
  const double var_r2 = std::fmax(0.0, s_r4 / n - st.sigma_sq * st.sigma_sq);
  const double var_g2r2 = std::fmax(0.0, s_g4r4 / n - st.gamma_sq * st.gamma_sq);
  st.se_mu = std::sqrt(s_q2 / n / n) / (sum_g2 / n);
  st.se_sigma_sq = std::sqrt(var_r2 / n);
  st.se_gamma_sq = std::sqrt(var_g2r2 / n);
  return st;
}

LinkStats link_stats(const Link& link, long mc_samples, const Rng& rng) {
  try {
    return link_stats_analytic(link);
  } catch (const UnsupportedError&) {
    return link_stats_mc(link, mc_samples, rng);
  }
}

EffectiveNoise effective_noise(const Link& link, const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& theta_star, double mu) {
  if (X.cols() != theta_star.size())
    throw std::invalid_argument("effective_noise: dimension mismatch");
  if (std::abs(theta_star.norm() - 1.0) > 1e-8)
    throw std::invalid_argument(
        "effective_noise: theta* must have unit Euclidean norm");
  const Eigen::VectorXd z = X * theta_star;
  EffectiveNoise out;
  out.w = apply_link(link, z) - mu * z;
  out.norm = out.w.norm();
  return out;
}

ConcentrationEstimate concentration_probe(const Link& link, const LinkStats& stats,
                                          int n, double eta, long trials,
                                          const Rng& rng) {
  if (n < 1) throw std::domain_error("concentration_probe: n must be >= 1");
  if (!(eta > 0.0)) throw std::domain_error("concentration_probe: eta must be positive");
  if (trials < 1) throw std::domain_error("concentration_probe: trials must be >= 1");

  ConcentrationEstimate out;
  out.eta = eta;
  out.trials = trials;
  if (stats.sigma_sq == 0.0 && stats.gamma_sq == 0.0) {
    // Both residual events are measure-zero.
    out.degenerate = true;
    out.p_hat = 0.0;
    out.std_err = 0.0;
    return out;
  }
  const double bn = gamma_mean_norm(n);
  const double thr_norm = eta * bn * stats.sigma();
  const double thr_corr = eta * bn * bn / std::sqrt(static_cast<double>(n)) * stats.gamma();
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    const Rng tr = rng.stream(static_cast<std::uint64_t>(t));
    double nrm2 = 0.0, corr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = tr.normal(static_cast<std::uint64_t>(i));
      const double r = link(g) - stats.mu * g;
      nrm2 += r * r;
      corr += g * r;
    }
    if (std::sqrt(nrm2) > thr_norm) ++hits;
    if (std::abs(corr) > thr_corr) ++hits;
  }
  double p = static_cast<double>(hits) / static_cast<double>(trials);
  if (p > 1.0) p = 1.0;
  out.p_hat = p;
  out.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return out;
}

ConcentrationEstimate concentration_probe(const Link& link, int n, double eta,
                                          long trials, const Rng& rng) {
  const LinkStats st = link_stats(link, 1000000, rng.stream(0x57A75ull));
  return concentration_probe(link, st, n, eta, trials, rng);
}

}  // namespace sindex
