#include "sindex/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"

namespace sindex {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double error_metric(const Eigen::VectorXd& theta, const Problem& problem) {
  if (problem.theta_star && problem.mu)
    return (theta - *problem.mu * *problem.theta_star).norm();
  return std::numeric_limits<double>::quiet_NaN();
}

Eigen::VectorXd initial_iterate(const SolverConfig& config, int p) {
  if (config.theta0) {
    if (config.theta0->size() != p)
      throw std::invalid_argument("theta0 dimension mismatch");
    return *config.theta0;
  }
  return Eigen::VectorXd::Zero(p);
}

bool should_record(int iter, int record_every, int max_iters) {
  if (iter == 0 || iter == max_iters) return true;
  return record_every > 0 && iter % record_every == 0;
}

void guard_divergence(const Eigen::VectorXd& theta, double metric,
                      double init_metric, int iter) {
  if (!theta.allFinite())
    throw DivergenceError("solver produced a non-finite iterate at iteration " +
                              std::to_string(iter),
                          iter);
  const double cap = 1e6 * std::fmax(init_metric, 1e-12);
  if (std::isfinite(metric) && metric > cap)
    throw DivergenceError("solver diverged (metric " + std::to_string(metric) +
                              " at iteration " + std::to_string(iter) + ")",
                          iter);
}

}  // namespace

void Problem::validate() const {
  if (y.size() != X.rows())
    throw std::invalid_argument("Problem: y length must equal the row count");
  if (theta_star) {
    if (theta_star->size() != X.cols())
      throw std::invalid_argument("Problem: theta* dimension mismatch");
    if (std::abs(theta_star->norm() - 1.0) > 1e-8)
      throw std::invalid_argument("Problem: theta* must have unit norm");
  }
}

double SolverTrace::plateau() const {
  const std::size_t k = std::min<std::size_t>(10, records.size());
  double sum = 0.0;
  for (std::size_t i = records.size() - k; i < records.size(); ++i)
    sum += records[i].error;
  return sum / static_cast<double>(k);
}

SolverTrace pgd_solve(const Problem& problem, const Regularizer& reg,
                      const SolverConfig& config) {
  problem.validate();
  const auto start = Clock::now();
  const int p = problem.p();
  const double bn = gamma_mean_norm(problem.n());
  const double alpha = config.step_size > 0.0 ? config.step_size : 1.0 / (bn * bn);

  Eigen::VectorXd theta = initial_iterate(config, p);
  SolverTrace trace;
  const double init_metric = error_metric(theta, problem);
  trace.records.push_back({0, init_metric, (problem.y - problem.X * theta).norm(),
                           elapsed_ms(start)});
  Eigen::VectorXd residual(problem.n()), grad(p), next(p);
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    residual.noalias() = problem.y - problem.X * theta;
    grad.noalias() = problem.X.transpose() * residual;
    next = reg.project(theta + alpha * grad);
    const double move = (next - theta).norm();
    theta.swap(next);
    const double err = error_metric(theta, problem);
    guard_divergence(theta, err, std::isnan(init_metric) ? 1.0 : init_metric, iter);
    const bool stopping = config.stop_tol > 0.0 && move < config.stop_tol;
    if (should_record(iter, config.record_every, config.max_iters) || stopping)
      trace.records.push_back(
          {iter, err, (problem.y - problem.X * theta).norm(), elapsed_ms(start)});
    if (stopping) break;
  }
  trace.estimate = theta;
  return trace;
}

RowSampler::RowSampler(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  row_sq_.resize(n);
  for (int i = 0; i < n; ++i) row_sq_[i] = X.row(i).squaredNorm();
  total_ = row_sq_.sum();
  cum_.resize(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += row_sq_[i] / total_;
    cum_[i] = acc;
  }
  cum_[n - 1] = 1.0;
}

int RowSampler::draw(const Rng& rng, std::uint64_t& counter) const {
  int i;
  do {  // zero-norm rows are measure-zero; skip and redraw
    const double u = rng.uniform(counter++);
    i = static_cast<int>(std::lower_bound(cum_.begin(), cum_.end(), u) -
                         cum_.begin());
  } while (row_sq_[i] == 0.0);
  return i;
}

PsgdTrace psgd_solve(const Problem& problem, const Regularizer& reg,
                     const SolverConfig& config, bool allow_nonconvex) {
  problem.validate();
  if (!reg.is_convex() && !allow_nonconvex)
    throw ConfigError(
        "psgd_solve: nonconvex regularizer requires the explicit override");
  if (config.trials < 1) throw ConfigError("psgd_solve: trials must be >= 1");

  const int p = problem.p();
  const RowSampler sampler(problem.X);
  const Rng base(config.seed);
  PsgdTrace out;
  out.chains.resize(config.trials);

  for (int chain = 0; chain < config.trials; ++chain) {
    const auto start = Clock::now();
    const Rng rng = base.stream(static_cast<std::uint64_t>(chain));
    Eigen::VectorXd theta = initial_iterate(config, p);
    SolverTrace trace;
    const double init_metric = error_metric(theta, problem);
    trace.records.push_back({0, init_metric,
                             (problem.y - problem.X * theta).norm(),
                             elapsed_ms(start)});
    std::uint64_t ctr = 0;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
      const int i = sampler.draw(rng, ctr);
      const double resid_i = problem.y[i] - problem.X.row(i).dot(theta);
      theta += (resid_i / sampler.row_squared_norm(i)) * problem.X.row(i).transpose();
      theta = reg.project(theta);
      if (should_record(iter, config.record_every, config.max_iters)) {
        const double err = error_metric(theta, problem);
        guard_divergence(theta, err, std::isnan(init_metric) ? 1.0 : init_metric,
                         iter);
        trace.records.push_back(
            {iter, err, (problem.y - problem.X * theta).norm(), elapsed_ms(start)});
      }
    }
    trace.estimate = theta;
    out.chains[chain] = std::move(trace);
  }

  // Cross-chain mean of squared error at each recorded iteration.
  const auto& first = out.chains.front().records;
  out.iters.reserve(first.size());
  out.mean_sq_error.assign(first.size(), 0.0);
  for (std::size_t k = 0; k < first.size(); ++k) {
    out.iters.push_back(first[k].iter);
    for (const auto& chain : out.chains)
      out.mean_sq_error[k] += chain.records[k].error * chain.records[k].error;
    out.mean_sq_error[k] /= static_cast<double>(out.chains.size());
  }
  return out;
}

ProxOp soft_threshold_prox() {
  return [](const Eigen::VectorXd& v, double lam) { return prox_l1(v, lam); };
}

SolverTrace proxgd_solve(const Problem& problem, const ProxOp& prox,
                         double lambda0, double rho, double lambda_min,
                         const SolverConfig& config) {
  problem.validate();
  if (lambda0 < 0.0 || lambda_min < 0.0)
    throw ConfigError("proxgd_solve: lambda levels must be >= 0");
  const auto start = Clock::now();
  const int p = problem.p();
  const double bn = gamma_mean_norm(problem.n());
  const double alpha = config.step_size > 0.0 ? config.step_size : 1.0 / (bn * bn);

  Eigen::VectorXd theta = initial_iterate(config, p);
  SolverTrace trace;
  const double init_metric = error_metric(theta, problem);
  trace.records.push_back({0, init_metric, (problem.y - problem.X * theta).norm(),
                           elapsed_ms(start)});
  double lam = lambda0;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const double lam_tau = std::fmax(lam, lambda_min);
    theta = prox(theta + alpha * (problem.X.transpose() *
                                  (problem.y - problem.X * theta)),
                 lam_tau);
    lam *= rho;
    const double err = error_metric(theta, problem);
    guard_divergence(theta, err, std::isnan(init_metric) ? 1.0 : init_metric, iter);
    if (should_record(iter, config.record_every, config.max_iters)) {
      trace.records.push_back(
          {iter, err, (problem.y - problem.X * theta).norm(), elapsed_ms(start)});
      trace.schedule.push_back({iter, lam_tau, 0.0});
    }
  }
  trace.estimate = theta;
  return trace;
}

std::pair<double, double> lambda_schedule_step(double M_tau,
                                               const ProxSchedule& schedule,
                                               const LinkStats& stats, double n,
                                               double n0_lambda, double b_n) {
  if (!(b_n > 0.0) || !(n > 0.0))
    throw std::domain_error("lambda_schedule_step: need b_n > 0 and n > 0");
  const double lambda_tau =
      ((1.0 + schedule.t / b_n) * M_tau + schedule.eta * stats.sigma()) *
      schedule.lambda / b_n;
  const double m_next =
      schedule.rho * M_tau +
      schedule.eta * (stats.sigma() * std::sqrt(n0_lambda) + stats.gamma()) /
          std::sqrt(n);
  return {lambda_tau, m_next};
}

MinibatchGenerator synthetic_minibatches(const Link& link,
                                         const Eigen::VectorXd& theta_star,
                                         int n, const Rng& rng) {
  return [link, theta_star, n, rng](int iter) -> std::optional<Batch> {
    const Rng br = rng.stream(static_cast<std::uint64_t>(iter));
    Batch b;
    b.X = sample_design(n, static_cast<int>(theta_star.size()), br);
    b.y = apply_link(link, b.X * theta_star);
    return b;
  };
}

SolverTrace proxgd_resampled_solve(const MinibatchGenerator& batches,
                                   const ProxOp& prox,
                                   const ProxSchedule& schedule,
                                   const LinkStats& stats, double n0_lambda,
                                   int n, const SolverConfig& config,
                                   const std::optional<Eigen::VectorXd>& mu_theta_star) {
  if (!(schedule.rho > 0.0 && schedule.rho < 1.0))
    throw ConfigError("proxgd_resampled_solve: rho must lie in (0,1)");
  const auto start = Clock::now();
  const double bn = gamma_mean_norm(n);
  const double alpha = config.step_size > 0.0 ? config.step_size : 1.0 / (bn * bn);

  std::optional<Eigen::VectorXd> theta0 = config.theta0;
  SolverTrace trace;
  Eigen::VectorXd theta;
  double M = schedule.M0;
  double init_metric = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    std::optional<Batch> batch = batches(iter - 1);
    if (!batch)
      throw ResourceError("proxgd_resampled_solve: minibatch generator exhausted at iteration " +
                          std::to_string(iter));
    if (batch->X.rows() != n)
      throw std::invalid_argument("proxgd_resampled_solve: batch row count mismatch");
    if (iter == 1) {
      theta = theta0 ? *theta0
                     : Eigen::VectorXd::Zero(batch->X.cols());
      init_metric = mu_theta_star ? (theta - *mu_theta_star).norm()
                                  : std::numeric_limits<double>::quiet_NaN();
      trace.records.push_back({0, init_metric, std::numeric_limits<double>::quiet_NaN(),
                               elapsed_ms(start)});
      trace.schedule.push_back({0, 0.0, M});
    }
    const auto [lam_tau, m_next] =
        lambda_schedule_step(M, schedule, stats, n, n0_lambda, bn);
    theta = prox(theta + alpha * (batch->X.transpose() *
                                  (batch->y - batch->X * theta)),
                 lam_tau);
    M = m_next;
    const double err = mu_theta_star ? (theta - *mu_theta_star).norm()
                                     : std::numeric_limits<double>::quiet_NaN();
    guard_divergence(theta, err, std::isnan(init_metric) ? 1.0 : init_metric, iter);
    if (should_record(iter, config.record_every, config.max_iters)) {
      trace.records.push_back({iter, err,
                               (batch->y - batch->X * theta).norm(),
                               elapsed_ms(start)});
      trace.schedule.push_back({iter, lam_tau, M});
    }
  }
  trace.estimate = theta;
  return trace;
}

Eigen::VectorXd make_sparse_theta(int p, int s, const Rng& rng) {
  if (s < 1 || s > p) throw std::domain_error("make_sparse_theta: need 1 <= s <= p");
  // Partial Fisher-Yates for the support.
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  std::uint64_t c = 0;
  for (int j = 0; j < s; ++j) {
    const int k = j + static_cast<int>(rng.bits(c++) %
                                       static_cast<std::uint64_t>(p - j));
    std::swap(idx[j], idx[k]);
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  double nrm2 = 0.0;
  for (int j = 0; j < s; ++j) {
    const double v = rng.normal(1000000 + c + j);
    theta[idx[j]] = v;
    nrm2 += v * v;
  }
  if (nrm2 == 0.0) theta[idx[0]] = 1.0, nrm2 = 1.0;
  return theta / std::sqrt(nrm2);
}

Problem make_synthetic_problem(const Link& link, int n,
                               const Eigen::VectorXd& theta_star, double mu,
                               const Rng& rng) {
  Problem prob;
  prob.X = sample_design(n, static_cast<int>(theta_star.size()), rng);
  prob.y = apply_link(link, prob.X * theta_star);
  prob.link = link;
  prob.theta_star = theta_star;
  prob.mu = mu;
  prob.validate();
  return prob;
}

Problem make_linear_noisy_problem(int n, const Eigen::VectorXd& theta_star,
                                  double mu, double noise_sd, const Rng& rng) {
  Problem prob;
  prob.X = sample_design(n, static_cast<int>(theta_star.size()), rng);
  const std::uint64_t noise_base =
      static_cast<std::uint64_t>(n) * theta_star.size();
  prob.y = mu * (prob.X * theta_star);
  for (int i = 0; i < n; ++i)
    prob.y[i] += noise_sd * rng.normal(noise_base + i);
  prob.link = Link::linear();
  prob.theta_star = theta_star;
  prob.mu = mu;
  prob.validate();
  return prob;
}

}  // namespace sindex
