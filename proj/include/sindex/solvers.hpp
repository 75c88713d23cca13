#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sindex/geometry.hpp"
#include "sindex/links.hpp"
#include "sindex/rng.hpp"

namespace sindex {

// Estimation instance. theta_star/mu are the synthetic oracle; without them
// traces carry NaN estimation errors and only residuals are meaningful.
struct Problem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  Link link = Link::linear();
  std::optional<Eigen::VectorXd> theta_star;
  std::optional<double> mu;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  void validate() const;
};

struct SolverConfig {
  int max_iters = 200;
  double step_size = 0.0;  // 0 selects the default 1/b_n^2
  std::uint64_t seed = 0;
  int trials = 1;          // PSGD chains
  double stop_tol = 0.0;   // successive-iterate distance; 0 disables
  int record_every = 1;
  std::optional<Eigen::VectorXd> theta0;  // default: zero vector
};

struct TraceRecord {
  int iter = 0;
  double error = 0.0;     // ||theta_tau - mu theta*||, NaN without oracle
  double residual = 0.0;  // ||y - X theta_tau||
  double wall_ms = 0.0;
};

struct ScheduleRecord {
  int iter = 0;
  double lambda_tau = 0.0;
  double m_tau = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
  Eigen::VectorXd estimate;
  std::vector<ScheduleRecord> schedule;  // proximal solvers only

  double final_error() const { return records.back().error; }
  // Mean error over the final (up to) 10 records.
  double plateau() const;
};

// Averaged PSGD output: per-chain traces plus the cross-chain mean of the
// squared error at each recorded iteration.
struct PsgdTrace {
  std::vector<SolverTrace> chains;
  std::vector<int> iters;
  std::vector<double> mean_sq_error;
};

// theta_{tau+1} = P_K(theta_tau + alpha X'(y - X theta_tau)).
SolverTrace pgd_solve(const Problem& problem, const Regularizer& reg,
                      const SolverConfig& config);

// Categorical row sampler with P(i) = ||x_i||^2 / ||X||_F^2; zero-norm rows
// are skipped and redrawn.
class RowSampler {
 public:
  explicit RowSampler(const Eigen::MatrixXd& X);
  int draw(const Rng& rng, std::uint64_t& counter) const;
  double weight(int i) const { return row_sq_[i] / total_; }
  double row_squared_norm(int i) const { return row_sq_[i]; }

 private:
  Eigen::VectorXd row_sq_;
  std::vector<double> cum_;
  double total_ = 0.0;
};

// Row-sampled Kaczmarz-style update with projection; rows drawn with
// probability ||x_i||^2 / ||X||_F^2. Convex regularizers only unless
// allow_nonconvex is set.
PsgdTrace psgd_solve(const Problem& problem, const Regularizer& reg,
                     const SolverConfig& config, bool allow_nonconvex = false);

using ProxOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
ProxOp soft_threshold_prox();

// Data-reuse proximal iteration with the geometric shrinkage schedule
// lambda_tau = max(lambda0 rho^tau, lambda_min). Accepts any plug-in prox.
SolverTrace proxgd_solve(const Problem& problem, const ProxOp& prox,
                         double lambda0, double rho, double lambda_min,
                         const SolverConfig& config);

// Shrinkage recursion parameters for the resampled proximal scheme.
struct ProxSchedule {
  double M0 = 1.0;
  double rho = 0.5;      // must be in (0,1)
  double lambda = 1.0;   // penalty level defining n0(lambda)
  double t = 0.0;
  double eta = 0.0;
};

//   lambda_tau = ((1 + t/b_n) M_tau + eta sigma) lambda / b_n
//   M_{tau+1}  = rho M_tau + eta (sigma sqrt(n0(lambda)) + gamma) / sqrt(n)
std::pair<double, double> lambda_schedule_step(double M_tau,
                                               const ProxSchedule& schedule,
                                               const LinkStats& stats, double n,
                                               double n0_lambda, double b_n);

struct Batch {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};
using MinibatchGenerator = std::function<std::optional<Batch>(int iter)>;

// Fresh n x p design and observations y = f(X theta*) for every iteration.
MinibatchGenerator synthetic_minibatches(const Link& link,
                                         const Eigen::VectorXd& theta_star,
                                         int n, const Rng& rng);

// Resampled proximal iteration: a fresh batch per step, shrinkage driven by
// the (lambda_tau, M_tau) recursion; the trace carries the schedule history.
SolverTrace proxgd_resampled_solve(const MinibatchGenerator& batches,
                                   const ProxOp& prox,
                                   const ProxSchedule& schedule,
                                   const LinkStats& stats, double n0_lambda,
                                   int n, const SolverConfig& config,
                                   const std::optional<Eigen::VectorXd>& mu_theta_star);

// Unit-norm s-sparse vector: random support, N(0,1) values, normalized.
Eigen::VectorXd make_sparse_theta(int p, int s, const Rng& rng);

// Synthetic single-index instance y = f(X theta*).
Problem make_synthetic_problem(const Link& link, int n,
                               const Eigen::VectorXd& theta_star, double mu,
                               const Rng& rng);

// Linear surrogate instance y = mu X theta* + w, w ~ N(0, noise_sd^2 I).
Problem make_linear_noisy_problem(int n, const Eigen::VectorXd& theta_star,
                                  double mu, double noise_sd, const Rng& rng);

}  // namespace sindex
