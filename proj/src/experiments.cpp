#include "sindex/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sindex/bounds.hpp"
#include "sindex/errors.hpp"
#include "sindex/gaussian.hpp"
#include "sindex/trace_io.hpp"

namespace sindex {

using nlohmann::json;

namespace {

double tail_mean(const std::vector<double>& v, std::size_t k = 10) {
  const std::size_t m = std::min(k, v.size());
  double sum = 0.0;
  for (std::size_t i = v.size() - m; i < v.size(); ++i) sum += v[i];
  return sum / static_cast<double>(m);
}

std::string trial_name(const char* tag, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "trial_%s_%03d.csv", tag, k);
  return buf;
}

void write_summary(const std::filesystem::path& out_dir, const json& summary) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "summary.json", std::ios::binary);
  if (!out) throw ResourceError("cannot write summary.json");
  out << summary.dump(2) << '\n';
}

// Width of the l1 descent cone via the penalized surrogate
// omega ~ min_lambda G(lambda).
double l1_width(int s, int p) {
  double best = std::numeric_limits<double>::infinity();
  for (const double lam : default_lambda_grid())
    best = std::fmin(best, std::sqrt(gaussian_distance_sq_l1(s, p, lam)));
  return best;
}

}  // namespace

OneBitSummary run_onebit_vs_linear(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir) {
  const int p = cfg.p;
  const int s = cfg.s;
  const int n = cfg.n;
  const int iters = cfg.solver.max_iters > 0 ? cfg.solver.max_iters : 200;
  const LinkStats stats = link_stats_analytic(Link::sign());
  const double mu = stats.mu;
  const double sigma = stats.sigma();

  SolverConfig scfg;
  scfg.max_iters = iters;
  scfg.step_size = cfg.solver.step_size;
  scfg.stop_tol = cfg.solver.stop_tol;
  scfg.record_every = 1;

  const Rng base(cfg.seed);
  std::vector<double> mean_onebit, mean_linear;
  std::vector<double> iter_col;
  double first_iter_sum = 0.0;
  std::filesystem::create_directories(out_dir);

  Eigen::VectorXd theta0_star;
  for (int k = 0; k < cfg.trials; ++k) {
    const Rng tr = base.stream(static_cast<std::uint64_t>(k));
    const Eigen::VectorXd theta_star = make_sparse_theta(p, s, tr.stream(0));
    if (k == 0) theta0_star = theta_star;

    Problem onebit = make_synthetic_problem(Link::sign(), n, theta_star, mu, tr.stream(1));
    // Same design for the matched noisy-linear model.
    Problem linear;
    linear.X = onebit.X;
    linear.y = mu * (linear.X * theta_star);
    const Rng noise = tr.stream(2);
    for (int i = 0; i < n; ++i)
      linear.y[i] += sigma * noise.normal(static_cast<std::uint64_t>(i));
    linear.link = Link::linear();
    linear.theta_star = theta_star;
    linear.mu = mu;

    Regularizer reg = cfg.regularizer ? *cfg.regularizer : Regularizer::l1(0.0);
    if (cfg.oracle) reg = reg.tuned_to(mu * theta_star);

    const SolverTrace t1 = pgd_solve(onebit, reg, scfg);
    const SolverTrace t2 = pgd_solve(linear, reg, scfg);
    write_trace_csv(out_dir / trial_name("onebit", k), t1);
    write_trace_csv(out_dir / trial_name("linear", k), t2);

    if (mean_onebit.empty()) {
      mean_onebit.assign(t1.records.size(), 0.0);
      mean_linear.assign(t2.records.size(), 0.0);
      iter_col.resize(t1.records.size());
      for (std::size_t i = 0; i < t1.records.size(); ++i)
        iter_col[i] = t1.records[i].iter;
    }
    for (std::size_t i = 0; i < t1.records.size(); ++i) {
      mean_onebit[i] += t1.records[i].error;
      mean_linear[i] += t2.records[i].error;
    }
    first_iter_sum += t1.records.size() > 1 ? t1.records[1].error : 0.0;
  }
  for (auto& v : mean_onebit) v /= cfg.trials;
  for (auto& v : mean_linear) v /= cfg.trials;

  write_columns_csv(out_dir / "mean.csv", "iter,error_onebit,error_linear",
                    {iter_col, mean_onebit, mean_linear});

  OneBitSummary sum;
  sum.plateau_onebit = tail_mean(mean_onebit);
  sum.plateau_linear = tail_mean(mean_linear);
  sum.rel_gap = std::abs(sum.plateau_onebit - sum.plateau_linear) /
                std::fmax(sum.plateau_onebit, sum.plateau_linear);
  sum.first_iter_error = first_iter_sum / cfg.trials;
  sum.n0 = minimal_samples(Regularizer::l1(1.0), theta0_star, 0.0,
                           default_lambda_grid(), 0, base)
               .n0;
  sum.reference = std::sqrt(sum.n0 / n) * sigma;
  sum.trials = cfg.trials;

  write_summary(out_dir, json{{"experiment", "onebit-vs-linear"},
                              {"p", p},
                              {"n", n},
                              {"s", s},
                              {"trials", sum.trials},
                              {"iters", iters},
                              {"plateau_onebit", sum.plateau_onebit},
                              {"plateau_linear", sum.plateau_linear},
                              {"rel_gap", sum.rel_gap},
                              {"first_iter_error", sum.first_iter_error},
                              {"n0", sum.n0},
                              {"reference_sqrt_n0_over_n_sigma", sum.reference}});
  return sum;
}

PsgdScalingSummary run_psgd_scaling(const ExperimentConfig& cfg,
                                    const std::filesystem::path& out_dir) {
  const LinkStats stats = link_stats_analytic(Link::sign());
  const double mu = stats.mu;
  const Rng base(cfg.seed);
  PsgdScalingSummary summary;
  std::filesystem::create_directories(out_dir);
  json jentries = json::array();

  for (std::size_t pi = 0; pi < cfg.p_list.size(); ++pi) {
    const int p = cfg.p_list[pi];
    const int n = 4 * p;
    const int s = std::max(1, static_cast<int>(std::lround(0.1 * p)));
    const Rng tr = base.stream(static_cast<std::uint64_t>(pi));
    const Eigen::VectorXd theta_star = make_sparse_theta(p, s, tr.stream(0));
    const Problem prob = make_synthetic_problem(Link::sign(), n, theta_star, mu,
                                                tr.stream(1));
    const Regularizer reg = Regularizer::l1(0.0).tuned_to(mu * theta_star);

    SolverConfig pcfg;
    pcfg.max_iters = cfg.solver.max_iters > 0 ? cfg.solver.max_iters : 40 * p;
    pcfg.trials = cfg.solver.trials > 1 ? cfg.solver.trials : 20;
    pcfg.record_every = std::max(1, p / 10);
    pcfg.seed = tr.stream(2).seed() ^ (0xC0FFEEull + pi);

    const PsgdTrace ps = psgd_solve(prob, reg, pcfg);
    std::vector<double> iters_col(ps.iters.begin(), ps.iters.end());
    std::vector<double> rms(ps.mean_sq_error.size());
    for (std::size_t i = 0; i < rms.size(); ++i)
      rms[i] = std::sqrt(ps.mean_sq_error[i]);
    char name[48];
    std::snprintf(name, sizeof(name), "psgd_mean_p%d.csv", p);
    write_columns_csv(out_dir / name, "iter,mse,rms",
                      {iters_col, ps.mean_sq_error, rms});

    SolverConfig gcfg;
    gcfg.max_iters = 200;
    const SolverTrace pg = pgd_solve(prob, reg, gcfg);
    std::snprintf(name, sizeof(name), "pgd_mean_p%d.csv", p);
    write_trace_csv(out_dir / name, pg);

    PsgdScalingEntry e;
    e.p = p;
    e.n = n;
    e.s = s;
    e.psgd_plateau_rms = std::sqrt(tail_mean(ps.mean_sq_error));
    e.pgd_plateau = pg.plateau();
    e.ratio = e.psgd_plateau_rms / e.pgd_plateau;
    summary.entries.push_back(e);
    jentries.push_back(json{{"p", e.p},
                            {"n", e.n},
                            {"s", e.s},
                            {"psgd_plateau_rms", e.psgd_plateau_rms},
                            {"pgd_plateau", e.pgd_plateau},
                            {"ratio", e.ratio}});
  }
  write_summary(out_dir, json{{"experiment", "psgd-scaling"}, {"entries", jentries}});
  return summary;
}

LemmaCheckReport validate_restricted_eigs(int p, int s, int n, double t,
                                          int redraws, int directions,
                                          std::uint64_t seed) {
  const Rng base(seed);
  const Eigen::VectorXd theta_star = make_sparse_theta(p, s, base.stream(0xA));
  const double omega = l1_width(s, p);
  const double n0 = phi_inverse(omega + t);
  if (n <= 0) n = static_cast<int>(std::ceil(64.0 * n0));
  const double bound = std::sqrt(8.0 * n0 / n);
  const double bn = gamma_mean_norm(n);

  int ok = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < redraws; ++r) {
    const Rng rr = base.stream(1000 + static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd U =
        sample_l1_cone_directions(theta_star, directions, rr.stream(1));
    const Eigen::MatrixXd X = sample_design(n, p, rr.stream(2));
    const Eigen::MatrixXd XU = X * U;
    const Eigen::MatrixXd M =
        U.transpose() * U - (XU.transpose() * XU) / (bn * bn);
    const double stat = M.maxCoeff();
    worst = std::fmax(worst, stat);
    if (stat <= bound) ++ok;
  }
  LemmaCheckReport rep;
  rep.lemma = "restricted-eigs";
  rep.statistic = worst;
  rep.bound = bound;
  rep.trials = redraws;
  rep.pass_rate = static_cast<double>(ok) / redraws;
  rep.budget = 0.05 + (t > 0.0 ? std::fmin(1.0, 9.0 * std::exp(-t * t / 8.0)) : 0.0);
  rep.pass = rep.pass_rate >= 1.0 - rep.budget;
  return rep;
}

LemmaCheckReport validate_effective_noise(const Link& link, int p, int s, int n,
                                          double eta, double t, int redraws,
                                          int directions, std::uint64_t seed) {
  const Rng base(seed);
  const Eigen::VectorXd theta_star = make_sparse_theta(p, s, base.stream(0xA));
  const LinkStats stats = link_stats(link, 1000000, base.stream(0xB));
  const double omega = l1_width(s, p);
  const double n0 = phi_inverse(omega + t);
  const double bn = gamma_mean_norm(n);
  const double rhs = bn * bn / std::sqrt(static_cast<double>(n)) * eta *
                     (stats.sigma() * std::sqrt(n0) + stats.gamma());

  int exceed = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < redraws; ++r) {
    const Rng rr = base.stream(2000 + static_cast<std::uint64_t>(r));
    const Eigen::MatrixXd X = sample_design(n, p, rr.stream(2));
    const Eigen::VectorXd z = X * theta_star;
    const Eigen::VectorXd w = apply_link(link, z) - stats.mu * z;
    const Eigen::MatrixXd U =
        sample_l1_cone_directions(theta_star, directions, rr.stream(1));
    const double stat = (U.transpose() * (X.transpose() * w)).maxCoeff();
    worst = std::fmax(worst, stat);
    if (stat > rhs) ++exceed;
  }
  const ConcentrationEstimate probe =
      concentration_probe(link, stats, n, eta, 20000, base.stream(0xC));

  LemmaCheckReport rep;
  rep.lemma = "effective-noise";
  rep.statistic = worst;
  rep.bound = rhs;
  rep.trials = redraws;
  rep.pass_rate = 1.0 - static_cast<double>(exceed) / redraws;
  rep.budget = std::fmin(1.0, probe.p_hat + std::exp(-t * t / 2.0) + 0.10);
  rep.pass = (1.0 - rep.pass_rate) <= rep.budget;
  return rep;
}

json report_to_json(const LemmaCheckReport& rep) {
  return json{{"lemma", rep.lemma},         {"statistic", rep.statistic},
              {"bound", rep.bound},         {"pass_rate", rep.pass_rate},
              {"budget", rep.budget},       {"pass", rep.pass},
              {"trials", rep.trials}};
}

namespace {

json run_solve(const ExperimentConfig& cfg) {
  const std::filesystem::path out_dir(cfg.out);
  std::filesystem::create_directories(out_dir);
  const Rng base(cfg.seed);
  const LinkStats stats = link_stats(cfg.link, 1000000, base.stream(0xF));

  SolverConfig scfg;
  scfg.max_iters = cfg.solver.max_iters > 0 ? cfg.solver.max_iters : 200;
  scfg.step_size = cfg.solver.step_size;
  scfg.stop_tol = cfg.solver.stop_tol;
  scfg.record_every = cfg.solver.record_every;
  scfg.trials = cfg.solver.trials;

  json out{{"experiment", "solve"},
           {"solver", cfg.solver.kind},
           {"p", cfg.p},
           {"n", cfg.n},
           {"s", cfg.s}};

  if (cfg.solver.kind == "psgd") {
    const Eigen::VectorXd theta_star = make_sparse_theta(cfg.p, cfg.s, base.stream(0));
    const Problem prob =
        make_synthetic_problem(cfg.link, cfg.n, theta_star, stats.mu, base.stream(1));
    Regularizer reg = cfg.regularizer ? *cfg.regularizer : Regularizer::l1(0.0);
    if (cfg.oracle) reg = reg.tuned_to(stats.mu * theta_star);
    scfg.seed = base.stream(2).seed() ^ 0x9D5ull;
    const PsgdTrace ps = psgd_solve(prob, reg, scfg);
    for (std::size_t c = 0; c < ps.chains.size(); ++c)
      write_trace_csv(out_dir / trial_name("chain", static_cast<int>(c)), ps.chains[c]);
    std::vector<double> iters_col(ps.iters.begin(), ps.iters.end());
    write_columns_csv(out_dir / "mean.csv", "iter,mse",
                      {iters_col, ps.mean_sq_error});
    out["mse_plateau"] = tail_mean(ps.mean_sq_error);
    write_summary(out_dir, out);
    return out;
  }

  std::vector<double> iters_col, mean_err;
  double final_sum = 0.0, plateau_sum = 0.0;
  const int repeats = std::max(1, cfg.trials);
  for (int k = 0; k < repeats; ++k) {
    const Rng tr = base.stream(static_cast<std::uint64_t>(k));
    const Eigen::VectorXd theta_star = make_sparse_theta(cfg.p, cfg.s, tr.stream(0));
    SolverTrace trace;
    if (cfg.solver.kind == "proxgd-resampled") {
      const double lam = std::sqrt(2.0 * std::log(static_cast<double>(cfg.p) / cfg.s));
      const Regularizer l1 = Regularizer::l1(1.0);
      const MinimalSamples ms = minimal_samples_regularized(
          l1, theta_star, lam, cfg.t, 0, tr.stream(3));
      ProxSchedule sched;
      sched.M0 = stats.mu;  // theta0 = 0, ||theta0 - mu theta*|| = mu
      sched.rho = std::sqrt(std::fmin(0.98, ms.n0 / cfg.n));
      sched.lambda = lam;
      sched.t = cfg.t;
      sched.eta = cfg.eta;
      trace = proxgd_resampled_solve(
          synthetic_minibatches(cfg.link, theta_star, cfg.n, tr.stream(1)),
          soft_threshold_prox(), sched, stats, ms.n0, cfg.n, scfg,
          stats.mu * theta_star);
      write_schedule_csv(out_dir / ("schedule_" + std::to_string(k) + ".csv"), trace);
    } else {
      const Problem prob =
          make_synthetic_problem(cfg.link, cfg.n, theta_star, stats.mu, tr.stream(1));
      Regularizer reg = cfg.regularizer ? *cfg.regularizer : Regularizer::l1(0.0);
      if (cfg.oracle) reg = reg.tuned_to(stats.mu * theta_star);
      if (cfg.solver.kind == "proxgd") {
        const double lam0 = cfg.solver.lambda0 > 0.0
                                ? cfg.solver.lambda0
                                : (prob.X.transpose() * prob.y).cwiseAbs().maxCoeff() /
                                      (gamma_mean_norm(cfg.n) * gamma_mean_norm(cfg.n));
        trace = proxgd_solve(prob, soft_threshold_prox(), lam0, cfg.solver.rho,
                             cfg.solver.lambda_min, scfg);
        write_schedule_csv(out_dir / ("schedule_" + std::to_string(k) + ".csv"), trace);
      } else {
        trace = pgd_solve(prob, reg, scfg);
      }
    }
    write_trace_csv(out_dir / trial_name("solve", k), trace);
    if (mean_err.empty()) {
      mean_err.assign(trace.records.size(), 0.0);
      iters_col.resize(trace.records.size());
      for (std::size_t i = 0; i < trace.records.size(); ++i)
        iters_col[i] = trace.records[i].iter;
    }
    for (std::size_t i = 0; i < trace.records.size() && i < mean_err.size(); ++i)
      mean_err[i] += trace.records[i].error;
    final_sum += trace.final_error();
    plateau_sum += trace.plateau();
  }
  for (auto& v : mean_err) v /= repeats;
  write_columns_csv(out_dir / "mean.csv", "iter,error", {iters_col, mean_err});
  out["final_error_mean"] = final_sum / repeats;
  out["plateau_mean"] = plateau_sum / repeats;
  write_summary(out_dir, out);
  return out;
}

}  // namespace

json run_experiment(const ExperimentConfig& cfg) {
  const std::filesystem::path out_dir(cfg.out);
  if (cfg.experiment == "onebit-vs-linear") {
    run_onebit_vs_linear(cfg, out_dir);
    std::ifstream in(out_dir / "summary.json");
    json j;
    in >> j;
    return j;
  }
  if (cfg.experiment == "psgd-scaling") {
    run_psgd_scaling(cfg, out_dir);
    std::ifstream in(out_dir / "summary.json");
    json j;
    in >> j;
    return j;
  }
  if (cfg.experiment == "restricted-eigs") {
    const LemmaCheckReport rep = validate_restricted_eigs(
        cfg.p, cfg.s, cfg.n, cfg.t, cfg.redraws, cfg.directions, cfg.seed);
    const json j = report_to_json(rep);
    write_summary(out_dir, j);
    return j;
  }
  if (cfg.experiment == "effective-noise") {
    const LemmaCheckReport rep =
        validate_effective_noise(cfg.link, cfg.p, cfg.s, cfg.n, cfg.eta, cfg.t,
                                 cfg.redraws, cfg.directions, cfg.seed);
    const json j = report_to_json(rep);
    write_summary(out_dir, j);
    return j;
  }
  if (cfg.experiment == "solve") return run_solve(cfg);
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace sindex
