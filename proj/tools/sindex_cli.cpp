// Command-line surface: solve / stats / n0 / bound / experiment / validate.
// Exit codes: 0 success, 1 config error, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sindex/bounds.hpp"
#include "sindex/config.hpp"
#include "sindex/errors.hpp"
#include "sindex/experiments.hpp"
#include "sindex/gaussian.hpp"
#include "sindex/trace_io.hpp"

using nlohmann::json;
using namespace sindex;

namespace {

struct CommonOverrides {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int trials = 0;
};

ExperimentConfig load_with_overrides(const CommonOverrides& ov) {
  ExperimentConfig cfg = load_config(ov.config_path);
  if (!ov.out.empty()) cfg.out = ov.out;
  if (ov.seed_set) cfg.seed = ov.seed;
  if (ov.trials > 0) cfg.trials = ov.trials;
  return cfg;
}

void add_overrides(CLI::App* app, CommonOverrides& ov, bool config_required = true) {
  app->add_option("--config", ov.config_path, "JSON config file")
      ->required(config_required);
  app->add_option("--out", ov.out, "output directory override");
  app->add_option("--seed", ov.seed, "seed override")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  app->add_option("--trials", ov.trials, "trial count override");
}

Link link_by_name(const std::string& name) {
  if (name == "linear") return Link::linear();
  if (name == "sign") return Link::sign();
  if (name == "cubic") return Link::cubic();
  throw ConfigError("stats: unknown link '" + name +
                    "' (use a config file for parameterized links)");
}

Regularizer reg_by_name(const std::string& name, double R, int s) {
  if (name == "l1" || name == "l1-ball") return Regularizer::l1(R);
  if (name == "l2" || name == "l2-ball") return Regularizer::l2(R);
  if (name == "sparsity") return Regularizer::sparse(s);
  throw ConfigError("unknown regularizer '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-index estimation toolkit"};
  app.require_subcommand(1);

  CommonOverrides solve_ov, exp_ov, val_ov;
  auto* solve_cmd = app.add_subcommand("solve", "run a solver from a config");
  add_overrides(solve_cmd, solve_ov);

  auto* stats_cmd = app.add_subcommand("stats", "link nonlinearity statistics");
  std::string stats_link = "sign";
  long stats_samples = 0;
  std::uint64_t stats_seed = 1;
  std::string stats_config;
  stats_cmd->add_option("--link", stats_link, "linear | sign | cubic");
  stats_cmd->add_option("--config", stats_config,
                        "config file holding a 'link' object (overrides --link)");
  stats_cmd->add_option("--samples", stats_samples,
                        "Monte Carlo sample count (0: analytic only)");
  stats_cmd->add_option("--seed", stats_seed, "Monte Carlo seed");

  auto* n0_cmd = app.add_subcommand("n0", "minimal sample estimate");
  std::string n0_reg = "l1";
  int n0_p = 500, n0_s = 10;
  double n0_t = 0.0, n0_R = 1.0;
  std::uint64_t n0_seed = 1;
  n0_cmd->add_option("--reg", n0_reg, "l1 | l2 | sparsity");
  n0_cmd->add_option("--p", n0_p, "ambient dimension")->required();
  n0_cmd->add_option("--s", n0_s, "sparsity of theta*");
  n0_cmd->add_option("--t", n0_t, "probability parameter t");
  n0_cmd->add_option("--R", n0_R, "ball radius (l2 interior check)");
  n0_cmd->add_option("--seed", n0_seed, "Monte Carlo seed");

  auto* bound_cmd = app.add_subcommand("bound", "theoretical bound curve");
  std::string bound_kind = "pgd";
  double b_n = 0, b_n0 = 0, b_kappa = 1, b_eta = 0, b_sigma = 0, b_gamma = 0,
         b_init = 1, b_p = 0, b_M0 = 1, b_rho = 0.5;
  int b_iters = 200;
  std::string bound_out;
  bound_cmd->add_option("--kind", bound_kind, "pgd | psgd | prox");
  bound_cmd->add_option("--n", b_n)->required();
  bound_cmd->add_option("--n0", b_n0)->required();
  bound_cmd->add_option("--kappa", b_kappa);
  bound_cmd->add_option("--eta", b_eta);
  bound_cmd->add_option("--sigma", b_sigma);
  bound_cmd->add_option("--gamma", b_gamma);
  bound_cmd->add_option("--init", b_init, "initial error (or squared error for psgd)");
  bound_cmd->add_option("--p", b_p, "dimension (psgd)");
  bound_cmd->add_option("--M0", b_M0);
  bound_cmd->add_option("--rho", b_rho);
  bound_cmd->add_option("--iters", b_iters);
  bound_cmd->add_option("--out", bound_out, "CSV path (stdout when omitted)");

  auto* exp_cmd = app.add_subcommand("experiment", "run a config-driven experiment");
  add_overrides(exp_cmd, exp_ov);

  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo lemma validation");
  std::string val_kind;
  add_overrides(val_cmd, val_ov, false);
  val_cmd->add_option("--kind", val_kind, "restricted-eigs | effective-noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      ExperimentConfig cfg = load_with_overrides(solve_ov);
      cfg.experiment = "solve";
      std::cout << run_experiment(cfg).dump(2) << '\n';
      return 0;
    }
    if (stats_cmd->parsed()) {
      Link link = Link::sign();
      if (!stats_config.empty()) {
        ExperimentConfig cfg = load_config(stats_config);
        link = cfg.link;
      } else {
        link = link_by_name(stats_link);
      }
      LinkStats st = stats_samples > 0
                         ? link_stats_mc(link, stats_samples, Rng(stats_seed))
                         : link_stats_analytic(link);
      json j{{"link", link.name()},
             {"mu", st.mu},
             {"sigma_sq", st.sigma_sq},
             {"gamma_sq", st.gamma_sq},
             {"source", st.source == LinkStats::Source::analytic ? "analytic"
                                                                 : "monte-carlo"}};
      if (st.source == LinkStats::Source::monte_carlo) {
        j["samples"] = st.samples;
        j["se_mu"] = st.se_mu;
        j["se_sigma_sq"] = st.se_sigma_sq;
        j["se_gamma_sq"] = st.se_gamma_sq;
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (n0_cmd->parsed()) {
      const Rng rng(n0_seed);
      const Regularizer reg = reg_by_name(n0_reg, n0_R, n0_s);
      const Eigen::VectorXd theta = make_sparse_theta(n0_p, n0_s, rng.stream(7));
      const MinimalSamples ms =
          minimal_samples(reg, theta, n0_t, default_lambda_grid(), 0, rng);
      json j{{"reg", reg.name()}, {"p", n0_p},       {"s", n0_s},
             {"t", n0_t},         {"n0", ms.n0},     {"degenerate", ms.degenerate},
             {"grid_lo", 0.01},   {"grid_hi", 10.0}, {"grid_points", 50}};
      if (ms.lambda) j["lambda"] = *ms.lambda;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (bound_cmd->parsed()) {
      std::vector<double> curve;
      if (bound_kind == "pgd") {
        curve = pgd_bound_curve(b_iters, b_n, b_n0, b_kappa, b_eta, b_sigma,
                                b_gamma, b_init);
      } else if (bound_kind == "psgd") {
        curve = psgd_bound_curve(b_iters, b_n, b_n0, b_p, b_eta, b_sigma, b_init);
      } else if (bound_kind == "prox") {
        curve.resize(static_cast<std::size_t>(b_iters) + 1);
        for (int tau = 0; tau <= b_iters; ++tau)
          curve[tau] =
              prox_M_bound(tau, b_M0, b_rho, b_eta, b_sigma, b_gamma, b_n, b_n0);
      } else {
        throw ConfigError("bound: unknown kind '" + bound_kind + "'");
      }
      if (bound_out.empty()) {
        std::printf("iter,bound\n");
        for (std::size_t i = 0; i < curve.size(); ++i)
          std::printf("%zu,%s\n", i, fmt_g17(curve[i]).c_str());
      } else {
        write_bound_csv(bound_out, curve);
      }
      return 0;
    }
    if (exp_cmd->parsed()) {
      const ExperimentConfig cfg = load_with_overrides(exp_ov);
      std::cout << run_experiment(cfg).dump(2) << '\n';
      return 0;
    }
    if (val_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!val_ov.config_path.empty()) {
        cfg = load_with_overrides(val_ov);
      } else {
        if (!val_ov.out.empty()) cfg.out = val_ov.out;
        if (val_ov.seed_set) cfg.seed = val_ov.seed;
        cfg.apply_defaults();
      }
      if (!val_kind.empty()) cfg.experiment = val_kind;
      if (cfg.experiment != "restricted-eigs" && cfg.experiment != "effective-noise")
        throw ConfigError("validate: set --kind or config experiment to "
                          "restricted-eigs or effective-noise");
      std::cout << run_experiment(cfg).dump(2) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "cli error: " << e.get_name() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
