#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sindex/config.hpp"
#include "sindex/solvers.hpp"

namespace sindex {

struct OneBitSummary {
  double plateau_onebit = 0.0;
  double plateau_linear = 0.0;
  double rel_gap = 0.0;          // |a-b| / max(a,b)
  double first_iter_error = 0.0; // mean error after one update
  double n0 = 0.0;
  double reference = 0.0;        // sqrt(n0/n) * sigma
  int trials = 0;
};

// Fig-1a style comparison: PGD on one-bit observations vs the matched noisy
// linear model over the same designs. Writes trial_*.csv, mean.csv and
// summary.json under out_dir.
OneBitSummary run_onebit_vs_linear(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir);

struct PsgdScalingEntry {
  int p = 0;
  int n = 0;
  int s = 0;
  double psgd_plateau_rms = 0.0;  // sqrt of the tail mean-squared error
  double pgd_plateau = 0.0;
  double ratio = 0.0;
};

struct PsgdScalingSummary {
  std::vector<PsgdScalingEntry> entries;
};

PsgdScalingSummary run_psgd_scaling(const ExperimentConfig& cfg,
                                    const std::filesystem::path& out_dir);

// One-sided lemma validation over design redraws. The sampled statistic
// lower-bounds the exact cone supremum, so a pass is necessary evidence,
// not sufficient.
struct LemmaCheckReport {
  std::string lemma;
  double statistic = 0.0;   // worst sampled statistic across redraws
  double bound = 0.0;       // theoretical threshold
  double pass_rate = 0.0;   // fraction of redraws below the bound
  double budget = 0.0;      // allowed exceedance frequency
  bool pass = false;
  int trials = 0;
};

// Restricted-eigenvalue check: the quadratic form u'(I - X'X/b_n^2)v over
// sampled l1 descent-cone pairs stays below sqrt(8 n0/n).
LemmaCheckReport validate_restricted_eigs(int p, int s, int n, double t,
                                          int redraws, int directions,
                                          std::uint64_t seed);

// Effective-noise check: sampled cone correlations with X'w stay below
// (b_n^2/sqrt(n)) eta (sigma sqrt(n0) + gamma) except with probe-budgeted
// frequency.
LemmaCheckReport validate_effective_noise(const Link& link, int p, int s, int n,
                                          double eta, double t, int redraws,
                                          int directions, std::uint64_t seed);

nlohmann::json report_to_json(const LemmaCheckReport& report);

// Dispatches on cfg.experiment; returns the summary that was also written
// to <out>/summary.json.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

}  // namespace sindex
