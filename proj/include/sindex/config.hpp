#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sindex/geometry.hpp"
#include "sindex/links.hpp"

namespace sindex {

struct SolverSpec {
  std::string kind = "pgd";  // pgd | psgd | proxgd | proxgd-resampled
  int max_iters = 0;  // 0: experiment-appropriate default
  double step_size = 0.0;
  double stop_tol = 0.0;
  int trials = 1;
  int record_every = 1;
  // proxgd schedule
  double lambda0 = 0.0;
  double rho = 0.95;
  double lambda_min = 0.0;
};

struct ExperimentConfig {
  std::string experiment = "solve";
  int p = 500;
  int n = 0;  // 0: experiment-specific default
  int s = 0;  // 0: experiment-specific default
  std::vector<int> p_list;
  Link link = Link::sign();
  std::optional<Regularizer> regularizer;
  bool oracle = true;  // tune R to R(mu theta*) when true
  SolverSpec solver;
  int trials = 100;
  std::uint64_t seed = 1;
  double t = 0.0;
  double eta = 2.0;
  int redraws = 200;
  int directions = 64;
  std::string out = "out";

  void apply_defaults();
};

Link link_from_json(const nlohmann::json& j);
nlohmann::json link_to_json(const Link& link);

Regularizer regularizer_from_json(const nlohmann::json& j);
nlohmann::json regularizer_to_json(const Regularizer& reg);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Parses the file, reporting malformed JSON or unknown kinds with the
// offending field in the message.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sindex
