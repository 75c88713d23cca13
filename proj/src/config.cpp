#include "sindex/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "sindex/errors.hpp"

namespace sindex {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

Link link_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("link: expected an object with a 'kind' tag");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return Link::linear();
  if (kind == "sign") return Link::sign();
  if (kind == "cubic") return Link::cubic();
  if (kind == "quantize") {
    if (!j.contains("levels") || !j.contains("clip"))
      throw ConfigError("link: quantize requires 'levels' and 'clip'");
    return Link::quantize(j.at("levels").get<int>(), j.at("clip").get<double>());
  }
  if (kind == "tanh-scale") {
    if (!j.contains("c")) throw ConfigError("link: tanh-scale requires 'c'");
    return Link::tanh_scale(j.at("c").get<double>());
  }
  throw ConfigError("link: unknown kind '" + kind + "'");
}

json link_to_json(const Link& link) {
  json j;
  j["kind"] = link.name();
  switch (link.kind) {
    case LinkKind::quantize:
      j["levels"] = link.levels;
      j["clip"] = link.clip;
      break;
    case LinkKind::tanh_scale:
      j["c"] = link.scale;
      break;
    default:
      break;
  }
  return j;
}

Regularizer regularizer_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("regularizer: expected an object with a 'kind' tag");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "l1-ball") return Regularizer::l1(get_or(j, "R", 0.0));
  if (kind == "l2-ball") return Regularizer::l2(get_or(j, "R", 0.0));
  if (kind == "sparsity") {
    if (!j.contains("s")) throw ConfigError("regularizer: sparsity requires 's'");
    return Regularizer::sparse(j.at("s").get<int>());
  }
  throw ConfigError("regularizer: unknown kind '" + kind + "'");
}

json regularizer_to_json(const Regularizer& reg) {
  json j;
  j["kind"] = reg.name();
  if (reg.kind == RegKind::sparsity)
    j["s"] = reg.sparsity;
  else
    j["R"] = reg.radius;
  return j;
}

void ExperimentConfig::apply_defaults() {
  if (experiment == "onebit-vs-linear") {
    if (s == 0) s = p / 50;
    if (n == 0) n = p / 2;
  } else if (experiment == "psgd-scaling") {
    if (p_list.empty()) p_list = {50, 100, 200};
  } else {
    if (s == 0) s = std::max(1, p / 50);
    if (n == 0) n = p / 2;
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.experiment = get_or<std::string>(j, "experiment", "solve");
  cfg.p = get_or(j, "p", 500);
  cfg.n = get_or(j, "n", 0);
  cfg.s = get_or(j, "s", 0);
  cfg.p_list = get_or(j, "p_list", std::vector<int>{});
  if (j.contains("link")) cfg.link = link_from_json(j.at("link"));
  if (j.contains("regularizer"))
    cfg.regularizer = regularizer_from_json(j.at("regularizer"));
  cfg.oracle = get_or(j, "oracle", true);
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    cfg.solver.kind = get_or<std::string>(s, "kind", "pgd");
    if (cfg.solver.kind != "pgd" && cfg.solver.kind != "psgd" &&
        cfg.solver.kind != "proxgd" && cfg.solver.kind != "proxgd-resampled")
      throw ConfigError("solver: unknown kind '" + cfg.solver.kind + "'");
    cfg.solver.max_iters = get_or(s, "max_iters", 0);
    cfg.solver.step_size = get_or(s, "step_size", 0.0);
    cfg.solver.stop_tol = get_or(s, "stop_tol", 0.0);
    cfg.solver.trials = get_or(s, "trials", 1);
    cfg.solver.record_every = get_or(s, "record_every", 1);
    cfg.solver.lambda0 = get_or(s, "lambda0", 0.0);
    cfg.solver.rho = get_or(s, "rho", 0.95);
    cfg.solver.lambda_min = get_or(s, "lambda_min", 0.0);
  }
  cfg.trials = get_or(j, "trials", 100);
  cfg.seed = get_or<std::uint64_t>(j, "seed", 1);
  cfg.t = get_or(j, "t", 0.0);
  cfg.eta = get_or(j, "eta", 2.0);
  cfg.redraws = get_or(j, "redraws", 200);
  cfg.directions = get_or(j, "directions", 64);
  cfg.out = get_or<std::string>(j, "out", "out");
  cfg.apply_defaults();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  j["s"] = cfg.s;
  if (!cfg.p_list.empty()) j["p_list"] = cfg.p_list;
  j["link"] = link_to_json(cfg.link);
  if (cfg.regularizer) j["regularizer"] = regularizer_to_json(*cfg.regularizer);
  j["oracle"] = cfg.oracle;
  j["solver"] = {{"kind", cfg.solver.kind},
                 {"max_iters", cfg.solver.max_iters},
                 {"step_size", cfg.solver.step_size},
                 {"stop_tol", cfg.solver.stop_tol},
                 {"trials", cfg.solver.trials},
                 {"record_every", cfg.solver.record_every},
                 {"lambda0", cfg.solver.lambda0},
                 {"rho", cfg.solver.rho},
                 {"lambda_min", cfg.solver.lambda_min}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["t"] = cfg.t;
  j["eta"] = cfg.eta;
  j["redraws"] = cfg.redraws;
  j["directions"] = cfg.directions;
  j["out"] = cfg.out;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace sindex
