#include "gaplab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

namespace gaplab {

namespace {

void require_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown field '" + path + it.key() + "'");
  }
}

template <typename T>
T get_or(const Json& obj, const std::string& key, T fallback) {
  if (obj.contains(key)) return obj.at(key).get<T>();
  return fallback;
}

}  // namespace

ExperimentConfig parse_config(const Json& doc) {
  ExperimentConfig cfg;
  cfg.raw = doc;
  require_keys(doc, "", {"lattice", "model", "perturbation", "gap", "run", "output"});

  if (!doc.contains("lattice")) throw std::invalid_argument("config: missing 'lattice' block");
  const Json& lat = doc.at("lattice");
  require_keys(lat, "lattice.", {"kind", "length", "rows", "cols", "num_sites", "edges", "site_dim"});
  cfg.lattice_kind = get_or<std::string>(lat, "kind", "chain");
  cfg.length = get_or(lat, "length", 0);
  cfg.rows = get_or(lat, "rows", 0);
  cfg.cols = get_or(lat, "cols", 0);
  cfg.num_sites = get_or(lat, "num_sites", 0);
  cfg.site_dim = get_or(lat, "site_dim", 2);
  if (lat.contains("edges"))
    for (const auto& e : lat.at("edges")) cfg.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());

  if (!doc.contains("model")) throw std::invalid_argument("config: missing 'model' block");
  const Json& model = doc.at("model");
  require_keys(model, "model.", {"kind", "lambda", "allow_strong", "lambda1", "lambda3"});
  cfg.model_kind = get_or<std::string>(model, "kind", "ising");
  if (model.contains("lambda")) cfg.lambda = model.at("lambda").get<std::vector<double>>();
  cfg.allow_strong = get_or(model, "allow_strong", false);
  cfg.lambda1 = get_or(model, "lambda1", 0.0);
  cfg.lambda3 = get_or(model, "lambda3", 0.0);

  if (doc.contains("perturbation")) {
    cfg.has_perturbation = true;
    const Json& p = doc.at("perturbation");
    require_keys(p, "perturbation.", {"region", "kind", "strength", "mode", "seed"});
    cfg.pert_region = p.at("region").get<std::vector<int>>();
    cfg.pert_kind = get_or<std::string>(p, "kind", "random-two-site");
    cfg.pert_strength = get_or(p, "strength", 0.0);
    cfg.pert_mode = get_or<std::string>(p, "mode", "strict");
    cfg.pert_seed = get_or<std::uint64_t>(p, "seed", 1);
  }

  if (doc.contains("gap")) {
    const Json& gp = doc.at("gap");
    require_keys(gp, "gap.", {"region", "g", "n_factors", "quad_panels", "quad_nodes", "t_max"});
    if (gp.contains("region")) cfg.gap_region = gp.at("region").get<std::vector<int>>();
    cfg.g = get_or(gp, "g", 1.0);
    cfg.n_factors = get_or(gp, "n_factors", 4096);
    cfg.quad_panels = get_or(gp, "quad_panels", 64);
    cfg.quad_nodes = get_or(gp, "quad_nodes", 64);
    cfg.t_max = get_or(gp, "t_max", 0.0);
  }

  if (doc.contains("run")) {
    const Json& run = doc.at("run");
    require_keys(run, "run.",
                 {"order", "eps_grid", "eta_rule", "t_eval", "solver_tol", "seed", "trials", "dim",
                  "times", "v_sites", "v_axis", "observable", "probe_sites", "lr_b", "lr_p",
                  "slope_min", "drop_min", "include_two_site"});
    cfg.order = get_or(run, "order", 1);
    if (run.contains("eps_grid")) cfg.eps_grid = run.at("eps_grid").get<std::vector<double>>();
    cfg.eta_rule = get_or<std::string>(run, "eta_rule", "sqrt");
    cfg.t_eval = get_or(run, "t_eval", 0.0);
    cfg.solver_tol = get_or(run, "solver_tol", 1e-9);
    cfg.seed = get_or<std::uint64_t>(run, "seed", 1);
    cfg.trials = get_or(run, "trials", 100);
    cfg.dim = get_or(run, "dim", 12);
    if (run.contains("times")) cfg.times = run.at("times").get<std::vector<double>>();
    if (run.contains("v_sites")) cfg.v_sites = run.at("v_sites").get<std::vector<int>>();
    cfg.v_axis = get_or(run, "v_axis", 1);
    if (run.contains("observable")) {
      const Json& obs = run.at("observable");
      require_keys(obs, "run.observable.", {"site", "axis"});
      cfg.obs_site = get_or(obs, "site", 0);
      cfg.obs_axis = get_or(obs, "axis", 1);
    }
    if (run.contains("probe_sites")) cfg.probe_sites = run.at("probe_sites").get<std::vector<int>>();
    cfg.lr_b = get_or(run, "lr_b", 1.0);
    cfg.lr_p = get_or(run, "lr_p", 1.0);
    if (run.contains("slope_min")) cfg.slope_min = run.at("slope_min").get<std::vector<double>>();
    cfg.drop_min = get_or(run, "drop_min", 10.0);
    cfg.include_two_site = get_or(run, "include_two_site", false);
  }

  if (doc.contains("output")) {
    const Json& out = doc.at("output");
    require_keys(out, "output.", {"debug_matrices"});
    cfg.debug_matrices = get_or(out, "debug_matrices", false);
  }

  for (double e : cfg.eps_grid)
    if (e <= 0.0 || e >= 1.0) throw std::invalid_argument("config: eps values must lie in (0,1)");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  Json doc = Json::parse(in);
  return parse_config(doc);
}

Lattice build_lattice(const ExperimentConfig& cfg) {
  if (cfg.lattice_kind == "chain") return build_chain(cfg.length, cfg.site_dim);
  if (cfg.lattice_kind == "ring") return build_ring(cfg.length, cfg.site_dim);
  if (cfg.lattice_kind == "grid") return build_grid(cfg.rows, cfg.cols, cfg.site_dim);
  if (cfg.lattice_kind == "explicit") return Lattice(cfg.num_sites, cfg.edges, cfg.site_dim);
  throw std::invalid_argument("config: unknown lattice kind '" + cfg.lattice_kind + "'");
}

Interaction build_model(const ExperimentConfig& cfg, const Lattice& lat) {
  const long long cap = 1LL << 14;
  if (lat.total_dim() > cap)
    throw std::invalid_argument("config: total Hilbert dimension exceeds the 2^14 desk-scale cap");
  if (cfg.model_kind == "ising") return ising_model(lat, cfg.lambda, cfg.allow_strong).phi;
  if (cfg.model_kind == "xxz") return xxz_model(lat, cfg.lambda1, cfg.lambda3);
  throw std::invalid_argument("config: unknown model kind '" + cfg.model_kind + "'");
}

Interaction build_perturbation(const ExperimentConfig& cfg, const Lattice& lat) {
  if (!cfg.has_perturbation) return Interaction{};
  PerturbationKind kind;
  if (cfg.pert_kind == "random-two-site")
    kind = PerturbationKind::RandomTwoSite;
  else if (cfg.pert_kind == "random-single-site")
    kind = PerturbationKind::RandomSingleSite;
  else if (cfg.pert_kind == "field-reversal")
    kind = PerturbationKind::FieldReversal;
  else
    throw std::invalid_argument("config: unknown perturbation kind '" + cfg.pert_kind + "'");
  LocalizationMode mode = cfg.pert_mode == "strong" ? LocalizationMode::Strong
                                                    : LocalizationMode::Strict;
  return localized_perturbation(lat, SiteSet(cfg.pert_region), kind, cfg.pert_strength, mode,
                                cfg.pert_seed);
}

WeightFunction build_weight_from(const ExperimentConfig& cfg) {
  QuadratureSpec quad;
  quad.t_max = cfg.t_max;
  quad.panels = cfg.quad_panels;
  quad.nodes = cfg.quad_nodes;
  return WeightFunction::build(cfg.g, cfg.n_factors, quad);
}

int thread_count() {
  if (const char* env = std::getenv("GAPLAB_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace gaplab
