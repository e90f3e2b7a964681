#pragma once

#include <json.hpp>
#include <optional>

#include "gaplab/models.hpp"
#include "gaplab/weight.hpp"

namespace gaplab {

using Json = nlohmann::json;

/// Parsed and validated experiment description. Unknown keys anywhere in the
/// document are rejected with their path, so silently ignored physics
/// parameters cannot happen.
struct ExperimentConfig {
  // lattice
  std::string lattice_kind = "chain";
  int length = 0;
  int rows = 0, cols = 0;
  int num_sites = 0;
  int site_dim = 2;
  std::vector<std::pair<int, int>> edges;

  // model
  std::string model_kind = "ising";
  std::vector<double> lambda;      // ising couplings by distance
  bool allow_strong = false;
  double lambda1 = 0.0, lambda3 = 0.0;  // xxz

  // perturbation (optional)
  bool has_perturbation = false;
  std::vector<int> pert_region;
  std::string pert_kind = "random-two-site";
  double pert_strength = 0.0;
  std::string pert_mode = "strict";
  std::uint64_t pert_seed = 1;

  // gap block
  std::vector<int> gap_region;
  double g = 1.0;
  int n_factors = 4096;
  int quad_panels = 64;
  int quad_nodes = 64;
  double t_max = 0.0;  // 0: default rule

  // run block
  int order = 1;
  std::vector<double> eps_grid;
  std::string eta_rule = "sqrt";
  double t_eval = 0.0;
  double solver_tol = 1e-9;
  std::uint64_t seed = 1;
  int trials = 100;
  int dim = 12;
  std::vector<double> times;
  std::vector<int> v_sites;
  int v_axis = 1;
  int obs_site = 0;
  int obs_axis = 1;
  std::vector<int> probe_sites;
  double lr_b = 1.0, lr_p = 1.0;
  std::vector<double> slope_min;
  double drop_min = 10.0;
  bool include_two_site = false;

  // output
  bool debug_matrices = false;

  Json raw;  // the resolved document, echoed into the manifest
};

ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);

Lattice build_lattice(const ExperimentConfig& cfg);
/// Assembled unperturbed Hamiltonian terms for the configured model.
Interaction build_model(const ExperimentConfig& cfg, const Lattice& lat);
Interaction build_perturbation(const ExperimentConfig& cfg, const Lattice& lat);
WeightFunction build_weight_from(const ExperimentConfig& cfg);

int thread_count();  // GAPLAB_THREADS override, hardware default

}  // namespace gaplab
