#include "gaplab/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gaplab/neass.hpp"

namespace gaplab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_csv(const std::string& dir, const std::string& name, const std::string& header) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + dir + "/" + name);
  out << header << "\n";
  return out;
}

struct ModelBundle {
  Lattice lat;
  Interaction phi0;       // unperturbed model
  Interaction phi_pert;   // optional static perturbation J
  Matrix h0;              // assembled, including J
  SpectralData spec;
  GlobalState rho0;
};

ModelBundle prepare_model(const ExperimentConfig& cfg) {
  Lattice lat = build_lattice(cfg);
  Interaction phi0 = build_model(cfg, lat);
  Interaction pert = build_perturbation(cfg, lat);
  Matrix h = assemble(phi0, lat);
  if (!pert.empty()) h += assemble(pert, lat);
  SpectralData spec = SpectralData::diagonalize(h);
  GlobalState rho0 = pure_state(spec.evecs.col(0));
  return ModelBundle{std::move(lat), std::move(phi0), std::move(pert), std::move(h),
                     std::move(spec), std::move(rho0)};
}

Matrix build_v(const ExperimentConfig& cfg, const Lattice& lat) {
  if (cfg.v_sites.empty()) throw std::invalid_argument("run.v_sites required for this task");
  Matrix v = Matrix::Zero(lat.total_dim(), lat.total_dim());
  for (int s : cfg.v_sites) v += embed(lat, pauli(lat, s, cfg.v_axis));
  return v;
}

void write_manifest(const std::string& dir, const std::string& task, const ExperimentConfig& cfg,
                    const Json& results, double wall_seconds) {
  Json m;
  m["version"] = kToolVersion;
  m["task"] = task;
  m["config"] = cfg.raw;
  m["term_drop_threshold"] = kTermDropThreshold;
  m["wall_seconds"] = wall_seconds;
  m["results"] = results;
  std::ofstream out(dir + "/manifest.json", std::ios::trunc);
  out << m.dump(2) << "\n";
}

bool task_response_sweep(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  ModelBundle mb = prepare_model(cfg);
  Matrix v = build_v(cfg, mb.lat);
  Matrix b = embed(mb.lat, pauli(mb.lat, cfg.obs_site, cfg.obs_axis));
  WeightFunction wf = build_weight_from(cfg);
  SwitchingFunction f;
  ResponseTable table = response_sweep(mb.h0, v, mb.rho0, b, wf, cfg.order, cfg.eps_grid,
                                       cfg.eta_rule, cfg.t_eval, f, cfg.solver_tol, thread_count());

  std::string header = "eps,eta,t,sigma_measured";
  for (int k = 1; k <= cfg.order; ++k) header += ",partial_sum_order_" + std::to_string(k);
  header += ",residual_order_" + std::to_string(cfg.order);
  auto csv = open_csv(dir, "response.csv", header);
  for (const auto& row : table.rows) {
    csv << fmt(row.eps) << "," << fmt(row.eta) << "," << fmt(row.t) << ","
        << fmt(row.sigma_measured);
    for (double p : row.partial_sums) csv << "," << fmt(p);
    csv << "," << fmt(row.residual) << "\n";
  }
  auto traj = open_csv(dir, "trajectories.csv", "t,eps,eta,observable_id,value_re,value_im");
  for (const auto& row : table.rows) {
    traj << fmt(row.t) << "," << fmt(row.eps) << "," << fmt(row.eta) << ","
         << "s" << cfg.obs_site << "a" << cfg.obs_axis << ","
         << fmt(row.sigma_measured + table.b0) << "," << fmt(0.0) << "\n";
  }

  results["sigma"] = table.sigma;
  results["slopes"] = table.slopes;
  results["b0"] = table.b0;
  bool ok = true;
  for (std::size_t k = 0; k < cfg.slope_min.size() && k < table.slopes.size(); ++k) {
    bool pass = table.slopes[k] >= cfg.slope_min[k];
    std::cout << (pass ? "pass" : "FAIL") << ": residual slope order " << (k + 1) << " = "
              << table.slopes[k] << " (needs >= " << cfg.slope_min[k] << ")\n";
    ok = ok && pass;
  }
  return ok;
}

bool task_neass_check(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  ModelBundle mb = prepare_model(cfg);
  Matrix v = build_v(cfg, mb.lat);
  Matrix b = embed(mb.lat, pauli(mb.lat, cfg.obs_site, cfg.obs_axis));
  WeightFunction wf = build_weight_from(cfg);
  std::vector<double> tg = cfg.times;
  if (tg.empty())
    for (int i = 0; i <= 20; ++i) tg.push_back(0.25 * i);
  StationarityTable table =
      neass_stationarity(mb.h0, v, mb.rho0, b, wf, cfg.order, cfg.eps_grid, tg);

  auto csv = open_csv(dir, "stationarity.csv", "eps,t,deviation");
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (const auto& [t, d] : table.deviation_curves[i])
      csv << fmt(table.rows[i].eps) << "," << fmt(t) << "," << fmt(d) << "\n";

  results["slope"] = table.slope;
  Json devs = Json::array();
  for (const auto& r : table.rows) devs.push_back({{"eps", r.eps}, {"max_dev", r.max_deviation}});
  results["deviations"] = devs;
  bool ok = true;
  if (!cfg.slope_min.empty()) {
    ok = table.slope >= cfg.slope_min[0];
    std::cout << (ok ? "pass" : "FAIL") << ": stationarity slope = " << table.slope
              << " (needs >= " << cfg.slope_min[0] << ")\n";
  }
  return ok;
}

bool task_ldg_scan(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  ModelBundle mb = prepare_model(cfg);
  WeightFunction wf = build_weight_from(cfg);
  EquilibriumState eq = EquilibriumState::analyze(mb.spec, mb.rho0);
  SiteSet gap_region(cfg.gap_region);
  double fixed_p = 1.0;
  GapScanResult scan =
      ldg_scan(mb.lat, mb.spec, eq, wf, gap_region, cfg.include_two_site, fixed_p);

  auto csv = open_csv(dir, "ldg_scan.csv", "obs_id,support,diam,dist_to_complement,witness");
  for (const auto& row : scan.rows) {
    std::string sup;
    for (std::size_t i = 0; i < row.support.size(); ++i)
      sup += (i ? ";" : "") + std::to_string(row.support[i]);
    csv << row.obs_id << "," << sup << "," << row.diam << "," << row.dist_to_complement << ","
        << fmt(row.witness) << "\n";
  }

  Json meds = Json::object();
  for (auto& [d, v] : scan.median_by_dist) meds[std::to_string(d)] = v;
  results["medians"] = meds;
  results["fit_fixed_p"] = {{"log_c", scan.fit_fixed_p.log_c},
                            {"b", scan.fit_fixed_p.b},
                            {"p", scan.fit_fixed_p.p},
                            {"rms", scan.fit_fixed_p.residual_rms},
                            {"degenerate", scan.fit_fixed_p.degenerate}};
  results["fit_free_p"] = {{"log_c", scan.fit_free_p.log_c},
                           {"b", scan.fit_free_p.b},
                           {"p", scan.fit_free_p.p},
                           {"rms", scan.fit_free_p.residual_rms},
                           {"degenerate", scan.fit_free_p.degenerate}};

  if (scan.median_by_dist.size() < 2) {
    std::cout << "FAIL: fewer than two distinct distances in the scan\n";
    return false;
  }
  bool mono = true;
  double prev = -1;
  for (auto& [d, v] : scan.median_by_dist) {
    if (prev >= 0 && v > prev * 1.05 + 1e-15) mono = false;
    prev = v;
  }
  double first = scan.median_by_dist.begin()->second;
  double last = scan.median_by_dist.rbegin()->second;
  double drop = first / std::max(last, 1e-300);
  results["median_drop"] = drop;
  results["monotone"] = mono;
  bool ok = mono && drop >= cfg.drop_min;
  std::cout << (mono ? "pass" : "FAIL") << ": scan medians monotone non-increasing\n";
  std::cout << (drop >= cfg.drop_min ? "pass" : "FAIL") << ": median drop " << drop
            << " (needs >= " << cfg.drop_min << ")\n";
  return ok;
}

bool task_gdg_test(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  WeightFunction wf = build_weight_from(cfg);
  Rng rng(cfg.seed);
  const double g = cfg.g;
  const int dim = cfg.dim;
  auto csv = open_csv(dir, "gdg.csv",
                      "instance,kind,worst_random,targeted,cross_gap_distance,what_at_distance");
  bool ok = true;
  int instances = std::max(1, cfg.trials / 40);
  int pairs = cfg.trials / instances;
  for (int inst = 0; inst < instances; ++inst) {
    // random Hermitian with spectrum split across a gap of at least 1.1 g
    RealVector evals(dim);
    int k = dim / 2;
    for (int i = 0; i < k; ++i) evals(i) = -0.55 * g - rng.uniform();
    for (int i = k; i < dim; ++i) evals(i) = 0.55 * g + rng.uniform();
    Matrix u = random_unitary(dim, rng);
    Matrix h = u * evals.asDiagonal() * u.adjoint();
    h = 0.5 * (h + h.adjoint());
    SpectralData spec = SpectralData::diagonalize(h);
    std::vector<int> sigma1;
    for (int i = 0; i < dim; ++i)
      if (spec.evals(i) < 0) sigma1.push_back(i);
    GdgReport rep = gdg_check(spec, sigma1, wf, pairs, rng);
    csv << inst << ",gapped," << fmt(rep.worst_random) << "," << fmt(rep.targeted) << ","
        << fmt(rep.cross_gap_distance) << "," << fmt(rep.what_at_distance) << "\n";
    if (!rep.holds) {
      std::cout << "FAIL: gapped instance " << inst << " witness " << rep.worst_random << "\n";
      ok = false;
    }
  }
  // gap-violating instance: one cross pair at distance delta = g/2
  {
    RealVector evals(dim);
    int k = dim / 2;
    for (int i = 0; i < k; ++i) evals(i) = -0.55 * g - rng.uniform();
    for (int i = k; i < dim; ++i) evals(i) = 0.55 * g + rng.uniform();
    evals(k) = evals(k - 1) + 0.5 * g;  // the violating pair
    std::sort(evals.data(), evals.data() + dim);
    Matrix u = random_unitary(dim, rng);
    Matrix h = u * evals.asDiagonal() * u.adjoint();
    h = 0.5 * (h + h.adjoint());
    SpectralData spec = SpectralData::diagonalize(h);
    std::vector<int> sigma1;
    for (int i = 0; i < dim; ++i)
      if (spec.evals(i) < evals(k) - 0.25 * g) sigma1.push_back(i);
    GdgReport rep = gdg_check(spec, sigma1, wf, pairs, rng);
    csv << instances << ",violated," << fmt(rep.worst_random) << "," << fmt(rep.targeted) << ","
        << fmt(rep.cross_gap_distance) << "," << fmt(rep.what_at_distance) << "\n";
    double need = 1e-2 * rep.what_at_distance;
    bool pass = rep.targeted >= need;
    std::cout << (pass ? "pass" : "FAIL") << ": violated-gap targeted witness " << rep.targeted
              << " (needs >= " << need << ")\n";
    ok = ok && pass;
    results["violated_targeted"] = rep.targeted;
    results["violated_what"] = rep.what_at_distance;
  }
  std::cout << (ok ? "pass" : "FAIL") << ": gapped instances all hold\n";
  return ok;
}

bool task_gap_implications(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  Rng rng(cfg.seed);
  ImplicationReport rep = implication_suite(rng);
  auto csv = open_csv(dir, "implications.csv", "name,checked,passed,detail");
  Json rows = Json::array();
  for (const auto& r : rep.results) {
    csv << "\"" << r.name << "\"," << (r.checked ? 1 : 0) << "," << (r.passed ? 1 : 0) << ",\""
        << r.detail << "\"\n";
    rows.push_back({{"name", r.name}, {"checked", r.checked}, {"passed", r.passed},
                    {"detail", r.detail}});
    std::cout << (r.passed ? "pass" : "FAIL") << ": " << r.name << "\n";
  }
  results["implications"] = rows;
  return rep.all_passed();
}

bool task_lr_profile(const ExperimentConfig& cfg, const std::string& dir, Json& results) {
  Lattice lat = build_lattice(cfg);
  Interaction phi = build_model(cfg, lat);
  LocalOperator a = pauli(lat, cfg.obs_site, cfg.obs_axis);
  std::vector<int> probes = cfg.probe_sites;
  if (probes.empty())
    for (int i = 0; i < lat.num_sites(); ++i)
      if (i != cfg.obs_site) probes.push_back(i);
  std::vector<double> times = cfg.times;
  if (times.empty()) times = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  DecayProfile decay{cfg.lr_b, cfg.lr_p};
  LrProfile prof = lr_profile(lat, phi, a, probes, times, decay);

  auto csv = open_csv(dir, "lr_profile.csv", "site,axis,time,dist,comm_norm,envelope");
  for (const auto& r : prof.rows)
    csv << r.site << "," << r.axis << "," << fmt(r.time) << "," << r.dist << ","
        << fmt(r.comm_norm) << "," << fmt(r.envelope) << "\n";
  results["fitted_velocity"] = prof.fitted_velocity;
  results["fitted_prefactor"] = prof.fitted_prefactor;
  results["dominated"] = prof.dominated;
  std::cout << (prof.dominated ? "pass" : "FAIL") << ": LR envelope dominates all samples (v = "
            << prof.fitted_velocity << ")\n";
  return prof.dominated;
}

}  // namespace

bool run_experiment(const ExperimentConfig& cfg, const std::string& task,
                    const std::string& out_dir) {
  auto t0 = std::chrono::steady_clock::now();
  Json results;
  bool ok = false;
  if (task == "response-sweep")
    ok = task_response_sweep(cfg, out_dir, results);
  else if (task == "neass-check")
    ok = task_neass_check(cfg, out_dir, results);
  else if (task == "ldg-scan")
    ok = task_ldg_scan(cfg, out_dir, results);
  else if (task == "gdg-test")
    ok = task_gdg_test(cfg, out_dir, results);
  else if (task == "gap-implications")
    ok = task_gap_implications(cfg, out_dir, results);
  else if (task == "lr-profile")
    ok = task_lr_profile(cfg, out_dir, results);
  else
    throw std::invalid_argument("unknown task: " + task);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  results["all_passed"] = ok;
  write_manifest(out_dir, task, cfg, results, wall);
  return ok;
}

}  // namespace gaplab
