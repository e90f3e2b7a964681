#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "gaplab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gaplab: exact-diagonalization laboratory for locally gapped spin systems"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 0;

  const std::vector<std::string> tasks = {"response-sweep", "neass-check", "ldg-scan",
                                          "gdg-test", "gap-implications", "lr-profile"};
  for (const auto& task : tasks) {
    CLI::App* sub = app.add_subcommand(task);
    sub->add_option("--config", config_path, "experiment config file (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker thread override");
  }

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) {
    setenv("GAPLAB_THREADS", std::to_string(threads).c_str(), 1);
  }

  try {
    gaplab::ExperimentConfig cfg = gaplab::load_config(config_path);
    std::string task = app.get_subcommands().front()->get_name();
    bool ok = gaplab::run_experiment(cfg, task, out_dir);
    std::cout << (ok ? "all assertions passed" : "assertions failed") << "\n";
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
