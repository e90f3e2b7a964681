#pragma once

#include "gaplab/config.hpp"
#include "gaplab/gapcond.hpp"

namespace gaplab {

inline constexpr const char* kToolVersion = "gaplab 0.1.0";

/// Runs one named task ("response-sweep", "neass-check", "ldg-scan",
/// "gdg-test", "gap-implications", "lr-profile"), writes CSVs and a JSON
/// manifest into out_dir, and returns true when every requested assertion
/// passed. Partial results are flushed before assertion failures surface.
bool run_experiment(const ExperimentConfig& cfg, const std::string& task,
                    const std::string& out_dir);

}  // namespace gaplab
