// Experiment orchestration: builds the configured model, runs the invariant
// suite, assembles operators per (amplitude, u) cell, executes the analyses a
// subcommand selects, and persists a deterministic report plus CSV spectra in
// a directory content-addressed by the config hash.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nchodge/config.hpp"

namespace nchodge {

struct RunOutcome {
  bool invariants_pass = true;
  std::string first_failure;  // name of the first breached hard invariant
  std::string run_dir;        // directory holding report.json and artifacts
  nlohmann::json report;
};

// validate | spectrum | hodge | euler | heat | summability | twisted | all
const std::vector<std::string>& known_subcommands();

RunOutcome run_pipeline(const RunConfig& cfg, const std::string& subcommand,
                        const std::string& out_override = "");

}  // namespace nchodge
