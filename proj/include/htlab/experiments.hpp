#pragma once

#include "htlab/config.hpp"

namespace htlab::cli {

// Runs one experiment, writing CSV artifacts and a manifest into
// cfg.output_dir. Returns the process exit status: 0 on success, 2 when a
// validation experiment found failures. Configuration problems (unknown
// model, payoff, missing parameters) throw ConfigError, which the CLI maps
// to exit status 1.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace htlab::cli
