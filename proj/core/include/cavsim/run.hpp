#pragma once

#include "cavsim/config.hpp"
#include "cavsim/output.hpp"

namespace cavsim {

enum class RunPipeline {
    Auto,          ///< sweep block -> Sweep; chain n_values -> ChainScaling; else Simulate
    Simulate,      ///< one protocol run (free decay, driven, steady decay, lindblad)
    Sweep,         ///< lifetime grid over the configured axes
    ChainScaling,  ///< per-N chain lifetimes plus linear fit
    Eigen,         ///< mode spectrum of the configured system
};

struct RunOptions {
    int threads = 0;      ///< sweep parallelism; 0 = hardware concurrency
    bool validate = false;  ///< run the independent cross-check and report the deviation
    RunPipeline pipeline = RunPipeline::Auto;
};

/// Build the LinearModel described by a (non-chain-scaling) config.
LinearModel build_model(const ExperimentConfig& config);

/// Execute the configured pipeline and collect tables plus metadata.
/// The metadata echoes the resolved config (round-trippable through
/// parse_config) and, for cable systems, the derived effective coupling.
ResultBundle run(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace cavsim
