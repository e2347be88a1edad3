#pragma once

#include <string>

#include "inrr/harness/config.hpp"
#include "inrr/harness/run.hpp"

namespace inrr::harness {

/// Config used for one family of the study (dmf1, dmf3, relu, siren).
ExperimentConfig bias_family_config(const ExperimentConfig& base, const std::string& family);

/// Trains each family without a regularizer on the configured data and
/// writes <family>_trajectory.csv (every log_every steps, starting at
/// log_every) plus <family>_step<N>.pgm snapshots at step 0 and the heatmap
/// steps. Metrics per family: init_* (step 0), first_* (first cadence
/// step) and final_* for rank and unobserved PSNR.
RunReport implicit_bias_study(const ExperimentConfig& config);

}  // namespace inrr::harness
