#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "inrr/harness/config.hpp"
#include "inrr/harness/trainer.hpp"

namespace inrr::harness {

struct RunReport {
  std::string name;
  /// Final-step metrics keyed by name (observed_mse, unobserved_mse,
  /// psnr_unobserved, psnr_all, penalty, effective_rank, steps, ...).
  std::map<std::string, double> metrics;
  /// Written files keyed by role.
  std::map<std::string, std::filesystem::path> artifacts;
  TrajectoryLog log;
};

/// Trains per the config and writes recovered.pgm, residual.pgm,
/// observed.pgm, mask.pgm, trajectory.csv, timing.csv, Laplacian heatmaps
/// (INRR/AIR) and manifest.txt into config.output. On a non-finite loss
/// writes checkpoint.pgm and rethrows the NumericError.
RunReport run_experiment(const ExperimentConfig& config);

/// Dispatches on config.task (inpaint/denoise/fit, ntk_sweep, implicit_bias).
RunReport run_task(const ExperimentConfig& config);

/// Deterministic CSV: step, observed_mse, unobserved_mse, psnr_unobserved,
/// penalty, effective_rank.
std::string trajectory_csv(const TrajectoryLog& log);
/// step, wall_seconds.
std::string timing_csv(const TrajectoryLog& log);

/// SHA-1 of "blob <size>\0<content>" in hex, as git computes object ids.
std::string git_blob_hash(std::string_view content);

/// |clamp(prediction) - clean| per pixel.
DenseMatrix residual_image(const DenseMatrix& prediction, const DenseMatrix& clean);
DenseMatrix clamp_unit(const DenseMatrix& m);

}  // namespace inrr::harness
