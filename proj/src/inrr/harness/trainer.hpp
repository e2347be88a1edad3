#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "inrr/harness/config.hpp"
#include "inrr/numerics/matrix.hpp"
#include "inrr/regularizers/laplacian.hpp"
#include "inrr/tasks/image.hpp"

namespace inrr::harness {

/// One logged step. Metrics describe the state after `step` updates.
struct TrajectoryRow {
  std::size_t step = 0;
  double observed_mse = 0.0;
  double unobserved_mse = 0.0;
  double psnr_unobserved = 0.0;
  double penalty = 0.0;
  /// 0 for an exactly zero prediction.
  double effective_rank = 0.0;
  double wall_seconds = 0.0;
};
using TrajectoryLog = std::vector<TrajectoryRow>;

/// Training data of an image task.
struct Problem {
  std::string name;
  DenseMatrix clean;
  /// What the model is fitted to on observed pixels (clean or noisy).
  DenseMatrix target;
  tasks::Mask observed;
  /// Pixels scored as "unobserved": the missing set, or every pixel when
  /// nothing is missing.
  tasks::Mask evaluated;
};

/// Loads or synthesizes the image, draws the mask and the noise.
DenseMatrix load_source_image(const ExperimentConfig& config);
Problem build_problem(const ExperimentConfig& config);

struct TrainingHooks {
  /// Called with the row and the prediction of every logged step.
  std::function<void(const TrajectoryRow&, const DenseMatrix&)> on_log;
  /// Called at configured heatmap steps with the current Laplacians
  /// (INRR/AIR only).
  std::function<void(std::size_t step, const DenseMatrix& rows, const DenseMatrix& cols)> on_laplacian;
  /// Called with the prediction at each listed step.
  std::vector<std::size_t> snapshot_steps;
  std::function<void(std::size_t step, const DenseMatrix&)> on_snapshot;
};

struct TrainingResult {
  DenseMatrix prediction;
  TrajectoryLog log;
};

/// Minimizes sum over observed pixels of (X - Z)^2 plus the configured
/// penalty with one Adam update per step on every trainable group. Logs
/// step 0, every log_every steps and the last step. Throws NumericError on
/// a non-finite loss; `last_good` then holds the last finite prediction.
TrainingResult train(const ExperimentConfig& config, const Problem& problem, const TrainingHooks& hooks = {},
                     DenseMatrix* last_good = nullptr);

/// Effective rank with 0 for the zero matrix.
double effective_rank_or_zero(const DenseMatrix& m);

}  // namespace inrr::harness
