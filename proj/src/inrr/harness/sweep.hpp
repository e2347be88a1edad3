#pragma once

#include <string>
#include <vector>

#include "inrr/harness/config.hpp"
#include "inrr/harness/run.hpp"
#include "inrr/harness/trainer.hpp"
#include "inrr/ntk/kernel.hpp"
#include "inrr/ntk/theory.hpp"

namespace inrr::harness {

struct KernelInpainting {
  DenseMatrix prediction;
  double psnr_unobserved = 0.0;
  double condition_estimate = 0.0;
  bool ridge_applied = false;
};

/// Kernel regression from the observed pixels (centered grid coordinates)
/// with k(x, y) = h(exp(-delta^2 |x - y|^2 / 2)), the infinite-feature limit
/// of the Fourier-feature composed kernel.
KernelInpainting kernel_inpaint(const Problem& problem, double delta, const ntk::Profile& h);

/// h of a ReLU network of profile_layers x profile_width, fitted from its
/// empirical NTK.
ntk::KernelProfile sweep_profile(const ExperimentConfig& config);

struct SweepCell {
  double value = 0.0;
  double missing_rate = 0.0;
  double psnr_unobserved = 0.0;
  /// "ok" or the error message of a failed cell.
  std::string status = "ok";
};

/// Config of one omega0 cell: the base config with the random mask and
/// omega0 substituted.
ExperimentConfig sweep_cell_config(const ExperimentConfig& base, double value, double missing_rate);

/// PSNR grid over sweep.values x sweep.missing_rates. Writes sweep.csv
/// (and profile.csv for the delta sweep) into config.output. Failed cells
/// are recorded and the sweep continues.
RunReport ntk_sweep(const ExperimentConfig& config);
std::vector<SweepCell> sweep_cells(const ExperimentConfig& config);

}  // namespace inrr::harness
