#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "inrr/numerics/matrix.hpp"

namespace inrr {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment accumulators are created on the first
/// step and must keep their shapes afterwards.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  /// Updates `params` in place. Throws DimensionError when params and grads
  /// disagree in count or shape, or differ from earlier steps.
  void step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads);

  std::int64_t step_count() const noexcept { return step_; }
  const AdamOptions& options() const noexcept { return options_; }
  std::span<const DenseMatrix> first_moments() const noexcept { return first_; }
  std::span<const DenseMatrix> second_moments() const noexcept { return second_; }

 private:
  AdamOptions options_;
  std::int64_t step_ = 0;
  std::vector<DenseMatrix> first_;
  std::vector<DenseMatrix> second_;
};

}  // namespace inrr
