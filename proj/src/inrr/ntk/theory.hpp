#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "inrr/models/network.hpp"

namespace inrr::ntk {

/// Piecewise-linear scalar map h(t) tabulated on ascending nodes; clamps to
/// the end values outside the table.
class KernelProfile {
 public:
  KernelProfile(std::vector<double> nodes, std::vector<double> values);

  double operator()(double t) const;
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// Fits h for a network whose unit-norm inputs only interact through their
/// inner product t: the empirical NTK between (1, 0) and (t, sqrt(1 - t^2))
/// on `nodes` equispaced t in [-1, 1]. `spec` must take 2-D input.
KernelProfile fit_profile(const models::NetworkSpec& spec, std::size_t nodes, std::size_t samples,
                          std::uint64_t seed);

struct ConvergencePoint {
  std::size_t features = 0;
  double mean = 0.0;              // Monte Carlo mean of the inner feature over trials
  double standard_error = 0.0;
  double rms_deviation_half = 0.0;  // vs exp(-delta^2 |dx|^2 / 2)
  double rms_deviation_full = 0.0;  // vs exp(-delta^2 |dx|^2)
};

struct ConvergenceStudy {
  double delta = 0.0;
  double distance = 0.0;
  double limit_half = 0.0;
  double limit_full = 0.0;
  std::vector<ConvergencePoint> points;
  /// True when the largest-D mean lies closer to the half-exponent limit.
  bool half_exponent_matches = true;
  /// Least-squares slope of log(rms deviation) against log(D), using the
  /// matching convention.
  double slope = 0.0;
};

/// Draws `trials` independent B (D x 2, entries N(0, delta^2)) for each D
/// and compares the inner feature at offset (distance, 0) with both limits.
ConvergenceStudy feature_convergence(double delta, double distance, const std::vector<std::size_t>& features,
                                      std::size_t trials, std::uint64_t seed);

/// Slope of the least-squares line through (x, y).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace inrr::ntk
