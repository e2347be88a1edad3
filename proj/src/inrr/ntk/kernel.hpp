#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "inrr/models/network.hpp"
#include "inrr/numerics/linalg.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::ntk {

/// k(x_i, x_j) for two d-vectors.
using KernelFn = std::function<double(std::span<const double>, std::span<const double>)>;
/// Scalar map h applied to the mean cosine feature.
using Profile = std::function<double(double)>;

struct EmpiricalKernel {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};
struct ComposedKernel {
  DenseMatrix frequencies;  // B, D x d
};
struct GaussianLimitKernel {
  double delta = 0.0;
  bool half_exponent = true;
};
struct ClosedFormKernel {
  double h0 = 0.0;
  double h1 = 1.0;
};
using Provenance = std::variant<EmpiricalKernel, ComposedKernel, GaussianLimitKernel, ClosedFormKernel>;

/// Gram matrix of a kernel over a point set (rows of `points`).
struct KernelMatrix {
  DenseMatrix points;
  DenseMatrix k;
  /// Monte Carlo standard errors; empty unless empirical.
  DenseMatrix standard_errors;
  Provenance provenance;
  /// Evaluates k against new points; empty for the empirical kernel.
  KernelFn kernel;

  std::size_t size() const noexcept { return k.rows(); }
  /// k(x_i, query) for every training point.
  std::vector<double> row(std::span<const double> query) const;
};

/// Monte Carlo mean over `samples` initializations of
/// <d phi(x_i)/d theta, d phi(x_j)/d theta>. Sample s uses the network
/// seed derive_seed(seed, s). Throws ContractError for samples == 0 or a
/// network with more than one output.
KernelMatrix empirical_ntk(const models::NetworkSpec& spec, const DenseMatrix& points,
                           std::size_t samples, std::uint64_t seed);

/// (1/D) sum_k cos(b_k . delta).
double mean_cosine_feature(const DenseMatrix& frequencies, std::span<const double> delta);

/// h of the mean cosine feature of xi - xj. Throws DimensionError when
/// B.cols != d.
double composed_kernel(const DenseMatrix& frequencies, const Profile& h, std::span<const double> xi,
                       std::span<const double> xj);

/// exp(-c delta^2 |dx|^2) with c = 1/2 (characteristic function) or c = 1.
double gaussian_limit(double delta, double squared_distance, bool half_exponent = true);

KernelMatrix closed_form_kernel(const DenseMatrix& points, double h0, double h1);
KernelMatrix composed_kernel_matrix(const DenseMatrix& points, DenseMatrix frequencies, Profile h);
KernelMatrix gaussian_limit_kernel(const DenseMatrix& points, double delta, Profile h,
                                   bool half_exponent = true);

/// Solves K alpha = z once; predictions are kernel rows dotted with alpha.
class KernelRegressor {
 public:
  KernelRegressor(const DenseMatrix& k, std::span<const double> z, const SolveOptions& options = {});

  double predict(std::span<const double> kernel_row) const;
  const std::vector<double>& weights() const noexcept { return alpha_; }
  double condition_estimate() const noexcept { return condition_; }
  bool ridge_applied() const noexcept { return ridge_; }

 private:
  std::vector<double> alpha_;
  double condition_ = 0.0;
  bool ridge_ = false;
};

/// sum_i (K^-1 z)_i k(x_i, query). Throws ContractError when the kernel
/// matrix has no kernel function (empirical).
double kernel_regression(const KernelMatrix& km, std::span<const double> z, std::span<const double> query,
                         const SolveOptions& options = {});

/// Prediction of kernel regression with K = h0 11^T + (h1 - h0) I:
/// z_l for a training index l, else h0 sum(z) / ((N-1) h0 + h1).
/// Throws ContractError when h1 == h0 or h1 == 0.
double corollary1_prediction(double h0, double h1, std::span<const double> z,
                             std::optional<std::size_t> on_training = std::nullopt);

}  // namespace inrr::ntk
