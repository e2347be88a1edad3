#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inrr/numerics/autodiff.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::models {

enum class Activation { sine, relu, linear };

Activation parse_activation(std::string_view name);
std::string to_string(Activation a);

/// Random Fourier feature lifting x -> (1/sqrt(D)) [cos(Bx), sin(Bx)].
struct FeatureMap {
  std::size_t frequencies = 256;  // D
  double scale = 10.0;            // standard deviation of the entries of B
  std::uint64_t seed = 0;
};

/// Fully connected coordinate network. Layer l computes
/// x_l = act(W_l x_{l-1} + b_l); the last layer is affine. Sine layers
/// compute sin(omega0 * (W x + b)).
struct NetworkSpec {
  std::size_t input_dim = 2;
  std::size_t output_dim = 1;
  std::vector<std::size_t> hidden;
  Activation activation = Activation::sine;
  double omega0 = 30.0;
  std::optional<FeatureMap> feature_map;
  bool bias = true;

  /// Throws ContractError on zero widths, non-positive omega0 or a feature
  /// map with zero frequencies / negative scale.
  void validate() const;
  /// Width seen by the first affine layer (2D with a feature map, else d).
  std::size_t first_layer_width() const noexcept;
  std::size_t layer_count() const noexcept { return hidden.size() + 1; }
  /// Input/output widths of affine layer l.
  std::size_t fan_in(std::size_t layer) const noexcept;
  std::size_t fan_out(std::size_t layer) const noexcept;
};

/// Trainable tensors in layer order: W_1, [b_1], W_2, [b_2], ...
/// W_l is fan_out x fan_in, b_l is 1 x fan_out. The Fourier matrix B is
/// frozen and kept apart from the trainable tensors.
struct ParamSet {
  std::vector<DenseMatrix> tensors;
  DenseMatrix features;
  bool bias = true;

  DenseMatrix& weight(std::size_t layer) { return tensors[layer * (bias ? 2 : 1)]; }
  const DenseMatrix& weight(std::size_t layer) const { return tensors[layer * (bias ? 2 : 1)]; }
  DenseMatrix& bias_row(std::size_t layer) { return tensors[layer * 2 + 1]; }
  const DenseMatrix& bias_row(std::size_t layer) const { return tensors[layer * 2 + 1]; }
  std::size_t layer_count() const noexcept { return tensors.size() / (bias ? 2 : 1); }
  std::size_t parameter_count() const noexcept;
};

/// SIREN scheme for sine nets (first layer U(+-1/fan_in), deeper layers
/// U(+-sqrt(6/fan_in)/omega0)), He-uniform for relu, LeCun-uniform for
/// linear; zero biases. B ~ N(0, scale^2) drawn from feature_map.seed.
ParamSet init_network(const NetworkSpec& spec, std::uint64_t seed);

/// Draws the frozen Fourier matrix B (D x d).
DenseMatrix sample_feature_matrix(const FeatureMap& map, std::size_t input_dim);

/// gamma(x) for a single point.
std::vector<double> fourier_features(const DenseMatrix& b, std::span<const double> x);
/// gamma applied to each row of `coords` (k x d -> k x 2D).
DenseMatrix fourier_features(const DenseMatrix& b, const DenseMatrix& coords);

/// Records the network on `tape`. `params` are the tape nodes of
/// ParamSet::tensors in order; `input` is k x d (raw coordinates, the
/// feature map is applied here when configured).
ad::Var forward(const NetworkSpec& spec, const ParamSet& params, std::span<const ad::Var> tensors,
                ad::Var input);

/// Binds every trainable tensor as a tape parameter (or constant).
std::vector<ad::Var> bind(ad::Tape& tape, const ParamSet& params, bool trainable = true);

/// Plain evaluation, k x d -> k x o.
DenseMatrix forward(const NetworkSpec& spec, const ParamSet& params, const DenseMatrix& coords);

}  // namespace inrr::models
