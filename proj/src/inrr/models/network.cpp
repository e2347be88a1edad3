#include "inrr/models/network.hpp"

#include <cmath>
#include <random>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::models {

Activation parse_activation(std::string_view name) {
  if (name == "sine") return Activation::sine;
  if (name == "relu") return Activation::relu;
  if (name == "linear") return Activation::linear;
  throw ContractError("unknown activation '" + std::string(name) + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::sine: return "sine";
    case Activation::relu: return "relu";
    case Activation::linear: return "linear";
  }
  return "linear";
}

void NetworkSpec::validate() const {
  if (input_dim == 0 || output_dim == 0) throw ContractError("NetworkSpec: zero input/output dimension");
  for (auto w : hidden)
    if (w == 0) throw ContractError("NetworkSpec: hidden widths must be >= 1");
  if (activation == Activation::sine && !(omega0 > 0.0)) {
    throw ContractError("NetworkSpec: omega0 must be > 0 for sine activation");
  }
  if (feature_map) {
    if (feature_map->frequencies == 0) throw ContractError("NetworkSpec: feature map needs D >= 1");
    if (!(feature_map->scale >= 0.0)) throw ContractError("NetworkSpec: feature scale must be >= 0");
  }
}

std::size_t NetworkSpec::first_layer_width() const noexcept {
  return feature_map ? 2 * feature_map->frequencies : input_dim;
}

std::size_t NetworkSpec::fan_in(std::size_t layer) const noexcept {
  return layer == 0 ? first_layer_width() : hidden[layer - 1];
}

std::size_t NetworkSpec::fan_out(std::size_t layer) const noexcept {
  return layer < hidden.size() ? hidden[layer] : output_dim;
}

std::size_t ParamSet::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

DenseMatrix sample_feature_matrix(const FeatureMap& map, std::size_t input_dim) {
  DenseMatrix b(map.frequencies, input_dim);
  Rng rng(derive_seed(map.seed, 0xfeed));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : b.data()) v = map.scale * normal(rng);
  return b;
}

ParamSet init_network(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParamSet p;
  p.bias = spec.bias;
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t in = spec.fan_in(l), out = spec.fan_out(l);
    const double fan = static_cast<double>(in);
    double bound = 0.0;
    switch (spec.activation) {
      case Activation::sine:
        bound = l == 0 ? 1.0 / fan : std::sqrt(6.0 / fan) / spec.omega0;
        break;
      case Activation::relu:
        bound = std::sqrt(6.0 / fan);
        break;
      case Activation::linear:
        bound = std::sqrt(3.0 / fan);
        break;
    }
    std::uniform_real_distribution<double> u(-bound, bound);
    DenseMatrix w(out, in);
    for (double& v : w.data()) v = u(rng);
    p.tensors.push_back(std::move(w));
    if (spec.bias) p.tensors.emplace_back(1, out);
  }
  if (spec.feature_map) p.features = sample_feature_matrix(*spec.feature_map, spec.input_dim);
  return p;
}

std::vector<double> fourier_features(const DenseMatrix& b, std::span<const double> x) {
  if (b.cols() != x.size()) {
    throw DimensionError("fourier_features: B is " + b.shape() + " but x has " +
                         std::to_string(x.size()) + " entries");
  }
  const std::size_t d = b.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> out(2 * d);
  for (std::size_t l = 0; l < d; ++l) {
    double proj = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) proj += b(l, k) * x[k];
    out[l] = s * std::cos(proj);
    out[d + l] = s * std::sin(proj);
  }
  return out;
}

DenseMatrix fourier_features(const DenseMatrix& b, const DenseMatrix& coords) {
  DenseMatrix out(coords.rows(), 2 * b.rows());
  for (std::size_t i = 0; i < coords.rows(); ++i) {
    const auto f = fourier_features(b, coords.row_span(i));
    std::copy(f.begin(), f.end(), out.row_span(i).begin());
  }
  return out;
}

std::vector<ad::Var> bind(ad::Tape& tape, const ParamSet& params, bool trainable) {
  std::vector<ad::Var> vars;
  vars.reserve(params.tensors.size());
  for (const auto& t : params.tensors) vars.push_back(trainable ? tape.parameter(t) : tape.constant(t));
  return vars;
}

ad::Var forward(const NetworkSpec& spec, const ParamSet& params, std::span<const ad::Var> tensors,
                ad::Var input) {
  if (input.cols() != spec.input_dim) {
    throw DimensionError("forward: coordinates are " + input.value().shape() + ", network expects " +
                         std::to_string(spec.input_dim) + " columns");
  }
  const std::size_t per_layer = spec.bias ? 2 : 1;
  if (tensors.size() != spec.layer_count() * per_layer) {
    throw DimensionError("forward: " + std::to_string(tensors.size()) +
                         " parameter tensors for a network with " +
                         std::to_string(spec.layer_count()) + " layers");
  }
  ad::Tape& tape = input.tape();
  ad::Var x = input;
  if (spec.feature_map) x = tape.constant(fourier_features(params.features, input.value()));
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const ad::Var w = tensors[l * per_layer];
    if (w.rows() != spec.fan_out(l) || w.cols() != spec.fan_in(l)) {
      throw DimensionError("forward: layer " + std::to_string(l) + " weight is " + w.value().shape());
    }
    ad::Var z = ad::matmul(x, ad::transpose(w));
    if (spec.bias) z = ad::add_row(z, tensors[l * per_layer + 1]);
    if (l + 1 == spec.layer_count()) return z;
    switch (spec.activation) {
      case Activation::sine: x = ad::sin(ad::scale(z, spec.omega0)); break;
      case Activation::relu: x = ad::relu(z); break;
      case Activation::linear: x = z; break;
    }
  }
  return x;
}

DenseMatrix forward(const NetworkSpec& spec, const ParamSet& params, const DenseMatrix& coords) {
  ad::Tape tape;
  const auto vars = bind(tape, params, false);
  return forward(spec, params, vars, tape.constant(coords)).value();
}

}  // namespace inrr::models
