#include "inrr/numerics/adam.hpp"

#include <cmath>

#include "inrr/numerics/error.hpp"

namespace inrr {

void Adam::step(std::span<DenseMatrix> params, std::span<const DenseMatrix> grads) {
  if (params.size() != grads.size()) {
    throw DimensionError("Adam::step: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
  }
  if (first_.empty()) {
    for (const auto& p : params) {
      first_.emplace_back(p.rows(), p.cols());
      second_.emplace_back(p.rows(), p.cols());
    }
  }
  if (first_.size() != params.size()) {
    throw DimensionError("Adam::step: parameter count changed from " +
                         std::to_string(first_.size()) + " to " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_same_shape(params[i], grads[i], "Adam::step");
    require_same_shape(params[i], first_[i], "Adam::step");
  }

  ++step_;
  const auto& o = options_;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].data();
    auto g = grads[i].data();
    auto m = first_[i].data();
    auto v = second_[i].data();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      p[k] -= o.learning_rate * mhat / (std::sqrt(vhat) + o.epsilon);
    }
  }
}

}  // namespace inrr
