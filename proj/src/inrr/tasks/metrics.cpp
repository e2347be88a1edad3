#include "inrr/tasks/metrics.hpp"

#include <cmath>
#include <limits>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/linalg.hpp"

namespace inrr::tasks {

double mse(const DenseMatrix& a, const DenseMatrix& b, const Mask* select) {
  require_same_shape(a, b, "mse");
  if (select && (select->rows() != a.rows() || select->cols() != a.cols())) {
    throw DimensionError("mse: mask does not match " + a.shape());
  }
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (select && !(*select)[k]) continue;
    const double d = a[k] - b[k];
    acc += d * d;
    ++count;
  }
  if (count == 0) throw ContractError("mse: empty pixel selection");
  return acc / static_cast<double>(count);
}

double psnr(const DenseMatrix& a, const DenseMatrix& b, const Mask* select) {
  const double e = mse(a, b, select);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(e);
}

double effective_rank(const DenseMatrix& m) {
  const auto sigma = singular_values(m);
  double total = 0.0;
  for (double s : sigma) total += s;
  if (!(total > 0.0)) throw ContractError("effective_rank: zero matrix has no effective rank");
  double entropy = 0.0;
  for (double s : sigma) {
    const double p = s / total;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

DenseMatrix covariance_matrix(const DenseMatrix& x, Axis axis) {
  const DenseMatrix data = axis == Axis::cols ? x : transpose(x);
  const std::size_t samples = data.rows(), vars = data.cols();
  if (samples < 2 || vars < 1) {
    throw DimensionError("covariance_matrix: need >= 2 samples, got " + x.shape());
  }
  DenseMatrix centered = data;
  for (std::size_t j = 0; j < vars; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < samples; ++i) mean += data(i, j);
    mean /= static_cast<double>(samples);
    for (std::size_t i = 0; i < samples; ++i) centered(i, j) -= mean;
  }
  DenseMatrix c = matmul_tn(centered, centered);
  c *= 1.0 / static_cast<double>(samples - 1);
  // exact symmetry
  for (std::size_t i = 0; i < vars; ++i)
    for (std::size_t j = i + 1; j < vars; ++j) c(j, i) = c(i, j);
  return c;
}

}  // namespace inrr::tasks
