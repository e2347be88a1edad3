#include "inrr/ntk/kernel.hpp"

#include <cmath>
#include <string>

#include "inrr/numerics/autodiff.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::ntk {

std::vector<double> KernelMatrix::row(std::span<const double> query) const {
  if (!kernel) throw ContractError("KernelMatrix::row: kernel has no closed evaluation");
  std::vector<double> out(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) out[i] = kernel(points.row_span(i), query);
  return out;
}

namespace {

// Flattened parameter gradient of the scalar output at one point.
std::vector<double> point_gradient(const models::NetworkSpec& spec, const models::ParamSet& params,
                                   std::span<const double> x) {
  ad::Tape tape;
  const auto vars = models::bind(tape, params, true);
  DenseMatrix input(1, x.size());
  std::copy(x.begin(), x.end(), input.data().begin());
  ad::Var out = models::forward(spec, params, vars, tape.constant(std::move(input)));
  tape.backward(out);
  std::vector<double> g;
  g.reserve(params.parameter_count());
  for (const auto& v : vars) {
    const auto& gv = v.grad();
    g.insert(g.end(), gv.data().begin(), gv.data().end());
  }
  return g;
}

template <typename F>
KernelMatrix tabulate(const DenseMatrix& points, Provenance provenance, F kernel) {
  KernelMatrix km;
  km.points = points;
  km.provenance = std::move(provenance);
  const std::size_t n = points.rows();
  km.k = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(points.row_span(i), points.row_span(j));
      km.k(i, j) = v;
      km.k(j, i) = v;
    }
  km.kernel = std::move(kernel);
  return km;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("kernel: point dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

KernelMatrix empirical_ntk(const models::NetworkSpec& spec, const DenseMatrix& points,
                           std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ContractError("empirical_ntk: samples must be >= 1");
  if (spec.output_dim != 1) throw ContractError("empirical_ntk: network must have a single output");
  if (points.cols() != spec.input_dim) {
    throw DimensionError("empirical_ntk: points have " + std::to_string(points.cols()) +
                         " columns, network expects " + std::to_string(spec.input_dim));
  }
  spec.validate();
  const std::size_t n = points.rows();
  DenseMatrix mean(n, n);
  DenseMatrix sq(n, n);
  std::vector<std::vector<double>> grads(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const models::ParamSet params = models::init_network(spec, derive_seed(seed, s));
    for (std::size_t i = 0; i < n; ++i) grads[i] = point_gradient(spec, params, points.row_span(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double dot = 0.0;
        const auto& gi = grads[i];
        const auto& gj = grads[j];
        for (std::size_t p = 0; p < gi.size(); ++p) dot += gi[p] * gj[p];
        mean(i, j) += dot;
        sq(i, j) += dot * dot;
      }
  }
  KernelMatrix km;
  km.points = points;
  km.provenance = EmpiricalKernel{samples, seed};
  km.k = DenseMatrix(n, n);
  km.standard_errors = DenseMatrix(n, n);
  const double count = static_cast<double>(samples);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double m = mean(i, j) / count;
      double se = 0.0;
      if (samples > 1) {
        const double var = std::max(0.0, (sq(i, j) - count * m * m) / (count - 1.0));
        se = std::sqrt(var / count);
      }
      km.k(i, j) = km.k(j, i) = m;
      km.standard_errors(i, j) = km.standard_errors(j, i) = se;
    }
  return km;
}

double mean_cosine_feature(const DenseMatrix& frequencies, std::span<const double> delta) {
  if (frequencies.cols() != delta.size()) {
    throw DimensionError("mean_cosine_feature: B is " + frequencies.shape() + ", offset has " +
                         std::to_string(delta.size()) + " entries");
  }
  if (frequencies.rows() == 0) throw ContractError("mean_cosine_feature: no frequencies");
  double s = 0.0;
  for (std::size_t k = 0; k < frequencies.rows(); ++k) {
    double phase = 0.0;
    for (std::size_t c = 0; c < delta.size(); ++c) phase += frequencies(k, c) * delta[c];
    s += std::cos(phase);
  }
  return s / static_cast<double>(frequencies.rows());
}

double composed_kernel(const DenseMatrix& frequencies, const Profile& h, std::span<const double> xi,
                       std::span<const double> xj) {
  if (xi.size() != xj.size()) throw DimensionError("composed_kernel: point dimensions differ");
  std::vector<double> delta(xi.size());
  for (std::size_t c = 0; c < xi.size(); ++c) delta[c] = xi[c] - xj[c];
  return h(mean_cosine_feature(frequencies, delta));
}

double gaussian_limit(double delta, double squared_distance, bool half_exponent) {
  const double c = half_exponent ? 0.5 : 1.0;
  return std::exp(-c * delta * delta * squared_distance);
}

KernelMatrix closed_form_kernel(const DenseMatrix& points, double h0, double h1) {
  return tabulate(points, ClosedFormKernel{h0, h1},
                  [h0, h1](std::span<const double> a, std::span<const double> b) {
                    return squared_distance(a, b) == 0.0 ? h1 : h0;
                  });
}

KernelMatrix composed_kernel_matrix(const DenseMatrix& points, DenseMatrix frequencies, Profile h) {
  if (frequencies.cols() != points.cols()) {
    throw DimensionError("composed_kernel_matrix: B is " + frequencies.shape() + ", points have " +
                         std::to_string(points.cols()) + " columns");
  }
  DenseMatrix b = frequencies;
  return tabulate(points, ComposedKernel{std::move(frequencies)},
                  [b = std::move(b), h = std::move(h)](std::span<const double> x, std::span<const double> y) {
                    return composed_kernel(b, h, x, y);
                  });
}

KernelMatrix gaussian_limit_kernel(const DenseMatrix& points, double delta, Profile h, bool half_exponent) {
  return tabulate(points, GaussianLimitKernel{delta, half_exponent},
                  [delta, half_exponent, h = std::move(h)](std::span<const double> a, std::span<const double> b) {
                    return h(gaussian_limit(delta, squared_distance(a, b), half_exponent));
                  });
}

KernelRegressor::KernelRegressor(const DenseMatrix& k, std::span<const double> z, const SolveOptions& options) {
  if (k.rows() != z.size()) {
    throw DimensionError("KernelRegressor: K is " + k.shape() + ", z has " + std::to_string(z.size()) +
                         " entries");
  }
  SolveResult r = solve_symmetric(k, z, options);
  alpha_ = std::move(r.x);
  condition_ = r.condition_estimate;
  ridge_ = r.ridge_applied;
}

double KernelRegressor::predict(std::span<const double> kernel_row) const {
  if (kernel_row.size() != alpha_.size()) throw DimensionError("KernelRegressor::predict: row length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < alpha_.size(); ++i) s += alpha_[i] * kernel_row[i];
  return s;
}

double kernel_regression(const KernelMatrix& km, std::span<const double> z, std::span<const double> query,
                         const SolveOptions& options) {
  const auto row = km.row(query);
  return KernelRegressor(km.k, z, options).predict(row);
}

double corollary1_prediction(double h0, double h1, std::span<const double> z,
                             std::optional<std::size_t> on_training) {
  if (h1 == h0 || h1 == 0.0) throw ContractError("corollary1_prediction: degenerate kernel (h1 == h0 or h1 == 0)");
  if (z.empty()) throw ContractError("corollary1_prediction: no training values");
  if (on_training) {
    if (*on_training >= z.size()) throw ContractError("corollary1_prediction: training index out of range");
    return z[*on_training];
  }
  double total = 0.0;
  for (double v : z) total += v;
  const double n = static_cast<double>(z.size());
  return h0 * total / ((n - 1.0) * h0 + h1);
}

}  // namespace inrr::ntk
