#include "inrr/ntk/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inrr/ntk/kernel.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::ntk {

KernelProfile::KernelProfile(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
    throw ContractError("KernelProfile: need >= 2 nodes with one value each");
  }
  if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
      std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw ContractError("KernelProfile: nodes must be strictly increasing");
  }
}

double KernelProfile::operator()(double t) const {
  if (t <= nodes_.front()) return values_.front();
  if (t >= nodes_.back()) return values_.back();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - nodes_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - nodes_[lo]) / (nodes_[hi] - nodes_[lo]);
  return (1.0 - w) * values_[lo] + w * values_[hi];
}

KernelProfile fit_profile(const models::NetworkSpec& spec, std::size_t nodes, std::size_t samples,
                          std::uint64_t seed) {
  if (spec.input_dim != 2) throw ContractError("fit_profile: network must take 2-D input");
  if (nodes < 2) throw ContractError("fit_profile: need >= 2 nodes");
  DenseMatrix points(nodes + 1, 2);
  points(0, 0) = 1.0;
  std::vector<double> t(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    t[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(nodes - 1);
    points(k + 1, 0) = t[k];
    points(k + 1, 1) = std::sqrt(std::max(0.0, 1.0 - t[k] * t[k]));
  }
  const KernelMatrix km = empirical_ntk(spec, points, samples, seed);
  std::vector<double> h(nodes);
  for (std::size_t k = 0; k < nodes; ++k) h[k] = km.k(0, k + 1);
  return KernelProfile(std::move(t), std::move(h));
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_slope: need >= 2 paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ContractError("fit_slope: x values are all equal");
  return sxy / sxx;
}

ConvergenceStudy feature_convergence(double delta, double distance, const std::vector<std::size_t>& features,
                                      std::size_t trials, std::uint64_t seed) {
  if (features.size() < 2 || trials < 2) throw ContractError("feature_convergence: need >= 2 sizes and trials");
  ConvergenceStudy study;
  study.delta = delta;
  study.distance = distance;
  study.limit_half = gaussian_limit(delta, distance * distance, true);
  study.limit_full = gaussian_limit(delta, distance * distance, false);
  const std::vector<double> offset{distance, 0.0};
  for (std::size_t f = 0; f < features.size(); ++f) {
    ConvergencePoint p;
    p.features = features[f];
    double sum = 0.0, sq = 0.0, dev_half = 0.0, dev_full = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const models::FeatureMap map{features[f], delta, derive_seed(derive_seed(seed, f), trial)};
      const double v = mean_cosine_feature(models::sample_feature_matrix(map, 2), offset);
      sum += v;
      sq += v * v;
      dev_half += (v - study.limit_half) * (v - study.limit_half);
      dev_full += (v - study.limit_full) * (v - study.limit_full);
    }
    const double n = static_cast<double>(trials);
    p.mean = sum / n;
    p.standard_error = std::sqrt(std::max(0.0, (sq - n * p.mean * p.mean) / (n - 1.0)) / n);
    p.rms_deviation_half = std::sqrt(dev_half / n);
    p.rms_deviation_full = std::sqrt(dev_full / n);
    study.points.push_back(p);
  }
  const ConvergencePoint& last = study.points.back();
  study.half_exponent_matches =
      std::abs(last.mean - study.limit_half) <= std::abs(last.mean - study.limit_full);
  std::vector<double> lx, ly;
  for (const auto& p : study.points) {
    lx.push_back(std::log(static_cast<double>(p.features)));
    ly.push_back(std::log(study.half_exponent_matches ? p.rms_deviation_half : p.rms_deviation_full));
  }
  study.slope = fit_slope(lx, ly);
  return study;
}

}  // namespace inrr::ntk
