#include <doctest.h>

#include <cmath>
#include <random>

#include "inrr/models/network.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/ntk/kernel.hpp"
#include "inrr/ntk/theory.hpp"
#include "../support/oracles.hpp"

using namespace inrr;
using namespace inrr::ntk;

namespace {

// Direct inverse prediction: row . K^-1 z with Eigen.
double eigen_prediction(const DenseMatrix& k, const std::vector<double>& row, const std::vector<double>& z) {
  const Eigen::MatrixXd ke = oracle::to_eigen(k);
  const Eigen::VectorXd ze = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  const Eigen::VectorXd re = Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
  return re.dot(ke.fullPivLu().solve(ze));
}

}  // namespace

TEST_SUITE("ntk") {

TEST_CASE("linear net kernel is the gram matrix") {
  models::NetworkSpec s;
  s.input_dim = 3;
  s.activation = models::Activation::linear;
  s.bias = false;
  std::mt19937_64 rng(1);
  const auto pts = oracle::random_matrix(4, 3, rng);
  for (std::size_t samples : {1, 7}) {
    const auto km = empirical_ntk(s, pts, samples, 3);
    CHECK(max_abs_diff(km.k, oracle::naive_matmul(pts, transpose(pts))) < 1e-14);
    CHECK(std::holds_alternative<EmpiricalKernel>(km.provenance));
  }
  CHECK_THROWS_AS(empirical_ntk(s, pts, 0, 1), ContractError);
  CHECK_THROWS_AS(empirical_ntk(s, oracle::random_matrix(2, 2, rng), 1, 1), DimensionError);
  auto two = s;
  two.output_dim = 2;
  CHECK_THROWS_AS(empirical_ntk(two, pts, 1, 1), ContractError);
}

TEST_CASE("empirical kernel structure") {
  models::NetworkSpec s;
  s.hidden = {16};
  s.omega0 = 5.0;
  std::mt19937_64 rng(2);
  const auto pts = oracle::random_matrix(6, 2, rng, 0.5);
  const auto km = empirical_ntk(s, pts, 20, 4);
  CHECK(km.k == transpose(km.k));
  for (std::size_t i = 0; i < 6; ++i) CHECK(km.k(i, i) >= 0.0);
  double tr = 0.0;
  for (std::size_t i = 0; i < 6; ++i) tr += km.k(i, i);
  CHECK(oracle::sym_eigenvalues(km.k).front() >= -1e-4 * tr / 6.0);
  CHECK(km.standard_errors.rows() == 6);
  CHECK(empirical_ntk(s, pts, 20, 4).k == km.k);
  const std::vector<double> q{0.0, 0.0};
  CHECK_THROWS_AS(km.row(q), ContractError);
}

TEST_CASE("empirical kernel Monte Carlo self-consistency") {
  models::NetworkSpec s;
  s.hidden = {64, 64};
  s.activation = models::Activation::relu;
  std::mt19937_64 rng(3);
  const auto pts = oracle::random_matrix(5, 2, rng, 0.5);
  const auto small = empirical_ntk(s, pts, 2000, 10);
  const auto large = empirical_ntk(s, pts, 20000, 11);
  for (std::size_t k = 0; k < small.k.size(); ++k) {
    const double se = std::hypot(small.standard_errors[k], large.standard_errors[k]);
    CHECK(std::abs(small.k[k] - large.k[k]) <= 3.0 * se);
  }
}

TEST_CASE("kernel regression interpolates") {
  std::mt19937_64 rng(4);
  const auto pts = oracle::random_matrix(6, 2, rng, 0.3);
  const auto km = gaussian_limit_kernel(pts, 3.0, [](double t) { return t; });
  const std::vector<double> z{0.1, -0.4, 0.9, 0.3, 0.0, 0.5};
  for (std::size_t l = 0; l < 6; ++l)
    CHECK(kernel_regression(km, z, pts.row_span(l)) == doctest::Approx(z[l]).epsilon(1e-9));
  const std::vector<double> zero(6, 0.0), q{0.05, 0.02};
  CHECK(kernel_regression(km, zero, q) == 0.0);
  std::vector<double> short_z{1.0};
  CHECK_THROWS(kernel_regression(km, short_z, q));
}

TEST_CASE("closed-form examples") {
  DenseMatrix pts(4, 1);
  for (std::size_t i = 0; i < 4; ++i) pts(i, 0) = static_cast<double>(i);
  const auto km = closed_form_kernel(pts, 1.0, 2.0);
  const std::vector<double> z{1, 2, 3, 4}, off{10.0};
  CHECK(kernel_regression(km, z, off) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> z2{1, 3};
  CHECK(corollary1_prediction(1.0, 2.0, z2) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(corollary1_prediction(0.0, 2.0, z2) == 0.0);
  CHECK(corollary1_prediction(1.0, 2.0, z2, 1) == 3.0);
  CHECK_THROWS_AS(corollary1_prediction(1.0, 1.0, z2), ContractError);
  CHECK_THROWS_AS(corollary1_prediction(1.0, 0.0, z2), ContractError);
}

TEST_CASE("constant-profile prediction agrees with direct inversion") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(1, 20);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    const double h0 = u(rng);
    const double h1 = h0 + 0.5 + std::abs(u(rng));
    std::vector<double> z(n);
    for (double& v : z) v = u(rng);
    DenseMatrix pts(n, 1);
    for (std::size_t i = 0; i < n; ++i) pts(i, 0) = static_cast<double>(i);
    const auto km = closed_form_kernel(pts, h0, h1);
    const std::vector<double> off{-5.0};
    const double predicted = corollary1_prediction(h0, h1, z);
    CHECK(std::abs(kernel_regression(km, z, off) - predicted) < 1e-9);
    CHECK(std::abs(eigen_prediction(km.k, km.row(off), z) - predicted) < 1e-9);
    const std::size_t l = size(rng) % n;
    CHECK(corollary1_prediction(h0, h1, z, l) == z[l]);
  }
}

TEST_CASE("composed kernel") {
  std::mt19937_64 rng(6);
  const auto b = oracle::random_matrix(32, 2, rng, 4.0);
  const Profile h = [](double t) { return 2.0 * t * t + t - 0.5; };
  const std::vector<double> x{0.3, 0.1};
  CHECK(composed_kernel(b, h, x, x) == doctest::Approx(h(1.0)).epsilon(1e-14));
  const std::vector<double> y{-0.2, 0.4}, xs{1.3, 1.1}, ys{0.8, 1.4};
  CHECK(std::abs(composed_kernel(b, h, x, y) - composed_kernel(b, h, xs, ys)) < 1e-12);
  const std::vector<double> bad{0.1};
  CHECK_THROWS_AS(composed_kernel(b, h, bad, bad), DimensionError);

  // shifting every point and the query keeps the regression output
  const auto pts = oracle::random_matrix(8, 2, rng, 0.3);
  DenseMatrix shifted = pts;
  for (std::size_t i = 0; i < 8; ++i) {
    shifted(i, 0) += 0.7;
    shifted(i, 1) -= 0.4;
  }
  const Profile e = [](double t) { return std::exp(t); };
  const auto k1 = composed_kernel_matrix(pts, b, e);
  const auto k2 = composed_kernel_matrix(shifted, b, e);
  std::vector<double> z(8);
  for (double& v : z) v = rng() % 100 / 100.0;
  const std::vector<double> q{0.05, -0.1}, qs{0.75, -0.5};
  CHECK(std::abs(kernel_regression(k1, z, q) - kernel_regression(k2, z, qs)) < 1e-9);
}

TEST_CASE("inner feature converges to the half-exponent gaussian") {
  const double delta = 3.0, dist = 0.2;
  models::FeatureMap map{20000, delta, 7};
  const auto b = models::sample_feature_matrix(map, 2);
  const std::vector<double> d{dist, 0.0};
  const double f = mean_cosine_feature(b, d);
  const double limit = gaussian_limit(delta, dist * dist);
  CHECK(limit == doctest::Approx(std::exp(-delta * delta * dist * dist / 2.0)));
  const double var = (1.0 + std::exp(-2.0 * delta * delta * dist * dist)) / 2.0 - limit * limit;
  CHECK(std::abs(f - limit) < 3.0 * std::sqrt(var / 20000.0));
  CHECK(gaussian_limit(delta, dist * dist, false) == doctest::Approx(std::exp(-delta * delta * dist * dist)));
}

TEST_CASE("convergence study") {
  const auto study = feature_convergence(3.0, 0.2, {100, 1000, 10000}, 200, 9);
  REQUIRE(study.points.size() == 3);
  CHECK(study.half_exponent_matches);
  CHECK(study.slope == doctest::Approx(-0.5).epsilon(0.3));
  CHECK(study.points[0].rms_deviation_half > study.points[2].rms_deviation_half);
  CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
}

TEST_CASE("kernel profile") {
  const KernelProfile p({-1.0, 0.0, 1.0}, {2.0, 0.0, 4.0});
  CHECK(p(-2.0) == 2.0);
  CHECK(p(0.5) == doctest::Approx(2.0));
  CHECK(p(-0.25) == doctest::Approx(0.5));
  CHECK(p(3.0) == 4.0);
  CHECK_THROWS_AS(KernelProfile({0.0}, {1.0}), ContractError);
  CHECK_THROWS_AS(KernelProfile({0.0, 0.0}, {1.0, 2.0}), ContractError);

  models::NetworkSpec s;
  s.hidden = {32};
  s.activation = models::Activation::relu;
  const auto fitted = fit_profile(s, 5, 50, 1);
  REQUIRE(fitted.nodes().size() == 5);
  CHECK(fitted.nodes().front() == -1.0);
  CHECK(fitted.nodes().back() == 1.0);
  // the kernel of a point with itself dominates
  for (double v : fitted.values()) CHECK(v <= fitted.values().back() + 1e-12);
}

}
