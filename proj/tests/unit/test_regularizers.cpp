#include <doctest.h>

#include <cmath>
#include <random>

#include "inrr/models/coords.hpp"
#include "inrr/models/network.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/regularizers/laplacian.hpp"
#include "inrr/regularizers/penalties.hpp"
#include "../support/oracles.hpp"

using namespace inrr;
using namespace inrr::regularizers;

namespace {

DenseMatrix scalar_adjacency(const DenseMatrix& e) {
  const std::size_t m = e.rows();
  DenseMatrix a(m, m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < e.cols(); ++k) g += e(i, k) * e(j, k);
      a(i, j) = std::exp(std::min(g, kGramCeiling));
      total += a(i, j);
    }
  for (double& v : a.data()) v /= total;
  return a;
}

TinyInrOptions small_tiny() { return TinyInrOptions{2, 8, 30.0}; }

}  // namespace

TEST_SUITE("regularizers") {

TEST_CASE("dirichlet energy") {
  std::mt19937_64 rng(1);
  DenseMatrix same(5, 3);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 3; ++k) same(i, k) = k + 0.5;
  const auto a = build_adjacency(AdjacencySource::free_random(5, 4, 1.0, 2));
  CHECK(std::abs(dirichlet_energy(build_laplacian(a), same)) < 1e-15);
  const auto m = oracle::random_matrix(5, 3, rng);
  CHECK(dirichlet_energy(DenseMatrix(5, 5), m) == 0.0);
  CHECK(std::abs(dirichlet_energy(build_laplacian(a), m) - oracle::pairwise_energy(a, m)) < 1e-12);
  CHECK_THROWS_AS(dirichlet_energy(DenseMatrix(4, 4), m), DimensionError);
}

TEST_CASE("adjacency") {
  // constant embeddings give the uniform graph
  const auto ones = AdjacencySource::free(DenseMatrix(3, 6, 0.4));
  const auto u = build_adjacency(ones);
  for (double v : u.data()) CHECK(v == doctest::Approx(1.0 / 36.0).epsilon(1e-14));
  std::mt19937_64 rng(2);
  const auto c = oracle::random_matrix(4, 7, rng);
  const auto a = build_adjacency(AdjacencySource::free(c));
  CHECK(a == transpose(a));
  CHECK(max_abs_diff(a, scalar_adjacency(transpose(c))) < 1e-15);
  CHECK(sum(a) == doctest::Approx(1.0).epsilon(1e-14));
  // saturated gram entries stay finite
  const auto big = build_adjacency(AdjacencySource::free(DenseMatrix(2, 3, 100.0)));
  CHECK(big.all_finite());
}

TEST_CASE("laplacian") {
  const DenseMatrix a(2, 2, 0.25);
  const auto l = build_laplacian(a);
  CHECK(l == DenseMatrix{{0.25, -0.25}, {-0.25, 0.25}});
  const auto src = AdjacencySource::tiny_inr(9, 9, small_tiny(), 4);
  const auto lap = build_laplacian(build_adjacency(src));
  for (std::size_t i = 0; i < 9; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 9; ++j) s += lap(i, j);
    CHECK(std::abs(s) < 1e-15);
  }
  const auto ev = oracle::sym_eigenvalues(lap);
  CHECK(std::abs(ev.front()) < 1e-12);
  for (double e : ev) CHECK(e >= -1e-12);
  CHECK_THROWS_AS(build_laplacian(DenseMatrix{{0.0, 1.0}, {0.5, 0.0}}), ContractError);
  CHECK_THROWS_AS(build_laplacian(DenseMatrix{{0.0, -1.0}, {-1.0, 0.0}}), ContractError);
}

TEST_CASE("tiny inr source") {
  const auto src = AdjacencySource::tiny_inr(12, 10, small_tiny(), 3);
  CHECK(src.is_tiny_inr());
  CHECK(src.samples() == 12);
  CHECK(src.rank() == 10);
  CHECK(src.network_spec().input_dim == 1);
  CHECK(src.network_spec().output_dim == 10);
  const auto e = src.embeddings();
  CHECK(e.rows() == 12);
  CHECK(e.cols() == 10);
  CHECK(max_abs_diff(e, models::forward(src.network_spec(), models::init_network(src.network_spec(), 3),
                                        models::centered_axis(12))) == 0.0);
}

TEST_CASE("tiny inr and free source agree for C = g(u)^T") {
  const auto tiny = AdjacencySource::tiny_inr(16, 16, small_tiny(), 5);
  const auto free = AdjacencySource::free(transpose(tiny.embeddings()));
  CHECK(max_abs_diff(build_adjacency(tiny), build_adjacency(free)) < 1e-8);
  std::mt19937_64 rng(1);
  const auto x = oracle::random_matrix(16, 16, rng);
  LaplacianPair p1(tiny, tiny), p2(free, free);
  CHECK(std::abs(inrr_penalty(p1, x, 0.3, 0.7) - inrr_penalty(p2, x, 0.3, 0.7)) < 1e-8);
}

TEST_CASE("inrr penalty") {
  LaplacianPair pair(AdjacencySource::tiny_inr(6, 6, small_tiny(), 1),
                     AdjacencySource::tiny_inr(5, 6, small_tiny(), 2));
  CHECK(std::abs(inrr_penalty(pair, DenseMatrix(6, 5, 0.8), 1.0, 1.0)) < 1e-14);
  std::mt19937_64 rng(3);
  const auto x = oracle::random_matrix(6, 5, rng);
  const auto lr = pair.row_laplacian(), lc = pair.col_laplacian();
  const double ref = 0.5 * trace(oracle::naive_matmul(oracle::naive_matmul(transpose(x), lr), x)) +
                     2.0 * trace(oracle::naive_matmul(oracle::naive_matmul(x, lc), transpose(x)));
  CHECK(std::abs(inrr_penalty(pair, x, 0.5, 2.0) - ref) < 1e-12);

  // d/dX tr(X^T L X) = 2 L X
  ad::Tape tape;
  auto xv = tape.parameter(x);
  auto out = inrr_penalty(tape.constant(lr), tape.constant(lc), xv, 1.0, 0.0);
  tape.backward(out);
  CHECK(max_abs_diff(xv.grad(), 2.0 * matmul(lr, x)) < 1e-13);

  // lambda = 0 leaves the sources untouched
  ad::Tape t2;
  auto bound = pair.bind(t2);
  auto zero = inrr_penalty(bound.row_laplacian, bound.col_laplacian, t2.constant(x), 0.0, 0.0);
  t2.backward(zero);
  for (const auto& v : bound.row_tensors)
    if (!v.grad().empty()) CHECK(max_abs(v.grad()) == 0.0);
}

TEST_CASE("penalty gradients per group") {
  const auto opts = small_tiny();
  LaplacianPair pair(AdjacencySource::tiny_inr(5, 5, opts, 7), AdjacencySource::tiny_inr(4, 5, opts, 8));
  std::mt19937_64 rng(4);
  const auto x = oracle::random_matrix(5, 4, rng, 0.5);

  const auto& rt = pair.rows().tensors();
  const double err_rows = oracle::gradient_error(rt, [&](ad::Tape& tape, const std::vector<ad::Var>& v) {
    auto lr = build_laplacian(build_adjacency(pair.rows().embeddings(tape, v)));
    auto lc = tape.constant(pair.col_laplacian());
    return inrr_penalty(lr, lc, tape.constant(x), 1.0, 1.0);
  });
  CHECK(err_rows < 1e-5);

  std::vector<DenseMatrix> c{oracle::random_matrix(3, 5, rng)};
  const auto air = AdjacencySource::free(c[0]);
  const double err_air = oracle::gradient_error(c, [&](ad::Tape& tape, const std::vector<ad::Var>& v) {
    auto l = build_laplacian(build_adjacency(air.embeddings(tape, v)));
    return dirichlet_energy(l, tape.constant(x));
  });
  CHECK(err_air < 1e-6);

  const double err_x = oracle::gradient_error({x}, [&](ad::Tape& tape, const std::vector<ad::Var>& v) {
    auto b = pair.bind(tape);
    return inrr_penalty(b.row_laplacian, b.col_laplacian, v[0], 0.7, 1.3);
  });
  CHECK(err_x < 1e-6);
}

TEST_CASE("freeze") {
  LaplacianPair pair(AdjacencySource::tiny_inr(4, 4, small_tiny(), 1),
                     AdjacencySource::tiny_inr(4, 4, small_tiny(), 2));
  CHECK_THROWS_AS(pair.freeze(-1), ContractError);
  const auto before = pair.row_laplacian();
  pair.freeze(10);
  CHECK(pair.frozen());
  CHECK(pair.freeze_step() == 10);
  CHECK_THROWS_AS(pair.freeze(11), ContractError);
  const auto tensors = pair.rows().tensors();
  for (auto& t : pair.rows().tensors()) t.fill(0.123);
  CHECK(pair.row_laplacian() == before);
  ad::Tape tape;
  auto b = pair.bind(tape);
  CHECK(b.row_tensors.empty());
  CHECK(b.col_tensors.empty());
  CHECK(b.row_laplacian.value() == before);
  pair.rows().tensors() = tensors;
  CHECK(pair.rows().tensors() == tensors);
}

TEST_CASE("total variation") {
  CHECK(tv_penalty(DenseMatrix{{0, 1}, {0, 1}}) == 2.0);
  std::mt19937_64 rng(5);
  const auto x = oracle::random_matrix(6, 7, rng);
  double ref = 0.0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      if (i + 1 < 6) ref += std::abs(x(i + 1, j) - x(i, j));
      if (j + 1 < 7) ref += std::abs(x(i, j + 1) - x(i, j));
    }
  CHECK(std::abs(tv_penalty(x) - ref) < 1e-12);
  CHECK_THROWS_AS(tv_penalty(DenseMatrix(1, 5)), ContractError);
  const double err = oracle::gradient_error({x}, [](ad::Tape&, const std::vector<ad::Var>& v) {
    return tv_penalty(v[0]);
  });
  CHECK(err < 1e-6);
}

TEST_CASE("l2 penalty") {
  models::ParamSet p;
  p.tensors = {DenseMatrix{{3, 4}}, DenseMatrix{{100.0}}};
  CHECK(l2_penalty(p) == doctest::Approx(5.0));
  CHECK(l2_penalty(p, L2Norm::spectral) == doctest::Approx(5.0));
  p.tensors = {DenseMatrix{{2, 0}, {0, 1}}, DenseMatrix{{1, 1}}};
  CHECK(l2_penalty(p, L2Norm::spectral) == doctest::Approx(2.0));
  CHECK(l2_penalty(p) == doctest::Approx(std::sqrt(5.0)));
  models::NetworkSpec s;
  s.hidden = {4, 4};
  const auto net = models::init_network(s, 3);
  std::vector<DenseMatrix> weights{net.weight(0), net.weight(1), net.weight(2)};
  for (auto norm : {L2Norm::frobenius, L2Norm::spectral}) {
    const double err = oracle::gradient_error(weights, [&](ad::Tape&, const std::vector<ad::Var>& v) {
      return l2_penalty(v, norm);
    });
    CHECK(err < 1e-6);
  }
}

TEST_CASE("names") {
  CHECK(parse_regularizer_kind("inrr") == RegularizerKind::inrr);
  CHECK(to_string(RegularizerKind::air) == "air");
  CHECK(parse_l2_norm("spectral") == L2Norm::spectral);
  CHECK_THROWS_AS(parse_regularizer_kind("dropout"), ConfigError);
  Objective o;
  o.lambda_r = -1.0;
  CHECK_THROWS_AS(o.validate(), ContractError);
}

}
