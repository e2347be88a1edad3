#include "inrr/regularizers/laplacian.hpp"

#include <cmath>
#include <random>

#include "inrr/models/coords.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::regularizers {

double dirichlet_energy(const DenseMatrix& l, const DenseMatrix& m) {
  ad::Tape tape;
  return dirichlet_energy(tape.constant(l), tape.constant(m)).scalar();
}

ad::Var dirichlet_energy(ad::Var l, ad::Var m) {
  if (l.rows() != l.cols() || l.rows() != m.rows()) {
    throw DimensionError("dirichlet_energy: Laplacian " + l.value().shape() +
                         " does not match matrix " + m.value().shape());
  }
  // tr(M^T L M) = sum(M .* (L M))
  return ad::sum(ad::hadamard(m, ad::matmul(l, m)));
}

AdjacencySource AdjacencySource::tiny_inr(std::size_t samples, std::size_t rank,
                                          const TinyInrOptions& options, std::uint64_t seed) {
  if (rank < 1 || samples < 2) throw ContractError("AdjacencySource: need r >= 1 and m' >= 2");
  AdjacencySource s;
  s.samples_ = samples;
  s.rank_ = rank;
  models::NetworkSpec spec;
  spec.input_dim = 1;
  spec.output_dim = rank;
  spec.hidden.assign(options.hidden_layers, options.width);
  spec.activation = models::Activation::sine;
  spec.omega0 = options.omega0;
  s.params_ = models::init_network(spec, seed);
  s.network_ = std::move(spec);
  return s;
}

AdjacencySource AdjacencySource::free(DenseMatrix c) {
  if (c.rows() < 1 || c.cols() < 2) throw ContractError("AdjacencySource: need r >= 1 and m' >= 2");
  AdjacencySource s;
  s.rank_ = c.rows();
  s.samples_ = c.cols();
  s.params_.bias = false;
  s.params_.tensors.push_back(std::move(c));
  return s;
}

AdjacencySource AdjacencySource::free_random(std::size_t samples, std::size_t rank, double std,
                                             std::uint64_t seed) {
  DenseMatrix c(rank, samples);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std);
  for (double& v : c.data()) v = normal(rng);
  return free(std::move(c));
}

ad::Var AdjacencySource::embeddings(ad::Tape& tape, std::span<const ad::Var> tensors) const {
  if (network_) {
    return models::forward(*network_, params_, tensors, tape.constant(models::centered_axis(samples_)));
  }
  return ad::transpose(tensors[0]);
}

DenseMatrix AdjacencySource::embeddings() const {
  ad::Tape tape;
  const auto vars = models::bind(tape, params_, false);
  return embeddings(tape, vars).value();
}

ad::Var build_adjacency(ad::Var embeddings) {
  ad::Var gram = ad::matmul(embeddings, ad::transpose(embeddings));
  ad::Var e = ad::exp(ad::clamp_max(gram, kGramCeiling));
  ad::Var a = ad::divide(e, ad::sum(e));
  if (!a.value().all_finite()) {
    throw NumericError("build_adjacency: non-finite adjacency entries");
  }
  return a;
}

DenseMatrix build_adjacency(const AdjacencySource& source) {
  ad::Tape tape;
  return build_adjacency(tape.constant(source.embeddings())).value();
}

ad::Var build_laplacian(ad::Var a) {
  if (a.rows() != a.cols()) throw DimensionError("build_laplacian: " + a.value().shape() + " not square");
  return ad::sub(ad::diag(ad::row_sums(a)), a);
}

DenseMatrix build_laplacian(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("build_laplacian: " + a.shape() + " not square");
  const double tol = 1e-12 * std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) {
        throw ContractError("build_laplacian: adjacency is not symmetric at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
      }
      if (a(i, j) < 0.0) throw ContractError("build_laplacian: negative adjacency entry");
    }
  ad::Tape tape;
  return build_laplacian(tape.constant(a)).value();
}

LaplacianPair::LaplacianPair(AdjacencySource rows, AdjacencySource cols)
    : rows_(std::move(rows)), cols_(std::move(cols)) {}

void LaplacianPair::freeze(std::int64_t step) {
  if (freeze_step_) {
    throw ContractError("LaplacianPair::freeze: already frozen at step " + std::to_string(*freeze_step_));
  }
  if (step < 0) throw ContractError("LaplacianPair::freeze: negative step");
  frozen_rows_ = build_laplacian(build_adjacency(rows_));
  frozen_cols_ = build_laplacian(build_adjacency(cols_));
  freeze_step_ = step;
}

DenseMatrix LaplacianPair::row_laplacian() const {
  return frozen() ? frozen_rows_ : build_laplacian(build_adjacency(rows_));
}

DenseMatrix LaplacianPair::col_laplacian() const {
  return frozen() ? frozen_cols_ : build_laplacian(build_adjacency(cols_));
}

LaplacianPair::Bound LaplacianPair::bind(ad::Tape& tape) const {
  Bound b;
  if (frozen()) {
    b.row_laplacian = tape.constant(frozen_rows_);
    b.col_laplacian = tape.constant(frozen_cols_);
    return b;
  }
  for (const auto& t : rows_.tensors()) b.row_tensors.push_back(tape.parameter(t));
  for (const auto& t : cols_.tensors()) b.col_tensors.push_back(tape.parameter(t));
  b.row_laplacian = build_laplacian(build_adjacency(rows_.embeddings(tape, b.row_tensors)));
  b.col_laplacian = build_laplacian(build_adjacency(cols_.embeddings(tape, b.col_tensors)));
  return b;
}

ad::Var inrr_penalty(ad::Var l_rows, ad::Var l_cols, ad::Var grid, double lambda_r, double lambda_c) {
  if (l_rows.rows() != grid.rows() || l_cols.rows() != grid.cols()) {
    throw DimensionError("inrr_penalty: grid " + grid.value().shape() + " does not match L_r " +
                         l_rows.value().shape() + " / L_c " + l_cols.value().shape());
  }
  ad::Var row_term = dirichlet_energy(l_rows, grid);
  ad::Var col_term = dirichlet_energy(l_cols, ad::transpose(grid));
  return ad::add(ad::scale(row_term, lambda_r), ad::scale(col_term, lambda_c));
}

double inrr_penalty(const LaplacianPair& pair, const DenseMatrix& grid, double lambda_r,
                    double lambda_c) {
  ad::Tape tape;
  return inrr_penalty(tape.constant(pair.row_laplacian()), tape.constant(pair.col_laplacian()),
                      tape.constant(grid), lambda_r, lambda_c)
      .scalar();
}

}  // namespace inrr::regularizers
