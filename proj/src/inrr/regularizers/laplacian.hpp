#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "inrr/models/network.hpp"
#include "inrr/numerics/autodiff.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::regularizers {

/// Gram entries are clamped to this value before exponentiation; the tiny
/// network's outputs are unbounded and one overflow would poison A.
inline constexpr double kGramCeiling = 30.0;

/// tr(M^T L M). Throws DimensionError unless L is square with L.rows == M.rows.
double dirichlet_energy(const DenseMatrix& l, const DenseMatrix& m);
ad::Var dirichlet_energy(ad::Var l, ad::Var m);

struct TinyInrOptions {
  std::size_t hidden_layers = 5;
  std::size_t width = 32;
  double omega0 = 30.0;
};

/// Where the adjacency embeddings come from: a tiny coordinate network
/// g: R -> R^r evaluated at the m' sample coordinates (INRR), or a freely
/// trained r x m' matrix C (AIR). Either way the m' x r embedding matrix E
/// yields A = exp(E E^T) / sum(exp(E E^T)).
class AdjacencySource {
 public:
  static AdjacencySource tiny_inr(std::size_t samples, std::size_t rank, const TinyInrOptions& options,
                                  std::uint64_t seed);
  /// `c` is r x m'.
  static AdjacencySource free(DenseMatrix c);
  /// C with i.i.d. N(0, std^2) entries.
  static AdjacencySource free_random(std::size_t samples, std::size_t rank, double std,
                                     std::uint64_t seed);

  std::size_t samples() const noexcept { return samples_; }
  std::size_t rank() const noexcept { return rank_; }
  bool is_tiny_inr() const noexcept { return network_.has_value(); }
  const models::NetworkSpec& network_spec() const { return *network_; }

  /// Trainable tensors (network parameters or the single matrix C).
  std::vector<DenseMatrix>& tensors() noexcept { return params_.tensors; }
  const std::vector<DenseMatrix>& tensors() const noexcept { return params_.tensors; }

  /// m' x r embedding matrix recorded on the tape.
  ad::Var embeddings(ad::Tape& tape, std::span<const ad::Var> tensors) const;
  DenseMatrix embeddings() const;

 private:
  AdjacencySource() = default;
  std::size_t samples_ = 0;
  std::size_t rank_ = 0;
  std::optional<models::NetworkSpec> network_;
  models::ParamSet params_;
};

/// A = exp(min(E E^T, ceiling)) normalized by its grand sum.
/// Throws NumericError when A is not finite.
ad::Var build_adjacency(ad::Var embeddings);
DenseMatrix build_adjacency(const AdjacencySource& source);

/// L = diag(A 1) - A. The matrix overload throws ContractError for an
/// asymmetric or negative A.
ad::Var build_laplacian(ad::Var a);
DenseMatrix build_laplacian(const DenseMatrix& a);

/// Row and column graphs of the regularizer. Until frozen, both Laplacians
/// are recomputed from their sources every evaluation; afterwards the
/// values captured at the freeze are used and the sources get no gradient.
class LaplacianPair {
 public:
  LaplacianPair(AdjacencySource rows, AdjacencySource cols);

  AdjacencySource& rows() noexcept { return rows_; }
  AdjacencySource& cols() noexcept { return cols_; }
  const AdjacencySource& rows() const noexcept { return rows_; }
  const AdjacencySource& cols() const noexcept { return cols_; }

  /// Captures the current Laplacians. Throws ContractError when already
  /// frozen or when step < 0.
  void freeze(std::int64_t step);
  bool frozen() const noexcept { return freeze_step_.has_value(); }
  std::optional<std::int64_t> freeze_step() const noexcept { return freeze_step_; }

  DenseMatrix row_laplacian() const;
  DenseMatrix col_laplacian() const;

  struct Bound {
    ad::Var row_laplacian;
    ad::Var col_laplacian;
    /// Tape nodes of the sources' tensors; empty once frozen.
    std::vector<ad::Var> row_tensors;
    std::vector<ad::Var> col_tensors;
  };
  Bound bind(ad::Tape& tape) const;

 private:
  AdjacencySource rows_;
  AdjacencySource cols_;
  std::optional<std::int64_t> freeze_step_;
  DenseMatrix frozen_rows_;
  DenseMatrix frozen_cols_;
};

/// lambda_r tr(X^T L_r X) + lambda_c tr(X L_c X^T) for the m' x n' grid X.
ad::Var inrr_penalty(ad::Var l_rows, ad::Var l_cols, ad::Var grid, double lambda_r, double lambda_c);
double inrr_penalty(const LaplacianPair& pair, const DenseMatrix& grid, double lambda_r,
                    double lambda_c);

}  // namespace inrr::regularizers
