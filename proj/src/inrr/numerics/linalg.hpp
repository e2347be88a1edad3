#pragma once

#include <span>
#include <vector>

#include "inrr/numerics/matrix.hpp"

namespace inrr {

/// Thin SVD, a = u * diag(singular_values) * v^T with k = min(rows, cols)
/// columns in u and v. Singular values descending.
struct Svd {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix v;
};

/// One-sided Jacobi. Throws ContractError on an empty matrix.
Svd thin_svd(const DenseMatrix& a);

/// Nonnegative, descending, length min(rows, cols).
std::vector<double> singular_values(const DenseMatrix& a);

/// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

struct SolveOptions {
  /// Add ridge * trace(K)/N to the diagonal when the condition estimate
  /// exceeds ridge_condition. When false an ill-conditioned system throws.
  bool allow_ridge = true;
  double ridge_condition = 1e12;
  double ridge_scale = 1e-8;
};

struct SolveResult {
  std::vector<double> x;
  double condition_estimate = 0.0;
  bool ridge_applied = false;
};

/// Solves K x = b for symmetric K. Cholesky when K is positive definite,
/// partially pivoted LU otherwise. Throws SolverError (with the condition
/// estimate) when the system is singular or too ill-conditioned and no ridge
/// is allowed.
SolveResult solve_symmetric(const DenseMatrix& k, std::span<const double> b,
                            const SolveOptions& options = {});

}  // namespace inrr
