#pragma once

#include "inrr/numerics/matrix.hpp"
#include "inrr/tasks/image.hpp"

namespace inrr::tasks {

/// Mean squared error over pixels where `select` is true (all pixels when
/// select is null). Throws ContractError on an empty selection.
double mse(const DenseMatrix& a, const DenseMatrix& b, const Mask* select = nullptr);

/// 10 log10(1 / MSE) with peak 1. Identical inputs give +infinity.
double psnr(const DenseMatrix& a, const DenseMatrix& b, const Mask* select = nullptr);

/// exp of the entropy of the normalized singular values. Throws
/// ContractError for the zero matrix.
double effective_rank(const DenseMatrix& m);

enum class Axis { rows, cols };

/// Sample covariance between the columns (Axis::cols, n x n) or between the
/// rows (Axis::rows, m x m). Needs at least two samples along the reduced axis.
DenseMatrix covariance_matrix(const DenseMatrix& x, Axis axis);

}  // namespace inrr::tasks
