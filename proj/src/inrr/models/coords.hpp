#pragma once

#include <cstddef>

#include "inrr/numerics/matrix.hpp"

namespace inrr::models {

/// (m*n) x 2 matrix of grid coordinates (i/m, j/n), i = 1..m, j = 1..n, in
/// row-major pixel order.
DenseMatrix grid_coordinates(std::size_t rows, std::size_t cols);

/// Affine map of a grid coordinate t in [1/count, 1] onto [-1, 1].
double to_centered(double t, std::size_t count) noexcept;

/// grid_coordinates mapped onto [-1,1]^2; what coordinate networks consume.
DenseMatrix centered_grid(std::size_t rows, std::size_t cols);

/// count x 1 column u = [1/count, ..., count/count] mapped onto [-1,1].
DenseMatrix centered_axis(std::size_t count);

}  // namespace inrr::models
