#pragma once

#include <cstddef>

#include "inrr/numerics/matrix.hpp"

namespace inrr::tasks {

/// s(x, y) = sin(25 pi sin(pi/3 * sqrt(x^2 + y^2))).
double ring_value(double x, double y) noexcept;

/// s sampled on a uniform rows x cols grid over [-1,1]^2, x along columns,
/// y along rows, endpoints included. Values in [-1,1].
DenseMatrix synthetic_ring_raw(std::size_t rows, std::size_t cols);
/// (s + 1) / 2, for storage as an image.
DenseMatrix synthetic_ring(std::size_t rows, std::size_t cols);

/// Deterministic piecewise-smooth test card in [0,1]: shaded background,
/// periodic bars, a disk and a blocky texture. Used where no natural test
/// image is supplied.
DenseMatrix synthetic_scene(std::size_t rows, std::size_t cols);

}  // namespace inrr::tasks
