#include "inrr/models/coords.hpp"

namespace inrr::models {

DenseMatrix grid_coordinates(std::size_t rows, std::size_t cols) {
  DenseMatrix c(rows * cols, 2);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      c(i * cols + j, 0) = static_cast<double>(i + 1) / static_cast<double>(rows);
      c(i * cols + j, 1) = static_cast<double>(j + 1) / static_cast<double>(cols);
    }
  return c;
}

double to_centered(double t, std::size_t count) noexcept {
  if (count < 2) return 0.0;
  const double lo = 1.0 / static_cast<double>(count);
  return -1.0 + 2.0 * (t - lo) / (1.0 - lo);
}

DenseMatrix centered_grid(std::size_t rows, std::size_t cols) {
  DenseMatrix c = grid_coordinates(rows, cols);
  for (std::size_t k = 0; k < c.rows(); ++k) {
    c(k, 0) = to_centered(c(k, 0), rows);
    c(k, 1) = to_centered(c(k, 1), cols);
  }
  return c;
}

DenseMatrix centered_axis(std::size_t count) {
  DenseMatrix u(count, 1);
  for (std::size_t i = 0; i < count; ++i)
    u[i] = to_centered(static_cast<double>(i + 1) / static_cast<double>(count), count);
  return u;
}

}  // namespace inrr::models
