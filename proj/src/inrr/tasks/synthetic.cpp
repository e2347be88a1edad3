#include "inrr/tasks/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "inrr/numerics/error.hpp"

namespace inrr::tasks {

double ring_value(double x, double y) noexcept {
  using std::numbers::pi;
  return std::sin(25.0 * pi * std::sin(pi / 3.0 * std::sqrt(x * x + y * y)));
}

DenseMatrix synthetic_ring_raw(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) throw ContractError("synthetic_ring: need at least a 2x2 grid");
  DenseMatrix s(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double y = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(rows - 1);
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(cols - 1);
      s(i, j) = ring_value(x, y);
    }
  }
  return s;
}

DenseMatrix synthetic_ring(std::size_t rows, std::size_t cols) {
  DenseMatrix s = synthetic_ring_raw(rows, cols);
  for (double& v : s.data()) v = std::clamp((v + 1.0) / 2.0, 0.0, 1.0);
  return s;
}

DenseMatrix synthetic_scene(std::size_t rows, std::size_t cols) {
  using std::numbers::pi;
  if (rows < 2 || cols < 2) throw ContractError("synthetic_scene: need at least a 2x2 grid");
  DenseMatrix img(rows, cols);
  auto smooth = [](double e0, double e1, double x) {
    const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };
  for (std::size_t i = 0; i < rows; ++i) {
    const double v = (static_cast<double>(i) + 0.5) / static_cast<double>(rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(cols);
      double p = 0.30 + 0.25 * u + 0.10 * v;
      // Periodic bars fading out towards the bottom.
      p += 0.15 * std::sin(2.0 * pi * 5.0 * u) * (1.0 - smooth(0.45, 0.75, v));
      // Disk.
      const double r = std::hypot(u - 0.32, v - 0.68);
      p += 0.25 * (1.0 - smooth(0.13, 0.17, r));
      // Blocky texture in the lower right.
      const double block = std::sin(2.0 * pi * 4.0 * u) * std::sin(2.0 * pi * 4.0 * v);
      p += 0.10 * (block > 0.0 ? 1.0 : -1.0) * smooth(0.55, 0.65, u) * smooth(0.6, 0.7, v);
      img(i, j) = std::clamp(p, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace inrr::tasks
