#include "inrr/harness/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "inrr/numerics/error.hpp"
#include "inrr/tasks/pgm.hpp"

namespace inrr::harness {

DenseMatrix heatmap_image(const DenseMatrix& matrix, HeatmapScale scale, bool* constant) {
  if (matrix.empty()) throw ContractError("heatmap: empty matrix");
  if (!matrix.all_finite()) throw ContractError("heatmap: matrix has non-finite entries");
  DenseMatrix v = matrix;
  if (scale == HeatmapScale::log) {
    for (double& x : v.data()) x = std::log10(std::max(std::abs(x), 1e-12));
  }
  const auto [lo, hi] = std::minmax_element(v.data().begin(), v.data().end());
  const double min = *lo, max = *hi;
  if (constant) *constant = max == min;
  if (max == min) {
    v.fill(0.5);
    return v;
  }
  for (double& x : v.data()) x = (x - min) / (max - min);
  return v;
}

bool export_heatmap(const DenseMatrix& matrix, const std::filesystem::path& path, HeatmapScale scale) {
  bool constant = false;
  const DenseMatrix img = heatmap_image(matrix, scale, &constant);
  if (constant) std::cerr << "warning: constant matrix written as uniform gray to " << path.string() << "\n";
  tasks::save_pgm(img, path);
  return !constant;
}

}  // namespace inrr::harness
