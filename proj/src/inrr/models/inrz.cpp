#include "inrr/models/inrz.hpp"

#include "inrr/models/coords.hpp"
#include "inrr/numerics/error.hpp"

namespace inrr::models {

std::vector<double> inrz_input(const tasks::MaskedImage& image, std::size_t i, std::size_t j,
                               std::size_t patch) {
  if (patch % 2 == 0) throw ContractError("inrz: patch size must be odd");
  const std::size_t m = image.rows(), n = image.cols();
  std::vector<double> row;
  row.reserve(patch * patch + 2);
  row.push_back(to_centered(static_cast<double>(i + 1) / static_cast<double>(m), m));
  row.push_back(to_centered(static_cast<double>(j + 1) / static_cast<double>(n), n));
  const auto half = static_cast<std::ptrdiff_t>(patch / 2);
  for (std::ptrdiff_t di = -half; di <= half; ++di) {
    for (std::ptrdiff_t dj = -half; dj <= half; ++dj) {
      const auto r = static_cast<std::ptrdiff_t>(i) + di, c = static_cast<std::ptrdiff_t>(j) + dj;
      double v = 0.0;
      if (r >= 0 && c >= 0 && r < static_cast<std::ptrdiff_t>(m) && c < static_cast<std::ptrdiff_t>(n) &&
          image.mask(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) {
        v = image.pixels(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      }
      row.push_back(v);
    }
  }
  return row;
}

DenseMatrix inrz_inputs(const tasks::MaskedImage& image, std::size_t patch) {
  const std::size_t width = patch * patch + 2;
  DenseMatrix x(image.rows() * image.cols(), width);
  for (std::size_t i = 0; i < image.rows(); ++i)
    for (std::size_t j = 0; j < image.cols(); ++j) {
      const auto row = inrz_input(image, i, j, patch);
      std::copy(row.begin(), row.end(), x.row_span(i * image.cols() + j).begin());
    }
  return x;
}

double inrz_forward(const NetworkSpec& spec, const ParamSet& params,
                    const tasks::MaskedImage& image, std::size_t i, std::size_t j,
                    std::size_t patch) {
  if (spec.input_dim != patch * patch + 2) {
    throw ContractError("inrz_forward: network input width " + std::to_string(spec.input_dim) +
                        " does not match N0 + 2 = " + std::to_string(patch * patch + 2));
  }
  const auto row = inrz_input(image, i, j, patch);
  return forward(spec, params, DenseMatrix::row(row))[0];
}

}  // namespace inrr::models
