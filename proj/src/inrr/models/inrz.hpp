#pragma once

#include <cstddef>

#include "inrr/models/network.hpp"
#include "inrr/tasks/image.hpp"

namespace inrr::models {

/// Input row for pixel (i, j): the centered coordinate followed by the
/// patch x patch neighbourhood in row-major order. Unobserved and
/// out-of-bounds neighbours contribute 0.
std::vector<double> inrz_input(const tasks::MaskedImage& image, std::size_t i, std::size_t j,
                               std::size_t patch = 3);

/// All pixels, (m*n) x (patch^2 + 2).
DenseMatrix inrz_inputs(const tasks::MaskedImage& image, std::size_t patch = 3);

/// h(x, y, N(x, y)) at pixel (i, j). Throws ContractError when the network's
/// input width is not patch^2 + 2.
double inrz_forward(const NetworkSpec& spec, const ParamSet& params,
                    const tasks::MaskedImage& image, std::size_t i, std::size_t j,
                    std::size_t patch = 3);

}  // namespace inrr::models
