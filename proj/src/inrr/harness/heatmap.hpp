#pragma once

#include <filesystem>

#include "inrr/harness/config.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::harness {

/// Min-max normalized grayscale image of a matrix. The log scale maps
/// |entries| (floored at 1e-12) through log10 first. `constant` is set when
/// every value coincides; the image is then uniform mid-gray.
DenseMatrix heatmap_image(const DenseMatrix& matrix, HeatmapScale scale, bool* constant = nullptr);

/// Writes heatmap_image as PGM. Returns false (and logs a warning to
/// stderr) for a constant matrix. Throws ContractError on non-finite input.
bool export_heatmap(const DenseMatrix& matrix, const std::filesystem::path& path,
                    HeatmapScale scale = HeatmapScale::linear);

}  // namespace inrr::harness
