#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "inrr/numerics/matrix.hpp"

namespace inrr::tasks {

enum class NoiseKind { none, gaussian, salt_pepper, poisson };

/// gaussian: `level` is sigma on the 0..255 scale.
/// salt_pepper: `level` is the fraction of pixels kept (0 < r <= 1).
/// poisson: `level` is the photon scale lambda > 0.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double level = 0.0;
  std::uint64_t seed = 0;
};

NoiseKind parse_noise_kind(std::string_view name);
std::string to_string(NoiseKind kind);

/// Deterministic given spec.seed. Throws ContractError on invalid levels.
DenseMatrix add_noise(const DenseMatrix& clean, const NoiseSpec& spec);

}  // namespace inrr::tasks
