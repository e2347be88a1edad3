#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "inrr/numerics/matrix.hpp"
#include "inrr/tasks/image.hpp"

namespace inrr::tasks {

enum class PgmEncoding { binary, ascii };  // P5, P2

/// Parses a P2 or P5 PGM. Values are divided by maxval (1..255).
/// Throws ParseError with the byte offset of the problem.
DenseMatrix decode_pgm(std::span<const std::uint8_t> bytes);

/// Clamps to [0,1] and quantizes round-half-up to 0..255.
std::string encode_pgm(const DenseMatrix& pixels, PgmEncoding encoding = PgmEncoding::binary);

/// Quantized 0..255 value of a pixel as written by encode_pgm.
std::uint8_t quantize(double value) noexcept;

/// Reads a PGM as a fully observed image named after the file stem.
MaskedImage load_pgm(const std::filesystem::path& path);
/// Writes the pixels (the mask is not stored). Atomic: temp file + rename.
void save_pgm(const DenseMatrix& pixels, const std::filesystem::path& path,
              PgmEncoding encoding = PgmEncoding::binary);

/// Masks as PGM: 0 = unobserved, 255 = observed.
void save_mask(const Mask& mask, const std::filesystem::path& path);

}  // namespace inrr::tasks
