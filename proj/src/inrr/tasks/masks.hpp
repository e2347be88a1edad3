#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inrr/tasks/image.hpp"

namespace inrr::tasks {

/// Half-open pixel rectangle [row_begin, row_end) x [col_begin, col_end).
struct Rect {
  std::size_t row_begin = 0, row_end = 0, col_begin = 0, col_end = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Each pixel missing independently with probability `missing_rate`.
struct RandomMissing {
  double missing_rate = 0.5;
};
/// Listed rectangles are missing.
struct PatchMissing {
  std::vector<Rect> rects;
};
/// Pixels darker than 0.5 in a PGM are missing; realizes textural occlusion.
struct FileMissing {
  std::filesystem::path path;
};

struct MaskSpec;
/// Union of the components' missing sets.
struct MixtureMissing {
  std::vector<MaskSpec> components;
};

struct MaskSpec {
  std::variant<RandomMissing, PatchMissing, FileMissing, MixtureMissing> kind;
};

/// Parses the textual mask grammar:
///   none | random:<p> | patch:<r0>-<r1>x<c0>-<c1>[,...] | file:<path>
/// and mixtures of those joined by '+'. Throws ConfigError.
MaskSpec parse_mask_spec(std::string_view text);
std::string to_string(const MaskSpec& spec);

/// Deterministic given seed. Throws ContractError for out-of-range rates or
/// rectangles, ParseError/ContractError for unreadable or mis-shaped files.
Mask gen_mask(const MaskSpec& spec, std::size_t rows, std::size_t cols, std::uint64_t seed);

}  // namespace inrr::tasks
