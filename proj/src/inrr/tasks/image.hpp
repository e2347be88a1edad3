#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "inrr/numerics/matrix.hpp"

namespace inrr::tasks {

/// Boolean observation mask; true = observed.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols, bool observed = true)
      : rows_(rows), cols_(cols), bits_(rows * cols, observed ? 1 : 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[i * cols_ + j] != 0; }
  bool operator[](std::size_t k) const noexcept { return bits_[k] != 0; }
  void set(std::size_t i, std::size_t j, bool observed) noexcept {
    bits_[i * cols_ + j] = observed ? 1 : 0;
  }
  void set(std::size_t k, bool observed) noexcept { bits_[k] = observed ? 1 : 0; }

  std::size_t observed_count() const noexcept;
  std::size_t unobserved_count() const noexcept { return size() - observed_count(); }
  /// Complement: observed becomes unobserved and vice versa.
  Mask inverted() const;
  /// 1.0 where observed, 0.0 elsewhere.
  DenseMatrix as_matrix() const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Grayscale image with values in [0,1] and its observation mask.
struct MaskedImage {
  DenseMatrix pixels;
  Mask mask;
  std::string name;

  /// Fully observed image.
  static MaskedImage observed(DenseMatrix pixels, std::string name = {});

  std::size_t rows() const noexcept { return pixels.rows(); }
  std::size_t cols() const noexcept { return pixels.cols(); }
  /// Throws ContractError when pixels leave [0,1], the mask shape differs,
  /// or nothing is observed.
  void validate() const;
};

}  // namespace inrr::tasks
