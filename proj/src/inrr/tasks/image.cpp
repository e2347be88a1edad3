#include "inrr/tasks/image.hpp"

#include <algorithm>
#include <cmath>

#include "inrr/numerics/error.hpp"

namespace inrr::tasks {

std::size_t Mask::observed_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Mask Mask::inverted() const {
  Mask out = *this;
  for (auto& b : out.bits_) b = b ? 0 : 1;
  return out;
}

DenseMatrix Mask::as_matrix() const {
  DenseMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < bits_.size(); ++k) m[k] = bits_[k] ? 1.0 : 0.0;
  return m;
}

MaskedImage MaskedImage::observed(DenseMatrix pixels, std::string name) {
  Mask mask(pixels.rows(), pixels.cols(), true);
  return MaskedImage{std::move(pixels), std::move(mask), std::move(name)};
}

void MaskedImage::validate() const {
  if (mask.rows() != pixels.rows() || mask.cols() != pixels.cols()) {
    throw ContractError("MaskedImage '" + name + "': mask " + std::to_string(mask.rows()) + "x" +
                        std::to_string(mask.cols()) + " does not match image " + pixels.shape());
  }
  for (double v : pixels.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ContractError("MaskedImage '" + name + "': pixel value " + std::to_string(v) +
                          " outside [0,1]");
    }
  }
  if (mask.observed_count() == 0) {
    throw ContractError("MaskedImage '" + name + "': no observed pixels");
  }
}

}  // namespace inrr::tasks
