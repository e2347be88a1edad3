#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "inrr/numerics/autodiff.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::models {

/// Deep matrix factorization X = F_1 F_2 ... F_L. `dims` has L+1 entries;
/// factor i is dims[i] x dims[i+1].
struct DmfSpec {
  std::vector<std::size_t> dims;
  double init_std = 1e-2;

  /// Square factors: rows x rows, ..., rows x cols (L factors).
  static DmfSpec square(std::size_t rows, std::size_t cols, std::size_t factors, double init_std = 1e-2);
  std::size_t factor_count() const noexcept { return dims.empty() ? 0 : dims.size() - 1; }
  void validate() const;
};

/// Factors with i.i.d. N(0, init_std^2) entries.
std::vector<DenseMatrix> init_dmf(const DmfSpec& spec, std::uint64_t seed);

/// Ordered product. Throws DimensionError on non-conforming factors and
/// ContractError on an empty list.
DenseMatrix dmf_product(std::span<const DenseMatrix> factors);
ad::Var dmf_product(std::span<const ad::Var> factors);

}  // namespace inrr::models
