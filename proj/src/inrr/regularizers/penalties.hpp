#pragma once

#include <span>
#include <string>
#include <string_view>

#include "inrr/models/network.hpp"
#include "inrr/numerics/autodiff.hpp"
#include "inrr/numerics/matrix.hpp"

namespace inrr::regularizers {

enum class RegularizerKind { none, tv, l2, air, inrr };
enum class L2Norm { frobenius, spectral };

RegularizerKind parse_regularizer_kind(std::string_view name);
std::string to_string(RegularizerKind kind);
L2Norm parse_l2_norm(std::string_view name);
std::string to_string(L2Norm norm);

/// Weights of the regularized objective L + penalty. `lambda` scales TV and
/// L2; lambda_r / lambda_c scale the row and column Dirichlet terms.
struct Objective {
  RegularizerKind kind = RegularizerKind::none;
  double lambda = 1e-2;
  double lambda_r = 1e-2;
  double lambda_c = 1e-2;
  L2Norm l2_norm = L2Norm::frobenius;

  /// Throws ContractError on negative weights.
  void validate() const;
};

/// Anisotropic TV: sum of |forward differences| along rows and columns.
ad::Var tv_penalty(ad::Var grid);
double tv_penalty(const DenseMatrix& grid);

/// Sum over layers of the norm of W_l (biases excluded).
ad::Var l2_penalty(std::span<const ad::Var> weights, L2Norm norm = L2Norm::frobenius);
double l2_penalty(const models::ParamSet& params, L2Norm norm = L2Norm::frobenius);

}  // namespace inrr::regularizers
