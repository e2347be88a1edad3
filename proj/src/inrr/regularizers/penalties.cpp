#include "inrr/regularizers/penalties.hpp"

#include "inrr/numerics/error.hpp"

namespace inrr::regularizers {

RegularizerKind parse_regularizer_kind(std::string_view name) {
  if (name == "none") return RegularizerKind::none;
  if (name == "tv") return RegularizerKind::tv;
  if (name == "l2") return RegularizerKind::l2;
  if (name == "air") return RegularizerKind::air;
  if (name == "inrr") return RegularizerKind::inrr;
  throw ConfigError("unknown regularizer '" + std::string(name) + "'");
}

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::none: return "none";
    case RegularizerKind::tv: return "tv";
    case RegularizerKind::l2: return "l2";
    case RegularizerKind::air: return "air";
    case RegularizerKind::inrr: return "inrr";
  }
  return "none";
}

L2Norm parse_l2_norm(std::string_view name) {
  if (name == "frobenius") return L2Norm::frobenius;
  if (name == "spectral") return L2Norm::spectral;
  throw ConfigError("unknown l2 norm '" + std::string(name) + "'");
}

std::string to_string(L2Norm norm) { return norm == L2Norm::spectral ? "spectral" : "frobenius"; }

void Objective::validate() const {
  if (lambda < 0.0 || lambda_r < 0.0 || lambda_c < 0.0) {
    throw ContractError("Objective: regularization weights must be >= 0");
  }
}

namespace {

// (count-1) x count forward-difference operator.
DenseMatrix difference_operator(std::size_t count) {
  DenseMatrix d(count - 1, count);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    d(i, i) = -1.0;
    d(i, i + 1) = 1.0;
  }
  return d;
}

}  // namespace

ad::Var tv_penalty(ad::Var grid) {
  if (grid.rows() < 2 || grid.cols() < 2) {
    throw ContractError("tv_penalty: grid " + grid.value().shape() + " smaller than 2x2");
  }
  ad::Tape& tape = grid.tape();
  ad::Var down = ad::matmul(tape.constant(difference_operator(grid.rows())), grid);
  ad::Var right = ad::matmul(grid, tape.constant(transpose(difference_operator(grid.cols()))));
  return ad::add(ad::sum(ad::abs(down)), ad::sum(ad::abs(right)));
}

double tv_penalty(const DenseMatrix& grid) {
  ad::Tape tape;
  return tv_penalty(tape.constant(grid)).scalar();
}

ad::Var l2_penalty(std::span<const ad::Var> weights, L2Norm norm) {
  if (weights.empty()) throw ContractError("l2_penalty: no weights");
  ad::Var total;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    ad::Var term = norm == L2Norm::spectral ? ad::spectral_norm(weights[l])
                                            : ad::sqrt(ad::sum(ad::square(weights[l])));
    total = l == 0 ? term : ad::add(total, term);
  }
  return total;
}

double l2_penalty(const models::ParamSet& params, L2Norm norm) {
  ad::Tape tape;
  std::vector<ad::Var> w;
  for (std::size_t l = 0; l < params.layer_count(); ++l) w.push_back(tape.constant(params.weight(l)));
  return l2_penalty(w, norm).scalar();
}

}  // namespace inrr::regularizers
