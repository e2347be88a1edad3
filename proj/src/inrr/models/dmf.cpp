#include "inrr/models/dmf.hpp"

#include <random>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::models {

DmfSpec DmfSpec::square(std::size_t rows, std::size_t cols, std::size_t factors, double init_std) {
  DmfSpec s;
  s.init_std = init_std;
  s.dims.assign(factors, rows);
  s.dims.push_back(cols);
  return s;
}

void DmfSpec::validate() const {
  if (dims.size() < 2) throw ContractError("DmfSpec: need at least one factor");
  for (auto d : dims)
    if (d == 0) throw ContractError("DmfSpec: zero factor dimension");
  if (init_std < 0.0) throw ContractError("DmfSpec: negative init scale");
}

std::vector<DenseMatrix> init_dmf(const DmfSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DenseMatrix> factors;
  for (std::size_t i = 0; i + 1 < spec.dims.size(); ++i) {
    DenseMatrix f(spec.dims[i], spec.dims[i + 1]);
    for (double& v : f.data()) v = spec.init_std * normal(rng);
    factors.push_back(std::move(f));
  }
  return factors;
}

DenseMatrix dmf_product(std::span<const DenseMatrix> factors) {
  if (factors.empty()) throw ContractError("dmf_product: no factors");
  DenseMatrix x = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) x = matmul(x, factors[i]);
  return x;
}

ad::Var dmf_product(std::span<const ad::Var> factors) {
  if (factors.empty()) throw ContractError("dmf_product: no factors");
  ad::Var x = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) x = ad::matmul(x, factors[i]);
  return x;
}

}  // namespace inrr::models
