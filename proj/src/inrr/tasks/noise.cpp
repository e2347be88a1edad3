#include "inrr/tasks/noise.hpp"

#include <algorithm>
#include <random>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"

namespace inrr::tasks {

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "none") return NoiseKind::none;
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "salt_pepper") return NoiseKind::salt_pepper;
  if (name == "poisson") return NoiseKind::poisson;
  throw ConfigError("unknown noise kind '" + std::string(name) + "'");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::salt_pepper: return "salt_pepper";
    case NoiseKind::poisson: return "poisson";
  }
  return "none";
}

DenseMatrix add_noise(const DenseMatrix& clean, const NoiseSpec& spec) {
  DenseMatrix out = clean;
  Rng rng(spec.seed);
  switch (spec.kind) {
    case NoiseKind::none:
      break;
    case NoiseKind::gaussian: {
      if (spec.level < 0.0) throw ContractError("add_noise: gaussian sigma must be >= 0");
      if (spec.level == 0.0) break;
      std::normal_distribution<double> n(0.0, spec.level / 255.0);
      for (double& v : out.data()) v = std::clamp(v + n(rng), 0.0, 1.0);
      break;
    }
    case NoiseKind::salt_pepper: {
      if (!(spec.level > 0.0 && spec.level <= 1.0)) {
        throw ContractError("add_noise: salt & pepper kept fraction must be in (0,1]");
      }
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& v : out.data()) {
        if (u(rng) < spec.level) continue;
        v = u(rng) < 0.5 ? 0.0 : 1.0;
      }
      break;
    }
    case NoiseKind::poisson: {
      if (!(spec.level > 0.0)) throw ContractError("add_noise: poisson lambda must be > 0");
      for (double& v : out.data()) {
        const double mean = spec.level * std::max(v, 0.0);
        if (mean == 0.0) continue;  // poisson_distribution needs a positive mean
        std::poisson_distribution<long> p(mean);
        v = std::clamp(static_cast<double>(p(rng)) / spec.level, 0.0, 1.0);
      }
      break;
    }
  }
  return out;
}

}  // namespace inrr::tasks
