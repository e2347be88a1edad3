#include "inrr/harness/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>

#include "inrr/models/coords.hpp"
#include "inrr/models/dmf.hpp"
#include "inrr/models/inrz.hpp"
#include "inrr/models/network.hpp"
#include "inrr/numerics/adam.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"
#include "inrr/regularizers/penalties.hpp"
#include "inrr/tasks/masks.hpp"
#include "inrr/tasks/metrics.hpp"
#include "inrr/tasks/noise.hpp"
#include "inrr/tasks/pgm.hpp"
#include "inrr/tasks/synthetic.hpp"

namespace inrr::harness {

namespace {

// Stream identifiers for derive_seed(config.seed, ...).
enum SeedStream : std::uint64_t { kMask = 1, kNoise = 2, kModel = 3, kFeatures = 4, kRowGraph = 5, kColGraph = 6 };

using regularizers::RegularizerKind;

struct ImageModel {
  ModelFamily family = ModelFamily::siren;
  std::size_t rows = 0, cols = 0;
  models::NetworkSpec net;
  models::ParamSet params;
  DenseMatrix input;
  std::vector<DenseMatrix> factors;

  std::vector<DenseMatrix>& tensors() { return family == ModelFamily::dmf ? factors : params.tensors; }

  ad::Var grid(ad::Tape& tape, std::span<const ad::Var> vars) const {
    if (family == ModelFamily::dmf) return models::dmf_product(vars);
    return ad::reshape(models::forward(net, params, vars, tape.constant(input)), rows, cols);
  }

  std::vector<ad::Var> weights(std::span<const ad::Var> vars) const {
    if (family == ModelFamily::dmf) return {vars.begin(), vars.end()};
    std::vector<ad::Var> w;
    const std::size_t stride = params.bias ? 2 : 1;
    for (std::size_t l = 0; l < params.layer_count(); ++l) w.push_back(vars[l * stride]);
    return w;
  }
};

ImageModel make_model(const ExperimentConfig& c, const Problem& p) {
  ImageModel m;
  m.family = c.model.family;
  m.rows = p.target.rows();
  m.cols = p.target.cols();
  const std::uint64_t seed = derive_seed(c.seed, kModel);
  if (m.family == ModelFamily::dmf) {
    m.factors = models::init_dmf(models::DmfSpec::square(m.rows, m.cols, c.model.dmf_factors, c.model.dmf_init_std), seed);
    return m;
  }
  m.net.output_dim = 1;
  m.net.hidden.assign(c.model.hidden_layers, c.model.width);
  m.net.omega0 = c.model.omega0;
  switch (m.family) {
    case ModelFamily::siren:
      m.net.activation = models::Activation::sine;
      m.input = models::centered_grid(m.rows, m.cols);
      break;
    case ModelFamily::relu:
      m.net.activation = models::Activation::relu;
      m.input = models::centered_grid(m.rows, m.cols);
      break;
    case ModelFamily::fourier:
      m.net.activation = models::Activation::relu;
      m.net.feature_map = models::FeatureMap{c.model.features, c.model.feature_scale, derive_seed(c.seed, kFeatures)};
      m.input = models::centered_grid(m.rows, m.cols);
      break;
    case ModelFamily::inrz: {
      m.net.activation = models::Activation::sine;
      m.net.input_dim = c.model.patch * c.model.patch + 2;
      tasks::MaskedImage observed{p.target, p.observed, p.name};
      m.input = models::inrz_inputs(observed, c.model.patch);
      break;
    }
    case ModelFamily::dmf:
      break;
  }
  m.net.validate();
  m.params = models::init_network(m.net, seed);
  return m;
}

std::optional<regularizers::LaplacianPair> make_graphs(const ExperimentConfig& c, std::size_t rows, std::size_t cols) {
  const auto& reg = c.regularizer;
  const std::size_t rank = reg.rank ? reg.rank : std::max(rows, cols);
  using regularizers::AdjacencySource;
  if (reg.objective.kind == RegularizerKind::inrr) {
    const regularizers::TinyInrOptions tiny{reg.tiny_layers, reg.tiny_width, reg.tiny_omega0};
    return regularizers::LaplacianPair(AdjacencySource::tiny_inr(rows, rank, tiny, derive_seed(c.seed, kRowGraph)),
                                       AdjacencySource::tiny_inr(cols, rank, tiny, derive_seed(c.seed, kColGraph)));
  }
  if (reg.objective.kind == RegularizerKind::air) {
    return regularizers::LaplacianPair(
        AdjacencySource::free_random(rows, rank, reg.air_init_std, derive_seed(c.seed, kRowGraph)),
        AdjacencySource::free_random(cols, rank, reg.air_init_std, derive_seed(c.seed, kColGraph)));
  }
  return std::nullopt;
}

std::vector<DenseMatrix> grads_of(const std::vector<ad::Var>& vars) {
  std::vector<DenseMatrix> g;
  g.reserve(vars.size());
  for (const auto& v : vars) g.push_back(v.grad());
  return g;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

double effective_rank_or_zero(const DenseMatrix& m) {
  if (max_abs(m) == 0.0) return 0.0;
  return tasks::effective_rank(m);
}

DenseMatrix load_source_image(const ExperimentConfig& c) {
  const std::string& src = c.image.source;
  if (src == "synthetic:scene") return tasks::synthetic_scene(c.image.rows, c.image.cols);
  if (src == "synthetic:ring") return tasks::synthetic_ring(c.image.rows, c.image.cols);
  if (src.rfind("file:", 0) == 0) return tasks::load_pgm(c.resolve(src.substr(5))).pixels;
  throw ConfigError("unknown image source '" + src + "'");
}

Problem build_problem(const ExperimentConfig& c) {
  Problem p;
  p.clean = load_source_image(c);
  p.name = c.name;
  const std::size_t m = p.clean.rows(), n = p.clean.cols();
  auto spec = tasks::parse_mask_spec(c.mask);
  if (auto* f = std::get_if<tasks::FileMissing>(&spec.kind)) f->path = c.resolve(f->path);
  if (auto* mix = std::get_if<tasks::MixtureMissing>(&spec.kind)) {
    for (auto& comp : mix->components)
      if (auto* f = std::get_if<tasks::FileMissing>(&comp.kind)) f->path = c.resolve(f->path);
  }
  p.observed = tasks::gen_mask(spec, m, n, c.mask_seed.value_or(derive_seed(c.seed, kMask)));
  if (p.observed.observed_count() == 0) throw ContractError("mask leaves no observed pixels");
  p.target = c.noise == tasks::NoiseKind::none
                 ? p.clean
                 : tasks::add_noise(p.clean, tasks::NoiseSpec{c.noise, c.noise_level, derive_seed(c.seed, kNoise)});
  p.evaluated = p.observed.unobserved_count() > 0 ? p.observed.inverted() : tasks::Mask(m, n, true);
  return p;
}

TrainingResult train(const ExperimentConfig& c, const Problem& p, const TrainingHooks& hooks, DenseMatrix* last_good) {
  ImageModel model = make_model(c, p);
  auto graphs = make_graphs(c, p.target.rows(), p.target.cols());
  const auto& objective = c.regularizer.objective;
  const DenseMatrix weight = p.observed.as_matrix();
  const auto heatmaps = graphs ? c.effective_heatmap_steps() : std::vector<std::size_t>{};

  Adam net_opt(AdamOptions{c.model.learning_rate});
  Adam row_opt(AdamOptions{c.regularizer.learning_rate});
  Adam col_opt(AdamOptions{c.regularizer.learning_rate});

  TrainingResult result;
  DenseMatrix last;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t step = 0;; ++step) {
    if (graphs && c.freeze_step && step == *c.freeze_step) graphs->freeze(step);

    ad::Tape tape;
    std::vector<ad::Var> vars;
    for (const auto& t : model.tensors()) vars.push_back(tape.parameter(t));
    ad::Var x = model.grid(tape, vars);
    ad::Var residual = ad::hadamard(ad::sub(x, tape.constant(p.target)), tape.constant(weight));
    ad::Var loss = ad::sum(ad::square(residual));

    std::optional<regularizers::LaplacianPair::Bound> bound;
    std::optional<ad::Var> penalty;
    switch (objective.kind) {
      case RegularizerKind::none:
        break;
      case RegularizerKind::tv:
        penalty = ad::scale(regularizers::tv_penalty(x), objective.lambda);
        break;
      case RegularizerKind::l2: {
        const auto w = model.weights(vars);
        penalty = ad::scale(regularizers::l2_penalty(w, objective.l2_norm), objective.lambda);
        break;
      }
      case RegularizerKind::air:
      case RegularizerKind::inrr:
        bound = graphs->bind(tape);
        penalty = regularizers::inrr_penalty(bound->row_laplacian, bound->col_laplacian, x, objective.lambda_r,
                                             objective.lambda_c);
        break;
    }
    if (penalty) loss = ad::add(loss, *penalty);

    if (!std::isfinite(loss.scalar()) || !x.value().all_finite()) {
      if (last_good) *last_good = last.empty() ? x.value() : last;
      throw NumericError("non-finite loss at step " + std::to_string(step));
    }

    const bool final_step = step == c.steps;
    if (step % c.log_every == 0 || final_step) {
      const DenseMatrix& xv = x.value();
      TrajectoryRow row;
      row.step = step;
      row.observed_mse = tasks::mse(xv, p.target, &p.observed);
      row.unobserved_mse = tasks::mse(xv, p.clean, &p.evaluated);
      row.psnr_unobserved = tasks::psnr(xv, p.clean, &p.evaluated);
      row.penalty = penalty ? penalty->scalar() : 0.0;
      row.effective_rank = effective_rank_or_zero(xv);
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.log.push_back(row);
      if (hooks.on_log) hooks.on_log(row, xv);
    }
    if (bound && hooks.on_laplacian && contains(heatmaps, step)) {
      hooks.on_laplacian(step, bound->row_laplacian.value(), bound->col_laplacian.value());
    }
    if (hooks.on_snapshot && contains(hooks.snapshot_steps, step)) hooks.on_snapshot(step, x.value());
    if (final_step) {
      result.prediction = x.value();
      break;
    }

    tape.backward(loss);
    net_opt.step(model.tensors(), grads_of(vars));
    if (bound && !bound->row_tensors.empty()) {
      row_opt.step(graphs->rows().tensors(), grads_of(bound->row_tensors));
      col_opt.step(graphs->cols().tensors(), grads_of(bound->col_tensors));
    }
    last = x.value();
  }
  return result;
}

}  // namespace inrr::harness
