#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "inrr/harness/bias.hpp"
#include "inrr/harness/config.hpp"
#include "inrr/harness/heatmap.hpp"
#include "inrr/harness/run.hpp"
#include "inrr/harness/sweep.hpp"
#include "inrr/harness/trainer.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/regularizers/laplacian.hpp"
#include "inrr/tasks/metrics.hpp"
#include "inrr/tasks/pgm.hpp"

using namespace inrr;
using namespace inrr::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / "inrr_unit_harness" / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A small inpainting setup that trains in well under a second.
using Overrides = std::vector<std::pair<std::string, std::string>>;

ExperimentConfig small_config(const std::string& name, const Overrides& extra = {}) {
  const std::string text = "[experiment]\nname = " + name + "\nsteps = 40\nlog_every = 10\n" +
                           "output = " + scratch(name).string() + "\n" +
                           "[image]\nsize = 16\n[mask]\npattern = patch:4-10x4-10\n"
                           "[model]\nhidden_layers = 2\nwidth = 16\nlearning_rate = 1e-3\n"
                           "[regularizer]\ntiny_layers = 2\ntiny_width = 8\nlearning_rate = 1e-3\n";
  auto doc = ConfigDocument::parse(text);
  for (const auto& [k, v] : extra) doc.set(k, v);
  return doc.resolve();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parse and round trip") {
  const auto doc = ConfigDocument::parse(
      "# comment\n[experiment]\ntask = inpaint\nname = demo\nseed = 7\nfreeze_step = 5\n"
      "heatmap_steps = 1, 5\n[image]\nsize = 24\n[model]\nfamily = fourier\nfeature_scale = 2.5\n"
      "[regularizer]\nkind = inrr\nlambda_r = 0.3\n");
  const auto c = doc.resolve();
  CHECK(c.name == "demo");
  CHECK(c.seed == 7);
  CHECK(c.freeze_step == 5u);
  CHECK(c.image.rows == 24);
  CHECK(c.image.cols == 24);
  CHECK(c.model.family == ModelFamily::fourier);
  CHECK(c.model.feature_scale == 2.5);
  CHECK(c.regularizer.objective.lambda_r == 0.3);
  CHECK(c.heatmap_steps == std::vector<std::size_t>{1, 5});
  CHECK(c.output == std::filesystem::path("runs/demo"));
  const std::string text = format_config(c);
  const auto again = ConfigDocument::parse(text).resolve();
  CHECK(format_config(again) == text);
  CHECK(doc.get("image.size") == std::optional<std::string>("24"));
  CHECK_FALSE(doc.get("model.width").has_value());
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(ConfigDocument::parse("[model]\ndepth = 3\n"), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[optimizer]\nlr = 3\n"), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[model]\nwidth = -4\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[model]\nfamily = transformer\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[experiment]\nsteps = 0\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[mask]\npattern = blob\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[experiment]\ntask = denoise\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[image]\nsource = file:missing.pgm\n").resolve(), ConfigError);
  CHECK_THROWS_AS(ConfigDocument::parse("[experiment]\nsteps = 10\nfreeze_step = 20\n"
                                        "[regularizer]\nkind = inrr\n").resolve(), ConfigError);
  auto doc = ConfigDocument::parse("");
  CHECK_THROWS_AS(doc.set("model.depth", "3"), ConfigError);
  doc.set("model.width", "12");
  CHECK(doc.resolve().model.width == 12);
  CHECK_THROWS_AS(load_config("/nonexistent/inrr.ini"), ConfigError);
}

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1e-4)) == 1e-4);
  CHECK(format_number(64.0) == "64");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("heatmaps") {
  const auto id = heatmap_image(DenseMatrix::identity(4), HeatmapScale::linear);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

  const DenseMatrix m{{0.3, -2.0, 5.0}, {1.0, 0.0, 4.5}};
  const auto dir = scratch("heatmap");
  CHECK(export_heatmap(m, dir / "m.pgm"));
  const auto back = tasks::load_pgm(dir / "m.pgm").pixels;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b)
      if (m[a] < m[b]) CHECK(back[a] <= back[b]);

  const auto lap = regularizers::build_laplacian(DenseMatrix(5, 5, 1.0 / 25.0));
  const auto img = heatmap_image(lap, HeatmapScale::linear);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) CHECK(img(i, j) == img(0, 1));
  CHECK(img(0, 1) == 0.0);
  CHECK(img(0, 0) == 1.0);

  bool constant = false;
  const auto flat = heatmap_image(DenseMatrix(3, 3, 2.0), HeatmapScale::log, &constant);
  CHECK(constant);
  CHECK(flat(1, 1) == 0.5);
  CHECK_FALSE(export_heatmap(DenseMatrix(3, 3, 2.0), dir / "flat.pgm"));
  CHECK(std::filesystem::exists(dir / "flat.pgm"));
}

TEST_CASE("problem construction") {
  auto c = small_config("problem");
  const auto p = build_problem(c);
  CHECK(p.observed.unobserved_count() == 36);
  CHECK(p.evaluated == p.observed.inverted());
  CHECK(p.target == p.clean);
  auto n = small_config("noisy", {{"noise.kind", "gaussian"}, {"noise.level", "25"}, {"experiment.task", "denoise"}});
  n.mask = "none";
  const auto q = build_problem(n);
  CHECK_FALSE(q.target == q.clean);
  CHECK(q.evaluated.observed_count() == q.evaluated.size());
}

TEST_CASE("run artifacts, residuals and determinism") {
  auto c = small_config("det", {{"regularizer.kind", "inrr"}, {"regularizer.lambda_r", "1"}, {"regularizer.lambda_c", "1"}});
  const auto r1 = run_experiment(c);
  const auto csv1 = slurp(c.output / "trajectory.csv");
  CHECK(csv1.rfind("step,observed_mse,unobserved_mse,psnr_unobserved,penalty,effective_rank\n", 0) == 0);
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 6);  // header + steps 0,10,20,30,40
  for (const char* f : {"recovered.pgm", "residual.pgm", "observed.pgm", "mask.pgm", "manifest.txt", "timing.csv"})
    CHECK(std::filesystem::exists(c.output / f));
  CHECK(r1.log.size() == 5);
  CHECK(r1.log.back().step == 40);
  CHECK(r1.metrics.at("steps") == 40.0);

  const auto recovered = tasks::load_pgm(c.output / "recovered.pgm").pixels;
  const auto residual = tasks::load_pgm(c.output / "residual.pgm").pixels;
  const auto clean = build_problem(c).clean;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    const double expected = std::abs(std::clamp(recovered[k], 0.0, 1.0) - clean[k]);
    CHECK(std::abs(residual[k] - expected) <= 2.0 / 255.0 + 1e-12);
  }
  CHECK(max_abs_diff(residual_image(DenseMatrix{{1.4, 0.2}}, DenseMatrix{{0.5, 0.5}}), DenseMatrix{{0.5, 0.3}}) < 1e-15);

  c.output = scratch("det2");
  const auto r2 = run_experiment(c);
  CHECK(slurp(c.output / "trajectory.csv") == csv1);
  CHECK(r2.metrics.at("unobserved_mse") == r1.metrics.at("unobserved_mse"));
  CHECK(trajectory_csv(r2.log) == csv1);
}

TEST_CASE("each family and regularizer trains") {
  for (const char* family : {"siren", "relu", "fourier", "inrz", "dmf"}) {
    for (const char* reg : {"none", "tv", "l2", "air", "inrr"}) {
      CAPTURE(family);
      CAPTURE(reg);
      auto c = small_config(std::string(family) + "_" + reg,
                            {{"model.family", family}, {"model.features", "16"}, {"regularizer.kind", reg}});
      c.steps = 5;
      c.log_every = 5;
      const auto r = run_experiment(c);
      CHECK(std::isfinite(r.metrics.at("observed_mse")));
      CHECK(r.log.size() == 2);
    }
  }
}

TEST_CASE("freeze keeps the laplacian fixed") {
  auto c = small_config("freeze", {{"regularizer.kind", "inrr"}, {"experiment.freeze_step", "10"}});
  std::vector<DenseMatrix> rows;
  TrainingHooks hooks;
  hooks.on_laplacian = [&](std::size_t, const DenseMatrix& r, const DenseMatrix&) { rows.push_back(r); };
  c.heatmap_steps = {5, 20, 40};
  hooks.snapshot_steps = {};
  const auto p = build_problem(c);
  train(c, p, hooks);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0] == rows[1]);
  CHECK(rows[1] == rows[2]);
}

TEST_CASE("fit task improves on the observed image") {
  auto c = small_config("fit", {{"experiment.task", "fit"}});
  c.mask = "none";
  c.steps = 200;
  c.log_every = 50;
  const auto r = run_task(c);
  CHECK(r.log.back().observed_mse < r.log.front().observed_mse);
}

TEST_CASE("kernel inpainting collapse") {
  auto c = small_config("collapse");
  c.image.rows = c.image.cols = 12;
  c.mask = "random:0.5";
  const auto p = build_problem(c);
  const auto out = kernel_inpaint(p, 1e5, [](double t) { return 1.0 + t; });
  double first = std::nan("");
  for (std::size_t k = 0; k < p.evaluated.size(); ++k) {
    if (!p.evaluated[k]) continue;
    if (std::isnan(first)) first = out.prediction[k];
    CHECK(std::abs(out.prediction[k] - first) < 1e-6);
  }
}

TEST_CASE("delta sweep prefers smoother kernels for sparser samples") {
  auto c = ConfigDocument::parse("[experiment]\ntask = ntk_sweep\nname = dsweep\noutput = " +
                                 scratch("dsweep").string() +
                                 "\n[image]\nsize = 32\n[sweep]\nvalues = 1, 2, 4, 8, 16, 32\n"
                                 "missing_rates = 0.3, 0.8\nprofile_nodes = 21\nprofile_samples = 50\n")
               .resolve();
  const auto r = ntk_sweep(c);
  CHECK(r.metrics.at("failed_cells") == 0.0);
  CHECK(r.metrics.at("best_delta@0.3") >= r.metrics.at("best_delta@0.8"));
  CHECK(std::filesystem::exists(c.output / "sweep.csv"));
  CHECK(std::filesystem::exists(c.output / "profile.csv"));
}

TEST_CASE("one-cell sweep equals a direct run") {
  auto c = small_config("cell", {{"experiment.task", "ntk_sweep"}, {"sweep.parameter", "omega0"}, {"sweep.values", "20"}, {"sweep.missing_rates", "0.5"}});
  c.steps = 20;
  const auto cells = sweep_cells(c);
  REQUIRE(cells.size() == 1);
  auto direct = sweep_cell_config(c, 20.0, 0.5);
  direct.output = scratch("cell_direct");
  CHECK(direct.model.omega0 == 20.0);
  CHECK(cells[0].psnr_unobserved == run_experiment(direct).metrics.at("psnr_unobserved"));
}

TEST_CASE("bias study") {
  auto c = small_config("bias", {{"experiment.task", "implicit_bias"}, {"bias.families", "dmf1, dmf3"}});
  c.steps = 30;
  const auto r = implicit_bias_study(c);
  CHECK(r.metrics.count("dmf3.final_rank") == 1);
  CHECK(std::filesystem::exists(c.output / "dmf3_trajectory.csv"));
  CHECK(std::filesystem::exists(c.output / "bias.csv"));
  CHECK(bias_family_config(c, "dmf1").model.dmf_factors == 1);
  CHECK(bias_family_config(c, "relu").regularizer.objective.kind == regularizers::RegularizerKind::none);

  // zero factors never move: the rank stays at the zero-matrix sentinel
  auto z = bias_family_config(c, "dmf3");
  z.model.dmf_init_std = 0.0;
  const auto res = train(z, build_problem(z));
  for (const auto& row : res.log) CHECK(row.effective_rank == 0.0);
  CHECK(effective_rank_or_zero(DenseMatrix(3, 3)) == 0.0);
}

TEST_CASE("numeric blow-up is reported") {
  auto c = small_config("blowup", {{"model.learning_rate", "1e300"}, {"model.family", "dmf"}, {"model.dmf_init_std", "1"}});
  c.steps = 20;
  CHECK_THROWS_AS(run_experiment(c), NumericError);
  CHECK(std::filesystem::exists(c.output / "checkpoint.pgm"));
}

}

TEST_SUITE("harness") {

TEST_CASE("every shipped config resolves") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(INRR_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path());
    CHECK(c.name == entry.path().stem().string());
    CHECK(ConfigDocument::parse(format_config(c)).resolve().name == c.name);
    ++count;
  }
  CHECK(count >= 10);
}

}
