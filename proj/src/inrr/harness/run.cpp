#include "inrr/harness/run.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "inrr/harness/bias.hpp"
#include "inrr/harness/heatmap.hpp"
#include "inrr/harness/sweep.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/tasks/atomic_file.hpp"
#include "inrr/tasks/metrics.hpp"
#include "inrr/tasks/pgm.hpp"

namespace inrr::harness {

std::string trajectory_csv(const TrajectoryLog& log) {
  std::string out = "step,observed_mse,unobserved_mse,psnr_unobserved,penalty,effective_rank\n";
  for (const auto& r : log) {
    out += std::to_string(r.step) + "," + format_number(r.observed_mse) + "," + format_number(r.unobserved_mse) +
           "," + format_number(r.psnr_unobserved) + "," + format_number(r.penalty) + "," +
           format_number(r.effective_rank) + "\n";
  }
  return out;
}

std::string timing_csv(const TrajectoryLog& log) {
  std::string out = "step,wall_seconds\n";
  for (const auto& r : log) out += std::to_string(r.step) + "," + format_number(r.wall_seconds) + "\n";
  return out;
}

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("git_blob_hash: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("git_blob_hash: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

DenseMatrix clamp_unit(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

DenseMatrix residual_image(const DenseMatrix& prediction, const DenseMatrix& clean) {
  require_same_shape(prediction, clean, "residual_image");
  DenseMatrix out = clamp_unit(prediction);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(out[k] - clean[k]);
  return out;
}

namespace {

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string manifest_text(const ExperimentConfig& c, const Problem& p, const RunReport& report) {
  std::ostringstream o;
  o << "# run manifest\n"
    << "name = " << c.name << "\n"
    << "task = " << to_string(c.task) << "\n\n"
    << "[inputs]\n";
  const std::string config_text = format_config(c);
  o << "config " << git_blob_hash(config_text) << "\n";
  if (c.image.source.rfind("file:", 0) == 0) {
    o << "image " << git_blob_hash(read_bytes(c.resolve(c.image.source.substr(5)))) << " "
      << c.image.source << "\n";
  } else {
    o << "image " << git_blob_hash(tasks::encode_pgm(p.clean)) << " " << c.image.source << "\n";
  }
  std::string mask_bits(p.observed.size(), '0');
  for (std::size_t k = 0; k < p.observed.size(); ++k)
    if (p.observed[k]) mask_bits[k] = '1';
  o << "mask " << git_blob_hash(mask_bits) << " " << c.mask << "\n\n"
    << "[outputs]\n";
  for (const auto& [role, path] : report.artifacts) {
    o << role << " " << git_blob_hash(read_bytes(path)) << " " << path.filename().string() << "\n";
  }
  o << "\n[metrics]\n";
  for (const auto& [key, value] : report.metrics) o << key << " = " << format_number(value) << "\n";
  o << "\n[resolved config]\n" << config_text;
  return o.str();
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& c) {
  if (c.task != Task::inpaint && c.task != Task::denoise && c.task != Task::fit) {
    throw ConfigError("run_experiment: task " + to_string(c.task) + " is not an image task");
  }
  const Problem p = build_problem(c);
  const auto dir = c.output;
  std::filesystem::create_directories(dir);

  RunReport report;
  report.name = c.name;
  TrainingHooks hooks;
  hooks.on_laplacian = [&](std::size_t step, const DenseMatrix& rows, const DenseMatrix& cols) {
    const auto tag = std::to_string(step);
    const auto rp = dir / ("laplacian_rows_step" + tag + ".pgm");
    const auto cp = dir / ("laplacian_cols_step" + tag + ".pgm");
    export_heatmap(rows, rp, c.heatmap_scale);
    export_heatmap(cols, cp, c.heatmap_scale);
    report.artifacts["laplacian_rows_step" + tag] = rp;
    report.artifacts["laplacian_cols_step" + tag] = cp;
  };

  TrainingResult result;
  DenseMatrix last_good;
  try {
    result = train(c, p, hooks, &last_good);
  } catch (const NumericError&) {
    if (!last_good.empty()) tasks::save_pgm(clamp_unit(last_good), dir / "checkpoint.pgm");
    throw;
  }
  report.log = result.log;

  DenseMatrix observed = p.target;
  for (std::size_t k = 0; k < observed.size(); ++k)
    if (!p.observed[k]) observed[k] = 0.0;

  const auto save = [&](const std::string& role, const std::filesystem::path& path) { report.artifacts[role] = path; };
  tasks::save_pgm(clamp_unit(result.prediction), dir / "recovered.pgm");
  save("recovered", dir / "recovered.pgm");
  tasks::save_pgm(residual_image(result.prediction, p.clean), dir / "residual.pgm");
  save("residual", dir / "residual.pgm");
  tasks::save_pgm(observed, dir / "observed.pgm");
  save("observed", dir / "observed.pgm");
  tasks::save_mask(p.observed, dir / "mask.pgm");
  save("mask", dir / "mask.pgm");
  tasks::write_file_atomic(dir / "trajectory.csv", trajectory_csv(result.log));
  save("trajectory", dir / "trajectory.csv");
  tasks::write_file_atomic(dir / "timing.csv", timing_csv(result.log));
  save("timing", dir / "timing.csv");

  const TrajectoryRow& last = result.log.back();
  report.metrics["steps"] = static_cast<double>(last.step);
  report.metrics["observed_mse"] = last.observed_mse;
  report.metrics["unobserved_mse"] = last.unobserved_mse;
  report.metrics["psnr_unobserved"] = last.psnr_unobserved;
  report.metrics["psnr_all"] = tasks::psnr(result.prediction, p.clean);
  report.metrics["penalty"] = last.penalty;
  report.metrics["effective_rank"] = last.effective_rank;
  report.metrics["wall_seconds"] = last.wall_seconds;

  const auto manifest = dir / "manifest.txt";
  tasks::write_file_atomic(manifest, manifest_text(c, p, report));
  report.artifacts["manifest"] = manifest;
  return report;
}

RunReport run_task(const ExperimentConfig& c) {
  switch (c.task) {
    case Task::ntk_sweep: return ntk_sweep(c);
    case Task::implicit_bias: return implicit_bias_study(c);
    default: return run_experiment(c);
  }
}

}  // namespace inrr::harness
