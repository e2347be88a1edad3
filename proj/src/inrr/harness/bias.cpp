#include "inrr/harness/bias.hpp"

#include "inrr/numerics/error.hpp"
#include "inrr/tasks/atomic_file.hpp"
#include "inrr/tasks/pgm.hpp"

namespace inrr::harness {

ExperimentConfig bias_family_config(const ExperimentConfig& base, const std::string& family) {
  ExperimentConfig c = base;
  c.task = Task::inpaint;
  c.freeze_step.reset();
  c.regularizer.objective.kind = regularizers::RegularizerKind::none;
  if (family == "dmf1" || family == "dmf3") {
    c.model.family = ModelFamily::dmf;
    c.model.dmf_factors = family == "dmf1" ? 1 : 3;
    c.model.learning_rate = base.bias.dmf_learning_rate;
  } else if (family == "relu") {
    c.model.family = ModelFamily::relu;
  } else if (family == "siren") {
    c.model.family = ModelFamily::siren;
  } else {
    throw ConfigError("unknown bias family '" + family + "'");
  }
  return c;
}

RunReport implicit_bias_study(const ExperimentConfig& base) {
  RunReport report;
  report.name = base.name;
  std::filesystem::create_directories(base.output);
  const auto dir = base.output;
  std::string summary = "family,step,effective_rank,psnr_unobserved\n";
  for (const auto& family : base.bias.families) {
    const ExperimentConfig c = bias_family_config(base, family);
    const Problem p = build_problem(c);
    TrainingHooks hooks;
    hooks.snapshot_steps = c.effective_heatmap_steps();
    hooks.snapshot_steps.insert(hooks.snapshot_steps.begin(), 0);
    hooks.on_snapshot = [&](std::size_t step, const DenseMatrix& x) {
      const auto path = dir / (family + "_step" + std::to_string(step) + ".pgm");
      tasks::save_pgm(clamp_unit(x), path);
      report.artifacts[family + "_step" + std::to_string(step)] = path;
    };
    const TrainingResult r = train(c, p, hooks);
    // The study's curve starts at the first cadence step; step 0 (the
    // initialization) is reported separately.
    const TrajectoryRow init = r.log.front();
    const TrajectoryLog curve(r.log.begin() + 1, r.log.end());
    const auto csv = dir / (family + "_trajectory.csv");
    tasks::write_file_atomic(csv, trajectory_csv(curve));
    report.artifacts[family + "_trajectory"] = csv;
    for (const auto& row : curve) {
      summary += family + "," + std::to_string(row.step) + "," + format_number(row.effective_rank) + "," +
                 format_number(row.psnr_unobserved) + "\n";
    }
    report.metrics[family + ".init_rank"] = init.effective_rank;
    report.metrics[family + ".init_psnr"] = init.psnr_unobserved;
    report.metrics[family + ".first_rank"] = curve.front().effective_rank;
    report.metrics[family + ".first_psnr"] = curve.front().psnr_unobserved;
    report.metrics[family + ".final_rank"] = curve.back().effective_rank;
    report.metrics[family + ".final_psnr"] = curve.back().psnr_unobserved;
  }
  tasks::write_file_atomic(dir / "bias.csv", summary);
  report.artifacts["summary"] = dir / "bias.csv";
  return report;
}

}  // namespace inrr::harness
