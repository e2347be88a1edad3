#include "inrr/harness/sweep.hpp"

#include <cmath>
#include <limits>

#include "inrr/models/coords.hpp"
#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"
#include "inrr/tasks/atomic_file.hpp"
#include "inrr/tasks/metrics.hpp"

namespace inrr::harness {

namespace {
constexpr std::uint64_t kProfileStream = 7;
}

KernelInpainting kernel_inpaint(const Problem& p, double delta, const ntk::Profile& h) {
  const std::size_t m = p.target.rows(), n = p.target.cols();
  const DenseMatrix grid = models::centered_grid(m, n);
  const std::size_t count = p.observed.observed_count();
  DenseMatrix points(count, 2);
  std::vector<double> z;
  z.reserve(count);
  for (std::size_t k = 0, row = 0; k < m * n; ++k) {
    if (!p.observed[k]) continue;
    points(row, 0) = grid(k, 0);
    points(row, 1) = grid(k, 1);
    z.push_back(p.target[k]);
    ++row;
  }
  const ntk::KernelMatrix km = ntk::gaussian_limit_kernel(points, delta, h, true);
  const ntk::KernelRegressor reg(km.k, z);
  KernelInpainting out;
  out.prediction = DenseMatrix(m, n);
  for (std::size_t k = 0, row = 0; k < m * n; ++k) {
    if (p.observed[k]) {
      out.prediction[k] = reg.predict(km.k.row_span(row));
      ++row;
    } else {
      out.prediction[k] = reg.predict(km.row(grid.row_span(k)));
    }
  }
  out.psnr_unobserved = tasks::psnr(out.prediction, p.clean, &p.evaluated);
  out.condition_estimate = reg.condition_estimate();
  out.ridge_applied = reg.ridge_applied();
  return out;
}

ntk::KernelProfile sweep_profile(const ExperimentConfig& c) {
  models::NetworkSpec spec;
  spec.input_dim = 2;
  spec.output_dim = 1;
  spec.activation = models::Activation::relu;
  spec.hidden.assign(c.sweep.profile_layers, c.sweep.profile_width);
  return ntk::fit_profile(spec, c.sweep.profile_nodes, c.sweep.profile_samples, derive_seed(c.seed, kProfileStream));
}

ExperimentConfig sweep_cell_config(const ExperimentConfig& base, double value, double missing_rate) {
  ExperimentConfig c = base;
  c.task = Task::inpaint;
  c.mask = missing_rate > 0.0 ? "random:" + format_number(missing_rate) : "none";
  if (c.sweep.parameter == SweepParameter::omega0) {
    c.model.family = ModelFamily::siren;
    c.model.omega0 = value;
  }
  return c;
}

std::vector<SweepCell> sweep_cells(const ExperimentConfig& c) {
  std::optional<ntk::KernelProfile> profile;
  if (c.sweep.parameter == SweepParameter::delta) profile = sweep_profile(c);
  std::vector<SweepCell> cells;
  for (double rate : c.sweep.missing_rates) {
    for (double value : c.sweep.values) {
      SweepCell cell;
      cell.value = value;
      cell.missing_rate = rate;
      try {
        const ExperimentConfig cc = sweep_cell_config(c, value, rate);
        const Problem p = build_problem(cc);
        if (profile) {
          cell.psnr_unobserved = kernel_inpaint(p, value, *profile).psnr_unobserved;
        } else {
          cell.psnr_unobserved = train(cc, p).log.back().psnr_unobserved;
        }
      } catch (const Error& e) {
        cell.psnr_unobserved = std::numeric_limits<double>::quiet_NaN();
        cell.status = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

RunReport ntk_sweep(const ExperimentConfig& c) {
  RunReport report;
  report.name = c.name;
  std::filesystem::create_directories(c.output);
  const std::string parameter = c.sweep.parameter == SweepParameter::delta ? "delta" : "omega0";

  if (c.sweep.parameter == SweepParameter::delta) {
    const ntk::KernelProfile profile = sweep_profile(c);
    std::string csv = "inner_product,h\n";
    for (std::size_t i = 0; i < profile.nodes().size(); ++i) {
      csv += format_number(profile.nodes()[i]) + "," + format_number(profile.values()[i]) + "\n";
    }
    tasks::write_file_atomic(c.output / "profile.csv", csv);
    report.artifacts["profile"] = c.output / "profile.csv";
  }

  const auto cells = sweep_cells(c);
  std::string csv = "parameter,value,missing_rate,psnr_unobserved,status\n";
  std::size_t failed = 0;
  for (const auto& cell : cells) {
    std::string status = cell.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    csv += parameter + "," + format_number(cell.value) + "," + format_number(cell.missing_rate) + "," +
           format_number(cell.psnr_unobserved) + "," + status + "\n";
    if (cell.status != "ok") ++failed;
  }
  tasks::write_file_atomic(c.output / "sweep.csv", csv);
  report.artifacts["sweep"] = c.output / "sweep.csv";

  for (double rate : c.sweep.missing_rates) {
    double best = -std::numeric_limits<double>::infinity(), arg = std::numeric_limits<double>::quiet_NaN();
    for (const auto& cell : cells)
      if (cell.missing_rate == rate && cell.status == "ok" && cell.psnr_unobserved > best) {
        best = cell.psnr_unobserved;
        arg = cell.value;
      }
    report.metrics["best_" + parameter + "@" + format_number(rate)] = arg;
    report.metrics["best_psnr@" + format_number(rate)] = best;
  }
  report.metrics["cells"] = static_cast<double>(cells.size());
  report.metrics["failed_cells"] = static_cast<double>(failed);
  return report;
}

}  // namespace inrr::harness
