// Command-line front end over the C interface.
//   inrr run <config> [--seed N] [--out DIR]
//   inrr sweep <config> [--seed N] [--out DIR]
//   inrr bias <config> [--seed N] [--out DIR]
// Exit codes: 0 success, 1 other failure, 2 config error, 3 numeric failure.
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "inrr/inrr.h"

namespace {

struct Options {
  std::string config;
  std::optional<unsigned long long> seed;
  std::optional<std::string> out;
  bool quiet = false;
};

int exit_code(inrr_status s) {
  switch (s) {
    case INRR_OK: return 0;
    case INRR_ERR_CONFIG: return 2;
    case INRR_ERR_NUMERIC: return 3;
    default: return 1;
  }
}

int report_failure(inrr_status s) {
  std::fprintf(stderr, "inrr: %s: %s\n", inrr_status_string(s), inrr_last_error());
  return exit_code(s);
}

void print_report(const inrr_report* report) {
  for (size_t i = 0; i < inrr_report_metric_count(report); ++i) {
    const char* name = nullptr;
    double value = 0.0;
    inrr_report_metric(report, i, &name, &value);
    std::printf("%-28s %.6g\n", name, value);
  }
  for (size_t i = 0; i < inrr_report_artifact_count(report); ++i) {
    const char* role = nullptr;
    const char* path = nullptr;
    inrr_report_artifact(report, i, &role, &path);
    std::printf("wrote %-22s %s\n", role, path);
  }
}

int execute(const Options& opt, inrr_status (*run)(const inrr_config*, inrr_report**)) {
  inrr_config* config = nullptr;
  inrr_status s = inrr_config_load(opt.config.c_str(), &config);
  if (s != INRR_OK) return report_failure(s);
  if (opt.seed) s = inrr_config_set(config, "experiment.seed", std::to_string(*opt.seed).c_str());
  if (s == INRR_OK && opt.out) s = inrr_config_set(config, "experiment.output", opt.out->c_str());
  inrr_report* report = nullptr;
  if (s == INRR_OK) s = run(config, &report);
  inrr_config_free(config);
  if (s != INRR_OK) return report_failure(s);
  if (!opt.quiet) print_report(report);
  inrr_report_free(report);
  return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("config", opt.config, "Experiment config (INI)")->required();
  cmd->add_option("--seed", opt.seed, "Override experiment.seed");
  cmd->add_option("--out", opt.out, "Override the output directory");
  cmd->add_flag("-q,--quiet", opt.quiet, "Do not print metrics");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit neural representations with learned Laplacian regularization"};
  app.set_version_flag("--version", std::string(inrr_version()));
  app.require_subcommand(1);
  Options opt;
  auto* run = app.add_subcommand("run", "Run the config's task (inpaint, denoise, fit, ...)");
  auto* sweep = app.add_subcommand("sweep", "Run the delta / omega0 sweep of a config");
  auto* bias = app.add_subcommand("bias", "Run the implicit-bias study of a config");
  add_common(run, opt);
  add_common(sweep, opt);
  add_common(bias, opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (run->parsed()) return execute(opt, inrr_run);
  if (sweep->parsed()) return execute(opt, inrr_sweep);
  return execute(opt, inrr_bias);
}
