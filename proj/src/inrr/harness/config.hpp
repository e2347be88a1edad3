#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "inrr/regularizers/penalties.hpp"
#include "inrr/tasks/noise.hpp"

namespace inrr::harness {

enum class Task { inpaint, denoise, fit, ntk_sweep, implicit_bias };
enum class ModelFamily { siren, relu, fourier, inrz, dmf };
enum class HeatmapScale { linear, log };
enum class SweepParameter { delta, omega0 };

Task parse_task(std::string_view name);
std::string to_string(Task task);
ModelFamily parse_model_family(std::string_view name);
std::string to_string(ModelFamily family);
HeatmapScale parse_heatmap_scale(std::string_view name);
std::string to_string(HeatmapScale scale);

struct ImageConfig {
  /// synthetic:scene, synthetic:ring or file:<path>.
  std::string source = "synthetic:scene";
  std::size_t rows = 64;
  std::size_t cols = 64;
};

struct ModelConfig {
  ModelFamily family = ModelFamily::siren;
  std::size_t hidden_layers = 5;
  std::size_t width = 64;
  double omega0 = 30.0;
  std::size_t features = 256;
  double feature_scale = 10.0;
  std::size_t patch = 3;
  std::size_t dmf_factors = 3;
  double dmf_init_std = 1e-2;
  double learning_rate = 1e-4;
};

struct RegularizerConfig {
  regularizers::Objective objective;
  std::size_t tiny_layers = 5;
  std::size_t tiny_width = 32;
  double tiny_omega0 = 30.0;
  /// Embedding width r; 0 selects max(m, n).
  std::size_t rank = 0;
  double learning_rate = 1e-4;
  double air_init_std = 1.0;
};

struct SweepConfig {
  SweepParameter parameter = SweepParameter::delta;
  std::vector<double> values;
  std::vector<double> missing_rates;
  /// Network whose NTK profile h is fitted for the delta sweep.
  std::size_t profile_nodes = 41;
  std::size_t profile_samples = 200;
  std::size_t profile_width = 64;
  std::size_t profile_layers = 2;
};

struct BiasConfig {
  std::vector<std::string> families{"dmf1", "dmf3", "relu", "siren"};
  double dmf_learning_rate = 1e-2;
};

struct ExperimentConfig {
  Task task = Task::inpaint;
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::size_t steps = 2000;
  std::size_t log_every = 100;
  std::filesystem::path output = "runs/experiment";
  /// Empty selects 2.5%, 12.5% and 100% of the run.
  std::vector<std::size_t> heatmap_steps;
  HeatmapScale heatmap_scale = HeatmapScale::linear;
  std::optional<std::size_t> freeze_step;

  ImageConfig image;
  std::string mask = "none";
  std::optional<std::uint64_t> mask_seed;
  tasks::NoiseKind noise = tasks::NoiseKind::none;
  double noise_level = 0.0;

  ModelConfig model;
  RegularizerConfig regularizer;
  SweepConfig sweep;
  BiasConfig bias;

  /// Directory relative paths in the config are resolved against.
  std::filesystem::path base_dir;

  /// Throws ConfigError for out-of-range values and missing input files.
  void validate() const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
  std::vector<std::size_t> effective_heatmap_steps() const;
};

/// Flat sectioned key/value document (INI: `[section]`, `key = value`,
/// `#` or `;` comments). Keys are addressed as "section.key".
class ConfigDocument {
 public:
  /// Throws ConfigError on syntax errors and unknown sections or keys.
  static ConfigDocument parse(std::string_view text, std::filesystem::path base_dir = {});
  static ConfigDocument load(const std::filesystem::path& path);

  /// Throws ConfigError for unknown keys.
  void set(std::string_view key, std::string_view value);
  std::optional<std::string> get(std::string_view key) const;

  /// Typed, validated view. Throws ConfigError.
  ExperimentConfig resolve() const;

 private:
  boost::property_tree::ptree tree_;
  std::filesystem::path base_dir_;
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// Every field as INI text; parsing it back yields the same config.
std::string format_config(const ExperimentConfig& config);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

}  // namespace inrr::harness
