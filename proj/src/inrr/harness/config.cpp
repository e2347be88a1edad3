#include "inrr/harness/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "inrr/numerics/error.hpp"
#include "inrr/tasks/masks.hpp"

namespace inrr::harness {

namespace pt = boost::property_tree;

Task parse_task(std::string_view name) {
  if (name == "inpaint") return Task::inpaint;
  if (name == "denoise") return Task::denoise;
  if (name == "fit") return Task::fit;
  if (name == "ntk_sweep") return Task::ntk_sweep;
  if (name == "implicit_bias") return Task::implicit_bias;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

std::string to_string(Task task) {
  switch (task) {
    case Task::inpaint: return "inpaint";
    case Task::denoise: return "denoise";
    case Task::fit: return "fit";
    case Task::ntk_sweep: return "ntk_sweep";
    case Task::implicit_bias: return "implicit_bias";
  }
  return "inpaint";
}

ModelFamily parse_model_family(std::string_view name) {
  if (name == "siren") return ModelFamily::siren;
  if (name == "relu") return ModelFamily::relu;
  if (name == "fourier") return ModelFamily::fourier;
  if (name == "inrz") return ModelFamily::inrz;
  if (name == "dmf") return ModelFamily::dmf;
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::siren: return "siren";
    case ModelFamily::relu: return "relu";
    case ModelFamily::fourier: return "fourier";
    case ModelFamily::inrz: return "inrz";
    case ModelFamily::dmf: return "dmf";
  }
  return "siren";
}

HeatmapScale parse_heatmap_scale(std::string_view name) {
  if (name == "linear") return HeatmapScale::linear;
  if (name == "log") return HeatmapScale::log;
  throw ConfigError("unknown heatmap scale '" + std::string(name) + "'");
}

std::string to_string(HeatmapScale scale) { return scale == HeatmapScale::log ? "log" : "linear"; }

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), r.ptr);
}

namespace {

constexpr std::array<std::string_view, 47> kKeys{
    "experiment.task", "experiment.name", "experiment.seed", "experiment.steps",
    "experiment.log_every", "experiment.output", "experiment.heatmap_steps",
    "experiment.heatmap_scale", "experiment.freeze_step",
    "image.source", "image.size", "image.rows", "image.cols",
    "mask.pattern", "mask.seed",
    "noise.kind", "noise.level",
    "model.family", "model.hidden_layers", "model.width", "model.omega0", "model.features",
    "model.feature_scale", "model.patch", "model.dmf_factors", "model.dmf_init_std",
    "model.learning_rate",
    "regularizer.kind", "regularizer.lambda", "regularizer.lambda_r", "regularizer.lambda_c",
    "regularizer.l2_norm", "regularizer.tiny_layers", "regularizer.tiny_width",
    "regularizer.tiny_omega0", "regularizer.rank", "regularizer.learning_rate",
    "regularizer.air_init_std",
    "sweep.parameter", "sweep.values", "sweep.missing_rates", "sweep.profile_nodes",
    "sweep.profile_samples", "sweep.profile_width", "sweep.profile_layers",
    "bias.families", "bias.dmf_learning_rate"};

bool known_key(std::string_view key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, const std::string& text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_unsigned(std::string_view key, const std::string& text) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format(values[i]);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> text(std::string_view key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(std::string(key), '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  }
  void str(std::string_view key, std::string& out) const {
    if (auto v = text(key)) out = *v;
  }
  void real(std::string_view key, double& out) const {
    if (auto v = text(key)) out = to_double(key, *v);
  }
  void size(std::string_view key, std::size_t& out) const {
    if (auto v = text(key)) out = static_cast<std::size_t>(to_unsigned(key, *v));
  }
  void u64(std::string_view key, std::uint64_t& out) const {
    if (auto v = text(key)) out = to_unsigned(key, *v);
  }
  void reals(std::string_view key, std::vector<double>& out) const {
    if (auto v = text(key)) {
      out.clear();
      for (const auto& item : split_list(*v)) out.push_back(to_double(key, item));
    }
  }
  void sizes(std::string_view key, std::vector<std::size_t>& out) const {
    if (auto v = text(key)) {
      out.clear();
      for (const auto& item : split_list(*v)) out.push_back(static_cast<std::size_t>(to_unsigned(key, item)));
    }
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' appears outside any section");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_key(full)) throw ConfigError("unknown config key '" + full + "'");
    }
  }
}

}  // namespace

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

std::vector<std::size_t> ExperimentConfig::effective_heatmap_steps() const {
  if (!heatmap_steps.empty()) return heatmap_steps;
  std::vector<std::size_t> out;
  for (double fraction : {0.025, 0.125, 1.0}) {
    const auto s = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(steps)));
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (steps < 1) fail("experiment.steps must be >= 1");
  if (log_every < 1) fail("experiment.log_every must be >= 1");
  if (name.empty()) fail("experiment.name must not be empty");
  if (freeze_step && *freeze_step > steps) fail("experiment.freeze_step exceeds experiment.steps");
  for (auto s : heatmap_steps)
    if (s > steps) fail("experiment.heatmap_steps entry " + std::to_string(s) + " exceeds steps");
  if (image.rows < 2 || image.cols < 2) fail("image size must be at least 2x2");

  const std::string& src = image.source;
  if (src.rfind("file:", 0) == 0) {
    const auto path = resolve(src.substr(5));
    if (!std::filesystem::exists(path)) fail("image file not found: " + path.string());
  } else if (src != "synthetic:scene" && src != "synthetic:ring") {
    fail("image.source must be synthetic:scene, synthetic:ring or file:<path>, got '" + src + "'");
  }
  try {
    const tasks::MaskSpec spec = tasks::parse_mask_spec(mask);
    (void)spec;
  } catch (const Error& e) {
    throw ConfigError(std::string("mask.pattern: ") + e.what());
  }
  if (mask.find("file:") != std::string::npos) {
    const auto at = mask.find("file:");
    auto rest = mask.substr(at + 5);
    rest = rest.substr(0, rest.find('+'));
    const auto path = resolve(rest);
    if (!std::filesystem::exists(path)) fail("mask file not found: " + path.string());
  }
  if (noise != tasks::NoiseKind::none && !(noise_level > 0.0)) fail("noise.level must be > 0");
  if (noise == tasks::NoiseKind::salt_pepper && noise_level > 1.0) fail("noise.level for salt_pepper is a keep rate in (0, 1]");
  if (task == Task::denoise && noise == tasks::NoiseKind::none) fail("denoise task needs noise.kind");

  if (model.width < 1) fail("model.width must be >= 1");
  if (!(model.omega0 > 0.0)) fail("model.omega0 must be > 0");
  if (model.features < 1) fail("model.features must be >= 1");
  if (!(model.feature_scale >= 0.0)) fail("model.feature_scale must be >= 0");
  if (model.patch < 1 || model.patch % 2 == 0) fail("model.patch must be odd");
  if (model.dmf_factors < 1) fail("model.dmf_factors must be >= 1");
  if (!(model.dmf_init_std >= 0.0)) fail("model.dmf_init_std must be >= 0");
  if (!(model.learning_rate > 0.0)) fail("model.learning_rate must be > 0");

  const auto& reg = regularizer;
  if (reg.objective.lambda < 0.0 || reg.objective.lambda_r < 0.0 || reg.objective.lambda_c < 0.0) {
    fail("regularizer weights must be >= 0");
  }
  if (reg.tiny_width < 1) fail("regularizer.tiny_width must be >= 1");
  if (!(reg.tiny_omega0 > 0.0)) fail("regularizer.tiny_omega0 must be > 0");
  if (!(reg.learning_rate > 0.0)) fail("regularizer.learning_rate must be > 0");
  if (!(reg.air_init_std > 0.0)) fail("regularizer.air_init_std must be > 0");
  if (freeze_step && reg.objective.kind != regularizers::RegularizerKind::inrr &&
      reg.objective.kind != regularizers::RegularizerKind::air) {
    fail("experiment.freeze_step needs regularizer.kind = inrr or air");
  }

  if (task == Task::ntk_sweep) {
    if (sweep.values.empty() || sweep.missing_rates.empty()) fail("sweep.values and sweep.missing_rates must be nonempty");
    for (double v : sweep.values)
      if (!(v > 0.0)) fail("sweep.values must be > 0");
    for (double r : sweep.missing_rates)
      if (!(r >= 0.0 && r < 1.0)) fail("sweep.missing_rates must lie in [0, 1)");
    if (sweep.profile_nodes < 2 || sweep.profile_samples < 1 || sweep.profile_width < 1) {
      fail("sweep profile settings out of range");
    }
  }
  if (task == Task::implicit_bias) {
    if (bias.families.empty()) fail("bias.families must be nonempty");
    for (const auto& f : bias.families)
      if (f != "dmf1" && f != "dmf3" && f != "relu" && f != "siren") fail("unknown bias family '" + f + "'");
    if (!(bias.dmf_learning_rate > 0.0)) fail("bias.dmf_learning_rate must be > 0");
  }
}

ConfigDocument ConfigDocument::parse(std::string_view text, std::filesystem::path base_dir) {
  ConfigDocument doc;
  doc.base_dir_ = std::move(base_dir);
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, doc.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  check_keys(doc.tree_);
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

void ConfigDocument::set(std::string_view key, std::string_view value) {
  if (!known_key(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
  tree_.put(pt::ptree::path_type(std::string(key), '.'), std::string(value));
}

std::optional<std::string> ConfigDocument::get(std::string_view key) const {
  if (!known_key(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return Reader(tree_).text(key);
}

ExperimentConfig ConfigDocument::resolve() const {
  ExperimentConfig c;
  c.base_dir = base_dir_;
  const Reader r(tree_);

  if (auto v = r.text("experiment.task")) c.task = parse_task(*v);
  r.str("experiment.name", c.name);
  c.output = "runs/" + c.name;
  r.u64("experiment.seed", c.seed);
  r.size("experiment.steps", c.steps);
  r.size("experiment.log_every", c.log_every);
  if (auto v = r.text("experiment.output")) c.output = *v;
  r.sizes("experiment.heatmap_steps", c.heatmap_steps);
  if (auto v = r.text("experiment.heatmap_scale")) c.heatmap_scale = parse_heatmap_scale(*v);
  if (auto v = r.text("experiment.freeze_step"); v && !v->empty() && *v != "none") {
    c.freeze_step = static_cast<std::size_t>(to_unsigned("experiment.freeze_step", *v));
  }

  r.str("image.source", c.image.source);
  if (auto v = r.text("image.size")) c.image.rows = c.image.cols = static_cast<std::size_t>(to_unsigned("image.size", *v));
  r.size("image.rows", c.image.rows);
  r.size("image.cols", c.image.cols);

  r.str("mask.pattern", c.mask);
  if (auto v = r.text("mask.seed")) c.mask_seed = to_unsigned("mask.seed", *v);

  if (auto v = r.text("noise.kind")) c.noise = tasks::parse_noise_kind(*v);
  r.real("noise.level", c.noise_level);

  if (auto v = r.text("model.family")) c.model.family = parse_model_family(*v);
  r.size("model.hidden_layers", c.model.hidden_layers);
  r.size("model.width", c.model.width);
  r.real("model.omega0", c.model.omega0);
  r.size("model.features", c.model.features);
  r.real("model.feature_scale", c.model.feature_scale);
  r.size("model.patch", c.model.patch);
  r.size("model.dmf_factors", c.model.dmf_factors);
  r.real("model.dmf_init_std", c.model.dmf_init_std);
  r.real("model.learning_rate", c.model.learning_rate);

  auto& reg = c.regularizer;
  if (auto v = r.text("regularizer.kind")) reg.objective.kind = regularizers::parse_regularizer_kind(*v);
  r.real("regularizer.lambda", reg.objective.lambda);
  r.real("regularizer.lambda_r", reg.objective.lambda_r);
  r.real("regularizer.lambda_c", reg.objective.lambda_c);
  if (auto v = r.text("regularizer.l2_norm")) reg.objective.l2_norm = regularizers::parse_l2_norm(*v);
  r.size("regularizer.tiny_layers", reg.tiny_layers);
  r.size("regularizer.tiny_width", reg.tiny_width);
  r.real("regularizer.tiny_omega0", reg.tiny_omega0);
  r.size("regularizer.rank", reg.rank);
  r.real("regularizer.learning_rate", reg.learning_rate);
  r.real("regularizer.air_init_std", reg.air_init_std);

  if (auto v = r.text("sweep.parameter")) {
    if (*v == "delta") c.sweep.parameter = SweepParameter::delta;
    else if (*v == "omega0") c.sweep.parameter = SweepParameter::omega0;
    else throw ConfigError("sweep.parameter must be delta or omega0, got '" + *v + "'");
  }
  r.reals("sweep.values", c.sweep.values);
  r.reals("sweep.missing_rates", c.sweep.missing_rates);
  r.size("sweep.profile_nodes", c.sweep.profile_nodes);
  r.size("sweep.profile_samples", c.sweep.profile_samples);
  r.size("sweep.profile_width", c.sweep.profile_width);
  r.size("sweep.profile_layers", c.sweep.profile_layers);

  if (auto v = r.text("bias.families")) c.bias.families = split_list(*v);
  r.real("bias.dmf_learning_rate", c.bias.dmf_learning_rate);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return ConfigDocument::load(path).resolve(); }

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return format_number(v); };
  auto idx = [](std::size_t v) { return std::to_string(v); };
  o << "[experiment]\n"
    << "task = " << to_string(c.task) << "\n"
    << "name = " << c.name << "\n"
    << "seed = " << c.seed << "\n"
    << "steps = " << c.steps << "\n"
    << "log_every = " << c.log_every << "\n"
    << "output = " << c.output.generic_string() << "\n"
    << "heatmap_steps = " << join(c.heatmap_steps, idx) << "\n"
    << "heatmap_scale = " << to_string(c.heatmap_scale) << "\n"
    << "freeze_step = " << (c.freeze_step ? std::to_string(*c.freeze_step) : "none") << "\n\n"
    << "[image]\n"
    << "source = " << c.image.source << "\n"
    << "rows = " << c.image.rows << "\n"
    << "cols = " << c.image.cols << "\n\n"
    << "[mask]\n"
    << "pattern = " << c.mask << "\n";
  if (c.mask_seed) o << "seed = " << *c.mask_seed << "\n";
  o << "\n[noise]\n"
    << "kind = " << tasks::to_string(c.noise) << "\n"
    << "level = " << num(c.noise_level) << "\n\n"
    << "[model]\n"
    << "family = " << to_string(c.model.family) << "\n"
    << "hidden_layers = " << c.model.hidden_layers << "\n"
    << "width = " << c.model.width << "\n"
    << "omega0 = " << num(c.model.omega0) << "\n"
    << "features = " << c.model.features << "\n"
    << "feature_scale = " << num(c.model.feature_scale) << "\n"
    << "patch = " << c.model.patch << "\n"
    << "dmf_factors = " << c.model.dmf_factors << "\n"
    << "dmf_init_std = " << num(c.model.dmf_init_std) << "\n"
    << "learning_rate = " << num(c.model.learning_rate) << "\n\n";
  const auto& reg = c.regularizer;
  o << "[regularizer]\n"
    << "kind = " << regularizers::to_string(reg.objective.kind) << "\n"
    << "lambda = " << num(reg.objective.lambda) << "\n"
    << "lambda_r = " << num(reg.objective.lambda_r) << "\n"
    << "lambda_c = " << num(reg.objective.lambda_c) << "\n"
    << "l2_norm = " << regularizers::to_string(reg.objective.l2_norm) << "\n"
    << "tiny_layers = " << reg.tiny_layers << "\n"
    << "tiny_width = " << reg.tiny_width << "\n"
    << "tiny_omega0 = " << num(reg.tiny_omega0) << "\n"
    << "rank = " << reg.rank << "\n"
    << "learning_rate = " << num(reg.learning_rate) << "\n"
    << "air_init_std = " << num(reg.air_init_std) << "\n\n"
    << "[sweep]\n"
    << "parameter = " << (c.sweep.parameter == SweepParameter::delta ? "delta" : "omega0") << "\n"
    << "values = " << join(c.sweep.values, num) << "\n"
    << "missing_rates = " << join(c.sweep.missing_rates, num) << "\n"
    << "profile_nodes = " << c.sweep.profile_nodes << "\n"
    << "profile_samples = " << c.sweep.profile_samples << "\n"
    << "profile_width = " << c.sweep.profile_width << "\n"
    << "profile_layers = " << c.sweep.profile_layers << "\n\n"
    << "[bias]\n"
    << "families = " << join(c.bias.families, [](const std::string& s) { return s; }) << "\n"
    << "dmf_learning_rate = " << num(c.bias.dmf_learning_rate) << "\n";
  return o.str();
}

}  // namespace inrr::harness
