#include "inrr/tasks/masks.hpp"

#include <charconv>
#include <random>
#include <sstream>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/random.hpp"
#include "inrr/tasks/pgm.hpp"

namespace inrr::tasks {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_index(std::string_view s, std::string_view whole) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("mask: bad index '" + std::string(s) + "' in '" + std::string(whole) + "'");
  }
  return v;
}

std::pair<std::size_t, std::size_t> parse_range(std::string_view s, std::string_view whole) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    throw ConfigError("mask: expected <begin>-<end> in '" + std::string(whole) + "'");
  }
  return {parse_index(trim(s.substr(0, dash)), whole), parse_index(trim(s.substr(dash + 1)), whole)};
}

MaskSpec parse_component(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = trim(text.substr(0, colon));
  const auto body = colon == std::string_view::npos ? std::string_view{} : trim(text.substr(colon + 1));
  if (head == "none") return MaskSpec{RandomMissing{0.0}};
  if (head == "random") {
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
      throw ConfigError("mask: bad missing rate in '" + std::string(text) + "'");
    }
    return MaskSpec{RandomMissing{p}};
  }
  if (head == "patch") {
    PatchMissing patch;
    for (auto rect : split(body, ',')) {
      const auto x = rect.find('x');
      if (x == std::string_view::npos) {
        throw ConfigError("mask: expected <rows>x<cols> in '" + std::string(text) + "'");
      }
      const auto [r0, r1] = parse_range(trim(rect.substr(0, x)), text);
      const auto [c0, c1] = parse_range(trim(rect.substr(x + 1)), text);
      patch.rects.push_back(Rect{r0, r1, c0, c1});
    }
    return MaskSpec{std::move(patch)};
  }
  if (head == "file") {
    if (body.empty()) throw ConfigError("mask: file component needs a path");
    return MaskSpec{FileMissing{std::filesystem::path(std::string(body))}};
  }
  throw ConfigError("mask: unknown pattern '" + std::string(head) + "'");
}

void apply_missing(const MaskSpec& spec, Mask& mask, std::uint64_t seed) {
  const std::size_t rows = mask.rows(), cols = mask.cols();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RandomMissing>) {
          if (!(k.missing_rate >= 0.0 && k.missing_rate <= 1.0)) {
            throw ContractError("gen_mask: missing rate " + std::to_string(k.missing_rate) +
                                " outside [0,1]");
          }
          Rng rng(seed);
          std::uniform_real_distribution<double> u(0.0, 1.0);
          for (std::size_t idx = 0; idx < mask.size(); ++idx)
            if (u(rng) < k.missing_rate) mask.set(idx, false);
        } else if constexpr (std::is_same_v<T, PatchMissing>) {
          for (const Rect& r : k.rects) {
            if (r.row_begin > r.row_end || r.col_begin > r.col_end || r.row_end > rows ||
                r.col_end > cols) {
              throw ContractError("gen_mask: rectangle " + std::to_string(r.row_begin) + "-" +
                                  std::to_string(r.row_end) + "x" + std::to_string(r.col_begin) +
                                  "-" + std::to_string(r.col_end) + " outside " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
            }
            for (std::size_t i = r.row_begin; i < r.row_end; ++i)
              for (std::size_t j = r.col_begin; j < r.col_end; ++j) mask.set(i, j, false);
          }
        } else if constexpr (std::is_same_v<T, FileMissing>) {
          const auto img = load_pgm(k.path);
          if (img.rows() != rows || img.cols() != cols) {
            throw ContractError("gen_mask: mask file " + k.path.string() + " is " +
                                img.pixels.shape() + ", expected " + std::to_string(rows) + "x" +
                                std::to_string(cols));
          }
          for (std::size_t idx = 0; idx < mask.size(); ++idx)
            if (img.pixels[idx] < 0.5) mask.set(idx, false);
        } else {
          for (std::size_t c = 0; c < k.components.size(); ++c)
            apply_missing(k.components[c], mask, derive_seed(seed, c));
        }
      },
      spec.kind);
}

}  // namespace

MaskSpec parse_mask_spec(std::string_view text) {
  const auto parts = split(trim(text), '+');
  if (parts.size() == 1) return parse_component(parts[0]);
  MixtureMissing mix;
  for (auto p : parts) mix.components.push_back(parse_component(p));
  return MaskSpec{std::move(mix)};
}

std::string to_string(const MaskSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RandomMissing>) {
          out << "random:" << k.missing_rate;
        } else if constexpr (std::is_same_v<T, PatchMissing>) {
          out << "patch:";
          for (std::size_t i = 0; i < k.rects.size(); ++i) {
            const auto& r = k.rects[i];
            out << (i ? "," : "") << r.row_begin << '-' << r.row_end << 'x' << r.col_begin << '-'
                << r.col_end;
          }
        } else if constexpr (std::is_same_v<T, FileMissing>) {
          out << "file:" << k.path.string();
        } else {
          for (std::size_t i = 0; i < k.components.size(); ++i)
            out << (i ? "+" : "") << to_string(k.components[i]);
        }
      },
      spec.kind);
  return out.str();
}

Mask gen_mask(const MaskSpec& spec, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Mask mask(rows, cols, true);
  apply_missing(spec, mask, seed);
  return mask;
}

}  // namespace inrr::tasks
