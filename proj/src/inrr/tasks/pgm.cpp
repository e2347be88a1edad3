#include "inrr/tasks/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "inrr/numerics/error.hpp"
#include "inrr/tasks/atomic_file.hpp"

namespace inrr::tasks {

namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool done() const noexcept { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (!done()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (!done() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long v = 0;
    while (!done() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000UL) throw ParseError(std::string("PGM: ") + what + " too large", start);
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(std::string("PGM: expected ") + what, start);
    }
    return v;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  void advance() { ++pos_; }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

DenseMatrix decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("PGM: missing P2/P5 magic number", 0);
  }
  const bool binary = bytes[1] == '5';
  Reader r(bytes.subspan(0));
  r.advance();
  r.advance();
  const auto width = r.number("width");
  const auto height = r.number("height");
  const std::size_t maxval_offset = r.offset();
  const auto maxval = r.number("maxval");
  if (width == 0 || height == 0) throw ParseError("PGM: zero image dimension", maxval_offset);
  if (maxval == 0 || maxval > 255) {
    throw ParseError("PGM: maxval " + std::to_string(maxval) + " unsupported (need 1..255)",
                     maxval_offset);
  }
  DenseMatrix pixels(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    if (r.done() || !std::isspace(r.byte())) {
      throw ParseError("PGM: expected single whitespace after maxval", r.offset());
    }
    const auto payload = r.rest();
    if (payload.size() < pixels.size()) {
      throw ParseError("PGM: truncated payload, " + std::to_string(payload.size()) + " of " +
                           std::to_string(pixels.size()) + " bytes",
                       r.offset() + payload.size());
    }
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      if (payload[k] > maxval) throw ParseError("PGM: sample exceeds maxval", r.offset() + k);
      pixels[k] = payload[k] * scale;
    }
  } else {
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      r.skip_space_and_comments();
      if (r.done()) throw ParseError("PGM: truncated ASCII payload", r.offset());
      const std::size_t at = r.offset();
      const auto v = r.number("sample");
      if (v > maxval) throw ParseError("PGM: sample exceeds maxval", at);
      pixels[k] = static_cast<double>(v) * scale;
    }
  }
  return pixels;
}

std::uint8_t quantize(double value) noexcept {
  const double c = std::clamp(value, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

std::string encode_pgm(const DenseMatrix& pixels, PgmEncoding encoding) {
  std::ostringstream out;
  const bool binary = encoding == PgmEncoding::binary;
  out << (binary ? "P5" : "P2") << '\n' << pixels.cols() << ' ' << pixels.rows() << "\n255\n";
  if (binary) {
    std::string payload(pixels.size(), '\0');
    for (std::size_t k = 0; k < pixels.size(); ++k) payload[k] = static_cast<char>(quantize(pixels[k]));
    out << payload;
  } else {
    for (std::size_t i = 0; i < pixels.rows(); ++i) {
      for (std::size_t j = 0; j < pixels.cols(); ++j) {
        if (j) out << ' ';
        out << static_cast<int>(quantize(pixels(i, j)));
      }
      out << '\n';
    }
  }
  return out.str();
}

MaskedImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("PGM: cannot open " + path.string(), 0);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return MaskedImage::observed(decode_pgm(bytes), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

void save_pgm(const DenseMatrix& pixels, const std::filesystem::path& path, PgmEncoding encoding) {
  write_file_atomic(path, encode_pgm(pixels, encoding));
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
  save_pgm(mask.as_matrix(), path);
}

}  // namespace inrr::tasks
