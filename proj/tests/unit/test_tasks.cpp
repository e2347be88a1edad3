#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/linalg.hpp"
#include "inrr/tasks/image.hpp"
#include "inrr/tasks/masks.hpp"
#include "inrr/tasks/metrics.hpp"
#include "inrr/tasks/noise.hpp"
#include "inrr/tasks/pgm.hpp"
#include "inrr/tasks/synthetic.hpp"
#include "../support/oracles.hpp"

using namespace inrr;
using namespace inrr::tasks;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::filesystem::path temp_dir() {
  auto d = std::filesystem::temp_directory_path() / "inrr_unit_tasks";
  std::filesystem::create_directories(d);
  return d;
}

DenseMatrix random_image(std::size_t m, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseMatrix x(m, n);
  for (double& v : x.data()) v = u(rng);
  return x;
}

}  // namespace

TEST_SUITE("tasks") {

TEST_CASE("decode P5 payload") {
  std::string file = "P5\n2 2\n255\n";
  file += std::string{char(0), char(255), char(128), char(64)};
  const auto px = decode_pgm(bytes_of(file));
  CHECK(px(0, 0) == 0.0);
  CHECK(px(0, 1) == 1.0);
  CHECK(px(1, 0) == doctest::Approx(128.0 / 255.0));
  CHECK(px(1, 1) == doctest::Approx(64.0 / 255.0));
}

TEST_CASE("P2 and P5 decode to equal pixels; comments allowed") {
  const auto x = random_image(5, 7, 1);
  const auto p5 = encode_pgm(x, PgmEncoding::binary);
  const auto p2 = encode_pgm(x, PgmEncoding::ascii);
  CHECK(decode_pgm(bytes_of(p5)) == decode_pgm(bytes_of(p2)));
  const std::string commented = "P2\n# a comment\n2 1 # trailing\n255\n0 255\n";
  const auto c = decode_pgm(bytes_of(commented));
  CHECK(c(0, 1) == 1.0);
}

TEST_CASE("save/load round trip") {
  const auto x = random_image(9, 6, 2);
  const auto path = temp_dir() / "rt.pgm";
  save_pgm(x, path);
  const auto loaded = load_pgm(path);
  CHECK(loaded.name == "rt");
  CHECK(max_abs_diff(loaded.pixels, x) <= 1.0 / 510.0 + 1e-15);
  // quantized images round-trip to identical files
  const std::string first = encode_pgm(loaded.pixels);
  save_pgm(loaded.pixels, path);
  CHECK(encode_pgm(load_pgm(path).pixels) == first);
}

TEST_CASE("quantize rounds half up and clamps") {
  CHECK(quantize(-0.3) == 0);
  CHECK(quantize(1.7) == 255);
  CHECK(quantize(0.5 / 255.0) == 1);
  CHECK(quantize(0.49 / 255.0) == 0);
}

TEST_CASE("malformed PGM reports byte offsets") {
  CHECK_THROWS_AS(decode_pgm(bytes_of("P6\n1 1\n255\n\x01")), ParseError);
  std::string truncated = "P5\n4 4\n255\n";
  truncated += "abc";
  try {
    (void)decode_pgm(bytes_of(truncated));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() >= 11);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(decode_pgm(bytes_of("P2\n2 1\n255\n0 abc\n")), ParseError);
}

TEST_CASE("random mask rates") {
  CHECK(gen_mask(parse_mask_spec("random:0"), 32, 32, 1).unobserved_count() == 0);
  const Mask half = gen_mask(parse_mask_spec("random:0.5"), 256, 256, 7);
  const double fraction = static_cast<double>(half.observed_count()) / half.size();
  CHECK(std::abs(fraction - 0.5) < 0.01);
  CHECK(gen_mask(parse_mask_spec("random:0.5"), 256, 256, 7) == half);
  CHECK_FALSE(gen_mask(parse_mask_spec("random:0.5"), 256, 256, 8) == half);
}

TEST_CASE("patch and mixture masks") {
  const Mask patch = gen_mask(parse_mask_spec("patch:10-20x10-20"), 32, 32, 0);
  CHECK(patch.unobserved_count() == 100);
  CHECK_FALSE(patch(10, 10));
  CHECK(patch(20, 20));
  const Mask two = gen_mask(parse_mask_spec("patch:0-2x0-2,1-3x1-3"), 8, 8, 0);
  CHECK(two.unobserved_count() == 7);
  const Mask mix = gen_mask(parse_mask_spec("patch:0-4x0-4+random:0.5"), 16, 16, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK_FALSE(mix(i, j));
  CHECK(mix.unobserved_count() > 16);
  CHECK(gen_mask(parse_mask_spec("none"), 4, 4, 0).unobserved_count() == 0);
}

TEST_CASE("mask errors") {
  CHECK_THROWS_AS(gen_mask(parse_mask_spec("patch:0-40x0-4"), 32, 32, 0), ContractError);
  CHECK_THROWS_AS(parse_mask_spec("blob:3"), ConfigError);
  CHECK_THROWS_AS(gen_mask(parse_mask_spec("patch:4-2x0-1"), 8, 8, 0), ContractError);
  CHECK_THROWS_AS(parse_mask_spec("patch:4x0-1"), ConfigError);
  CHECK_THROWS_AS(gen_mask(parse_mask_spec("random:1.5"), 4, 4, 0), ContractError);
}

TEST_CASE("file mask thresholds and checks shape") {
  DenseMatrix img(4, 5, 1.0);
  img(1, 2) = 0.2;
  img(3, 4) = 0.49;
  const auto path = temp_dir() / "mask.pgm";
  save_pgm(img, path);
  MaskSpec spec{FileMissing{path}};
  const Mask m = gen_mask(spec, 4, 5, 0);
  CHECK(m.unobserved_count() == 2);
  CHECK_FALSE(m(1, 2));
  CHECK_THROWS_AS(gen_mask(spec, 5, 5, 0), ContractError);
  CHECK(to_string(parse_mask_spec("patch:1-2x3-4+random:0.25")) == "patch:1-2x3-4+random:0.25");
}

TEST_CASE("noise identities") {
  const auto x = random_image(16, 16, 3);
  CHECK(add_noise(x, NoiseSpec{NoiseKind::gaussian, 0.0, 1}) == x);
  CHECK(add_noise(x, NoiseSpec{NoiseKind::salt_pepper, 1.0, 1}) == x);
  CHECK(add_noise(x, NoiseSpec{NoiseKind::none, 0.0, 1}) == x);
  CHECK(add_noise(x, NoiseSpec{NoiseKind::gaussian, 10.0, 5}) == add_noise(x, NoiseSpec{NoiseKind::gaussian, 10.0, 5}));
  CHECK_THROWS_AS(add_noise(x, NoiseSpec{NoiseKind::salt_pepper, 0.0, 1}), ContractError);
  CHECK_THROWS_AS(add_noise(x, NoiseSpec{NoiseKind::poisson, -1.0, 1}), ContractError);
}

TEST_CASE("gaussian noise std") {
  // Mid-gray keeps clamping out of the picture.
  const DenseMatrix x(256, 256, 0.5);
  const auto y = add_noise(x, NoiseSpec{NoiseKind::gaussian, 10.0, 11});
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double d = y[k] - x[k];
    s += d;
    s2 += d * d;
  }
  const double n = static_cast<double>(y.size());
  const double sd = std::sqrt((s2 - s * s / n) / (n - 1));
  CHECK(std::abs(sd - 10.0 / 255.0) < 0.03 * 10.0 / 255.0);
}

TEST_CASE("salt and pepper keeps the requested fraction") {
  const DenseMatrix x(200, 200, 0.5);
  const auto y = add_noise(x, NoiseSpec{NoiseKind::salt_pepper, 0.95, 4});
  std::size_t kept = 0, salt = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 0.5) ++kept;
    else if (y[k] == 1.0) ++salt;
    else CHECK(y[k] == 0.0);
  }
  const double n = static_cast<double>(y.size());
  CHECK(std::abs(kept / n - 0.95) < 4.0 * std::sqrt(0.95 * 0.05 / n));
  CHECK(std::abs(salt / (n - kept) - 0.5) < 0.05);
}

TEST_CASE("poisson noise is unbiased") {
  const DenseMatrix x(200, 200, 0.4);
  const auto y = add_noise(x, NoiseSpec{NoiseKind::poisson, 50.0, 9});
  double mean = 0.0;
  for (double v : y.data()) mean += v;
  mean /= static_cast<double>(y.size());
  // Var(P/lambda) = v/lambda
  CHECK(std::abs(mean - 0.4) < 4.0 * std::sqrt(0.4 / 50.0 / y.size()));
}

TEST_CASE("synthetic ring") {
  CHECK(ring_value(0.0, 0.0) == 0.0);
  const double expected = std::sin(25.0 * std::numbers::pi * std::sin(std::numbers::pi / 3.0 * 1.0));
  CHECK(ring_value(0.6, 0.8) == doctest::Approx(expected).epsilon(1e-12));
  for (double x : {0.1, 0.37, 0.9})
    for (double y : {0.2, 0.55}) {
      CHECK(ring_value(x, y) == doctest::Approx(ring_value(-x, y)));
      CHECK(ring_value(x, y) == doctest::Approx(ring_value(x, -y)));
    }
  const auto raw = synthetic_ring_raw(5, 5);
  CHECK(raw(2, 2) == doctest::Approx(0.0));
  CHECK(raw(0, 0) == doctest::Approx(ring_value(-1.0, -1.0)));
  const auto img = synthetic_ring(5, 5);
  CHECK(img(0, 0) == doctest::Approx((raw(0, 0) + 1.0) / 2.0));
  const auto scene = synthetic_scene(64, 64);
  CHECK(scene.rows() == 64);
  CHECK(max_abs(scene) <= 1.0);
  for (double v : scene.data()) CHECK(v >= 0.0);
}

TEST_CASE("psnr") {
  const auto a = random_image(8, 8, 4);
  CHECK(std::isinf(psnr(a, a)));
  DenseMatrix b = a;
  for (double& v : b.data()) v += 0.1;
  CHECK(psnr(a, b) == doctest::Approx(20.0));
  const auto c = random_image(8, 8, 5);
  double mse_ref = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) mse_ref += (a[k] - c[k]) * (a[k] - c[k]);
  mse_ref /= 64.0;
  CHECK(std::abs(psnr(a, c) - 10.0 * std::log10(1.0 / mse_ref)) < 1e-9);
  CHECK(psnr(a, c) == psnr(c, a));
  Mask none(8, 8, false);
  CHECK_THROWS_AS(psnr(a, c, &none), ContractError);
  Mask one(8, 8, false);
  one.set(2, 3, true);
  CHECK(mse(a, c, &one) == doctest::Approx((a(2, 3) - c(2, 3)) * (a(2, 3) - c(2, 3))));
}

TEST_CASE("effective rank") {
  CHECK(effective_rank(DenseMatrix::identity(5)) == doctest::Approx(5.0));
  DenseMatrix outer(4, 3);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 3; ++j) outer(i, j) = (i + 1.0) * (j + 2.0);
  CHECK(effective_rank(outer) == doctest::Approx(1.0).epsilon(1e-9));
  DenseMatrix d(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  d(2, 2) = 1e-12;
  CHECK(std::abs(effective_rank(d) - 2.0) < 1e-6);
  CHECK_THROWS_AS(effective_rank(DenseMatrix(3, 3)), ContractError);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto m = oracle::random_matrix(5, 7, rng);
    const double r = effective_rank(m);
    CHECK(r >= 1.0);
    CHECK(r <= 5.0 + 1e-12);
  }
}

TEST_CASE("covariance matrix") {
  CHECK(max_abs(covariance_matrix(DenseMatrix(4, 3, 0.7), Axis::cols)) == 0.0);
  const DenseMatrix x{{1, 2, 0}, {3, 1, 1}, {2, 6, 5}};
  const auto c = covariance_matrix(x, Axis::cols);
  REQUIRE(c.rows() == 3);
  // column means 2, 3, 2
  CHECK(c(0, 0) == doctest::Approx(((1 - 2.0) * (1 - 2.0) + 1 + 0) / 2.0));
  CHECK(c(0, 1) == doctest::Approx(((-1.0) * (-1.0) + (1.0) * (-2.0) + 0 * 3.0) / 2.0));
  CHECK(c(1, 2) == doctest::Approx(((-1.0) * (-2.0) + (-2.0) * (-1.0) + 3.0 * 3.0) / 2.0));
  const auto r = covariance_matrix(x, Axis::rows);
  CHECK(max_abs_diff(r, covariance_matrix(transpose(x), Axis::cols)) < 1e-15);
  std::mt19937_64 rng(7);
  const auto big = oracle::random_matrix(10, 6, rng);
  const auto cb = covariance_matrix(big, Axis::cols);
  CHECK(cb == transpose(cb));
  for (double e : oracle::sym_eigenvalues(cb)) CHECK(e >= -1e-10);
  CHECK_THROWS_AS(covariance_matrix(DenseMatrix(1, 3), Axis::cols), DimensionError);
}

TEST_CASE("masked image validation") {
  MaskedImage img = MaskedImage::observed(DenseMatrix(3, 3, 0.5));
  CHECK_NOTHROW(img.validate());
  img.pixels(0, 0) = 1.5;
  CHECK_THROWS_AS(img.validate(), ContractError);
  img.pixels(0, 0) = 0.5;
  img.mask = Mask(3, 3, false);
  CHECK_THROWS_AS(img.validate(), ContractError);
}

}
