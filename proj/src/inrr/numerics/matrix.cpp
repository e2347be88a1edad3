#include "inrr/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "inrr/numerics/error.hpp"

namespace inrr {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("DenseMatrix: " + std::to_string(data_.size()) +
                         " values cannot fill a " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " matrix");
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("DenseMatrix: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
  return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

DenseMatrix DenseMatrix::row(std::span<const double> values) {
  return DenseMatrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string DenseMatrix::shape() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void DenseMatrix::fill(double value) noexcept { std::fill(data_.begin(), data_.end(), value); }

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " + a.shape() + " vs " + b.shape());
  }
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.shape() + " by " + b.shape());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* __restrict ap = a.data().data();
  const double* __restrict bp = b.data().data();
  double* __restrict cp = c.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* __restrict crow = cp + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = ap[i * k + p];
      if (aip == 0.0) continue;
      const double* __restrict brow = bp + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("matmul_tn: cannot multiply transpose of " + a.shape() + " by " +
                         b.shape());
  }
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* __restrict ap = a.data().data();
  const double* __restrict bp = b.data().data();
  double* __restrict cp = c.data().data();
  for (std::size_t p = 0; p < k; ++p) {
    const double* __restrict brow = bp + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = ap[p * m + i];
      if (api == 0.0) continue;
      double* __restrict crow = cp + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += api * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_nt: cannot multiply " + a.shape() + " by transpose of " +
                         b.shape());
  }
  return matmul(a, transpose(b));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= b[k];
  return c;
}

double sum(const DenseMatrix& a) noexcept {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return s;
}

double frobenius_norm(const DenseMatrix& a) noexcept {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) noexcept {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double trace(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace: matrix " + a.shape() + " is not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace inrr
