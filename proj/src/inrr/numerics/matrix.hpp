#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace inrr {

/// Row-major dense matrix of doubles. The universal numeric carrier: images,
/// weights, kernels and Laplacians all live in one of these.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix column(std::span<const double> values);
  static DenseMatrix row(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  double& operator[](std::size_t k) noexcept { return data_[k]; }
  double operator[](std::size_t k) const noexcept { return data_[k]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row_span(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row_span(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  /// "RxC", used in error messages.
  std::string shape() const;
  bool all_finite() const noexcept;
  void fill(double value) noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(DenseMatrix a, double s);
DenseMatrix operator*(double s, DenseMatrix a);

/// a * b. Throws DimensionError when a.cols() != b.rows().
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// transpose(a) * b without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * transpose(b).
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

double sum(const DenseMatrix& a) noexcept;
double frobenius_norm(const DenseMatrix& a) noexcept;
double max_abs(const DenseMatrix& a) noexcept;
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double trace(const DenseMatrix& a);

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what);

}  // namespace inrr
