#include "inrr/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "inrr/numerics/error.hpp"

namespace inrr {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void rotate(std::span<double> p, std::span<double> q, double c, double s) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double x = p[k], y = q[k];
    p[k] = c * x - s * y;
    q[k] = s * x + c * y;
  }
}

// Columns of `cols` (stored as rows) are orthogonalized in place; the same
// rotations are applied to the rows of `basis`.
void hestenes(DenseMatrix& cols, DenseMatrix& basis) {
  const std::size_t n = cols.rows();
  constexpr double tol = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto cp = cols.row_span(p), cq = cols.row_span(q);
        const double alpha = dot(cp, cp), beta = dot(cq, cq), gamma = dot(cp, cq);
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(cp, cq, c, s);
        rotate(basis.row_span(p), basis.row_span(q), c, s);
      }
    }
    if (!rotated) return;
  }
}

}  // namespace

Svd thin_svd(const DenseMatrix& a) {
  if (a.empty()) throw ContractError("thin_svd: empty matrix");
  const bool wide = a.rows() < a.cols();
  // Work on the orientation with at most as many columns as rows; the
  // columns are stored as rows of `work` for contiguous access.
  DenseMatrix work = wide ? a : transpose(a);
  const std::size_t k = work.rows();
  DenseMatrix basis = DenseMatrix::identity(k);
  hestenes(work, basis);

  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = std::sqrt(dot(work.row_span(j), work.row_span(j)));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sigma[x] > sigma[y]; });

  const std::size_t long_dim = work.cols();
  DenseMatrix left(long_dim, k), right(k, k);
  std::vector<double> sorted(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t j = order[c];
    sorted[c] = sigma[j];
    const double inv = sigma[j] > 0.0 ? 1.0 / sigma[j] : 0.0;
    for (std::size_t i = 0; i < long_dim; ++i) left(i, c) = work(j, i) * inv;
    for (std::size_t i = 0; i < k; ++i) right(i, c) = basis(j, i);
  }
  if (wide) return Svd{std::move(right), std::move(sorted), std::move(left)};
  return Svd{std::move(left), std::move(sorted), std::move(right)};
}

std::vector<double> singular_values(const DenseMatrix& a) {
  if (a.empty()) throw ContractError("singular_values: empty matrix");
  DenseMatrix work = a.rows() < a.cols() ? a : transpose(a);
  DenseMatrix basis(work.rows(), 0);
  hestenes(work, basis);
  std::vector<double> sigma(work.rows());
  for (std::size_t j = 0; j < sigma.size(); ++j)
    sigma[j] = std::sqrt(dot(work.row_span(j), work.row_span(j)));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetric_eigenvalues: " + a.shape() + " not square");
  const std::size_t n = a.rows();
  DenseMatrix m = a;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += m(i, j) * m(i, j);
        if (i != j) off += m(i, j) * m(i, j);
      }
    if (off <= 1e-30 * total || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {  // columns p, q
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // rows p, q
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

struct Factored {
  DenseMatrix lu;
  std::vector<std::size_t> perm;  // empty for Cholesky
  double condition = 0.0;
};

std::optional<Factored> cholesky(const DenseMatrix& k) {
  const std::size_t n = k.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = k(j, j);
    for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = k(i, j);
      const auto li = l.row_span(i), lj = l.row_span(j);
      for (std::size_t p = 0; p < j; ++p) s -= li[p] * lj[p];
      l(i, j) = s / ljj;
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, l(i, i));
    hi = std::max(hi, l(i, i));
  }
  return Factored{std::move(l), {}, (hi / lo) * (hi / lo)};
}

Factored lu(const DenseMatrix& k) {
  const std::size_t n = k.rows();
  DenseMatrix a = k;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(perm[c], perm[piv]);
    }
    const double d = a(c, c);
    if (d == 0.0) return Factored{std::move(a), std::move(perm), std::numeric_limits<double>::infinity()};
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / d;
      a(r, c) = f;
      if (f == 0.0) continue;
      for (std::size_t j = c + 1; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, std::abs(a(i, i)));
    hi = std::max(hi, std::abs(a(i, i)));
  }
  return Factored{std::move(a), std::move(perm), hi / lo};
}

Factored factor(const DenseMatrix& k) {
  if (auto c = cholesky(k)) return std::move(*c);
  return lu(k);
}

std::vector<double> substitute(const Factored& f, std::span<const double> b) {
  const DenseMatrix& m = f.lu;
  const std::size_t n = m.rows();
  std::vector<double> y(n);
  if (f.perm.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      for (std::size_t p = 0; p < i; ++p) s -= m(i, p) * y[p];
      y[i] = s / m(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t p = i + 1; p < n; ++p) s -= m(p, i) * y[p];
      y[i] = s / m(i, i);
    }
    return y;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t p = 0; p < i; ++p) s -= m(i, p) * y[p];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t p = i + 1; p < n; ++p) s -= m(i, p) * y[p];
    y[i] = s / m(i, i);
  }
  return y;
}

}  // namespace

SolveResult solve_symmetric(const DenseMatrix& k, std::span<const double> b,
                            const SolveOptions& options) {
  if (k.rows() != k.cols()) throw DimensionError("solve_symmetric: " + k.shape() + " not square");
  if (b.size() != k.rows()) {
    throw DimensionError("solve_symmetric: rhs of length " + std::to_string(b.size()) +
                         " for a " + k.shape() + " system");
  }
  if (k.empty()) return {};
  Factored f = factor(k);
  SolveResult result;
  result.condition_estimate = f.condition;
  if (!(f.condition <= options.ridge_condition)) {
    if (!options.allow_ridge) {
      throw SolverError("solve_symmetric: system is singular or ill-conditioned (condition estimate " +
                            std::to_string(f.condition) + ")",
                        f.condition);
    }
    DenseMatrix ridged = k;
    const double ridge = options.ridge_scale * trace(k) / static_cast<double>(k.rows());
    for (std::size_t i = 0; i < k.rows(); ++i) ridged(i, i) += ridge;
    f = factor(ridged);
    result.ridge_applied = true;
    if (!std::isfinite(f.condition)) {
      throw SolverError("solve_symmetric: singular even after ridge", f.condition);
    }
  }
  result.x = substitute(f, b);
  return result;
}

}  // namespace inrr
