#include "inrr/numerics/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "inrr/numerics/error.hpp"
#include "inrr/numerics/linalg.hpp"

namespace inrr::ad {

const DenseMatrix& Var::value() const { return tape_->value(id_); }
const DenseMatrix& Var::grad() const { return tape_->grad(id_); }

double Var::scalar() const {
  const auto& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw ContractError("Var::scalar: node is " + v.shape() + ", not 1x1");
  }
  return v[0];
}

Var Tape::constant(DenseMatrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, false, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(DenseMatrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, true, true});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(DenseMatrix value, std::vector<std::size_t> inputs, BackwardFn backward) {
  bool needs = false;
  for (std::size_t in : inputs) needs = needs || nodes_[in].requires_grad;
  Node node{std::move(value), {}, {}, std::move(inputs), nullptr, needs, false};
  if (needs) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::accumulate(std::size_t id, const DenseMatrix& delta) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.grad.empty()) {
    n.grad = delta;
  } else {
    n.grad += delta;
  }
}

void Tape::accumulate(std::size_t id, DenseMatrix&& delta) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.grad.empty()) {
    n.grad = std::move(delta);
  } else {
    n.grad += delta;
  }
}

void Tape::backward(Var root) {
  const DenseMatrix& rv = value(root.id());
  if (rv.rows() != 1 || rv.cols() != 1) {
    throw ContractError("backward: root must be scalar, got " + rv.shape());
  }
  for (auto& n : nodes_) n.grad = DenseMatrix();
  if (!nodes_[root.id()].requires_grad) return;
  nodes_[root.id()].grad = DenseMatrix(1, 1, 1.0);
  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty() || !n.backward) continue;
    n.backward(*this, id);
  }
  // Every trainable leaf gets an adjoint of its own shape, zero if unreached.
  for (auto& n : nodes_) {
    if (n.parameter && n.grad.empty()) n.grad = DenseMatrix(n.value.rows(), n.value.cols());
  }
}

namespace {

void same(Var a, Var b, const char* what) {
  if (&a.tape() != &b.tape()) throw ContractError(std::string(what) + ": operands on different tapes");
  require_same_shape(a.value(), b.value(), what);
}

template <typename F>
DenseMatrix map(const DenseMatrix& a, F f) {
  DenseMatrix out = a;
  for (double& v : out.data()) v = f(v);
  return out;
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = a.tape();
  return t.record(inrr::matmul(a.value(), b.value()), {a.id(), b.id()},
                  [](Tape& t, std::size_t self) {
                    const auto in = t.inputs(self);
                    const DenseMatrix& g = t.grad(self);
                    if (t.requires_grad(in[0])) t.accumulate(in[0], matmul_nt(g, t.value(in[1])));
                    if (t.requires_grad(in[1])) t.accumulate(in[1], matmul_tn(t.value(in[0]), g));
                  });
}

Var transpose(Var a) {
  return a.tape().record(inrr::transpose(a.value()), {a.id()}, [](Tape& t, std::size_t self) {
    t.accumulate(t.inputs(self)[0], inrr::transpose(t.grad(self)));
  });
}

Var add(Var a, Var b) {
  same(a, b, "add");
  return a.tape().record(a.value() + b.value(), {a.id(), b.id()}, [](Tape& t, std::size_t self) {
    for (std::size_t in : t.inputs(self)) t.accumulate(in, t.grad(self));
  });
}

Var sub(Var a, Var b) {
  same(a, b, "sub");
  return a.tape().record(a.value() - b.value(), {a.id(), b.id()}, [](Tape& t, std::size_t self) {
    const auto in = t.inputs(self);
    t.accumulate(in[0], t.grad(self));
    if (t.requires_grad(in[1])) t.accumulate(in[1], t.grad(self) * -1.0);
  });
}

Var hadamard(Var a, Var b) {
  same(a, b, "hadamard");
  return a.tape().record(inrr::hadamard(a.value(), b.value()), {a.id(), b.id()},
                         [](Tape& t, std::size_t self) {
                           const auto in = t.inputs(self);
                           const DenseMatrix& g = t.grad(self);
                           if (t.requires_grad(in[0]))
                             t.accumulate(in[0], inrr::hadamard(g, t.value(in[1])));
                           if (t.requires_grad(in[1]))
                             t.accumulate(in[1], inrr::hadamard(g, t.value(in[0])));
                         });
}

Var add_row(Var a, Var row) {
  const DenseMatrix& av = a.value();
  const DenseMatrix& rv = row.value();
  if (rv.rows() != 1 || rv.cols() != av.cols()) {
    throw DimensionError("add_row: cannot broadcast " + rv.shape() + " over " + av.shape());
  }
  DenseMatrix out = av;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row_span(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += rv[j];
  }
  return a.tape().record(std::move(out), {a.id(), row.id()}, [](Tape& t, std::size_t self) {
    const auto in = t.inputs(self);
    const DenseMatrix& g = t.grad(self);
    t.accumulate(in[0], g);
    if (t.requires_grad(in[1])) {
      DenseMatrix col_sums(1, g.cols());
      for (std::size_t i = 0; i < g.rows(); ++i) {
        auto r = g.row_span(i);
        for (std::size_t j = 0; j < r.size(); ++j) col_sums[j] += r[j];
      }
      t.accumulate(in[1], std::move(col_sums));
    }
  });
}

Var scale(Var a, double s) {
  return a.tape().record(a.value() * s, {a.id()}, [s](Tape& t, std::size_t self) {
    t.accumulate(t.inputs(self)[0], t.grad(self) * s);
  });
}

Var divide(Var a, Var s) {
  const double d = s.scalar();
  return a.tape().record(a.value() * (1.0 / d), {a.id(), s.id()}, [](Tape& t, std::size_t self) {
    const auto in = t.inputs(self);
    const DenseMatrix& g = t.grad(self);
    const double d = t.value(in[1])[0];
    if (t.requires_grad(in[0])) t.accumulate(in[0], g * (1.0 / d));
    if (t.requires_grad(in[1])) {
      // d(a/s)/ds = -a/s^2
      double acc = 0.0;
      const DenseMatrix& av = t.value(in[0]);
      for (std::size_t k = 0; k < g.size(); ++k) acc += g[k] * av[k];
      t.accumulate(in[1], DenseMatrix(1, 1, -acc / (d * d)));
    }
  });
}

Var sin(Var a) {
  const DenseMatrix& av = a.value();
  DenseMatrix out(av.rows(), av.cols());
  DenseMatrix cosines(av.rows(), av.cols());
  for (std::size_t k = 0; k < av.size(); ++k) {
    out[k] = std::sin(av[k]);
    cosines[k] = std::cos(av[k]);
  }
  Var v = a.tape().record(std::move(out), {a.id()}, [](Tape& t, std::size_t self) {
    t.accumulate(t.inputs(self)[0], inrr::hadamard(t.grad(self), t.aux(self)));
  });
  if (a.tape().requires_grad(v.id())) a.tape().aux(v.id()) = std::move(cosines);
  return v;
}

Var relu(Var a) {
  return a.tape().record(map(a.value(), [](double x) { return x > 0.0 ? x : 0.0; }), {a.id()},
                         [](Tape& t, std::size_t self) {
                           const std::size_t in = t.inputs(self)[0];
                           DenseMatrix g = t.grad(self);
                           const DenseMatrix& x = t.value(in);
                           for (std::size_t k = 0; k < g.size(); ++k)
                             if (x[k] <= 0.0) g[k] = 0.0;
                           t.accumulate(in, std::move(g));
                         });
}

Var exp(Var a) {
  return a.tape().record(map(a.value(), [](double x) { return std::exp(x); }), {a.id()},
                         [](Tape& t, std::size_t self) {
                           t.accumulate(t.inputs(self)[0], inrr::hadamard(t.grad(self), t.value(self)));
                         });
}

Var abs(Var a) {
  return a.tape().record(map(a.value(), [](double x) { return std::abs(x); }), {a.id()},
                         [](Tape& t, std::size_t self) {
                           const std::size_t in = t.inputs(self)[0];
                           DenseMatrix g = t.grad(self);
                           const DenseMatrix& x = t.value(in);
                           for (std::size_t k = 0; k < g.size(); ++k)
                             g[k] *= (x[k] > 0.0) - (x[k] < 0.0);
                           t.accumulate(in, std::move(g));
                         });
}

Var square(Var a) {
  return a.tape().record(map(a.value(), [](double x) { return x * x; }), {a.id()},
                         [](Tape& t, std::size_t self) {
                           const std::size_t in = t.inputs(self)[0];
                           DenseMatrix g = inrr::hadamard(t.grad(self), t.value(in));
                           g *= 2.0;
                           t.accumulate(in, std::move(g));
                         });
}

Var sqrt(Var a) {
  return a.tape().record(map(a.value(), [](double x) { return std::sqrt(x); }), {a.id()},
                         [](Tape& t, std::size_t self) {
                           DenseMatrix g = t.grad(self);
                           const DenseMatrix& y = t.value(self);
                           for (std::size_t k = 0; k < g.size(); ++k) g[k] *= 0.5 / y[k];
                           t.accumulate(t.inputs(self)[0], std::move(g));
                         });
}

Var clamp_max(Var a, double ceiling) {
  return a.tape().record(map(a.value(), [ceiling](double x) { return std::min(x, ceiling); }),
                         {a.id()}, [ceiling](Tape& t, std::size_t self) {
                           const std::size_t in = t.inputs(self)[0];
                           DenseMatrix g = t.grad(self);
                           const DenseMatrix& x = t.value(in);
                           for (std::size_t k = 0; k < g.size(); ++k)
                             if (x[k] > ceiling) g[k] = 0.0;
                           t.accumulate(in, std::move(g));
                         });
}

Var sum(Var a) {
  return a.tape().record(DenseMatrix(1, 1, inrr::sum(a.value())), {a.id()},
                         [](Tape& t, std::size_t self) {
                           const std::size_t in = t.inputs(self)[0];
                           const DenseMatrix& x = t.value(in);
                           t.accumulate(in, DenseMatrix(x.rows(), x.cols(), t.grad(self)[0]));
                         });
}

Var element(Var a, std::size_t i, std::size_t j) {
  const DenseMatrix& av = a.value();
  if (i >= av.rows() || j >= av.cols()) {
    throw DimensionError("element: (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                         av.shape());
  }
  return a.tape().record(DenseMatrix(1, 1, av(i, j)), {a.id()}, [i, j](Tape& t, std::size_t self) {
    const std::size_t in = t.inputs(self)[0];
    const DenseMatrix& x = t.value(in);
    DenseMatrix d(x.rows(), x.cols());
    d(i, j) = t.grad(self)[0];
    t.accumulate(in, std::move(d));
  });
}

Var row_sums(Var a) {
  const DenseMatrix& av = a.value();
  DenseMatrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double s = 0.0;
    for (double v : av.row_span(i)) s += v;
    out[i] = s;
  }
  return a.tape().record(std::move(out), {a.id()}, [](Tape& t, std::size_t self) {
    const std::size_t in = t.inputs(self)[0];
    const DenseMatrix& x = t.value(in);
    const DenseMatrix& g = t.grad(self);
    DenseMatrix d(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (double& v : d.row_span(i)) v = g[i];
    t.accumulate(in, std::move(d));
  });
}

Var diag(Var column) {
  const DenseMatrix& cv = column.value();
  if (cv.cols() != 1) throw DimensionError("diag: expected a column, got " + cv.shape());
  DenseMatrix out(cv.rows(), cv.rows());
  for (std::size_t i = 0; i < cv.rows(); ++i) out(i, i) = cv[i];
  return column.tape().record(std::move(out), {column.id()}, [](Tape& t, std::size_t self) {
    const DenseMatrix& g = t.grad(self);
    DenseMatrix d(g.rows(), 1);
    for (std::size_t i = 0; i < g.rows(); ++i) d[i] = g(i, i);
    t.accumulate(t.inputs(self)[0], std::move(d));
  });
}

Var reshape(Var a, std::size_t rows, std::size_t cols) {
  const DenseMatrix& av = a.value();
  if (rows * cols != av.size()) {
    throw DimensionError("reshape: cannot view " + av.shape() + " as " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  DenseMatrix out(rows, cols, std::vector<double>(av.data().begin(), av.data().end()));
  return a.tape().record(std::move(out), {a.id()}, [](Tape& t, std::size_t self) {
    const std::size_t in = t.inputs(self)[0];
    const DenseMatrix& x = t.value(in);
    const DenseMatrix& g = t.grad(self);
    t.accumulate(in, DenseMatrix(x.rows(), x.cols(),
                                 std::vector<double>(g.data().begin(), g.data().end())));
  });
}

Var spectral_norm(Var a) {
  const Svd svd = thin_svd(a.value());
  Var v = a.tape().record(DenseMatrix(1, 1, svd.singular_values.empty() ? 0.0 : svd.singular_values[0]),
                          {a.id()}, [](Tape& t, std::size_t self) {
                            const std::size_t in = t.inputs(self)[0];
                            DenseMatrix d = t.aux(self);
                            d *= t.grad(self)[0];
                            t.accumulate(in, std::move(d));
                          });
  if (a.tape().requires_grad(v.id())) {
    const DenseMatrix& x = a.value();
    DenseMatrix uv(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) uv(i, j) = svd.u(i, 0) * svd.v(j, 0);
    a.tape().aux(v.id()) = std::move(uv);
  }
  return v;
}

}  // namespace inrr::ad
