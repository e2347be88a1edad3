#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "inrr/numerics/matrix.hpp"

namespace inrr::ad {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  const DenseMatrix& value() const;
  /// Adjoint after Tape::backward. Empty when no gradient reached this node.
  const DenseMatrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  /// Value of a 1x1 node.
  double scalar() const;

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Computation graph recorded in construction order. Matrix-valued nodes;
/// reverse sweep accumulates adjoints by summation on fan-out. The graph is
/// meant to be rebuilt for every forward pass.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives an adjoint.
  Var constant(DenseMatrix value);
  /// Trainable leaf.
  Var parameter(DenseMatrix value);

  /// Reverse sweep from a 1x1 root. Throws ContractError on a non-scalar root.
  /// Clears adjoints from any earlier sweep first.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }
  const DenseMatrix& value(std::size_t id) const { return nodes_[id].value; }
  const DenseMatrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  bool is_parameter(std::size_t id) const { return nodes_[id].parameter; }

  /// Used by operation implementations.
  Var record(DenseMatrix value, std::vector<std::size_t> inputs, BackwardFn backward);
  const std::vector<std::size_t>& inputs(std::size_t id) const { return nodes_[id].inputs; }
  /// Adds `delta` into the adjoint of node `id` if that node tracks gradients.
  void accumulate(std::size_t id, const DenseMatrix& delta);
  void accumulate(std::size_t id, DenseMatrix&& delta);
  /// Scratch storage an operation may keep for its backward rule.
  DenseMatrix& aux(std::size_t id) { return nodes_[id].aux; }

 private:
  struct Node {
    DenseMatrix value;
    DenseMatrix grad;
    DenseMatrix aux;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    bool parameter = false;
  };
  std::vector<Node> nodes_;
};

Var matmul(Var a, Var b);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
/// Adds a 1xN row to every row of a KxN matrix.
Var add_row(Var a, Var row);
Var scale(Var a, double s);
/// a divided elementwise by the 1x1 node s.
Var divide(Var a, Var s);
Var sin(Var a);
Var relu(Var a);
Var exp(Var a);
Var abs(Var a);
Var square(Var a);
/// Elementwise sqrt; derivative undefined at zero.
Var sqrt(Var a);
/// min(a, ceiling); entries above the ceiling pass no gradient.
Var clamp_max(Var a, double ceiling);
/// Sum of all entries, 1x1.
Var sum(Var a);
/// Entry (i, j) as a 1x1 node.
Var element(Var a, std::size_t i, std::size_t j);
/// Mx1 column of row sums.
Var row_sums(Var a);
/// Diagonal MxM matrix from an Mx1 column.
Var diag(Var column);
/// Same data, new shape (row-major order preserved).
Var reshape(Var a, std::size_t rows, std::size_t cols);
/// Largest singular value, 1x1. Gradient is u1 v1^T.
Var spectral_norm(Var a);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, double s) { return scale(a, s); }
inline Var operator*(double s, Var a) { return scale(a, s); }

}  // namespace inrr::ad
