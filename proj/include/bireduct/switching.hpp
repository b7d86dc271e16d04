#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bireduct/bit_matrix.hpp"
#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"

namespace bireduct {

// A set of vertices to switch, split by side. Switching flips the cross-type
// of exactly those cross-edges with one endpoint in the set.
struct SwitchPattern {
  BitVector left;
  BitVector right;

  static SwitchPattern empty(std::size_t left_count, std::size_t right_count) {
    return {BitVector(left_count), BitVector(right_count)};
  }

  static SwitchPattern from_sets(std::size_t left_count, std::size_t right_count,
                                 std::span<const std::size_t> left_set, std::span<const std::size_t> right_set) {
    return {BitVector::from_indices(left_count, left_set), BitVector::from_indices(right_count, right_set)};
  }

  // Switch with respect to the single vertex v.
  static SwitchPattern single(std::size_t left_count, std::size_t right_count, VertexRef v) {
    SwitchPattern p = empty(left_count, right_count);
    (v.side == Side::Left ? p.left : p.right).set(v.index);
    return p;
  }

  std::size_t left_count() const noexcept { return left.size(); }
  std::size_t right_count() const noexcept { return right.size(); }
  std::size_t popcount() const noexcept { return left.count() + right.count(); }
  bool is_empty() const noexcept { return left.none() && right.none(); }

  // The other representative of the same switch: flipping every vertex on
  // both sides leaves every cross-edge with 0 or 2 switched endpoints.
  SwitchPattern complemented() const { return {~left, ~right}; }

  // Single-vertex switches whose composite is this pattern, L first then R.
  std::vector<VertexRef> vertices() const {
    std::vector<VertexRef> out;
    for (std::size_t i : left.indices()) out.push_back(left_vertex(i));
    for (std::size_t i : right.indices()) out.push_back(right_vertex(i));
    return out;
  }

  friend bool operator==(const SwitchPattern&, const SwitchPattern&) = default;
};

// Composition of switches: symmetric difference of the flip sets.
inline SwitchPattern compose_patterns(const SwitchPattern& p, const SwitchPattern& q) {
  if (p.left_count() != q.left_count() || p.right_count() != q.right_count())
    throw Error(ErrorKind::DimensionMismatch, "switch patterns have different side sizes");
  return {p.left ^ q.left, p.right ^ q.right};
}

inline BipartiteGraph apply_switch(const BipartiteGraph& g, const SwitchPattern& p) {
  if (p.left_count() != g.left_count() || p.right_count() != g.right_count())
    throw Error(ErrorKind::DimensionMismatch, "switch pattern does not match graph sides");
  BitMatrix m = g.cross();
  const BitVector not_right = ~p.right;
  for (std::size_t a = 0; a < g.left_count(); ++a) m.mutable_row(a) ^= p.left.test(a) ? not_right : p.right;
  return BipartiteGraph(std::move(m));
}

// epsilon(a, b) = 1 iff a map changes the cross-type of (a, b).
class FlipMatrix {
 public:
  FlipMatrix() = default;
  explicit FlipMatrix(BitMatrix bits) : bits_(std::move(bits)) {}

  static FlipMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    return FlipMatrix(BitMatrix::from_rows(rows));
  }

  std::size_t rows() const noexcept { return bits_.rows(); }
  std::size_t cols() const noexcept { return bits_.cols(); }
  bool operator()(std::size_t a, std::size_t b) const { return bits_.get(a, b); }
  const BitMatrix& bits() const noexcept { return bits_; }

  bool is_zero() const noexcept { return bits_.all_zero(); }
  bool is_all_ones() const noexcept { return bits_.all_one(); }

  FlipMatrix restricted(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    return FlipMatrix(bits_.submatrix(rows, cols));
  }

  friend FlipMatrix operator^(const FlipMatrix& x, const FlipMatrix& y) { return FlipMatrix(x.bits_ ^ y.bits_); }
  friend bool operator==(const FlipMatrix&, const FlipMatrix&) = default;

 private:
  BitMatrix bits_;
};

inline FlipMatrix flip_matrix(const SidedMap& f, const BipartiteGraph& g, const BipartiteGraph& h) {
  if (f.source_left_count() != g.left_count() || f.source_right_count() != g.right_count())
    throw Error(ErrorKind::OutOfRange, "map domain does not match the source graph");
  if (f.target_left_count() > h.left_count() || f.target_right_count() > h.right_count())
    throw Error(ErrorKind::OutOfRange, "map targets exceed the target graph");
  BitMatrix e(g.left_count(), g.right_count());
  for (std::size_t a = 0; a < g.left_count(); ++a) {
    const std::size_t fa = f.map_left(a);
    for (std::size_t b = 0; b < g.right_count(); ++b)
      if (g.is_p1(a, b) != h.is_p1(fa, f.map_right(b))) e.set(a, b);
  }
  return FlipMatrix(std::move(e));
}

// epsilon(a, b) = left[a] XOR right[b].
inline FlipMatrix pattern_flip_matrix(const SwitchPattern& p) {
  BitMatrix e(p.left_count(), p.right_count());
  const BitVector not_right = ~p.right;
  for (std::size_t a = 0; a < p.left_count(); ++a) e.mutable_row(a) = p.left.test(a) ? not_right : p.right;
  return FlipMatrix(std::move(e));
}

// Flip matrix of a global exchange over the given shape.
inline FlipMatrix exchange_flip_matrix(std::size_t rows, std::size_t cols) {
  return FlipMatrix(BitMatrix(rows, cols, true));
}

}  // namespace bireduct
