#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bireduct/bit_matrix.hpp"
#include "bireduct/error.hpp"

namespace bireduct {

enum class Side { Left, Right };

inline Side opposite(Side s) noexcept { return s == Side::Left ? Side::Right : Side::Left; }
inline char side_letter(Side s) noexcept { return s == Side::Left ? 'L' : 'R'; }

struct VertexRef {
  Side side = Side::Left;
  std::size_t index = 0;

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

inline VertexRef left_vertex(std::size_t i) { return {Side::Left, i}; }
inline VertexRef right_vertex(std::size_t i) { return {Side::Right, i}; }

inline std::string to_string(VertexRef v) { return side_letter(v.side) + std::to_string(v.index); }

// The two cross-types. P1 is stored as bit 1.
enum class CrossType { P1, P2 };

inline std::string_view to_string(CrossType t) { return t == CrossType::P1 ? "P1" : "P2"; }

struct CrossEdge {
  std::size_t left = 0;
  std::size_t right = 0;
};

// Finite two-sided graph in which every left-right pair carries exactly one
// cross-type. Both sides are nonempty. Immutable after construction.
class BipartiteGraph {
 public:
  // Takes ownership of the cross-type matrix: rows are left vertices,
  // columns right vertices, bit 1 = P1.
  explicit BipartiteGraph(BitMatrix cross) : cross_(std::move(cross)) {
    if (cross_.rows() == 0 || cross_.cols() == 0)
      throw Error(ErrorKind::ZeroSide, "a bipartite graph needs at least one vertex on each side");
  }

  static BipartiteGraph make(std::size_t left_count, std::size_t right_count, const BitMatrix& cross) {
    if (left_count == 0 || right_count == 0)
      throw Error(ErrorKind::ZeroSide, "a bipartite graph needs at least one vertex on each side");
    if (cross.rows() != left_count || cross.cols() != right_count)
      throw Error(ErrorKind::DimensionMismatch, "cross-type matrix is " + std::to_string(cross.rows()) + "x" +
                                                    std::to_string(cross.cols()) + ", expected " +
                                                    std::to_string(left_count) + "x" + std::to_string(right_count));
    return BipartiteGraph(cross);
  }

  static BipartiteGraph from_rows(const std::vector<std::vector<int>>& rows) {
    return BipartiteGraph(BitMatrix::from_rows(rows));
  }

  std::size_t left_count() const noexcept { return cross_.rows(); }
  std::size_t right_count() const noexcept { return cross_.cols(); }
  std::size_t side_count(Side s) const noexcept { return s == Side::Left ? left_count() : right_count(); }

  const BitMatrix& cross() const noexcept { return cross_; }

  bool is_p1(std::size_t left, std::size_t right) const { return cross_.get(left, right); }

  CrossType cross_type(CrossEdge e) const {
    if (e.left >= left_count() || e.right >= right_count())
      throw Error(ErrorKind::OutOfRange, "cross-edge (L" + std::to_string(e.left) + ",R" + std::to_string(e.right) +
                                             ") outside a " + std::to_string(left_count()) + "x" +
                                             std::to_string(right_count()) + " graph");
    return cross_.get(e.left, e.right) ? CrossType::P1 : CrossType::P2;
  }

  std::size_t p1_count() const noexcept { return cross_.count(); }

  // Same vertices with every cross-type exchanged.
  BipartiteGraph exchanged() const { return BipartiteGraph(cross_.complemented()); }

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  BitMatrix cross_;
};

namespace detail {

inline std::vector<std::size_t> checked_index_set(std::span<const std::size_t> set, std::size_t bound,
                                                  std::string_view what) {
  if (set.empty()) throw Error(ErrorKind::ZeroSide, std::string(what) + " index set is empty");
  std::vector<std::size_t> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.back() >= bound)
    throw Error(ErrorKind::OutOfRange,
                std::string(what) + " index " + std::to_string(sorted.back()) + " >= " + std::to_string(bound));
  return sorted;
}

}  // namespace detail

// The (|left_set| x |right_set|)-subgraph on the given vertices, rows and
// columns in ascending index order.
inline BipartiteGraph induced_subgraph(const BipartiteGraph& g, std::span<const std::size_t> left_set,
                                       std::span<const std::size_t> right_set) {
  const auto rows = detail::checked_index_set(left_set, g.left_count(), "left");
  const auto cols = detail::checked_index_set(right_set, g.right_count(), "right");
  return BipartiteGraph(g.cross().submatrix(rows, cols));
}

// Side-preserving injection between the vertex sets of two bipartite graphs.
// left[a] is the image of left vertex a, right[b] the image of right vertex b.
class SidedMap {
 public:
  SidedMap(std::vector<std::size_t> left, std::vector<std::size_t> right, std::size_t target_left_count,
           std::size_t target_right_count)
      : left_(std::move(left)),
        right_(std::move(right)),
        target_left_(target_left_count),
        target_right_(target_right_count) {
    check_injective(left_, target_left_, Side::Left);
    check_injective(right_, target_right_, Side::Right);
  }

  static SidedMap identity(std::size_t left_count, std::size_t right_count) {
    std::vector<std::size_t> l(left_count), r(right_count);
    std::iota(l.begin(), l.end(), std::size_t{0});
    std::iota(r.begin(), r.end(), std::size_t{0});
    return SidedMap(std::move(l), std::move(r), left_count, right_count);
  }

  const std::vector<std::size_t>& left() const noexcept { return left_; }
  const std::vector<std::size_t>& right() const noexcept { return right_; }
  std::size_t source_left_count() const noexcept { return left_.size(); }
  std::size_t source_right_count() const noexcept { return right_.size(); }
  std::size_t target_left_count() const noexcept { return target_left_; }
  std::size_t target_right_count() const noexcept { return target_right_; }

  std::size_t map_left(std::size_t a) const { return left_.at(a); }
  std::size_t map_right(std::size_t b) const { return right_.at(b); }
  VertexRef operator()(VertexRef v) const {
    return {v.side, v.side == Side::Left ? map_left(v.index) : map_right(v.index)};
  }

  bool is_bijection() const noexcept { return left_.size() == target_left_ && right_.size() == target_right_; }

  // Domain sides match g's sides and images fall inside h's sides.
  bool fits(const BipartiteGraph& g, const BipartiteGraph& h) const noexcept {
    return left_.size() == g.left_count() && right_.size() == g.right_count() && target_left_ == h.left_count() &&
           target_right_ == h.right_count();
  }

  SidedMap inverse() const {
    if (!is_bijection()) throw Error(ErrorKind::InvalidArgument, "only bijections have inverses");
    std::vector<std::size_t> l(left_.size()), r(right_.size());
    for (std::size_t a = 0; a < left_.size(); ++a) l[left_[a]] = a;
    for (std::size_t b = 0; b < right_.size(); ++b) r[right_[b]] = b;
    return SidedMap(std::move(l), std::move(r), left_.size(), right_.size());
  }

  friend bool operator==(const SidedMap&, const SidedMap&) = default;
  friend auto operator<=>(const SidedMap& a, const SidedMap& b) {
    if (auto c = a.left_ <=> b.left_; c != 0) return c;
    return a.right_ <=> b.right_;
  }

 private:
  static void check_injective(const std::vector<std::size_t>& images, std::size_t bound, Side side) {
    std::vector<bool> seen(bound, false);
    for (std::size_t i = 0; i < images.size(); ++i) {
      const std::size_t t = images[i];
      if (t >= bound)
        throw Error(ErrorKind::OutOfRange, std::string(1, side_letter(side)) + std::to_string(i) + " maps to " +
                                               std::to_string(t) + ", target side has " + std::to_string(bound));
      if (seen[t])
        throw Error(ErrorKind::DuplicateTarget,
                    std::string(1, side_letter(side)) + " target " + std::to_string(t) + " is hit twice");
      seen[t] = true;
    }
  }

  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
  std::size_t target_left_ = 0;
  std::size_t target_right_ = 0;
};

// g after f.
inline SidedMap compose(const SidedMap& g, const SidedMap& f) {
  if (f.target_left_count() != g.source_left_count() || f.target_right_count() != g.source_right_count())
    throw Error(ErrorKind::DimensionMismatch, "maps are not composable");
  std::vector<std::size_t> l(f.source_left_count()), r(f.source_right_count());
  for (std::size_t a = 0; a < l.size(); ++a) l[a] = g.map_left(f.map_left(a));
  for (std::size_t b = 0; b < r.size(); ++b) r[b] = g.map_right(f.map_right(b));
  return SidedMap(std::move(l), std::move(r), g.target_left_count(), g.target_right_count());
}

inline bool is_isomorphism(const SidedMap& f, const BipartiteGraph& g, const BipartiteGraph& h) {
  if (!f.fits(g, h) || !f.is_bijection()) return false;
  for (std::size_t a = 0; a < g.left_count(); ++a)
    for (std::size_t b = 0; b < g.right_count(); ++b)
      if (g.is_p1(a, b) != h.is_p1(f.map_left(a), f.map_right(b))) return false;
  return true;
}

namespace detail {

// Backtracking over left images in ascending order. After each left
// assignment the multiset of right-vertex signatures (bits against the
// assigned left prefix) must agree between the two graphs; once the left side
// is fixed, right images are enumerated among columns with equal signature.
class IsoSearch {
 public:
  IsoSearch(const BipartiteGraph& g, const BipartiteGraph& h)
      : g_(g),
        h_(h),
        nl_(g.left_count()),
        nr_(g.right_count()),
        left_img_(nl_),
        left_used_(nl_, false),
        sig_g_(nr_),
        sig_h_(nr_) {}

  std::vector<SidedMap> run() {
    assign_left(0);
    return std::move(out_);
  }

 private:
  void assign_left(std::size_t a) {
    if (a == nl_) {
      right_img_.assign(nr_, 0);
      right_used_.assign(nr_, false);
      assign_right(0);
      return;
    }
    const std::size_t row_count = g_.cross().row(a).count();
    for (std::size_t c = 0; c < nl_; ++c) {
      if (left_used_[c] || h_.cross().row(c).count() != row_count) continue;
      for (std::size_t b = 0; b < nr_; ++b) {
        sig_g_[b].push_back(g_.is_p1(a, b) ? '1' : '0');
        sig_h_[b].push_back(h_.is_p1(c, b) ? '1' : '0');
      }
      if (signatures_agree()) {
        left_used_[c] = true;
        left_img_[a] = c;
        assign_left(a + 1);
        left_used_[c] = false;
      }
      for (std::size_t b = 0; b < nr_; ++b) {
        sig_g_[b].pop_back();
        sig_h_[b].pop_back();
      }
    }
  }

  void assign_right(std::size_t b) {
    if (b == nr_) {
      out_.emplace_back(left_img_, right_img_, nl_, nr_);
      return;
    }
    for (std::size_t c = 0; c < nr_; ++c) {
      if (right_used_[c] || sig_h_[c] != sig_g_[b]) continue;
      right_used_[c] = true;
      right_img_[b] = c;
      assign_right(b + 1);
      right_used_[c] = false;
    }
  }

  bool signatures_agree() const {
    auto a = sig_g_;
    auto b = sig_h_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  }

  const BipartiteGraph& g_;
  const BipartiteGraph& h_;
  std::size_t nl_;
  std::size_t nr_;
  std::vector<std::size_t> left_img_;
  std::vector<bool> left_used_;
  std::vector<std::size_t> right_img_;
  std::vector<bool> right_used_;
  std::vector<std::string> sig_g_;
  std::vector<std::string> sig_h_;
  std::vector<SidedMap> out_;
};

}  // namespace detail

// Every side-preserving isomorphism g -> h, ordered lexicographically by
// (left map, right map). Graphs with different side sizes yield an empty list.
inline std::vector<SidedMap> find_isomorphisms(const BipartiteGraph& g, const BipartiteGraph& h) {
  if (g.left_count() != h.left_count() || g.right_count() != h.right_count()) return {};
  if (g.p1_count() != h.p1_count()) return {};
  return detail::IsoSearch(g, h).run();
}

inline std::ostream& operator<<(std::ostream& os, const BipartiteGraph& g) {
  os << g.left_count() << 'x' << g.right_count() << '[';
  for (std::size_t a = 0; a < g.left_count(); ++a) {
    if (a) os << ' ';
    for (std::size_t b = 0; b < g.right_count(); ++b) os << (g.is_p1(a, b) ? '1' : '0');
  }
  return os << ']';
}

}  // namespace bireduct
