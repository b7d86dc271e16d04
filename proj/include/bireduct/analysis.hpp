#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "bireduct/classify.hpp"
#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"
#include "bireduct/switching.hpp"

namespace bireduct {

enum class Polarity { Preserved, Flipped };

inline std::string_view to_string(Polarity p) { return p == Polarity::Preserved ? "PRESERVED" : "FLIPPED"; }

// m x n block of the domain on which a map either keeps every cross-type or
// exchanges every cross-type.
struct UniformCore {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  Polarity polarity = Polarity::Preserved;
  friend bool operator==(const UniformCore&, const UniformCore&) = default;
};

namespace detail {

// Lexicographically least m-row set whose rows all equal `value` on at least
// n common columns; the columns are the first n such.
class ConstantBlockSearch {
 public:
  ConstantBlockSearch(const FlipMatrix& e, std::size_t m, std::size_t n, bool value) : e_(e), m_(m), n_(n) {
    for (std::size_t a = 0; a < e.rows(); ++a) rows_.push_back(value ? e.bits().row(a) : ~e.bits().row(a));
  }

  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> run() {
    if (m_ > e_.rows() || n_ > e_.cols()) return std::nullopt;
    chosen_.clear();
    if (!search(0, BitVector(e_.cols(), true))) return std::nullopt;
    std::vector<std::size_t> cols;
    for (std::size_t b = columns_.first_set(); cols.size() < n_; b = columns_.next_set(b + 1)) cols.push_back(b);
    return std::make_pair(chosen_, cols);
  }

 private:
  bool search(std::size_t start, const BitVector& cols) {
    if (chosen_.size() == m_) {
      columns_ = cols;
      return true;
    }
    for (std::size_t a = start; a + (m_ - chosen_.size()) <= rows_.size(); ++a) {
      BitVector next = cols & rows_[a];
      if (next.count() < n_) continue;
      chosen_.push_back(a);
      if (search(a + 1, next)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const FlipMatrix& e_;
  std::size_t m_;
  std::size_t n_;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> chosen_;
  BitVector columns_;
};

inline void check_total(const SidedMap& f, const BipartiteGraph& g, const BipartiteGraph& h) {
  if (f.source_left_count() != g.left_count() || f.source_right_count() != g.right_count())
    throw Error(ErrorKind::DimensionMismatch, "map must be total on the source graph");
  if (f.target_left_count() != h.left_count() || f.target_right_count() != h.right_count())
    throw Error(ErrorKind::DimensionMismatch, "map targets do not match the target graph");
}

}  // namespace detail

// Exact search for an m x n block on which the flip matrix of f is constant.
// Zero blocks (PRESERVED) win over one blocks (FLIPPED); within a polarity the
// lexicographically least (left set, right set) is returned.
inline std::optional<UniformCore> find_uniform_subset(const FlipMatrix& e, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw Error(ErrorKind::InvalidArgument, "core sizes must be positive");
  for (Polarity pol : {Polarity::Preserved, Polarity::Flipped}) {
    if (auto found = detail::ConstantBlockSearch(e, m, n, pol == Polarity::Flipped).run())
      return UniformCore{std::move(found->first), std::move(found->second), pol};
  }
  return std::nullopt;
}

inline std::optional<UniformCore> find_uniform_subset(const SidedMap& f, const BipartiteGraph& g,
                                                      const BipartiteGraph& h, std::size_t m, std::size_t n) {
  detail::check_total(f, g, h);
  return find_uniform_subset(flip_matrix(f, g, h), m, n);
}

enum class StageKind { Iso, SwitchVertex };
enum class GlobalPrefix { Identity, Exchange };

inline std::string_view to_string(StageKind k) { return k == StageKind::Iso ? "ISO" : "SWITCH_VERTEX"; }
inline std::string_view to_string(GlobalPrefix g) { return g == GlobalPrefix::Identity ? "IDENTITY" : "EXCHANGE"; }

// One step theta_j: an automorphism or a switch at `vertex`, agreeing with the
// running composite on the (m x n)-subgraph Y_j.
struct AnalysisStage {
  StageKind kind = StageKind::Iso;
  std::optional<VertexRef> vertex;  // present iff kind == SwitchVertex
  std::vector<std::size_t> witness_left;
  std::vector<std::size_t> witness_right;
  friend bool operator==(const AnalysisStage&, const AnalysisStage&) = default;
};

struct AnalysisTrace {
  std::size_t m = 0;
  std::size_t n = 0;
  GlobalPrefix global_prefix = GlobalPrefix::Identity;
  std::vector<AnalysisStage> stages;
  bool final_check = false;

  std::size_t switch_count() const {
    return static_cast<std::size_t>(std::count_if(stages.begin(), stages.end(), [](const AnalysisStage& s) {
      return s.kind == StageKind::SwitchVertex;
    }));
  }
  friend bool operator==(const AnalysisTrace&, const AnalysisTrace&) = default;
};

// Replays a trace from scratch. Vertices never move after f, so every step
// acts on the flip matrix of the running composite: the prefix XORs the
// all-ones matrix in when it is an exchange, and undoing a switch at v XORs
// v's row or column. Checks the stage shape, that each theta_j agrees with
// the composite on Y_j, and that the final composite keeps every cross-type.
inline bool verify_trace(const AnalysisTrace& trace, const SidedMap& f, const BipartiteGraph& g,
                         const BipartiteGraph& h) {
  if (!f.fits(g, h)) return false;
  if (trace.m <= 2 || trace.n <= 2 || trace.m > g.left_count() || trace.n > g.right_count()) return false;
  FlipMatrix current = flip_matrix(f, g, h);
  if (trace.global_prefix == GlobalPrefix::Exchange)
    current = current ^ exchange_flip_matrix(current.rows(), current.cols());

  auto valid_set = [](const std::vector<std::size_t>& s, std::size_t size, std::size_t bound) {
    return s.size() == size && std::is_sorted(s.begin(), s.end()) &&
           std::adjacent_find(s.begin(), s.end()) == s.end() && (s.empty() || s.back() < bound);
  };

  for (const AnalysisStage& st : trace.stages) {
    if (!valid_set(st.witness_left, trace.m, g.left_count()) ||
        !valid_set(st.witness_right, trace.n, g.right_count()))
      return false;
    if ((st.kind == StageKind::SwitchVertex) != st.vertex.has_value()) return false;

    FlipMatrix theta(BitMatrix(g.left_count(), g.right_count()));
    if (st.kind == StageKind::SwitchVertex) {
      const VertexRef v = *st.vertex;
      const auto& ws = v.side == Side::Left ? st.witness_left : st.witness_right;
      if (!std::binary_search(ws.begin(), ws.end(), v.index)) return false;
      theta = pattern_flip_matrix(SwitchPattern::single(g.left_count(), g.right_count(), v));
    }
    if (!(current.restricted(st.witness_left, st.witness_right) == theta.restricted(st.witness_left, st.witness_right)))
      return false;
    current = current ^ theta;
  }
  return current.is_zero();
}

// Stages of an (m x n)-analysis of f, or empty when the flip matrix of f
// fails 2x2 parity (f is not a restriction of S_{l,r}).
//
// The first stage is the automorphism on the uniform core itself. Every
// vertex outside the core then gets one stage, left side first, ascending:
// a switch at the vertex when the composite still exchanges its cross-types
// to the core, otherwise an automorphism. Y_j is the core with its last
// vertex on the peeled vertex's side replaced by that vertex.
inline std::optional<AnalysisTrace> mn_analysis(const SidedMap& f, const BipartiteGraph& g, const BipartiteGraph& h,
                                                std::size_t m, std::size_t n) {
  detail::check_total(f, g, h);
  if (m <= 2 || n <= 2) throw Error(ErrorKind::TooSmall, "an (m x n)-analysis needs m, n > 2");
  if (g.left_count() < m || g.right_count() < n)
    throw Error(ErrorKind::TooSmall, "domain smaller than " + std::to_string(m) + "x" + std::to_string(n));

  const FlipMatrix e = flip_matrix(f, g, h);
  if (!preserves_2x2_parity(e)) return std::nullopt;

  const auto core = find_uniform_subset(e, m, n);
  if (!core)
    throw Error(ErrorKind::TooSmall, "no uniform " + std::to_string(m) + "x" + std::to_string(n) +
                                         " core; the domain is too small for an analysis");

  AnalysisTrace trace;
  trace.m = m;
  trace.n = n;
  trace.global_prefix = core->polarity == Polarity::Flipped ? GlobalPrefix::Exchange : GlobalPrefix::Identity;
  FlipMatrix e0 = e;
  if (trace.global_prefix == GlobalPrefix::Exchange) e0 = e0 ^ exchange_flip_matrix(e.rows(), e.cols());

  trace.stages.push_back({StageKind::Iso, std::nullopt, core->left, core->right});

  auto peel = [&](Side side, std::size_t v, bool switched) {
    AnalysisStage st;
    st.kind = switched ? StageKind::SwitchVertex : StageKind::Iso;
    if (switched) st.vertex = VertexRef{side, v};
    st.witness_left = core->left;
    st.witness_right = core->right;
    auto& w = side == Side::Left ? st.witness_left : st.witness_right;
    w.back() = v;
    std::sort(w.begin(), w.end());
    trace.stages.push_back(std::move(st));
  };

  for (std::size_t a = 0; a < g.left_count(); ++a)
    if (!std::binary_search(core->left.begin(), core->left.end(), a)) peel(Side::Left, a, e0(a, core->right.front()));
  for (std::size_t b = 0; b < g.right_count(); ++b)
    if (!std::binary_search(core->right.begin(), core->right.end(), b))
      peel(Side::Right, b, e0(core->left.front(), b));

  trace.final_check = verify_trace(trace, f, g, h);
  return trace;
}

}  // namespace bireduct
