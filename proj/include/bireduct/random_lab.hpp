#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"
#include "bireduct/parallel.hpp"

namespace bireduct {

// ---------------------------------------------------------------------------
// Bit stream
//
// SplitMix64, used as a counter-based stream so any position can be read
// directly. With seed s, the output at position p (0-based) is
//
//   z = s + (p + 1) * 0x9E3779B97F4A7C15          (mod 2^64)
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   out = z ^ (z >> 31)
//
// which is exactly the p-th value returned by a sequential SplitMix64
// generator initialised with state s.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t stream_at(std::uint64_t seed, std::uint64_t position) noexcept {
  return splitmix64_mix(seed + (position + 1) * kGoldenGamma);
}

// Sequential view of the same stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do x = (*this)();
    while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

// Seed for trial t of a run with the given master seed: the t-th stream value.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return stream_at(master, trial);
}

// Rosenberg-Strong pairing: shell z = max(a, b) holds positions z^2 .. z^2+2z,
// so every a x b prefix of the infinite matrix is stable.
constexpr std::uint64_t pair_position(std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t z = std::max(a, b);
  return z * z + z + a - b;
}

// Cross-type of (a, b) in the infinite seeded random bipartite matrix: the
// top bit of the stream value at pair_position(a, b).
constexpr bool random_cross_bit(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return (stream_at(seed, pair_position(a, b)) >> 63) != 0;
}

// Each cross-edge is P1 with probability 1/2. The result is the top-left
// m x n corner of a single infinite matrix per seed.
inline BipartiteGraph sample_graph(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw Error(ErrorKind::ZeroSide, "sample_graph needs m, n >= 1");
  BitMatrix bits(m, n);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (random_cross_bit(seed, a, b)) bits.set(a, b);
  return BipartiteGraph(std::move(bits));
}

// ---------------------------------------------------------------------------
// Extension property
// ---------------------------------------------------------------------------

// A violated instance of the extension property: disjoint X1, X2 on `side`
// such that no vertex of the opposite side is P1 to all of X1 and P2 to all
// of X2.
struct ThetaFailure {
  Side side = Side::Left;
  std::vector<std::size_t> x1;
  std::vector<std::size_t> x2;
  friend bool operator==(const ThetaFailure&, const ThetaFailure&) = default;
};

struct ThetaWitness {
  bool ok = true;
  std::optional<ThetaFailure> failing_instance;
};

namespace detail {

// Enumerates instances of one clause. `rows[x]` is the set of opposite-side
// vertices that are P1 to x. Instance order: |X1|+|X2| ascending, then the
// union U ascending lexicographically, then the split mask ascending, where
// bit i of the mask puts the i-th element of U into X2.
class ThetaClauseSearch {
 public:
  ThetaClauseSearch(const std::vector<BitVector>& rows, std::size_t opposite, std::size_t k)
      : rows_(rows), opposite_(opposite), k_(k) {}

  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> first_failure() {
    const std::size_t max_total = std::min(rows_.size(), 2 * k_);
    for (std::size_t total = 0; total <= max_total; ++total) {
      target_ = total;
      chosen_.clear();
      layers_.assign(1, {{0, 0, BitVector(opposite_, true)}});
      if (search(0)) return result_;
    }
    return std::nullopt;
  }

 private:
  struct Partial {
    std::uint64_t mask;
    std::size_t in_x2;
    BitVector candidates;
  };

  bool search(std::size_t start) {
    const std::size_t depth = chosen_.size();
    if (depth == target_) return check_leaf();
    for (std::size_t x = start; x + (target_ - depth) <= rows_.size(); ++x) {
      std::vector<Partial> next;
      next.reserve(layers_.back().size() * 2);
      for (const Partial& p : layers_.back()) {
        if (depth - p.in_x2 < k_) next.push_back({p.mask, p.in_x2, p.candidates & rows_[x]});
        if (p.in_x2 < k_) {
          BitVector c = p.candidates;
          c.and_not(rows_[x]);
          next.push_back({p.mask | (std::uint64_t{1} << depth), p.in_x2 + 1, std::move(c)});
        }
      }
      chosen_.push_back(x);
      layers_.push_back(std::move(next));
      if (search(x + 1)) return true;
      layers_.pop_back();
      chosen_.pop_back();
    }
    return false;
  }

  bool check_leaf() {
    std::vector<const Partial*> leaves;
    for (const Partial& p : layers_.back()) leaves.push_back(&p);
    std::sort(leaves.begin(), leaves.end(), [](const Partial* a, const Partial* b) { return a->mask < b->mask; });
    for (const Partial* p : leaves) {
      if (p->candidates.any()) continue;
      result_.first.clear();
      result_.second.clear();
      for (std::size_t i = 0; i < chosen_.size(); ++i)
        ((p->mask >> i) & 1U ? result_.second : result_.first).push_back(chosen_[i]);
      return true;
    }
    return false;
  }

  const std::vector<BitVector>& rows_;
  std::size_t opposite_;
  std::size_t k_;
  std::size_t target_ = 0;
  std::vector<std::size_t> chosen_;
  std::vector<std::vector<Partial>> layers_;
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> result_;
};

}  // namespace detail

// Exhaustive check of the extension property for sets of size <= k on both
// sides. Clause (a) (X-sets on the left, witness on the right) is checked
// before clause (b); within a clause instances are ordered as documented on
// ThetaClauseSearch. Empty requirements are met by any opposite vertex.
inline ThetaWitness check_theta(const BipartiteGraph& g, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "check_theta needs k >= 1");
  if (2 * k > 64) throw Error(ErrorKind::TooLarge, "check_theta supports k <= 32");
  std::vector<BitVector> left_rows, right_rows;
  for (std::size_t a = 0; a < g.left_count(); ++a) left_rows.push_back(g.cross().row(a));
  const BitMatrix t = g.cross().transposed();
  for (std::size_t b = 0; b < g.right_count(); ++b) right_rows.push_back(t.row(b));

  if (auto f = detail::ThetaClauseSearch(left_rows, g.right_count(), k).first_failure())
    return {false, ThetaFailure{Side::Left, std::move(f->first), std::move(f->second)}};
  if (auto f = detail::ThetaClauseSearch(right_rows, g.left_count(), k).first_failure())
    return {false, ThetaFailure{Side::Right, std::move(f->first), std::move(f->second)}};
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Failure bound
// ---------------------------------------------------------------------------

// Binomial coefficient as a double; zero when b > a or a < 0.
inline double binomial(double a, double b) {
  if (b < 0 || a < b) return 0.0;
  if (a - b < b) b = a - b;
  double r = 1.0;
  for (double i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;
    if (!std::isfinite(r)) {
      return std::exp(std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1));
    }
  }
  return r;
}

// Natural log of binom(a, b); -inf when the coefficient is zero.
inline double log_binomial(double a, double b) {
  if (b < 0 || a < b) return -std::numeric_limits<double>::infinity();
  return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1);
}

// log C_m, finite well past the point where C_m itself underflows.
inline double log_failure_bound_term(std::size_t m, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "failure_bound_term needs k >= 1");
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double q = 1.0 - std::pow(0.25, kd);
  return log_binomial(md + 1, kd) + log_binomial(md + 1 - kd, kd) + (md - 2 * kd) * std::log(q);
}

// C_m = binom(m+1, k) * binom(m+1-k, k) * (1 - 4^-k)^(m - 2k). The exponent
// is used as written, negative for m < 2k. Underflows to 0 for large m
// (C_m < 1e-308 from about m = 2500 at k = 1).
inline double failure_bound_term(std::size_t m, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "failure_bound_term needs k >= 1");
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double b1 = binomial(md + 1, kd);
  const double b2 = binomial(md + 1 - kd, kd);
  if (b1 == 0.0 || b2 == 0.0) return 0.0;
  const double direct = b1 * b2 * std::pow(1.0 - std::pow(0.25, kd), md - 2 * kd);
  if (std::isfinite(direct) && direct > 0) return direct;
  return std::exp(log_failure_bound_term(m, k));
}

// C_{m+1} / C_m evaluated from the terms themselves (through their logs).
inline double failure_bound_term_ratio(std::size_t m, std::size_t k) {
  return std::exp(log_failure_bound_term(m + 1, k) - log_failure_bound_term(m, k));
}

// Limit of C_{m+1} / C_m.
inline double failure_bound_ratio_limit(std::size_t k) { return 1.0 - std::pow(0.25, static_cast<double>(k)); }

// C_{m+1} / C_m in closed form, (1 - 4^-k) (m + 2) / (m + 2 - 2k), valid for
// m + 1 >= 2k. It decreases towards the limit as m grows.
inline double failure_bound_ratio(std::size_t m, std::size_t k) {
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  return failure_bound_ratio_limit(k) * (md + 2) / (md + 2 - 2 * kd);
}

// Per-size analytic bound on the probability that a graph with
// n_total = 2m or 2m + 1 vertices fails the extension property: 4 C_m.
inline double analytic_failure_term(std::size_t n_total, std::size_t k) {
  return 4.0 * failure_bound_term(n_total / 2, k);
}

// sum_{m = m0}^{m0 + terms - 1} 4 C_m plus a geometric bound on the rest.
// From M = m0 + terms on, consecutive ratios are at most r = C_{M+1}/C_M, so
// the remainder is at most 4 C_M / (1 - r). Infinite while r >= 1.
inline double bound_tail_sum(std::size_t m0, std::size_t k, std::size_t terms) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "bound_tail_sum needs k >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < terms; ++i) sum += 4.0 * failure_bound_term(m0 + i, k);
  std::size_t tail_start = m0 + terms;
  // Terms below 2k - 1 are either zero or outside the monotone-ratio regime;
  // fold them into the explicit sum.
  while (tail_start + 1 < 2 * k) sum += 4.0 * failure_bound_term(tail_start++, k);
  const double r = failure_bound_ratio(tail_start, k);
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  return sum + 4.0 * failure_bound_term(tail_start, k) / (1.0 - r);
}

// ---------------------------------------------------------------------------
// Chains and Monte Carlo
// ---------------------------------------------------------------------------

// Side split of the i-th chain member: equal halves for even i, one extra
// left vertex for odd i.
constexpr std::pair<std::size_t, std::size_t> chain_sides(std::size_t n_total) noexcept {
  return {(n_total + 1) / 2, n_total / 2};
}

// Gamma_2 subset Gamma_3 subset ... subset Gamma_max_size, all corners of one
// seeded matrix. Element i - 2 has i vertices.
inline std::vector<BipartiteGraph> build_chain(std::size_t max_size, std::uint64_t seed) {
  if (max_size < 2) throw Error(ErrorKind::InvalidArgument, "build_chain needs max_size >= 2");
  std::vector<BipartiteGraph> chain;
  chain.reserve(max_size - 1);
  for (std::size_t i = 2; i <= max_size; ++i) {
    const auto [l, r] = chain_sides(i);
    chain.push_back(sample_graph(l, r, seed));
  }
  return chain;
}

struct FailureEstimate {
  double rate = 0.0;
  double ci95 = 0.0;
  std::size_t failures = 0;
  std::size_t trials = 0;
};

// Fraction of sampled graphs (side split as in the chain) that fail the
// extension property with parameter k. Trial t samples with
// trial_seed(seed, t); the 95% half-width is the normal approximation.
inline FailureEstimate estimate_theta_failure(std::size_t n_total, std::size_t k, std::size_t trials,
                                              std::uint64_t seed) {
  if (n_total < 2) throw Error(ErrorKind::ZeroSide, "n_total must be at least 2");
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  const auto [l, r] = chain_sides(n_total);
  std::vector<char> failed(trials, 0);
  parallel_for(trials, [&, l = l, r = r](std::size_t t) {
    failed[t] = check_theta(sample_graph(l, r, trial_seed(seed, t)), k).ok ? 0 : 1;
  });
  FailureEstimate est;
  est.trials = trials;
  est.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  est.rate = static_cast<double>(est.failures) / static_cast<double>(trials);
  est.ci95 = 1.96 * std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(trials));
  return est;
}

// ---------------------------------------------------------------------------
// Back-and-forth
// ---------------------------------------------------------------------------

// Finite partial side-preserving map of a graph into itself, stored as
// (source, image) pairs per side in insertion order.
struct PartialIso {
  std::vector<std::pair<std::size_t, std::size_t>> left;
  std::vector<std::pair<std::size_t, std::size_t>> right;

  const std::vector<std::pair<std::size_t, std::size_t>>& side(Side s) const { return s == Side::Left ? left : right; }
  std::vector<std::pair<std::size_t, std::size_t>>& side(Side s) { return s == Side::Left ? left : right; }

  bool in_domain(VertexRef v) const {
    for (const auto& [src, img] : side(v.side))
      if (src == v.index) return true;
    return false;
  }
  bool in_range(VertexRef v) const {
    for (const auto& [src, img] : side(v.side))
      if (img == v.index) return true;
    return false;
  }

  friend bool operator==(const PartialIso&, const PartialIso&) = default;
};

// Injective on both sides, indices in range, and every cross-edge of the
// domain keeps its cross-type.
inline bool is_partial_isomorphism(const BipartiteGraph& g, const PartialIso& f) {
  for (Side s : {Side::Left, Side::Right}) {
    std::vector<bool> src_seen(g.side_count(s)), img_seen(g.side_count(s));
    for (const auto& [src, img] : f.side(s)) {
      if (src >= g.side_count(s) || img >= g.side_count(s) || src_seen[src] || img_seen[img]) return false;
      src_seen[src] = img_seen[img] = true;
    }
  }
  for (const auto& [a, fa] : f.left)
    for (const auto& [b, fb] : f.right)
      if (g.is_p1(a, b) != g.is_p1(fa, fb)) return false;
  return true;
}

// One forth step: the least-index w on v's side, outside the range of f, such
// that f + {v -> w} is still a partial isomorphism. Empty if none exists.
inline std::optional<PartialIso> extend_partial_iso(const BipartiteGraph& g, const PartialIso& f, VertexRef v) {
  if (v.index >= g.side_count(v.side)) throw Error(ErrorKind::OutOfRange, "vertex " + to_string(v) + " not in graph");
  if (!is_partial_isomorphism(g, f)) throw Error(ErrorKind::InvalidArgument, "input is not a partial isomorphism");
  if (f.in_domain(v)) throw Error(ErrorKind::InvalidArgument, "vertex " + to_string(v) + " already in the domain");

  const auto& constraints = f.side(opposite(v.side));
  auto p1 = [&](std::size_t x, std::size_t y) { return v.side == Side::Left ? g.is_p1(x, y) : g.is_p1(y, x); };
  for (std::size_t w = 0; w < g.side_count(v.side); ++w) {
    if (f.in_range({v.side, w})) continue;
    bool good = true;
    for (const auto& [u, fu] : constraints)
      if (p1(v.index, u) != p1(w, fu)) {
        good = false;
        break;
      }
    if (!good) continue;
    PartialIso out = f;
    out.side(v.side).emplace_back(v.index, w);
    return out;
  }
  return std::nullopt;
}

}  // namespace bireduct
