#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "bireduct/error.hpp"
#include "bireduct/switching.hpp"

namespace bireduct {

// The five closed groups between Aut* and Sym_{l,r}, named by the side set X
// of the switch group S_X (Aut* is X empty, SYM is Sym_{l,r}).
enum class ReductClass { AutStar, SL, SR, SLR, Sym };

inline constexpr std::array<ReductClass, 5> kAllReductClasses = {ReductClass::AutStar, ReductClass::SL, ReductClass::SR,
                                                                 ReductClass::SLR, ReductClass::Sym};

inline std::string_view to_string(ReductClass c) {
  switch (c) {
    case ReductClass::AutStar: return "AUT_STAR";
    case ReductClass::SL: return "S_L";
    case ReductClass::SR: return "S_R";
    case ReductClass::SLR: return "S_LR";
    case ReductClass::Sym: return "SYM";
  }
  return "?";
}

inline std::optional<ReductClass> parse_reduct_class(std::string_view s) {
  for (ReductClass c : kAllReductClasses)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

namespace detail {
// Side-set bits: l = 1, r = 2. Sym sits above every switch group.
constexpr unsigned side_bits(ReductClass c) { return static_cast<unsigned>(c); }
constexpr ReductClass from_side_bits(unsigned bits) { return static_cast<ReductClass>(bits); }
}  // namespace detail

// Partial order of the lattice: AutStar < SL, SR < SLR < Sym.
constexpr bool class_leq(ReductClass a, ReductClass b) {
  if (b == ReductClass::Sym) return true;
  if (a == ReductClass::Sym) return false;
  return (detail::side_bits(a) & ~detail::side_bits(b)) == 0;
}

constexpr ReductClass class_meet(ReductClass a, ReductClass b) {
  if (a == ReductClass::Sym) return b;
  if (b == ReductClass::Sym) return a;
  return detail::from_side_bits(detail::side_bits(a) & detail::side_bits(b));
}

constexpr ReductClass class_join(ReductClass a, ReductClass b) {
  if (a == ReductClass::Sym || b == ReductClass::Sym) return ReductClass::Sym;
  return detail::from_side_bits(detail::side_bits(a) | detail::side_bits(b));
}

// Rows of E pairwise differ by a constant vector.
inline bool preserves_2x2_parity(const FlipMatrix& e) {
  if (e.rows() < 2 || e.cols() < 2) return true;
  const BitVector& first = e.bits().row(0);
  for (std::size_t a = 1; a < e.rows(); ++a) {
    const BitVector d = e.bits().row(a) ^ first;
    if (d.any() && !d.all()) return false;
  }
  return true;
}

// Every row constant.
inline bool preserves_1x2_parity(const FlipMatrix& e) {
  for (std::size_t a = 0; a < e.rows(); ++a) {
    const BitVector& r = e.bits().row(a);
    if (r.any() && !r.all()) return false;
  }
  return true;
}

// Every column constant.
inline bool preserves_2x1_parity(const FlipMatrix& e) {
  if (e.rows() < 2) return true;
  const BitVector& first = e.bits().row(0);
  for (std::size_t a = 1; a < e.rows(); ++a)
    if (e.bits().row(a) != first) return false;
  return true;
}

inline ReductClass classify(const FlipMatrix& e) {
  const bool rows_const = preserves_1x2_parity(e);
  const bool cols_const = preserves_2x1_parity(e);
  if (rows_const && cols_const) return ReductClass::AutStar;
  if (rows_const) return ReductClass::SL;
  if (cols_const) return ReductClass::SR;
  if (preserves_2x2_parity(e)) return ReductClass::SLR;
  return ReductClass::Sym;
}

// A (2x2)-minor with an odd number of flips: rows a0 < a1, columns b0 < b1.
struct OddMinor {
  std::size_t a0, a1, b0, b1;
  friend bool operator==(const OddMinor&, const OddMinor&) = default;
};

// Lexicographically least odd minor, if any.
inline std::optional<OddMinor> find_odd_minor(const FlipMatrix& e) {
  for (std::size_t a0 = 0; a0 < e.rows(); ++a0) {
    for (std::size_t a1 = a0 + 1; a1 < e.rows(); ++a1) {
      const BitVector d = e.bits().row(a0) ^ e.bits().row(a1);
      if (!d.any() || d.all()) continue;
      const bool d0 = d.test(0);
      for (std::size_t b1 = 1; b1 < e.cols(); ++b1)
        if (d.test(b1) != d0) return OddMinor{a0, a1, 0, b1};
    }
  }
  return std::nullopt;
}

// Finite normal form of an element of the switch group: an optional global
// exchange followed by a switch pattern. Normalized form has
// global_exchange = false and pattern.left[0] = 0; the exchange is absorbed
// because switching all of one side exchanges every cross-type.
struct SwitchDecomposition {
  bool global_exchange = false;
  SwitchPattern pattern;

  FlipMatrix flip() const {
    FlipMatrix e = pattern_flip_matrix(pattern);
    if (global_exchange) e = e ^ exchange_flip_matrix(e.rows(), e.cols());
    return e;
  }

  friend bool operator==(const SwitchDecomposition&, const SwitchDecomposition&) = default;
};

inline SwitchDecomposition normalize(SwitchDecomposition d) {
  if (d.global_exchange) {
    d.pattern.left = ~d.pattern.left;
    d.global_exchange = false;
  }
  if (d.pattern.left_count() > 0 && d.pattern.left.test(0)) d.pattern = d.pattern.complemented();
  else if (d.pattern.left_count() == 0 && d.pattern.right_count() > 0 && d.pattern.right.test(0))
    d.pattern = d.pattern.complemented();
  return d;
}

// True when the decomposition's flip matrix is the all-ones exchange.
inline bool is_global_exchange(const SwitchDecomposition& d) {
  const SwitchDecomposition n = normalize(d);
  return n.pattern.left.none() && n.pattern.right.all() && n.pattern.right_count() > 0;
}

// Solves E(a, b) = left[a] XOR right[b] over GF(2) with left[0] = 0.
// Empty when E fails 2x2 parity, i.e. E is not the flip matrix of any
// finite restriction of S_{l,r}.
inline std::optional<SwitchDecomposition> decompose(const FlipMatrix& e) {
  SwitchDecomposition d{false, SwitchPattern::empty(e.rows(), e.cols())};
  if (e.rows() == 0 || e.cols() == 0) return d;
  d.pattern.right = e.bits().row(0);
  const bool rho0 = d.pattern.right.test(0);
  for (std::size_t a = 1; a < e.rows(); ++a) d.pattern.left.set(a, e(a, 0) != rho0);
  if (!(pattern_flip_matrix(d.pattern) == e)) return std::nullopt;
  return d;
}

// Which finite flavour of Aut* a constant flip matrix witnesses.
enum class AutKind { Isomorphism, AntiIsomorphism, Neither };

inline std::string_view to_string(AutKind k) {
  switch (k) {
    case AutKind::Isomorphism: return "isomorphism";
    case AutKind::AntiIsomorphism: return "anti-isomorphism";
    case AutKind::Neither: return "neither";
  }
  return "?";
}

struct Classification {
  ReductClass reduct_class = ReductClass::AutStar;
  AutKind aut_kind = AutKind::Neither;
  std::optional<SwitchDecomposition> decomposition;
  std::optional<OddMinor> certificate;  // set iff reduct_class == Sym

  bool decomposable() const noexcept { return decomposition.has_value(); }
};

inline Classification classify_report(const FlipMatrix& e) {
  Classification c;
  c.reduct_class = classify(e);
  c.aut_kind = e.is_zero() ? AutKind::Isomorphism : e.is_all_ones() ? AutKind::AntiIsomorphism : AutKind::Neither;
  c.decomposition = decompose(e);
  if (c.reduct_class == ReductClass::Sym) c.certificate = find_odd_minor(e);
  return c;
}

}  // namespace bireduct
