#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "bireduct/classify.hpp"
#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"
#include "bireduct/parallel.hpp"
#include "bireduct/switching.hpp"

// Brute-force ground truth for the classifier. Membership of a finite map in
// a switch group is decided by generation alone: f: G -> H lies in the
// restrictions of S_X* iff f is an isomorphism from G onto some switch-image
// of H whose switched vertices lie on sides in X, optionally followed by the
// global exchange. Nothing here reads a flip matrix.

namespace bireduct {

inline constexpr std::size_t kOracleMaxSide = 4;

namespace oracle_detail {

// The switch groups in lattice order, each with its permitted sides.
struct GroupSpec {
  ReductClass cls;
  bool left;
  bool right;
};
inline constexpr std::array<GroupSpec, 4> kGroups = {GroupSpec{ReductClass::AutStar, false, false},
                                                     GroupSpec{ReductClass::SL, true, false},
                                                     GroupSpec{ReductClass::SR, false, true},
                                                     GroupSpec{ReductClass::SLR, true, true}};

// Switch patterns confined to the permitted sides, by ascending popcount
// then ascending mask (left bits low, right bits high).
inline std::vector<SwitchPattern> confined_patterns(std::size_t nl, std::size_t nr, bool left, bool right) {
  const std::size_t bits = (left ? nl : 0) + (right ? nr : 0);
  std::vector<std::uint32_t> masks(std::size_t{1} << bits);
  std::iota(masks.begin(), masks.end(), 0U);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<SwitchPattern> out;
  out.reserve(masks.size());
  for (std::uint32_t mask : masks) {
    SwitchPattern p = SwitchPattern::empty(nl, nr);
    std::size_t bit = 0;
    if (left)
      for (std::size_t a = 0; a < nl; ++a, ++bit) p.left.set(a, (mask >> bit) & 1U);
    if (right)
      for (std::size_t b = 0; b < nr; ++b, ++bit) p.right.set(b, (mask >> bit) & 1U);
    out.push_back(std::move(p));
  }
  return out;
}

// Switch-images of h reachable inside one group, in search order.
inline std::vector<BipartiteGraph> switch_images(const BipartiteGraph& h, const GroupSpec& spec) {
  std::vector<BipartiteGraph> out;
  for (const SwitchPattern& p : confined_patterns(h.left_count(), h.right_count(), spec.left, spec.right)) {
    BipartiteGraph s = apply_switch(h, p);
    out.push_back(s);
    out.push_back(s.exchanged());
  }
  return out;
}

inline void check_size(const BipartiteGraph& g, std::size_t limit) {
  if (g.left_count() > limit || g.right_count() > limit)
    throw Error(ErrorKind::TooLarge, "exhaustive oracle limited to sides <= " + std::to_string(limit));
}

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace oracle_detail

// Every side-preserving bijection of an nl x nr vertex set, indexed in
// lexicographic (left map, right map) order, with composition and inverse
// tables.
class BijectionTable {
 public:
  BijectionTable(std::size_t nl, std::size_t nr)
      : lperms_(oracle_detail::all_permutations(nl)), rperms_(oracle_detail::all_permutations(nr)) {
    for (std::size_t i = 0; i < lperms_.size(); ++i) lrank_[lperms_[i]] = i;
    for (std::size_t i = 0; i < rperms_.size(); ++i) rrank_[rperms_[i]] = i;
    for (const auto& l : lperms_)
      for (const auto& r : rperms_) maps_.emplace_back(l, r, nl, nr);
    const std::size_t n = maps_.size();
    compose_.assign(n * n, 0);
    inverse_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      inverse_[i] = index_of(maps_[i].inverse());
      for (std::size_t j = 0; j < n; ++j) compose_[i * n + j] = index_of(bireduct::compose(maps_[i], maps_[j]));
    }
  }

  std::size_t size() const noexcept { return maps_.size(); }
  const SidedMap& at(std::size_t i) const { return maps_.at(i); }
  const std::vector<SidedMap>& maps() const noexcept { return maps_; }

  std::size_t index_of(const SidedMap& f) const {
    return lrank_.at(f.left()) * rperms_.size() + rrank_.at(f.right());
  }
  // Index of maps[g] after maps[f].
  std::size_t compose(std::size_t g, std::size_t f) const { return compose_[g * maps_.size() + f]; }
  std::size_t inverse(std::size_t f) const { return inverse_[f]; }
  std::size_t identity() const { return 0; }

 private:
  std::vector<std::vector<std::size_t>> lperms_;
  std::vector<std::vector<std::size_t>> rperms_;
  std::map<std::vector<std::size_t>, std::size_t> lrank_;
  std::map<std::vector<std::size_t>, std::size_t> rrank_;
  std::vector<SidedMap> maps_;
  std::vector<std::size_t> compose_;
  std::vector<std::size_t> inverse_;
};

// Least group in the lattice whose finite restrictions contain f: G -> H.
inline ReductClass oracle_class(const SidedMap& f, const BipartiteGraph& g, const BipartiteGraph& h) {
  oracle_detail::check_size(g, kOracleMaxSide);
  oracle_detail::check_size(h, kOracleMaxSide);
  if (!f.fits(g, h) || !f.is_bijection())
    throw Error(ErrorKind::InvalidArgument, "oracle_class needs a bijection between the two graphs");
  for (const auto& spec : oracle_detail::kGroups)
    for (const BipartiteGraph& image : oracle_detail::switch_images(h, spec))
      for (const SidedMap& iso : find_isomorphisms(g, image))
        if (iso == f) return spec.cls;
  return ReductClass::Sym;
}

// Oracle class of every bijection G -> H at once, indexed as in `table`.
inline std::vector<ReductClass> oracle_classes(const BijectionTable& table, const BipartiteGraph& g,
                                               const BipartiteGraph& h) {
  std::vector<ReductClass> out(table.size(), ReductClass::Sym);
  std::vector<bool> done(table.size(), false);
  for (const auto& spec : oracle_detail::kGroups)
    for (const BipartiteGraph& image : oracle_detail::switch_images(h, spec))
      for (const SidedMap& iso : find_isomorphisms(g, image)) {
        const std::size_t i = table.index_of(iso);
        if (!done[i]) {
          done[i] = true;
          out[i] = spec.cls;
        }
      }
  return out;
}

using ClassCensus = std::array<std::size_t, 5>;

inline std::size_t census_index(ReductClass c) { return static_cast<std::size_t>(c); }

struct Discrepancy {
  BipartiteGraph source;
  BipartiteGraph target;
  SidedMap map;
  ReductClass oracle;
  ReductClass classifier;
};

struct OracleReport {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t graph_pairs = 0;
  std::size_t total_maps = 0;
  std::size_t discrepancies = 0;
  ClassCensus oracle_census{};
  ClassCensus classifier_census{};
  std::optional<Discrepancy> first_discrepancy;

  bool agreed() const noexcept { return discrepancies == 0; }
};

// All 2^(l*r) graphs of the given shape, ordered by their row-major bit code
// (bit a*r + b is the cross-type of (a, b)).
inline std::vector<BipartiteGraph> all_graphs(std::size_t l, std::size_t r) {
  const std::size_t cells = l * r;
  if (cells >= 31) throw Error(ErrorKind::TooLarge, "too many graphs to enumerate");
  std::vector<BipartiteGraph> out;
  out.reserve(std::size_t{1} << cells);
  for (std::uint32_t code = 0; code < (1U << cells); ++code) {
    BitMatrix m(l, r);
    for (std::size_t c = 0; c < cells; ++c)
      if ((code >> c) & 1U) m.set(c / r, c % r);
    out.emplace_back(std::move(m));
  }
  return out;
}

// Compares oracle and classifier on every (source, target, bijection) triple
// of the given shape. Sources are processed in parallel; per-source results
// are merged in source order.
inline OracleReport verify_equivalence(std::size_t max_left, std::size_t max_right) {
  if (max_left == 0 || max_right == 0) throw Error(ErrorKind::ZeroSide, "shape needs both sides nonempty");
  if (max_left > 3 || max_right > 3) throw Error(ErrorKind::TooLarge, "verify_equivalence is limited to sides <= 3");
  const auto graphs = all_graphs(max_left, max_right);
  const BijectionTable table(max_left, max_right);

  std::vector<OracleReport> partial(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t gi) {
    OracleReport& rep = partial[gi];
    const BipartiteGraph& g = graphs[gi];
    for (const BipartiteGraph& h : graphs) {
      ++rep.graph_pairs;
      const auto oracle = oracle_classes(table, g, h);
      for (std::size_t i = 0; i < table.size(); ++i) {
        const ReductClass mine = classify(flip_matrix(table.at(i), g, h));
        ++rep.total_maps;
        ++rep.oracle_census[census_index(oracle[i])];
        ++rep.classifier_census[census_index(mine)];
        if (mine != oracle[i]) {
          if (rep.discrepancies++ == 0) rep.first_discrepancy = Discrepancy{g, h, table.at(i), oracle[i], mine};
        }
      }
    }
  });

  OracleReport report;
  report.left = max_left;
  report.right = max_right;
  for (auto& p : partial) {
    report.graph_pairs += p.graph_pairs;
    report.total_maps += p.total_maps;
    report.discrepancies += p.discrepancies;
    for (std::size_t c = 0; c < 5; ++c) {
      report.oracle_census[c] += p.oracle_census[c];
      report.classifier_census[c] += p.classifier_census[c];
    }
    if (!report.first_discrepancy && p.first_discrepancy) report.first_discrepancy = std::move(p.first_discrepancy);
  }
  return report;
}

// Closure of the generated family. Objects are the distinct switch-images of
// g permitted by `group` (one of the four switch groups); the morphisms A -> B
// are the bijections that are isomorphisms from A onto a permitted
// switch-image of B. True iff the family contains every identity and is
// closed under inverse and under composition of composable morphisms.
inline bool group_closure_check(const BipartiteGraph& g, ReductClass group) {
  oracle_detail::check_size(g, 3);
  if (group == ReductClass::Sym) throw Error(ErrorKind::InvalidArgument, "closure check is for switch groups only");
  const auto& spec = oracle_detail::kGroups[census_index(group)];
  const BijectionTable table(g.left_count(), g.right_count());

  std::vector<BipartiteGraph> objects;
  for (const BipartiteGraph& s : oracle_detail::switch_images(g, spec))
    if (std::find(objects.begin(), objects.end(), s) == objects.end()) objects.push_back(s);

  const std::size_t n = objects.size();
  // Bit i of mor[A * n + B] marks table map i as a morphism A -> B.
  std::vector<std::vector<bool>> mor(n * n, std::vector<bool>(table.size(), false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (const BipartiteGraph& image : oracle_detail::switch_images(objects[b], spec))
        for (const SidedMap& iso : find_isomorphisms(objects[a], image)) mor[a * n + b][table.index_of(iso)] = true;

  for (std::size_t a = 0; a < n; ++a) {
    if (!mor[a * n + a][table.identity()]) return false;
    for (std::size_t b = 0; b < n; ++b) {
      const auto& ab = mor[a * n + b];
      for (std::size_t f = 0; f < table.size(); ++f) {
        if (!ab[f]) continue;
        if (!mor[b * n + a][table.inverse(f)]) return false;
        for (std::size_t c = 0; c < n; ++c) {
          const auto& bc = mor[b * n + c];
          const auto& ac = mor[a * n + c];
          for (std::size_t h = 0; h < table.size(); ++h)
            if (bc[h] && !ac[table.compose(h, f)]) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace bireduct
