#include <gtest/gtest.h>

#include <set>

#include "bireduct/graph.hpp"
#include "bireduct/random_lab.hpp"
#include "support/brute_force.hpp"

namespace bireduct {
namespace {

using testing::all_bijections;
using testing::brute_isomorphisms;

BipartiteGraph G(const std::vector<std::vector<int>>& rows) { return BipartiteGraph::from_rows(rows); }

TEST(NewGraph, SmallestLegalGraph) {
  const auto g = BipartiteGraph::make(1, 1, BitMatrix::from_rows({{1}}));
  EXPECT_EQ(g.left_count(), 1u);
  EXPECT_EQ(g.right_count(), 1u);
  EXPECT_EQ(g.cross_type({0, 0}), CrossType::P1);
}

TEST(NewGraph, DiagonalEncoding) {
  const auto g = BipartiteGraph::make(2, 2, BitMatrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_TRUE(g.is_p1(0, 0));
  EXPECT_FALSE(g.is_p1(0, 1));
  EXPECT_FALSE(g.is_p1(1, 0));
  EXPECT_TRUE(g.is_p1(1, 1));
  EXPECT_EQ(g.p1_count(), 2u);
}

TEST(NewGraph, ZeroSideRejected) {
  try {
    BipartiteGraph::make(0, 3, BitMatrix(0, 3));
    FAIL() << "expected ZeroSide";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSide);
  }
  try {
    BipartiteGraph::make(2, 0, BitMatrix(2, 0));
    FAIL() << "expected ZeroSide";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSide);
  }
}

TEST(NewGraph, DimensionMismatchRejected) {
  try {
    BipartiteGraph::make(2, 3, BitMatrix(2, 2));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(CrossType, ReadsMatrix) {
  const auto g = G({{1, 0}, {0, 1}});
  EXPECT_EQ(g.cross_type({0, 0}), CrossType::P1);
  EXPECT_EQ(g.cross_type({0, 1}), CrossType::P2);
}

TEST(CrossType, OutOfRange) {
  const auto g = G({{1}});
  try {
    g.cross_type({0, 1});
    FAIL() << "expected OutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
}

TEST(InducedSubgraph, RowAndColumnExtraction) {
  const auto g = G({{1, 0}, {0, 1}});
  const std::vector<std::size_t> l0{0}, r01{0, 1}, l01{0, 1}, r1{1};
  EXPECT_EQ(induced_subgraph(g, l0, r01), G({{1, 0}}));
  EXPECT_EQ(induced_subgraph(g, l01, r1), G({{0}, {1}}));
}

TEST(InducedSubgraph, EmptySetIsZeroSide) {
  const auto g = G({{1}});
  const std::vector<std::size_t> none, r0{0};
  try {
    induced_subgraph(g, none, r0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSide);
  }
}

TEST(InducedSubgraph, OrderFollowsAscendingIndex) {
  const auto g = G({{1, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  const std::vector<std::size_t> l{2, 0}, r{2, 1};
  EXPECT_EQ(induced_subgraph(g, l, r), G({{0, 1}, {1, 0}}));
}

TEST(InducedSubgraph, OutOfRange) {
  const auto g = G({{1, 0}});
  const std::vector<std::size_t> l{1}, r{0};
  EXPECT_THROW(induced_subgraph(g, l, r), Error);
}

TEST(InducedSubgraph, Functorial) {
  const auto g = sample_graph(7, 6, 11);
  const std::vector<std::size_t> l1{0, 2, 3, 5, 6}, r1{1, 2, 4, 5};
  const auto s1 = induced_subgraph(g, l1, r1);
  // Positions 1, 3, 4 inside l1 and 0, 2 inside r1.
  const std::vector<std::size_t> l2{1, 3, 4}, r2{0, 2};
  const std::vector<std::size_t> l_direct{2, 5, 6}, r_direct{1, 4};
  EXPECT_EQ(induced_subgraph(s1, l2, r2), induced_subgraph(g, l_direct, r_direct));
}

TEST(FindIsomorphisms, P1CountDiffers) { EXPECT_TRUE(find_isomorphisms(G({{1}}), G({{0}})).empty()); }

TEST(FindIsomorphisms, DiagonalToAntiDiagonalHasTwo) {
  const auto g = G({{1, 0}, {0, 1}});
  const auto h = G({{0, 1}, {1, 0}});
  const auto isos = find_isomorphisms(g, h);
  ASSERT_EQ(isos.size(), 2u);
  EXPECT_EQ(isos, brute_isomorphisms(g, h));
  EXPECT_EQ(isos[0], SidedMap({0, 1}, {1, 0}, 2, 2));
  EXPECT_EQ(isos[1], SidedMap({1, 0}, {0, 1}, 2, 2));
}

TEST(FindIsomorphisms, RigidGraph) {
  const auto g = G({{1, 0}, {0, 0}});
  const auto isos = find_isomorphisms(g, g);
  ASSERT_EQ(isos.size(), 1u);
  EXPECT_EQ(isos[0], SidedMap::identity(2, 2));
}

TEST(FindIsomorphisms, DifferentSizesGiveEmptyList) {
  EXPECT_TRUE(find_isomorphisms(G({{1, 0}}), G({{1}, {0}})).empty());
}

// Agreement with filtering every bijection, over every pair of 2x3 graphs
// and a sample of 3x3 pairs, including order.
TEST(FindIsomorphisms, MatchesBruteForceExhaustively) {
  for (std::uint32_t gc = 0; gc < 64; ++gc)
    for (std::uint32_t hc = 0; hc < 64; ++hc) {
      BitMatrix gm(2, 3), hm(2, 3);
      for (std::size_t c = 0; c < 6; ++c) {
        gm.set(c / 3, c % 3, (gc >> c) & 1U);
        hm.set(c / 3, c % 3, (hc >> c) & 1U);
      }
      const BipartiteGraph g(gm), h(hm);
      ASSERT_EQ(find_isomorphisms(g, h), brute_isomorphisms(g, h)) << g << " -> " << h;
    }
  SplitMix64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto g = sample_graph(3, 3, rng());
    // Relabel g by a random bijection so the pair is usually isomorphic.
    const auto perms = all_bijections(3, 3);
    const SidedMap& p = perms[rng.below(perms.size())];
    BitMatrix hm(3, 3);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) hm.set(p.map_left(a), p.map_right(b), g.is_p1(a, b));
    const BipartiteGraph h(hm);
    const auto isos = find_isomorphisms(g, h);
    ASSERT_EQ(isos, brute_isomorphisms(g, h));
    ASSERT_NE(std::find(isos.begin(), isos.end(), p), isos.end());
  }
}

TEST(FindIsomorphisms, PreservesP1Count) {
  SplitMix64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const auto g = sample_graph(4, 4, rng());
    for (const SidedMap& f : find_isomorphisms(g, g)) {
      BitMatrix im(4, 4);
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) im.set(f.map_left(a), f.map_right(b), g.is_p1(a, b));
      EXPECT_EQ(BipartiteGraph(im).p1_count(), g.p1_count());
    }
  }
}

// Aut(G) contains the identity and is closed under composition and inverse.
TEST(FindIsomorphisms, AutomorphismsFormAGroup) {
  SplitMix64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const std::size_t l = 1 + rng.below(4), r = 1 + rng.below(4);
    // Sparse graphs have larger automorphism groups.
    BitMatrix m(l, r);
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t b = 0; b < r; ++b) m.set(a, b, rng.below(4) == 0);
    const BipartiteGraph g(m);
    const auto aut = find_isomorphisms(g, g);
    const std::set<SidedMap> group(aut.begin(), aut.end());
    ASSERT_TRUE(group.count(SidedMap::identity(l, r)));
    for (const auto& x : aut) {
      ASSERT_TRUE(group.count(x.inverse()));
      for (const auto& y : aut) ASSERT_TRUE(group.count(compose(x, y)));
    }
  }
}

TEST(SidedMap, RejectsNonInjective) {
  try {
    SidedMap({0, 0}, {0}, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateTarget);
  }
  try {
    SidedMap({0, 2}, {0}, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
}

TEST(SidedMap, InjectionIsNotBijection) {
  const SidedMap f({0, 2}, {1}, 3, 2);
  EXPECT_FALSE(f.is_bijection());
  EXPECT_EQ(f(left_vertex(1)), left_vertex(2));
  EXPECT_EQ(f(right_vertex(0)), right_vertex(1));
  EXPECT_THROW(f.inverse(), Error);
}

}  // namespace
}  // namespace bireduct
