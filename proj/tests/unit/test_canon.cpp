//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "geoseq/canon.h"

#include "oracles.h"

namespace geoseq {
namespace {
using testing::brute_automorphisms;
using testing::brute_canonical_form;
using testing::random_graph;
using testing::random_permutation;

std::set<std::set<int>> as_sets(const Partition &p) {
  std::set<std::set<int>> out;
  for (const auto &c: p.cells)
    out.emplace(c.begin(), c.end());
  return out;
}

ColoredGraph path(std::vector<int> colors) {
  ColoredGraph g(colors);
  for (int i = 0; i + 1 < g.size(); ++i)
    g.add_edge(i, i + 1);
  return g;
}

TEST(RefineTest, CompleteGraphStaysUnit) {
  ColoredGraph g(std::vector<int>(4, 6));
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      g.add_edge(u, v);
  const Partition p = refine(g, Partition::unit(4));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.cells[0].size(), 4u);
}

TEST(RefineTest, StarSeparatesCenter) {
  ColoredGraph g(std::vector<int>(4, 6));
  for (int v = 1; v < 4; ++v)
    g.add_edge(0, v);
  EXPECT_EQ(as_sets(refine(g, Partition::unit(4))),
            (std::set<std::set<int>> { { 0 }, { 1, 2, 3 } }));
}

TEST(RefineTest, ColorsSeparateFirst) {
  ColoredGraph g({ 1, 1, 2 });
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  EXPECT_EQ(as_sets(refine(g, Partition::unit(3))),
            (std::set<std::set<int>> { { 2 }, { 0, 1 } }));
}

TEST(RefineTest, BondOrdersDistinguish) {
  // O=C-O: the two oxygens differ only by bond order.
  ColoredGraph g({ 8, 6, 8 });
  g.add_edge(0, 1, 2);
  g.add_edge(1, 2, 1);
  EXPECT_TRUE(refine(g, Partition::unit(3)).is_discrete());
}

TEST(RefineTest, RejectsNonPartitions) {
  ColoredGraph g({ 1, 1 });
  EXPECT_THROW(refine(g, Partition { { { 0 } } }), std::invalid_argument);
  EXPECT_THROW(refine(g, Partition { { { 0, 1 }, { 1 } } }),
               std::invalid_argument);
  EXPECT_THROW(refine(g, Partition { { { 0, 1 }, {} } }),
               std::invalid_argument);
}

// Vertices in one cell have equal color and equal neighbor counts per
// (cell, bond order).
bool is_equitable(const ColoredGraph &g, const Partition &p) {
  std::vector<int> cell_of(g.size());
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    for (int v: p.cells[c])
      cell_of[v] = static_cast<int>(c);
  for (const auto &cell: p.cells) {
    std::map<std::pair<int, int>, int> first;
    for (std::size_t k = 0; k < cell.size(); ++k) {
      std::map<std::pair<int, int>, int> counts;
      for (const Neighbor &nb: g.neighbors(cell[k]))
        ++counts[{ cell_of[nb.vertex], nb.order }];
      if (g.color(cell[k]) != g.color(cell[0]))
        return false;
      if (k == 0)
        first = counts;
      else if (counts != first)
        return false;
    }
  }
  return true;
}

TEST(RefineTest, EquitableMonotoneIdempotent) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(10));
    const ColoredGraph g = random_graph(n, 3, 0.3, 3, rng);
    // Random starting partition.
    std::vector<std::vector<int>> cells(3);
    for (int v: random_permutation(n, rng))
      cells[rng.below(3)].push_back(v);
    Partition p;
    for (auto &c: cells)
      if (!c.empty())
        p.cells.push_back(c);

    const Partition r = refine(g, p);
    EXPECT_TRUE(is_equitable(g, r));
    // Never merges: every refined cell lies inside one input cell.
    for (const auto &c: r.cells) {
      bool inside = false;
      for (const auto &orig: p.cells) {
        std::set<int> o(orig.begin(), orig.end());
        inside = inside
                 || std::all_of(c.begin(), c.end(),
                                [&](int v) { return o.contains(v); });
      }
      EXPECT_TRUE(inside);
    }
    EXPECT_EQ(refine(g, r).cells, r.cells);
  }
}

TEST(CanonTest, PathExamples) {
  const auto cco = canonical_order(path({ 6, 6, 8 })).certificate;
  const auto occ = canonical_order(path({ 8, 6, 6 })).certificate;
  const auto coc = canonical_order(path({ 6, 8, 6 })).certificate;
  EXPECT_EQ(cco, occ);
  EXPECT_NE(cco, coc);
}

TEST(CanonTest, PermIsPermutationAndCertificateMatchesLabeling) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const ColoredGraph g =
        random_graph(1 + static_cast<int>(rng.below(12)), 3, 0.3, 3, rng);
    const CanonicalOrder c = canonical_order(g);
    std::vector<int> sorted = c.perm;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < g.size(); ++i)
      ASSERT_EQ(sorted[i], i);
    EXPECT_EQ(c.certificate, labeled_certificate(g, c.perm));
  }
}

TEST(CanonTest, EmptyAndTinyGraphs) {
  EXPECT_TRUE(canonical_order(ColoredGraph()).perm.empty());
  EXPECT_EQ(canonical_order(ColoredGraph({ 6 })).perm,
            (std::vector<int> { 0 }));
}

TEST(CanonTest, InvariantUnderRelabeling) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(25));
    const ColoredGraph g = random_graph(n, 2, 0.2, 2, rng);
    const auto cert = canonical_order(g).certificate;
    const auto perm = random_permutation(n, rng);
    EXPECT_EQ(canonical_order(g.permuted(perm)).certificate, cert);
  }
}

TEST(CanonTest, HighlySymmetricGraphs) {
  // Disjoint triangles and a cycle: large automorphism groups.
  for (int k: { 2, 4, 6 }) {
    ColoredGraph g(std::vector<int>(3 * k, 6));
    for (int t = 0; t < k; ++t) {
      g.add_edge(3 * t, 3 * t + 1);
      g.add_edge(3 * t + 1, 3 * t + 2);
      g.add_edge(3 * t, 3 * t + 2);
    }
    ColoredGraph cycle(std::vector<int>(3 * k, 6));
    for (int i = 0; i < 3 * k; ++i)
      cycle.add_edge(i, (i + 1) % (3 * k));
    EXPECT_NE(canonical_order(g).certificate,
              canonical_order(cycle).certificate);
    Rng rng(k);
    const auto perm = random_permutation(3 * k, rng);
    EXPECT_EQ(canonical_order(g.permuted(perm)).certificate,
              canonical_order(g).certificate);
  }
}

TEST(CanonTest, AgreesWithBruteForceOnSmallGraphs) {
  // All graphs on 4 vertices with 2 colors and single bonds.
  std::map<std::vector<int>, std::string> form_to_cert;
  std::map<std::string, std::vector<int>> cert_to_form;
  const int n = 4;
  const std::vector<std::pair<int, int>> pairs = { { 0, 1 }, { 0, 2 },
                                                   { 0, 3 }, { 1, 2 },
                                                   { 1, 3 }, { 2, 3 } };
  for (int mask = 0; mask < 64; ++mask) {
    for (int colors = 0; colors < 16; ++colors) {
      std::vector<int> c(n);
      for (int v = 0; v < n; ++v)
        c[v] = (colors >> v) & 1;
      ColoredGraph g(c);
      for (int e = 0; e < 6; ++e)
        if (mask >> e & 1)
          g.add_edge(pairs[e].first, pairs[e].second);
      const auto form = brute_canonical_form(g);
      const auto cert = canonical_order(g).certificate;
      auto [it, fresh] = form_to_cert.emplace(form, cert);
      EXPECT_EQ(it->second, cert);
      auto [jt, fresh2] = cert_to_form.emplace(cert, form);
      EXPECT_EQ(jt->second, form);
    }
  }
}

TEST(TraversalTest, LocalityOrderIsConnectedPrefix) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(20));
    ColoredGraph g = random_graph(n, 2, 0.15, 1, rng);
    // Chain the components together to make g connected.
    const auto comps = connected_components(g);
    for (std::size_t c = 1; c < comps.size(); ++c)
      g.add_edge(comps[c - 1][0], comps[c][0]);
    const auto order = locality_order(g, canonical_order(g).perm);
    for (int i = 1; i < n; ++i) {
      bool adjacent = false;
      for (int j = 0; j < i && !adjacent; ++j)
        adjacent = g.bond_order(order[i], order[j]) > 0;
      EXPECT_TRUE(adjacent) << "position " << i;
    }
  }
}

TEST(TraversalTest, BfsOnPath) {
  const ColoredGraph g = path({ 6, 6, 6 });
  const std::vector<int> ranking = { 1, 0, 2 };
  EXPECT_EQ(bfs_order(g, ranking), (std::vector<int> { 1, 0, 2 }));
  const std::vector<int> from_end = { 0, 1, 2 };
  EXPECT_EQ(bfs_order(g, from_end), (std::vector<int> { 0, 1, 2 }));
}

// Reference BFS: distances from the root never decrease along the order.
TEST(TraversalTest, BfsAndDfsAreValidTraversals) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(15));
    const ColoredGraph g = random_graph(n, 2, 0.25, 1, rng);
    const auto ranking = random_permutation(n, rng);
    const auto bfs = bfs_order(g, ranking);
    const auto dfs = dfs_order(g, ranking);
    ASSERT_EQ(bfs.size(), static_cast<std::size_t>(n));
    ASSERT_EQ(dfs.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(bfs[0], ranking[0]);
    EXPECT_EQ(dfs[0], ranking[0]);

    // BFS distances within the root's component.
    std::vector<int> dist(n, -1);
    dist[bfs[0]] = 0;
    std::vector<int> queue = { bfs[0] };
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (const Neighbor &nb: g.neighbors(queue[q]))
        if (dist[nb.vertex] < 0) {
          dist[nb.vertex] = dist[queue[q]] + 1;
          queue.push_back(nb.vertex);
        }
    for (std::size_t i = 1; i < queue.size(); ++i)
      EXPECT_LE(dist[bfs[i - 1]], dist[bfs[i]]);

    // DFS: each vertex after the first in a component is adjacent to a
    // vertex on the current stack, i.e. to some earlier vertex.
    for (std::size_t i = 1; i < queue.size(); ++i) {
      bool adjacent = false;
      for (std::size_t j = 0; j < i && !adjacent; ++j)
        adjacent = g.bond_order(dfs[i], dfs[j]) > 0;
      EXPECT_TRUE(adjacent);
    }
  }
}

TEST(OrderStrategyTest, ParsesNames) {
  for (auto s: { OrderStrategy::kCanonicalLocality,
                 OrderStrategy::kCanonicalNonlocality, OrderStrategy::kBfs,
                 OrderStrategy::kDfs, OrderStrategy::kRandom })
    EXPECT_EQ(parse_order_strategy(to_string(s)), s);
  EXPECT_THROW(parse_order_strategy("spiral"), std::invalid_argument);
}

TEST(OrderStrategyTest, RandomIsSeeded) {
  Rng rng(3);
  const ColoredGraph g = random_graph(12, 2, 0.3, 1, rng);
  std::vector<Vec3> coords(12, Vec3::Zero());
  OrderOptions opts;
  opts.strategy = OrderStrategy::kRandom;
  opts.seed = 99;
  const auto a = order_strategy(g, coords, opts);
  EXPECT_EQ(order_strategy(g, coords, opts), a);
  opts.seed = 100;
  EXPECT_NE(order_strategy(g, coords, opts), a);
}

TEST(MinAutomorphicOrderTest, MatchesEnumerationOverAutomorphisms) {
  Rng rng(41);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const ColoredGraph g = random_graph(n, 2, 0.4, 1, rng);
    const auto base = canonical_order(g).perm;
    // Arbitrary prefix-consistent key: a fixed random weight per vertex.
    std::vector<std::int64_t> weight(n);
    for (auto &w: weight)
      w = static_cast<std::int64_t>(rng.below(3));
    PrefixKey key = [&](std::span<const int> prefix,
                        std::vector<std::int64_t> &out) {
      out.clear();
      for (int v: prefix)
        out.push_back(weight[v]);
    };

    std::vector<std::int64_t> best_key;
    for (const auto &sigma: brute_automorphisms(g)) {
      std::vector<int> order(n);
      for (int i = 0; i < n; ++i)
        order[i] = sigma[base[i]];
      std::vector<std::int64_t> k;
      key(order, k);
      if (best_key.empty() || k < best_key)
        best_key = k;
    }
    const auto got = min_automorphic_order(g, base, key);
    std::vector<std::int64_t> got_key;
    key(got, got_key);
    EXPECT_EQ(got_key, best_key);
    // The result is an automorphic image of base.
    std::vector<int> sigma(n);
    for (int i = 0; i < n; ++i)
      sigma[base[i]] = got[i];
    for (const Edge &e: g.edges())
      EXPECT_EQ(g.bond_order(sigma[e.u], sigma[e.v]), e.order);
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

}  // namespace
}  // namespace geoseq
