//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_CANON_H_
#define GEOSEQ_CANON_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoseq/molgraph.h"

namespace geoseq {

/// Ordered vertex partition. Cells are disjoint, nonempty and cover all
/// vertices.
struct Partition {
  std::vector<std::vector<int>> cells;

  static Partition unit(int n);

  bool is_discrete() const;
  std::size_t size() const { return cells.size(); }
};

/// Cells of equal color, ordered by ascending color.
Partition color_partition(const ColoredGraph &g);

/// Coarsest equitable refinement of p: cells are first split by color, then
/// until every vertex of a cell has the same number of neighbors of each
/// bond order in every cell. Fragments of a split cell are ordered by
/// descending neighbor counts, so the result depends only on the
/// isomorphism class of (g, p). Idempotent and never merges cells.
Partition refine(const ColoredGraph &g, const Partition &p);

/// Canonical labeling of a colored graph. perm[i] is the vertex labeled i;
/// the certificate encodes the relabeled graph (colors and bond orders) and
/// is equal for two graphs iff they are isomorphic.
struct CanonicalOrder {
  std::vector<int> perm;
  std::string certificate;
};

/// Individualization-refinement search with automorphism pruning.
CanonicalOrder canonical_order(const ColoredGraph &g);

/// Certificate of g relabeled by perm (perm[i] = vertex placed at i).
std::string labeled_certificate(const ColoredGraph &g,
                                std::span<const int> perm);

enum class OrderStrategy {
  kCanonicalLocality,
  kCanonicalNonlocality,
  kBfs,
  kDfs,
  kRandom,
};

/// Parses "canonical-locality", "canonical-nonlocality", "bfs", "dfs" or
/// "random"; throws std::invalid_argument otherwise.
OrderStrategy parse_order_strategy(std::string_view name);
std::string_view to_string(OrderStrategy strategy);

struct OrderOptions {
  OrderStrategy strategy = OrderStrategy::kCanonicalLocality;
  std::uint64_t seed = 0;
  // Precision used to pick among automorphic orders (same as the tokens).
  int decimals_distance = 2;
  int decimals_angle = 2;
};

/// Traversal that always continues with the lowest-ranked unvisited vertex
/// adjacent to an already visited one; rank is the position in `ranking`.
std::vector<int> locality_order(const ColoredGraph &g,
                                std::span<const int> ranking);

std::vector<int> bfs_order(const ColoredGraph &g,
                           std::span<const int> ranking);
std::vector<int> dfs_order(const ColoredGraph &g,
                           std::span<const int> ranking);

/// Key of an ordered vertex prefix. Keys must be prefix-consistent: the key
/// of an extension starts with the key of the prefix. An empty key means
/// the prefix cannot be ranked yet.
using PrefixKey =
    std::function<void(std::span<const int> prefix, std::vector<std::int64_t> &key)>;

/// Among all orders gamma(base) for automorphisms gamma of g, returns the
/// one with the lexicographically smallest key (branch and bound).
std::vector<int> min_automorphic_order(const ColoredGraph &g,
                                       std::span<const int> base,
                                       const PrefixKey &key);

/// Prefix key made of the quantized spherical records of the ordered atoms,
/// i.e. exactly the numbers that end up in the token sequence.
PrefixKey spherical_prefix_key(std::span<const Vec3> coords,
                               int decimals_distance, int decimals_angle);

/// Atom order for serialization. The canonical strategies (and bfs/dfs,
/// which traverse by canonical rank) are invariant under atom permutation:
/// ties between automorphic orders are broken by the quantized spherical
/// records. `random` is a seeded shuffle.
std::vector<int> order_strategy(const ColoredGraph &g,
                                std::span<const Vec3> coords,
                                const OrderOptions &opts);

}  // namespace geoseq

#endif  // GEOSEQ_CANON_H_
