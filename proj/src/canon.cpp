//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/canon.h"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "geoseq/geom.h"
#include "geoseq/random.h"

namespace geoseq {
namespace {

// Ordered partition stored as a vertex permutation with cell boundaries.
// Cells are identified by their first position.
struct Cells {
  std::vector<int> lab;    // position -> vertex
  std::vector<int> start;  // vertex -> start of its cell
  std::vector<int> end;    // cell start -> one past its last position
  int num_cells = 0;

  int size() const { return static_cast<int>(lab.size()); }
  bool discrete() const { return num_cells == size(); }
  int cell_size(int s) const { return end[s] - s; }
};

Cells cells_from(const std::vector<std::vector<int>> &parts, int n) {
  Cells c;
  c.lab.reserve(n);
  c.start.assign(n, -1);
  c.end.assign(n, -1);
  for (const auto &cell: parts) {
    const int s = static_cast<int>(c.lab.size());
    for (int v: cell) {
      c.lab.push_back(v);
      c.start[v] = s;
    }
    c.end[s] = static_cast<int>(c.lab.size());
    ++c.num_cells;
  }
  return c;
}

Partition partition_from(const Cells &c) {
  Partition p;
  for (int s = 0; s < c.size(); s = c.end[s])
    p.cells.emplace_back(c.lab.begin() + s, c.lab.begin() + c.end[s]);
  return p;
}

std::vector<int> all_starts(const Cells &c) {
  std::vector<int> out;
  for (int s = 0; s < c.size(); s = c.end[s])
    out.push_back(s);
  return out;
}

bool same_shape(const Cells &a, const Cells &b) {
  if (a.num_cells != b.num_cells)
    return false;
  for (int s = 0; s < a.size(); s = a.end[s]) {
    if (b.start[b.lab[s]] != s || b.end[s] != a.end[s])
      return false;
  }
  return true;
}

// Splits v off the front of its cell. Returns the start of the new
// singleton, or -1 when v already is a singleton.
int individualize(Cells &c, int v) {
  const int s = c.start[v];
  const int e = c.end[s];
  if (e - s == 1)
    return -1;
  auto it = std::find(c.lab.begin() + s, c.lab.begin() + e, v);
  std::iter_swap(c.lab.begin() + s, it);
  c.end[s] = s + 1;
  c.end[s + 1] = e;
  for (int k = s + 1; k < e; ++k)
    c.start[c.lab[k]] = s + 1;
  ++c.num_cells;
  return s;
}

// Equitable refinement with a splitter queue. Every step depends only on
// positions and neighbor counts, never on vertex ids, which keeps the
// result label-invariant.
class Refiner {
public:
  explicit Refiner(const ColoredGraph &g)
      : g_(g), counts_(g.size(), kZero), queued_(g.size(), 0) { }

  void refine(Cells &c, std::span<const int> splitters) {
    std::deque<int> queue;
    for (int s: splitters) {
      if (!queued_[s]) {
        queued_[s] = 1;
        queue.push_back(s);
      }
    }

    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      queued_[s] = 0;
      if (c.discrete())
        continue;

      touched_.clear();
      for (int k = s; k < c.end[s]; ++k) {
        for (const Neighbor &nb: g_.neighbors(c.lab[k])) {
          auto &cnt = counts_[nb.vertex];
          if (cnt == kZero)
            touched_.push_back(nb.vertex);
          ++cnt[nb.order - 1];
        }
      }

      touched_cells_.clear();
      for (int v: touched_)
        touched_cells_.push_back(c.start[v]);
      std::sort(touched_cells_.begin(), touched_cells_.end());
      touched_cells_.erase(
          std::unique(touched_cells_.begin(), touched_cells_.end()),
          touched_cells_.end());

      for (int cs: touched_cells_)
        split(c, cs, queue);

      for (int v: touched_)
        counts_[v] = kZero;
    }
  }

private:
  using Count = std::array<int, 3>;
  static constexpr Count kZero = { 0, 0, 0 };

  void split(Cells &c, int cs, std::deque<int> &queue) {
    const int ce = c.end[cs];
    if (ce - cs == 1)
      return;

    auto first = c.lab.begin() + cs;
    auto last = c.lab.begin() + ce;
    std::sort(first, last, [this](int a, int b) {
      if (counts_[a] != counts_[b])
        return counts_[a] > counts_[b];
      return a < b;
    });

    frags_.clear();
    for (int k = cs; k < ce; ++k) {
      if (k == cs || counts_[c.lab[k]] != counts_[c.lab[k - 1]])
        frags_.push_back(k);
    }
    if (frags_.size() == 1)
      return;

    frags_.push_back(ce);
    int largest = 0;
    for (std::size_t f = 0; f + 1 < frags_.size(); ++f) {
      const int fs = frags_[f];
      const int fe = frags_[f + 1];
      c.end[fs] = fe;
      for (int k = fs; k < fe; ++k)
        c.start[c.lab[k]] = fs;
      if (fe - fs > frags_[largest + 1] - frags_[largest])
        largest = static_cast<int>(f);
    }
    c.num_cells += static_cast<int>(frags_.size()) - 2;

    const bool was_queued = queued_[cs] != 0;
    for (std::size_t f = 0; f + 1 < frags_.size(); ++f) {
      const int fs = frags_[f];
      if (was_queued ? fs == cs : static_cast<int>(f) == largest)
        continue;
      if (!queued_[fs]) {
        queued_[fs] = 1;
        queue.push_back(fs);
      }
    }
  }

  const ColoredGraph &g_;
  std::vector<Count> counts_;
  std::vector<char> queued_;
  std::vector<int> touched_;
  std::vector<int> touched_cells_;
  std::vector<int> frags_;
};

Cells refined_root(const ColoredGraph &g, Refiner &refiner) {
  Cells root = cells_from(color_partition(g).cells, g.size());
  auto starts = all_starts(root);
  refiner.refine(root, starts);
  return root;
}

void push_u32(std::string &out, std::uint32_t x) {
  for (int i = 3; i >= 0; --i)
    out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

class BondMatrix {
public:
  explicit BondMatrix(const ColoredGraph &g)
      : n_(g.size()), m_(static_cast<std::size_t>(n_) * n_, 0) {
    for (const Edge &e: g.edges()) {
      m_[static_cast<std::size_t>(e.u) * n_ + e.v] = static_cast<char>(e.order);
      m_[static_cast<std::size_t>(e.v) * n_ + e.u] = static_cast<char>(e.order);
    }
  }

  char operator()(int u, int v) const {
    return m_[static_cast<std::size_t>(u) * n_ + v];
  }

private:
  int n_;
  std::vector<char> m_;
};

std::string certificate(const ColoredGraph &g, const BondMatrix &bonds,
                        std::span<const int> lab) {
  const int n = g.size();
  std::string out;
  out.reserve(4 + 4 * n + n * (n - 1) / 2);
  push_u32(out, static_cast<std::uint32_t>(n));
  for (int v: lab)
    push_u32(out, static_cast<std::uint32_t>(g.color(v)) ^ 0x80000000u);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j)
      out.push_back(bonds(lab[i], lab[j]));
  }
  return out;
}

class UnionFind {
public:
  explicit UnionFind(int n): parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
  std::vector<int> parent_;
};

class CanonSearch {
public:
  explicit CanonSearch(const ColoredGraph &g)
      : g_(g), bonds_(g), refiner_(g) { }

  CanonicalOrder run() {
    if (g_.size() == 0)
      return { {}, certificate(g_, bonds_, {}) };
    Cells root = refined_root(g_, refiner_);
    std::vector<int> path;
    visit(root, path);
    return { best_lab_, best_cert_ };
  }

private:
  static constexpr int kNoJump = INT_MAX;

  int visit(const Cells &node, std::vector<int> &path) {
    if (node.discrete())
      return leaf(node.lab, path);

    int t = 0;
    while (node.cell_size(t) == 1)
      t = node.end[t];
    std::vector<int> members(node.lab.begin() + t,
                             node.lab.begin() + node.end[t]);
    std::sort(members.begin(), members.end());

    const int depth = static_cast<int>(path.size());
    std::vector<int> tried;
    for (int v: members) {
      if (!tried.empty() && in_tried_orbit(v, tried, path))
        continue;
      tried.push_back(v);

      Cells child = node;
      const int s = individualize(child, v);
      refiner_.refine(child, std::span<const int>(&s, 1));
      path.push_back(v);
      const int jump = visit(child, path);
      path.pop_back();
      if (jump < depth)
        return jump;
    }
    return kNoJump;
  }

  int leaf(const std::vector<int> &lab, const std::vector<int> &path) {
    std::string cert = certificate(g_, bonds_, lab);
    if (first_lab_.empty()) {
      first_lab_ = best_lab_ = lab;
      first_path_ = best_path_ = path;
      first_cert_ = best_cert_ = std::move(cert);
      return kNoJump;
    }
    if (cert == first_cert_) {
      add_automorphism(first_lab_, lab);
      return divergence(path, first_path_);
    }
    if (cert == best_cert_) {
      add_automorphism(best_lab_, lab);
      return divergence(path, best_path_);
    }
    if (cert < best_cert_) {
      best_lab_ = lab;
      best_path_ = path;
      best_cert_ = std::move(cert);
    }
    return kNoJump;
  }

  static int divergence(const std::vector<int> &a, const std::vector<int> &b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i])
      ++i;
    return static_cast<int>(i);
  }

  void add_automorphism(const std::vector<int> &from,
                        const std::vector<int> &to) {
    std::vector<int> gamma(from.size());
    bool identity = true;
    for (std::size_t i = 0; i < from.size(); ++i) {
      gamma[from[i]] = to[i];
      identity = identity && from[i] == to[i];
    }
    if (!identity)
      generators_.push_back(std::move(gamma));
  }

  // v is equivalent to an already explored sibling under the subgroup
  // generated by the known automorphisms that fix the path pointwise.
  bool in_tried_orbit(int v, const std::vector<int> &tried,
                      const std::vector<int> &path) {
    UnionFind orbits(g_.size());
    bool any = false;
    for (const auto &gamma: generators_) {
      bool fixes = std::all_of(path.begin(), path.end(),
                               [&](int w) { return gamma[w] == w; });
      if (!fixes)
        continue;
      any = true;
      for (int x = 0; x < g_.size(); ++x)
        orbits.unite(x, gamma[x]);
    }
    if (!any)
      return false;
    const int root = orbits.find(v);
    return std::any_of(tried.begin(), tried.end(),
                       [&](int t) { return orbits.find(t) == root; });
  }

  const ColoredGraph &g_;
  BondMatrix bonds_;
  Refiner refiner_;

  std::vector<int> first_lab_, first_path_;
  std::string first_cert_;
  std::vector<int> best_lab_, best_path_;
  std::string best_cert_;
  std::vector<std::vector<int>> generators_;
};

int lexcmp(const std::vector<std::int64_t> &a,
           const std::vector<std::int64_t> &b) {
  const std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] != b[i])
      return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

class AutomorphicMinimizer {
public:
  AutomorphicMinimizer(const ColoredGraph &g, std::span<const int> base,
                       const PrefixKey &key)
      : g_(g), n_(g.size()), base_(base.begin(), base.end()), key_(key),
        refiner_(g) { }

  std::vector<int> run() {
    base_parts_.reserve(n_ + 1);
    base_parts_.push_back(refined_root(g_, refiner_));
    for (int i = 0; i < n_; ++i) {
      Cells next = base_parts_.back();
      const int s = individualize(next, base_[i]);
      if (s >= 0)
        refiner_.refine(next, std::span<const int>(&s, 1));
      base_parts_.push_back(std::move(next));
    }

    std::vector<int> chosen;
    Cells root = base_parts_[0];
    dfs(root, chosen);
    return best_.empty() ? base_ : best_;
  }

private:
  struct Branch {
    std::vector<std::int64_t> key;
    int vertex;
    Cells cells;
  };

  void dfs(const Cells &node, std::vector<int> &chosen) {
    const int i = static_cast<int>(chosen.size());
    if (i == n_) {
      if (!is_automorphic(chosen))
        return;
      key_(chosen, scratch_);
      if (best_.empty() || lexcmp(scratch_, best_key_) < 0
          || (scratch_.size() > best_key_.size()
              && lexcmp(scratch_, best_key_) == 0)) {
        best_ = chosen;
        best_key_ = scratch_;
      }
      return;
    }

    const Cells &target = base_parts_[i];
    const int s = target.start[base_[i]];
    const int e = target.end[s];

    std::vector<Branch> branches;
    for (int k = s; k < e; ++k) {
      const int v = node.lab[k];
      Cells child = node;
      const int split = individualize(child, v);
      if (split >= 0)
        refiner_.refine(child, std::span<const int>(&split, 1));
      if (!same_shape(child, base_parts_[i + 1]))
        continue;
      chosen.push_back(v);
      key_(chosen, scratch_);
      chosen.pop_back();
      if (!best_.empty() && lexcmp(scratch_, best_key_) > 0)
        continue;
      branches.push_back({ scratch_, v, std::move(child) });
    }
    std::stable_sort(branches.begin(), branches.end(),
                     [](const Branch &a, const Branch &b) {
                       return lexcmp(a.key, b.key) < 0;
                     });

    for (Branch &br: branches) {
      if (!best_.empty() && lexcmp(br.key, best_key_) > 0)
        continue;
      chosen.push_back(br.vertex);
      dfs(br.cells, chosen);
      chosen.pop_back();
    }
  }

  bool is_automorphic(const std::vector<int> &chosen) const {
    std::vector<int> sigma(n_);
    for (int i = 0; i < n_; ++i) {
      sigma[base_[i]] = chosen[i];
      if (g_.color(base_[i]) != g_.color(chosen[i]))
        return false;
    }
    for (const Edge &e: g_.edges()) {
      if (g_.bond_order(sigma[e.u], sigma[e.v]) != e.order)
        return false;
    }
    return true;
  }

  const ColoredGraph &g_;
  int n_;
  std::vector<int> base_;
  const PrefixKey &key_;
  Refiner refiner_;
  std::vector<Cells> base_parts_;

  std::vector<int> best_;
  std::vector<std::int64_t> best_key_;
  std::vector<std::int64_t> scratch_;
};

void check_permutation(std::span<const int> perm, int n) {
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("order length does not match vertex count");
  std::vector<char> seen(n, 0);
  for (int v: perm) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("order is not a permutation");
    seen[v] = 1;
  }
}

std::vector<int> ranks_of(std::span<const int> ranking, int n) {
  check_permutation(ranking, n);
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i)
    rank[ranking[i]] = i;
  return rank;
}

std::vector<int> neighbors_by_rank(const ColoredGraph &g, int v,
                                   const std::vector<int> &rank) {
  std::vector<int> out;
  for (const Neighbor &nb: g.neighbors(v))
    out.push_back(nb.vertex);
  std::sort(out.begin(), out.end(),
            [&](int a, int b) { return rank[a] < rank[b]; });
  return out;
}

}  // namespace

// Partition ------------------------------------------------------------------

Partition Partition::unit(int n) {
  Partition p;
  if (n > 0) {
    p.cells.emplace_back(n);
    std::iota(p.cells[0].begin(), p.cells[0].end(), 0);
  }
  return p;
}

bool Partition::is_discrete() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const auto &c) { return c.size() == 1; });
}

Partition color_partition(const ColoredGraph &g) {
  std::map<int, std::vector<int>> by_color;
  for (int v = 0; v < g.size(); ++v)
    by_color[g.color(v)].push_back(v);
  Partition p;
  for (auto &[color, cell]: by_color)
    p.cells.push_back(std::move(cell));
  return p;
}

Partition refine(const ColoredGraph &g, const Partition &p) {
  const int n = g.size();
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  std::vector<std::vector<int>> split;
  for (const auto &cell: p.cells) {
    if (cell.empty())
      throw std::invalid_argument("partition has an empty cell");
    std::map<int, std::vector<int>> by_color;
    for (int v: cell) {
      if (v < 0 || v >= n || seen[v])
        throw std::invalid_argument("cells are not disjoint vertex sets");
      seen[v] = 1;
      by_color[g.color(v)].push_back(v);
    }
    total += cell.size();
    for (auto &[color, part]: by_color)
      split.push_back(std::move(part));
  }
  if (static_cast<int>(total) != n)
    throw std::invalid_argument("partition does not cover all vertices");

  Cells c = cells_from(split, n);
  Refiner refiner(g);
  auto starts = all_starts(c);
  refiner.refine(c, starts);
  return partition_from(c);
}

// Canonical labeling ---------------------------------------------------------

CanonicalOrder canonical_order(const ColoredGraph &g) {
  return CanonSearch(g).run();
}

std::string labeled_certificate(const ColoredGraph &g,
                                std::span<const int> perm) {
  check_permutation(perm, g.size());
  return certificate(g, BondMatrix(g), perm);
}

// Orders ---------------------------------------------------------------------

OrderStrategy parse_order_strategy(std::string_view name) {
  if (name == "canonical-locality")
    return OrderStrategy::kCanonicalLocality;
  if (name == "canonical-nonlocality")
    return OrderStrategy::kCanonicalNonlocality;
  if (name == "bfs")
    return OrderStrategy::kBfs;
  if (name == "dfs")
    return OrderStrategy::kDfs;
  if (name == "random")
    return OrderStrategy::kRandom;
  throw std::invalid_argument("unknown order strategy '" + std::string(name)
                              + "'");
}

std::string_view to_string(OrderStrategy strategy) {
  switch (strategy) {
  case OrderStrategy::kCanonicalLocality:
    return "canonical-locality";
  case OrderStrategy::kCanonicalNonlocality:
    return "canonical-nonlocality";
  case OrderStrategy::kBfs:
    return "bfs";
  case OrderStrategy::kDfs:
    return "dfs";
  case OrderStrategy::kRandom:
    return "random";
  }
  return "";
}

std::vector<int> locality_order(const ColoredGraph &g,
                                std::span<const int> ranking) {
  const int n = g.size();
  const auto rank = ranks_of(ranking, n);
  std::vector<char> visited(n, 0);
  std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>,
                      std::greater<>>
      frontier;
  std::vector<int> out;
  int next_root = 0;
  while (static_cast<int>(out.size()) < n) {
    if (frontier.empty()) {
      while (visited[ranking[next_root]])
        ++next_root;
      frontier.emplace(next_root, ranking[next_root]);
    }
    const int v = frontier.top().second;
    frontier.pop();
    if (visited[v])
      continue;
    visited[v] = 1;
    out.push_back(v);
    for (const Neighbor &nb: g.neighbors(v)) {
      if (!visited[nb.vertex])
        frontier.emplace(rank[nb.vertex], nb.vertex);
    }
  }
  return out;
}

std::vector<int> bfs_order(const ColoredGraph &g,
                           std::span<const int> ranking) {
  const int n = g.size();
  const auto rank = ranks_of(ranking, n);
  std::vector<char> visited(n, 0);
  std::vector<int> out;
  std::deque<int> queue;
  for (int root: ranking) {
    if (visited[root])
      continue;
    visited[root] = 1;
    queue.push_back(root);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      out.push_back(v);
      for (int w: neighbors_by_rank(g, v, rank)) {
        if (!visited[w]) {
          visited[w] = 1;
          queue.push_back(w);
        }
      }
    }
  }
  return out;
}

std::vector<int> dfs_order(const ColoredGraph &g,
                           std::span<const int> ranking) {
  const int n = g.size();
  const auto rank = ranks_of(ranking, n);
  std::vector<char> visited(n, 0);
  std::vector<int> out;
  // (vertex, sorted neighbors, next index)
  std::vector<std::pair<std::vector<int>, std::size_t>> stack;
  for (int root: ranking) {
    if (visited[root])
      continue;
    visited[root] = 1;
    out.push_back(root);
    stack.emplace_back(neighbors_by_rank(g, root, rank), 0);
    while (!stack.empty()) {
      auto &[nbrs, next] = stack.back();
      if (next == nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const int w = nbrs[next++];
      if (visited[w])
        continue;
      visited[w] = 1;
      out.push_back(w);
      stack.emplace_back(neighbors_by_rank(g, w, rank), 0);
    }
  }
  return out;
}

std::vector<int> min_automorphic_order(const ColoredGraph &g,
                                       std::span<const int> base,
                                       const PrefixKey &key) {
  check_permutation(base, g.size());
  if (g.size() == 0)
    return {};
  return AutomorphicMinimizer(g, base, key).run();
}

PrefixKey spherical_prefix_key(std::span<const Vec3> coords,
                               int decimals_distance, int decimals_angle) {
  return [coords, decimals_distance, decimals_angle](
             std::span<const int> prefix, std::vector<std::int64_t> &key) {
    key.clear();
    if (prefix.empty())
      return;
    if (prefix.size() < coords.size()
        && frame_atom_position(coords, prefix) < 0)
      return;
    const FrameBasis frame = build_frame(coords, prefix);
    for (int idx: prefix) {
      const SphericalRecord rec = to_spherical(coords[idx], frame);
      key.push_back(quantize(rec.d, decimals_distance));
      key.push_back(quantize(rec.theta, decimals_angle));
      key.push_back(quantize(rec.phi, decimals_angle));
    }
  };
}

std::vector<int> order_strategy(const ColoredGraph &g,
                                std::span<const Vec3> coords,
                                const OrderOptions &opts) {
  const int n = g.size();
  if (static_cast<int>(coords.size()) != n)
    throw std::invalid_argument("coordinate count does not match graph size");

  if (opts.strategy == OrderStrategy::kRandom) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(opts.seed);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    return perm;
  }

  const CanonicalOrder canon = canonical_order(g);
  std::vector<int> base;
  switch (opts.strategy) {
  case OrderStrategy::kCanonicalNonlocality:
    base = canon.perm;
    break;
  case OrderStrategy::kCanonicalLocality:
    base = locality_order(g, canon.perm);
    break;
  case OrderStrategy::kBfs:
    base = bfs_order(g, canon.perm);
    break;
  case OrderStrategy::kDfs:
    base = dfs_order(g, canon.perm);
    break;
  case OrderStrategy::kRandom:
    break;
  }
  return min_automorphic_order(
      g, base,
      spherical_prefix_key(coords, opts.decimals_distance,
                           opts.decimals_angle));
}

}  // namespace geoseq
