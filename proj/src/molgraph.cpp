//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/molgraph.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "text_util.h"

namespace geoseq {
namespace internal {
extern const std::string_view kDefaultBondTable;
extern const std::string_view kDefaultValencyTable;
}  // namespace internal

using internal::parse_double;
using internal::parse_int;
using internal::split_lines;
using internal::split_ws;
using internal::trim;

void validate(const Molecule3D &mol) {
  if (mol.atoms.empty())
    throw std::invalid_argument("molecule has no atoms");
  if (mol.atoms.size() != mol.coords.size())
    throw std::invalid_argument("atom and coordinate counts differ");
  for (int z: mol.atoms) {
    if (z < 1)
      throw std::invalid_argument("atomic number must be positive");
  }
  for (const Vec3 &r: mol.coords) {
    if (!r.allFinite())
      throw std::invalid_argument("non-finite coordinate");
  }
}

// ColoredGraph ---------------------------------------------------------------

ColoredGraph::ColoredGraph(std::vector<int> colors)
    : colors_(std::move(colors)), adj_(colors_.size()) { }

void ColoredGraph::add_edge(int u, int v, int order) {
  if (u < 0 || v < 0 || u >= size() || v >= size())
    throw std::invalid_argument("edge endpoint out of range");
  if (u == v)
    throw std::invalid_argument("self-loop");
  if (order < 1 || order > 3)
    throw std::invalid_argument("bond order must be 1, 2 or 3");
  if (bond_order(u, v) != 0)
    throw std::invalid_argument("duplicate edge");

  edges_.push_back({ std::min(u, v), std::max(u, v), order });
  adj_[u].push_back({ v, order });
  adj_[v].push_back({ u, order });
}

int ColoredGraph::bond_order(int u, int v) const {
  const auto &nu = adj_[u];
  auto it = std::find_if(nu.begin(), nu.end(),
                         [v](const Neighbor &n) { return n.vertex == v; });
  return it == nu.end() ? 0 : it->order;
}

int ColoredGraph::valence(int v) const {
  int sum = 0;
  for (const Neighbor &n: adj_[v])
    sum += n.order;
  return sum;
}

ColoredGraph ColoredGraph::permuted(std::span<const int> perm) const {
  std::vector<int> inv(size(), -1);
  std::vector<int> colors(perm.size());
  for (int i = 0; i < static_cast<int>(perm.size()); ++i) {
    inv[perm[i]] = i;
    colors[i] = colors_[perm[i]];
  }

  ColoredGraph out(std::move(colors));
  std::vector<Edge> edges;
  for (const Edge &e: edges_)
    edges.push_back({ inv[e.u], inv[e.v], e.order });
  // Insertion order follows the new labels so that adjacency lists do not
  // leak the old labeling.
  std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
    return std::minmax(a.u, a.v) < std::minmax(b.u, b.v);
  });
  for (const Edge &e: edges)
    out.add_edge(e.u, e.v, e.order);
  return out;
}

ColoredGraph ColoredGraph::induced(std::span<const int> vertices) const {
  std::vector<int> inv(size(), -1);
  std::vector<int> colors;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    inv[vertices[i]] = i;
    colors.push_back(colors_[vertices[i]]);
  }
  ColoredGraph out(std::move(colors));
  for (const Edge &e: edges_) {
    if (inv[e.u] >= 0 && inv[e.v] >= 0)
      out.add_edge(inv[e.u], inv[e.v], e.order);
  }
  return out;
}

// Tables ---------------------------------------------------------------------

namespace {
template <class Fn>
void for_each_record(std::string_view text, Fn &&fn) {
  auto lines = split_lines(text);
  for (int i = 0; i < static_cast<int>(lines.size()); ++i) {
    std::string_view line = lines[i];
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto fields = split_ws(line);
    if (fields.empty())
      continue;
    fn(fields, i + 1);
  }
}

int parse_positive(std::string_view s, int line, const char *what) {
  auto v = parse_int(s);
  if (!v || *v < 1)
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s)
                         + "' at line " + std::to_string(line),
                     line);
  return static_cast<int>(*v);
}
}  // namespace

BondTable BondTable::parse(std::string_view text) {
  BondTable table;
  for_each_record(text, [&](const auto &f, int line) {
    if (f.size() != 4)
      throw ParseError("expected 'Z1 Z2 order length_pm' at line "
                           + std::to_string(line),
                       line);
    int z1 = parse_positive(f[0], line, "atomic number");
    int z2 = parse_positive(f[1], line, "atomic number");
    int order = parse_positive(f[2], line, "bond order");
    if (order > 3)
      throw ParseError("bond order above 3 at line " + std::to_string(line),
                       line);
    auto pm = parse_double(f[3]);
    if (!pm || *pm <= 0)
      throw ParseError("invalid length at line " + std::to_string(line), line);
    table.lengths_[{ std::min(z1, z2), std::max(z1, z2), order }] = *pm / 100;
  });
  return table;
}

BondTable BondTable::from_file(const std::filesystem::path &path) {
  return parse(internal::read_file(path.string()));
}

const BondTable &BondTable::default_table() {
  static const BondTable table = parse(internal::kDefaultBondTable);
  return table;
}

std::optional<double> BondTable::length(int z1, int z2, int order) const {
  auto it = lengths_.find({ std::min(z1, z2), std::max(z1, z2), order });
  if (it == lengths_.end())
    return std::nullopt;
  return it->second;
}

void BondTable::set_margins(double single, double dbl, double triple) {
  margins_ = { single, dbl, triple };
}

ValencyTable ValencyTable::parse(std::string_view text) {
  ValencyTable table;
  for_each_record(text, [&](const auto &f, int line) {
    if (f.size() < 2)
      throw ParseError("expected 'Z valence...' at line "
                           + std::to_string(line),
                       line);
    int z = parse_positive(f[0], line, "atomic number");
    std::vector<int> vals;
    for (std::size_t i = 1; i < f.size(); ++i)
      vals.push_back(parse_positive(f[i], line, "valence"));
    std::sort(vals.begin(), vals.end());
    table.allowed_[z] = std::move(vals);
  });
  return table;
}

ValencyTable ValencyTable::from_file(const std::filesystem::path &path) {
  return parse(internal::read_file(path.string()));
}

const ValencyTable &ValencyTable::default_table() {
  static const ValencyTable table = parse(internal::kDefaultValencyTable);
  return table;
}

std::span<const int> ValencyTable::allowed(int z) const {
  auto it = allowed_.find(z);
  if (it == allowed_.end())
    return {};
  return it->second;
}

bool ValencyTable::is_allowed(int z, int valence) const {
  auto vals = allowed(z);
  return std::find(vals.begin(), vals.end(), valence) != vals.end();
}

std::optional<int> ValencyTable::max_valence(int z) const {
  auto vals = allowed(z);
  if (vals.empty())
    return std::nullopt;
  return vals.back();
}

// XYZ ------------------------------------------------------------------------

std::vector<XyzBlock> parse_xyz_blocks(std::string_view text) {
  auto lines = split_lines(text);
  const int nlines = static_cast<int>(lines.size());

  std::vector<XyzBlock> blocks;
  int i = 0;
  while (true) {
    while (i < nlines && trim(lines[i]).empty())
      ++i;
    if (i >= nlines)
      break;

    XyzBlock block;
    block.line = i + 1;
    auto fail = [&](std::string msg, int line) {
      block.error = std::move(msg);
      block.error_line = line;
      blocks.push_back(std::move(block));
    };

    const int count_line = i + 1;
    auto count = parse_int(trim(lines[i]));
    if (!count || *count < 1) {
      // Without a count the block boundaries are unknown.
      fail("malformed atom count '" + std::string(trim(lines[i]))
               + "' at line " + std::to_string(count_line),
           count_line);
      break;
    }
    ++i;
    if (i >= nlines) {
      fail("missing comment line after line " + std::to_string(count_line),
           count_line);
      break;
    }

    Molecule3D mol;
    for (auto field: split_ws(lines[i])) {
      auto eq = field.find('=');
      if (eq == std::string_view::npos || eq == 0)
        continue;
      if (auto v = parse_double(field.substr(eq + 1)))
        mol.properties.emplace(std::string(field.substr(0, eq)), *v);
    }
    ++i;

    if (i + *count > nlines) {
      fail("expected " + std::to_string(*count)
               + " atom lines, input ended at line " + std::to_string(nlines),
           nlines);
      break;
    }
    const int block_end = i + static_cast<int>(*count);
    for (; i < block_end; ++i) {
      const int lineno = i + 1;
      auto f = split_ws(lines[i]);
      if (f.size() < 4) {
        fail("expected 'element x y z' at line " + std::to_string(lineno),
             lineno);
        break;
      }

      std::optional<int> z = atomic_number(f[0]);
      if (!z) {
        auto num = parse_int(f[0]);
        if (num && !element_symbol(static_cast<int>(*num)).empty())
          z = static_cast<int>(*num);
      }
      if (!z) {
        fail("unknown element " + std::string(f[0]) + " at line "
                 + std::to_string(lineno),
             lineno);
        break;
      }

      Vec3 r;
      bool ok = true;
      for (int c = 0; c < 3 && ok; ++c) {
        auto v = parse_double(f[1 + c]);
        if (!v) {
          fail("non-numeric coordinate '" + std::string(f[1 + c])
                   + "' at line " + std::to_string(lineno),
               lineno);
          ok = false;
        } else {
          r[c] = *v;
        }
      }
      if (!ok)
        break;
      mol.atoms.push_back(*z);
      mol.coords.push_back(r);
    }
    if (i < block_end) {
      i = block_end;
      continue;
    }
    block.molecule = std::move(mol);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<Molecule3D> parse_xyz(std::string_view text) {
  std::vector<Molecule3D> mols;
  for (auto &b: parse_xyz_blocks(text)) {
    if (!b.molecule)
      throw ParseError(b.error, b.error_line);
    mols.push_back(std::move(*b.molecule));
  }
  return mols;
}

std::string write_xyz(const Molecule3D &mol, int precision) {
  std::string out = std::to_string(mol.size()) + "\n";
  bool first = true;
  for (const auto &[key, value]: mol.properties) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    out += (first ? "" : " ") + key + "=" + buf;
    first = false;
  }
  out += "\n";
  for (int i = 0; i < mol.size(); ++i) {
    char buf[160];
    std::string_view sym = element_symbol(mol.atoms[i]);
    std::snprintf(buf, sizeof(buf), "%-2s %.*f %.*f %.*f\n",
                  std::string(sym).c_str(), precision, mol.coords[i].x(),
                  precision, mol.coords[i].y(), precision, mol.coords[i].z());
    out += buf;
  }
  return out;
}

// Bonds ----------------------------------------------------------------------

ColoredGraph infer_bonds(const Molecule3D &mol, const BondTable &table) {
  ColoredGraph g(mol.atoms);
  const int n = mol.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (mol.coords[i] - mol.coords[j]).norm();
      for (int order = 3; order >= 1; --order) {
        auto ref = table.length(mol.atoms[i], mol.atoms[j], order);
        if (ref && d <= *ref + table.margin(order)) {
          g.add_edge(i, j, order);
          break;
        }
      }
    }
  }
  return g;
}

std::vector<std::vector<int>> connected_components(const ColoredGraph &g) {
  const int n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0)
      continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out[id].push_back(v);
      for (const Neighbor &nb: g.neighbors(v)) {
        if (comp[nb.vertex] < 0) {
          comp[nb.vertex] = id;
          stack.push_back(nb.vertex);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

}  // namespace geoseq
