//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_MOLGRAPH_H_
#define GEOSEQ_MOLGRAPH_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geoseq {

using Vec3 = Eigen::Vector3d;

/// Thrown by the text readers. Carries the 1-based line number of the
/// offending input line (0 when the error is not tied to a line).
class ParseError: public std::runtime_error {
public:
  ParseError(const std::string &msg, int line)
      : std::runtime_error(msg), line_(line) { }

  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Element symbol for an atomic number, or an empty view when unknown.
std::string_view element_symbol(int atomic_number);

/// Atomic number for an element symbol (case-insensitive).
std::optional<int> atomic_number(std::string_view symbol);

/// A single molecule: atomic numbers, Cartesian coordinates in angstrom and
/// optional scalar properties (e.g. polarizability in Bohr^3).
struct Molecule3D {
  std::vector<int> atoms;
  std::vector<Vec3> coords;
  std::map<std::string, double, std::less<>> properties;

  int size() const { return static_cast<int>(atoms.size()); }
};

/// Throws std::invalid_argument unless atoms/coords are consistent, nonempty
/// and finite.
void validate(const Molecule3D &mol);

struct Neighbor {
  int vertex;
  int order;
};

struct Edge {
  int u;
  int v;
  int order;
};

/// Undirected simple graph with integer vertex colors and bond orders 1..3.
class ColoredGraph {
public:
  ColoredGraph() = default;
  explicit ColoredGraph(std::vector<int> colors);

  /// Adds the undirected edge {u, v}. Throws std::invalid_argument on
  /// self-loops, duplicates, out-of-range vertices or orders outside 1..3.
  void add_edge(int u, int v, int order = 1);

  int size() const { return static_cast<int>(colors_.size()); }
  const std::vector<int> &colors() const { return colors_; }
  int color(int v) const { return colors_[v]; }
  const std::vector<Edge> &edges() const { return edges_; }
  std::span<const Neighbor> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  /// Bond order between u and v, 0 if not adjacent.
  int bond_order(int u, int v) const;

  /// Sum of bond orders incident to v.
  int valence(int v) const;

  /// The graph with vertex i of the result being vertex perm[i] of this one.
  ColoredGraph permuted(std::span<const int> perm) const;

  /// Subgraph induced by the given vertices, in the given order.
  ColoredGraph induced(std::span<const int> vertices) const;

private:
  std::vector<int> colors_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
};

/// Reference bond lengths keyed by unordered element pair and bond order,
/// plus the per-order acceptance margins.
class BondTable {
public:
  /// Table shipped with the library (data/bond_lengths.txt).
  static const BondTable &default_table();

  /// Parses `Z1 Z2 order length_pm` records; '#' starts a comment.
  static BondTable parse(std::string_view text);
  static BondTable from_file(const std::filesystem::path &path);

  /// Reference length in angstrom, if the pair bonds with that order.
  std::optional<double> length(int z1, int z2, int order) const;

  /// Margin in angstrom added to the reference length of the given order.
  double margin(int order) const { return margins_[order - 1]; }
  void set_margins(double single, double dbl, double triple);

  std::size_t size() const { return lengths_.size(); }

private:
  // key: (min Z, max Z, order); value: angstrom
  std::map<std::array<int, 3>, double> lengths_;
  std::array<double, 3> margins_ = { 0.10, 0.05, 0.03 };
};

/// Allowed total bond orders per neutral element.
class ValencyTable {
public:
  static const ValencyTable &default_table();

  /// Parses `Z valence [valence ...]` records; '#' starts a comment.
  static ValencyTable parse(std::string_view text);
  static ValencyTable from_file(const std::filesystem::path &path);

  /// Allowed valencies; empty when the element is not tabulated.
  std::span<const int> allowed(int z) const;

  bool is_allowed(int z, int valence) const;

  /// Largest allowed valency, or nullopt when not tabulated.
  std::optional<int> max_valence(int z) const;

private:
  std::map<int, std::vector<int>> allowed_;
};

/// One XYZ block: the molecule, or the error that made it unreadable.
struct XyzBlock {
  std::optional<Molecule3D> molecule;
  std::string error;
  int line = 0;        // 1-based line of the atom count
  int error_line = 0;
};

/// Reads concatenated XYZ blocks, continuing after blocks with bad atom
/// lines. A malformed atom count ends the scan with an error block.
std::vector<XyzBlock> parse_xyz_blocks(std::string_view text);

/// Reads concatenated XYZ blocks. Comment lines are scanned for
/// `key=value` pairs with numeric values, which become properties.
std::vector<Molecule3D> parse_xyz(std::string_view text);

/// Writes one XYZ block (properties go to the comment line).
std::string write_xyz(const Molecule3D &mol, int precision = 6);

/// Distance-based bond perception. For every tabulated pair the highest
/// order k with d <= ref_k + margin_k is assigned.
ColoredGraph infer_bonds(const Molecule3D &mol,
                         const BondTable &table = BondTable::default_table());

/// Vertex sets of the connected components, each sorted, ordered by their
/// smallest vertex.
std::vector<std::vector<int>> connected_components(const ColoredGraph &g);

}  // namespace geoseq

#endif  // GEOSEQ_MOLGRAPH_H_
