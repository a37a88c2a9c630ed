//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "geoseq/canon.h"

namespace geoseq {
namespace {

bool atom_stable(const ColoredGraph &g, int v, const ValencyTable &valency) {
  return valency.is_allowed(g.color(v), g.valence(v));
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / den;
}

double angle_between(const Vec3 &a, const Vec3 &b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

StabilityCounts stability_counts(std::span<const Molecule3D> mols,
                                 const ChemistryTables &tables) {
  StabilityCounts c;
  for (const auto &mol: mols) {
    const ColoredGraph g = infer_bonds(mol, *tables.bonds);
    std::size_t stable = 0;
    for (int v = 0; v < g.size(); ++v)
      stable += atom_stable(g, v, *tables.valency) ? 1 : 0;
    c.stable_atoms += stable;
    c.atoms += g.size();
    c.stable_molecules += stable == static_cast<std::size_t>(g.size()) ? 1 : 0;
    ++c.molecules;
  }
  return c;
}

double atom_stability(std::span<const Molecule3D> mols,
                      const ChemistryTables &tables) {
  const auto c = stability_counts(mols, tables);
  return ratio(c.stable_atoms, c.atoms);
}

double mol_stability(std::span<const Molecule3D> mols,
                     const ChemistryTables &tables) {
  const auto c = stability_counts(mols, tables);
  return ratio(c.stable_molecules, c.molecules);
}

bool is_valid(const ColoredGraph &g, const ValencyTable &valency) {
  if (g.size() == 0)
    return false;
  const auto comps = connected_components(g);
  std::size_t largest = 0;
  for (const auto &c: comps)
    largest = std::max(largest, c.size());
  for (const auto &c: comps) {
    if (c.size() != largest)
      continue;
    const bool ok = std::all_of(c.begin(), c.end(), [&](int v) {
      auto cap = valency.max_valence(g.color(v));
      return cap && g.valence(v) <= *cap;
    });
    if (ok)
      return true;
  }
  return false;
}

std::string graph_certificate(const Molecule3D &mol, const BondTable &table) {
  return canonical_order(infer_bonds(mol, table)).certificate;
}

ValidityResult validity_uniqueness_novelty(
    std::span<const Molecule3D> mols,
    const std::set<std::string> &train_certificates,
    const ChemistryTables &tables) {
  std::size_t valid = 0, unique = 0, novel = 0;
  std::unordered_set<std::string> seen;
  for (const auto &mol: mols) {
    const ColoredGraph g = infer_bonds(mol, *tables.bonds);
    if (!is_valid(g, *tables.valency))
      continue;
    ++valid;
    std::string cert = canonical_order(g).certificate;
    const bool is_novel = !train_certificates.contains(cert);
    if (seen.insert(std::move(cert)).second) {
      ++unique;
      novel += is_novel ? 1 : 0;
    }
  }
  return { ratio(valid, mols.size()), ratio(unique, mols.size()),
           ratio(novel, mols.size()) };
}

double completeness(std::span<const Molecule3D> mols, const BondTable &table) {
  std::size_t connected = 0;
  for (const auto &mol: mols)
    connected += connected_components(infer_bonds(mol, table)).size() == 1;
  return ratio(connected, mols.size());
}

void GeometryFeatures::append(const GeometryFeatures &other) {
  bond_lengths.insert(bond_lengths.end(), other.bond_lengths.begin(),
                      other.bond_lengths.end());
  bond_angles.insert(bond_angles.end(), other.bond_angles.begin(),
                     other.bond_angles.end());
  dihedrals.insert(dihedrals.end(), other.dihedrals.begin(),
                   other.dihedrals.end());
}

GeometryFeatures geometry_features(const Molecule3D &mol,
                                   const BondTable &table) {
  const ColoredGraph g = infer_bonds(mol, table);
  const auto &r = mol.coords;
  GeometryFeatures f;
  for (const Edge &e: g.edges())
    f.bond_lengths.push_back((r[e.u] - r[e.v]).norm());

  for (int j = 0; j < g.size(); ++j) {
    const auto nb = g.neighbors(j);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        f.bond_angles.push_back(
            angle_between(r[nb[a].vertex] - r[j], r[nb[b].vertex] - r[j]));
    }
  }

  for (const Edge &e: g.edges()) {
    const int j = e.u, k = e.v;
    const Vec3 b2 = r[k] - r[j];
    for (const Neighbor &ni: g.neighbors(j)) {
      if (ni.vertex == k)
        continue;
      for (const Neighbor &nl: g.neighbors(k)) {
        if (nl.vertex == j || nl.vertex == ni.vertex)
          continue;
        const Vec3 b1 = r[j] - r[ni.vertex];
        const Vec3 b3 = r[nl.vertex] - r[k];
        const Vec3 n1 = b1.cross(b2);
        const Vec3 n2 = b2.cross(b3);
        const double bn = b2.norm();
        if (n1.norm() == 0 || n2.norm() == 0 || bn == 0)
          continue;
        const double y = n1.cross(n2).dot(b2) / bn;
        f.dihedrals.push_back(std::atan2(y, n1.dot(n2)));
      }
    }
  }
  return f;
}

GeometryMmd geometry_mmd(const GeometryFeatures &generated,
                         const GeometryFeatures &reference,
                         const MmdOptions &opts) {
  if (generated.bond_lengths.empty() || reference.bond_lengths.empty())
    throw std::invalid_argument("no geometric features");
  GeometryMmd out;
  out.bond_length = mmd(generated.bond_lengths, reference.bond_lengths, opts);
  if (!generated.bond_angles.empty() && !reference.bond_angles.empty())
    out.bond_angle = mmd(generated.bond_angles, reference.bond_angles, opts);
  else
    out.bond_angle = NAN;
  if (!generated.dihedrals.empty() && !reference.dihedrals.empty())
    out.dihedral = mmd(generated.dihedrals, reference.dihedrals, opts);
  else
    out.dihedral = NAN;
  return out;
}

MetricsReport evaluate(std::span<const Molecule3D> generated,
                       std::span<const Molecule3D> reference,
                       std::span<const Molecule3D> training,
                       const ChemistryTables &tables) {
  MetricsReport rep;
  rep.molecules = generated.size();
  const auto c = stability_counts(generated, tables);
  rep.atom_stability = ratio(c.stable_atoms, c.atoms);
  rep.mol_stability = ratio(c.stable_molecules, c.molecules);

  std::set<std::string> train;
  for (const auto &m: training)
    train.insert(graph_certificate(m, *tables.bonds));
  const auto v = validity_uniqueness_novelty(generated, train, tables);
  rep.valid = v.valid;
  rep.valid_unique = v.valid_unique;
  rep.valid_unique_novel = v.valid_unique_novel;
  rep.complete = completeness(generated, *tables.bonds);

  if (!reference.empty()) {
    GeometryFeatures fg, fr;
    for (const auto &m: generated)
      fg.append(geometry_features(m, *tables.bonds));
    for (const auto &m: reference)
      fr.append(geometry_features(m, *tables.bonds));
    if (!fg.bond_lengths.empty() && !fr.bond_lengths.empty())
      rep.mmd = geometry_mmd(fg, fr);
  }
  return rep;
}

}  // namespace geoseq
