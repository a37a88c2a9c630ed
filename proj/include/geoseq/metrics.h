//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_METRICS_H_
#define GEOSEQ_METRICS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geoseq/molgraph.h"

namespace geoseq {

/// Tables used to infer and judge bonds.
struct ChemistryTables {
  const BondTable *bonds = &BondTable::default_table();
  const ValencyTable *valency = &ValencyTable::default_table();
};

/// Atoms whose total inferred bond order is an allowed valency.
struct StabilityCounts {
  std::size_t stable_atoms = 0;
  std::size_t atoms = 0;
  std::size_t stable_molecules = 0;
  std::size_t molecules = 0;
};

StabilityCounts stability_counts(std::span<const Molecule3D> mols,
                                 const ChemistryTables &tables = {});

/// Fraction of stable atoms over all atoms; 0 for an empty list.
double atom_stability(std::span<const Molecule3D> mols,
                      const ChemistryTables &tables = {});
/// Fraction of molecules whose atoms are all stable.
double mol_stability(std::span<const Molecule3D> mols,
                     const ChemistryTables &tables = {});

/// A largest connected component has no atom above its maximum valency
/// (untabulated elements fail). Every largest component is tried, so the
/// result does not depend on atom order.
bool is_valid(const ColoredGraph &g, const ValencyTable &valency);

/// Canonical certificate of the inferred colored graph.
std::string graph_certificate(const Molecule3D &mol,
                              const BondTable &table = BondTable::default_table());

struct ValidityResult {
  double valid = 0;
  double valid_unique = 0;
  double valid_unique_novel = 0;
};

/// Fractions of the whole list. A valid molecule counts as unique on the
/// first occurrence of its certificate and as novel if that certificate is
/// not in train_certificates.
ValidityResult validity_uniqueness_novelty(
    std::span<const Molecule3D> mols,
    const std::set<std::string> &train_certificates,
    const ChemistryTables &tables = {});

/// Fraction of molecules whose inferred graph is connected.
double completeness(std::span<const Molecule3D> mols,
                    const BondTable &table = BondTable::default_table());

/// Bond lengths (angstrom), angles of bonded triplets and signed dihedrals
/// of bonded quadruplets (radians).
struct GeometryFeatures {
  std::vector<double> bond_lengths;
  std::vector<double> bond_angles;
  std::vector<double> dihedrals;

  void append(const GeometryFeatures &other);
};

GeometryFeatures geometry_features(const Molecule3D &mol,
                                   const BondTable &table = BondTable::default_table());

enum class MmdEstimator {
  kBiased,
  kUnbiased,
};

struct MmdOptions {
  MmdEstimator estimator = MmdEstimator::kUnbiased;
  /// Gaussian kernel exp(-(a - b)^2 / (2 sigma^2)); median heuristic when
  /// unset.
  std::optional<double> sigma;
  /// Larger sets are thinned to this many quantiles.
  std::size_t max_samples = 100000;
};

/// Median pairwise distance of the pooled sample (on at most 1000
/// quantiles); 1 when that median is 0.
double median_bandwidth(std::span<const double> x, std::span<const double> y);

/// Squared MMD estimate (may be negative for the unbiased estimator).
double mmd_squared(std::span<const double> x, std::span<const double> y,
                   const MmdOptions &opts = {});

/// sqrt(max(0, mmd_squared)).
double mmd(std::span<const double> x, std::span<const double> y,
           const MmdOptions &opts = {});

/// Sum over all pairs of exp(-(x_i - y_j)^2 / (2 sigma^2)), exact.
double gauss_sum_direct(std::span<const double> x, std::span<const double> y,
                        double sigma);
/// The same sum by a fast Gauss transform (Hermite expansions on boxes of
/// side sigma / sqrt(2)); absolute error per pair below 1e-15.
double gauss_sum_fast(std::span<const double> x, std::span<const double> y,
                      double sigma);

struct GeometryMmd {
  double bond_length = 0;
  double bond_angle = 0;
  double dihedral = 0;
};

/// Throws std::invalid_argument("no geometric features") when either set
/// has no bonds.
GeometryMmd geometry_mmd(const GeometryFeatures &generated,
                         const GeometryFeatures &reference,
                         const MmdOptions &opts = {});

struct MetricsReport {
  double atom_stability = 0;
  double mol_stability = 0;
  double valid = 0;
  double valid_unique = 0;
  double valid_unique_novel = 0;
  double complete = 0;
  std::optional<GeometryMmd> mmd;
  std::size_t molecules = 0;
};

/// All metrics of a generated set. MMD is computed against `reference`
/// when it is nonempty; novelty uses the certificates of `training`.
MetricsReport evaluate(std::span<const Molecule3D> generated,
                       std::span<const Molecule3D> reference,
                       std::span<const Molecule3D> training,
                       const ChemistryTables &tables = {});

}  // namespace geoseq

#endif  // GEOSEQ_METRICS_H_
