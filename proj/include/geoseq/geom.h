//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_GEOM_H_
#define GEOSEQ_GEOM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "geoseq/molgraph.h"

namespace geoseq {

/// Right-handed orthonormal frame anchored at the first ordered atom.
struct FrameBasis {
  Vec3 origin = Vec3::Zero();
  Vec3 x = Vec3::UnitX();
  Vec3 y = Vec3::UnitY();
  Vec3 z = Vec3::UnitZ();

  /// Coordinates of r expressed in this frame.
  Vec3 local(const Vec3 &r) const;
};

/// Spherical coordinates of one atom: d in angstrom, theta in [0, pi],
/// phi in (-pi, pi]. d == 0 implies theta == phi == 0, and theta in
/// {0, pi} implies phi == 0.
struct SphericalRecord {
  double d = 0;
  double theta = 0;
  double phi = 0;
};

/// Perpendicular distance (angstrom) below which an atom counts as collinear
/// with the frame's x axis.
inline constexpr double kCollinearTolerance = 1e-8;

/// Builds the molecule frame from the ordered atoms: origin at order[0],
/// x towards order[1], y from the first later atom not collinear with x.
/// Degenerate inputs (a single atom, coincident or collinear atoms) fall back
/// to fixed conventions, so this never fails.
FrameBasis build_frame(std::span<const Vec3> coords, std::span<const int> order);

/// Index into `order` of the atom used to fix the y axis, or -1 when all
/// atoms are collinear.
int frame_atom_position(std::span<const Vec3> coords,
                        std::span<const int> order);

SphericalRecord to_spherical(const Vec3 &r, const FrameBasis &frame);

/// Records of coords[order[0]], coords[order[1]], ... in the given frame.
std::vector<SphericalRecord> to_spherical(std::span<const Vec3> coords,
                                          std::span<const int> order,
                                          const FrameBasis &frame);

Vec3 from_spherical(const SphericalRecord &rec);
std::vector<Vec3> from_spherical(std::span<const SphericalRecord> records);

/// Rounds value * 10^decimals half away from zero.
std::int64_t quantize(double value, int decimals);

/// Inverse of quantize.
double dequantize(std::int64_t q, int decimals);

}  // namespace geoseq

#endif  // GEOSEQ_GEOM_H_
