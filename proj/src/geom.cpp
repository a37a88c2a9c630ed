//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "geoseq/geom.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geoseq {
namespace {
constexpr double kCoincident = 1e-12;

constexpr std::array<double, 10> kPow10 = {
  1, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9,
};

double pow10(int decimals) {
  if (decimals < 0 || decimals >= static_cast<int>(kPow10.size()))
    throw std::invalid_argument("decimals must be in [0, 9]");
  return kPow10[decimals];
}
}  // namespace

Vec3 FrameBasis::local(const Vec3 &r) const {
  const Vec3 rel = r - origin;
  return { rel.dot(x), rel.dot(y), rel.dot(z) };
}

int frame_atom_position(std::span<const Vec3> coords,
                        std::span<const int> order) {
  if (order.size() < 3)
    return -1;
  const Vec3 &o = coords[order[0]];
  const Vec3 ex = coords[order[1]] - o;
  if (ex.norm() <= kCoincident)
    return -1;
  const Vec3 x = ex.normalized();
  for (std::size_t i = 2; i < order.size(); ++i) {
    if ((coords[order[i]] - o).cross(x).norm() > kCollinearTolerance)
      return static_cast<int>(i);
  }
  return -1;
}

FrameBasis build_frame(std::span<const Vec3> coords,
                       std::span<const int> order) {
  FrameBasis f;
  if (order.empty())
    return f;
  f.origin = coords[order[0]];
  if (order.size() < 2)
    return f;

  const Vec3 ex = coords[order[1]] - f.origin;
  if (ex.norm() <= kCoincident)
    return f;
  f.x = ex.normalized();

  if (int pos = frame_atom_position(coords, order); pos >= 0) {
    f.y = (coords[order[pos]] - f.origin).cross(f.x).normalized();
  } else {
    // All atoms on one line: any y orthogonal to x gives congruent records.
    int axis = 0;
    while (std::abs(f.x[axis]) >= 0.9)
      ++axis;
    Vec3 e = Vec3::Unit(axis);
    f.y = (e - e.dot(f.x) * f.x).normalized();
  }
  f.z = f.x.cross(f.y);
  return f;
}

SphericalRecord to_spherical(const Vec3 &r, const FrameBasis &frame) {
  const Vec3 rel = r - frame.origin;
  SphericalRecord rec;
  rec.d = rel.norm();
  if (rec.d == 0)
    return rec;

  const double c = std::clamp(rel.dot(frame.z) / rec.d, -1.0, 1.0);
  rec.theta = std::acos(c);
  if (rec.theta == 0 || rec.theta == std::numbers::pi)
    return rec;

  rec.phi = std::atan2(rel.dot(frame.y), rel.dot(frame.x));
  if (rec.phi == -std::numbers::pi)
    rec.phi = std::numbers::pi;
  return rec;
}

std::vector<SphericalRecord> to_spherical(std::span<const Vec3> coords,
                                          std::span<const int> order,
                                          const FrameBasis &frame) {
  std::vector<SphericalRecord> out;
  out.reserve(order.size());
  for (int idx: order)
    out.push_back(to_spherical(coords[idx], frame));
  return out;
}

Vec3 from_spherical(const SphericalRecord &rec) {
  const double st = std::sin(rec.theta);
  return { rec.d * st * std::cos(rec.phi), rec.d * st * std::sin(rec.phi),
           rec.d * std::cos(rec.theta) };
}

std::vector<Vec3> from_spherical(std::span<const SphericalRecord> records) {
  std::vector<Vec3> out;
  out.reserve(records.size());
  for (const auto &rec: records)
    out.push_back(from_spherical(rec));
  return out;
}

std::int64_t quantize(double value, int decimals) {
  return std::llround(value * pow10(decimals));
}

double dequantize(std::int64_t q, int decimals) {
  return static_cast<double>(q) / pow10(decimals);
}

}  // namespace geoseq
