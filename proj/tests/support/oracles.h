//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

// Slow reference implementations used only by the tests.

#ifndef GEOSEQ_TESTS_ORACLES_H_
#define GEOSEQ_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "geoseq/molgraph.h"
#include "geoseq/random.h"

namespace geoseq::testing {

/// Colors followed by the upper-triangle bond orders under labeling perm.
inline std::vector<int> labeled_form(const ColoredGraph &g,
                                     const std::vector<int> &perm) {
  const int n = g.size();
  std::vector<int> form;
  for (int v: perm)
    form.push_back(g.color(v));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j)
      form.push_back(g.bond_order(perm[i], perm[j]));
  }
  return form;
}

/// Minimum labeled form over all n! labelings.
inline std::vector<int> brute_canonical_form(const ColoredGraph &g) {
  std::vector<int> perm(g.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = labeled_form(g, perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    best = std::min(best, labeled_form(g, perm));
  return best;
}

inline bool brute_isomorphic(const ColoredGraph &a, const ColoredGraph &b) {
  return a.size() == b.size()
         && brute_canonical_form(a) == brute_canonical_form(b);
}

/// All automorphisms sigma (sigma[v] = image of v), by enumeration. A
/// bijection mapping every edge onto an edge of equal order also maps
/// non-edges onto non-edges.
inline std::vector<std::vector<int>> brute_automorphisms(const ColoredGraph &g) {
  std::vector<int> sigma(g.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (int v = 0; v < g.size() && ok; ++v)
      ok = g.color(v) == g.color(sigma[v]);
    for (const Edge &e: g.edges()) {
      if (!ok)
        break;
      ok = g.bond_order(sigma[e.u], sigma[e.v]) == e.order;
    }
    if (ok)
      out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

inline ColoredGraph random_graph(int n, int ncolors, double density,
                                 int max_order, Rng &rng) {
  std::vector<int> colors(n);
  for (int &c: colors)
    c = static_cast<int>(rng.below(ncolors));
  ColoredGraph g(colors);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < density)
        g.add_edge(u, v, 1 + static_cast<int>(rng.below(max_order)));
    }
  }
  return g;
}

inline std::vector<int> random_permutation(int n, Rng &rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

/// Atom i of the result is atom perm[i] of mol.
inline Molecule3D permute_molecule(const Molecule3D &mol,
                                   const std::vector<int> &perm) {
  Molecule3D out;
  out.properties = mol.properties;
  for (int i: perm) {
    out.atoms.push_back(mol.atoms[i]);
    out.coords.push_back(mol.coords[i]);
  }
  return out;
}

/// Uniformly random rotation (normalized Gaussian quaternion) plus a
/// translation of up to 50 angstrom per axis.
inline Eigen::Isometry3d random_rigid_motion(Rng &rng) {
  auto gauss = [&rng]() {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
  };
  Eigen::Quaterniond q(gauss(), gauss(), gauss(), gauss());
  q.normalize();
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = q.toRotationMatrix();
  t.translation() = Vec3(100 * rng.uniform() - 50, 100 * rng.uniform() - 50,
                         100 * rng.uniform() - 50);
  return t;
}

inline Molecule3D transform_molecule(const Molecule3D &mol,
                                     const Eigen::Isometry3d &t) {
  Molecule3D out = mol;
  for (auto &r: out.coords)
    r = t * r;
  return out;
}

/// Random point cloud with H/C/N/O atoms in a box; no structure implied.
inline Molecule3D random_cloud(int n, Rng &rng) {
  static constexpr int kElements[] = { 1, 6, 7, 8 };
  Molecule3D m;
  for (int i = 0; i < n; ++i) {
    m.atoms.push_back(kElements[rng.below(4)]);
    m.coords.emplace_back(6 * rng.uniform() - 3, 6 * rng.uniform() - 3,
                          6 * rng.uniform() - 3);
  }
  return m;
}

/// Pairwise Gaussian sum with long-double Kahan accumulation.
inline double gauss_sum_direct_reference(std::span<const double> x,
                                         std::span<const double> y,
                                         double sigma) {
  long double sum = 0, comp = 0;
  const long double inv = 1.0L / (2.0L * sigma * sigma);
  for (double a: x) {
    for (double b: y) {
      const long double d = static_cast<long double>(a) - b;
      const long double term = std::exp(-d * d * inv) - comp;
      const long double t = sum + term;
      comp = (t - sum) - term;
      sum = t;
    }
  }
  return static_cast<double>(sum);
}

}  // namespace geoseq::testing

#endif  // GEOSEQ_TESTS_ORACLES_H_
