//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef GEOSEQ_TESTS_FIXTURE_H_
#define GEOSEQ_TESTS_FIXTURE_H_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geoseq/molgraph.h"

namespace geoseq::testing {

inline std::string fixture_path(const std::string &name) {
  return std::string(GEOSEQ_TEST_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The checked-in QM9-style molecules (1500 entries).
inline const std::vector<Molecule3D> &fixture_molecules() {
  static const std::vector<Molecule3D> mols =
      parse_xyz(slurp(fixture_path("qm9_style.xyz")));
  return mols;
}

}  // namespace geoseq::testing

#endif  // GEOSEQ_TESTS_FIXTURE_H_
