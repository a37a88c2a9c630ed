//
// Project geoseq - Copyright 2026 geoseq authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "geoseq/molgraph.h"

namespace geoseq {
namespace {
constexpr std::array<std::string_view, 119> kSymbols = {
  "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
  "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
  "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
  "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
  "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
  "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
  "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
  "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};
}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number <= 0
      || atomic_number >= static_cast<int>(kSymbols.size()))
    return {};
  return kSymbols[atomic_number];
}

std::optional<int> atomic_number(std::string_view symbol) {
  if (symbol.empty() || symbol.size() > 2)
    return std::nullopt;

  std::string norm(symbol);
  norm[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(norm[0])));
  if (norm.size() == 2)
    norm[1] =
        static_cast<char>(std::tolower(static_cast<unsigned char>(norm[1])));

  auto it = std::find(kSymbols.begin() + 1, kSymbols.end(), norm);
  if (it == kSymbols.end())
    return std::nullopt;
  return static_cast<int>(it - kSymbols.begin());
}

}  // namespace geoseq
