#!/usr/bin/env python3
#
# Project geoseq - Copyright 2026 geoseq authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Generates the QM9-style XYZ fixture used by the test suites.

Small organic molecules (<= 9 heavy atoms drawn from C, N, O, F) are grown at
random, sanitized, embedded with ETKDG and relaxed with MMFF94. The comment
line of every block carries ``index=<i> alpha=<value>``, where ``alpha`` is a
polarizability proxy in Bohr^3 derived from Crippen molar refractivity.

Requires RDKit (``pip install rdkit``). Output is deterministic for a seed.
"""

import argparse
import random
import sys

from rdkit import Chem, RDLogger
from rdkit.Chem import AllChem, Crippen

RDLogger.DisableLog("rdApp.*")

HEAVY = [("C", 0.70), ("N", 0.13), ("O", 0.16), ("F", 0.01)]
MAX_VALENCE = {"C": 4, "N": 3, "O": 2, "F": 1}
# Lorentz-Lorenz: alpha[A^3] = 3 MR / (4 pi N_A) = 0.39644 MR; 1 Bohr^3 = 0.148185 A^3
MR_TO_BOHR3 = 0.39644 / 0.148185


def pick_element(rng):
    r = rng.random()
    acc = 0.0
    for sym, p in HEAVY:
        acc += p
        if r < acc:
            return sym
    return "C"


def free_valence(mol, idx):
    atom = mol.GetAtomWithIdx(idx)
    used = sum(int(b.GetBondTypeAsDouble()) for b in atom.GetBonds())
    return MAX_VALENCE[atom.GetSymbol()] - used


def grow(rng):
    n_heavy = rng.choices(range(1, 10), weights=[1, 1, 2, 3, 4, 6, 10, 20, 50])[0]
    mol = Chem.RWMol()
    mol.AddAtom(Chem.Atom(pick_element(rng) if rng.random() < 0.2 else "C"))
    while mol.GetNumAtoms() < n_heavy:
        open_atoms = [i for i in range(mol.GetNumAtoms()) if free_valence(mol, i) > 0]
        if not open_atoms:
            break
        anchor = rng.choice(open_atoms)
        sym = pick_element(rng)
        cap = min(free_valence(mol, anchor), MAX_VALENCE[sym])
        order = 1
        r = rng.random()
        if cap >= 3 and r < 0.05:
            order = 3
        elif cap >= 2 and r < 0.20:
            order = 2
        new = mol.AddAtom(Chem.Atom(sym))
        mol.AddBond(anchor, new, {1: Chem.BondType.SINGLE, 2: Chem.BondType.DOUBLE,
                                  3: Chem.BondType.TRIPLE}[order])
    # ring closures
    for _ in range(rng.choice([0, 0, 1, 1, 2])):
        n = mol.GetNumAtoms()
        if n < 3:
            break
        dist = Chem.GetDistanceMatrix(mol, force=True)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if 2 <= dist[i][j] <= 5 and mol.GetBondBetweenAtoms(i, j) is None
                 and free_valence(mol, i) > 0
                 and free_valence(mol, j) > 0]
        if not pairs:
            break
        i, j = rng.choice(pairs)
        mol.AddBond(i, j, Chem.BondType.SINGLE)
    return mol


def embed(mol, seed):
    try:
        Chem.SanitizeMol(mol)
    except Exception:
        return None
    mol = Chem.AddHs(mol.GetMol())
    params = AllChem.ETKDGv3()
    params.randomSeed = seed
    if AllChem.EmbedMolecule(mol, params) != 0:
        return None
    if not AllChem.MMFFHasAllMoleculeParams(mol):
        return None
    if AllChem.MMFFOptimizeMolecule(mol, maxIters=2000) != 0:
        return None
    return mol


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=20240917)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    seen = set()
    blocks = []
    attempts = 0
    while len(blocks) < args.count:
        attempts += 1
        mol = grow(rng)
        mol = embed(mol, rng.randrange(1 << 30))
        if mol is None:
            continue
        smiles = Chem.MolToSmiles(Chem.RemoveHs(mol))
        if smiles in seen:
            continue
        seen.add(smiles)
        alpha = Crippen.MolMR(mol) * MR_TO_BOHR3
        conf = mol.GetConformer()
        lines = [str(mol.GetNumAtoms()), f"index={len(blocks)} alpha={alpha:.4f}"]
        for atom in mol.GetAtoms():
            p = conf.GetAtomPosition(atom.GetIdx())
            lines.append(f"{atom.GetSymbol():<2s} {p.x:12.6f} {p.y:12.6f} {p.z:12.6f}")
        blocks.append("\n".join(lines))

    out = sys.stdout if args.out == "-" else open(args.out, "w")
    out.write("\n".join(blocks) + "\n")
    print(f"wrote {len(blocks)} molecules ({attempts} attempts)", file=sys.stderr)


if __name__ == "__main__":
    main()
