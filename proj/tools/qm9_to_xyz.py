#!/usr/bin/env python3
#
# Project geoseq - Copyright 2026 geoseq authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Converts raw QM9 files (dsgdb9nsd_*.xyz, loose or in a tar archive) into
plain XYZ blocks readable by ``geoseq``.

The comment line of every output block carries ``index=<gdb id>`` and
``alpha=<isotropic polarizability in Bohr^3>``. Raw QM9 coordinates may use
Mathematica exponents (``1.2*^-6``); these are rewritten. The Mulliken charge
column and the trailing frequency/SMILES/InChI lines are dropped.

Example:
    tools/qm9_to_xyz.py dsgdb9nsd.xyz.tar.bz2 --limit 20000 -o qm9.xyz
"""

import argparse
import pathlib
import sys
import tarfile


def number(text):
    return float(text.replace("*^", "e"))


def convert(text):
    lines = text.splitlines()
    n = int(lines[0].split()[0])
    props = lines[1].split()
    # gdb <id> A B C mu alpha homo lumo gap r2 zpve U0 U H G Cv
    index, alpha = int(props[1]), number(props[6])
    out = [str(n), f"index={index} alpha={alpha:.6f}"]
    for line in lines[2:2 + n]:
        f = line.split()
        x, y, z = (number(v) for v in f[1:4])
        out.append(f"{f[0]} {x:.6f} {y:.6f} {z:.6f}")
    return index, "\n".join(out) + "\n"


def raw_files(sources):
    for src in sources:
        path = pathlib.Path(src)
        if path.is_dir():
            for p in sorted(path.glob("*.xyz")):
                yield p.read_text()
        elif tarfile.is_tarfile(path):
            with tarfile.open(path) as tar:
                for member in tar:
                    if member.isfile() and member.name.endswith(".xyz"):
                        yield tar.extractfile(member).read().decode()
        else:
            yield path.read_text()


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("sources", nargs="+",
                        help="raw .xyz files, directories or tar archives")
    parser.add_argument("-o", "--output", default="-")
    parser.add_argument("--limit", type=int, default=0,
                        help="keep the first N molecules by gdb id")
    args = parser.parse_args()

    blocks = sorted(convert(t) for t in raw_files(args.sources))
    if args.limit:
        blocks = blocks[:args.limit]
    text = "".join(b for _, b in blocks)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        pathlib.Path(args.output).write_text(text)
    print(f"wrote {len(blocks)} molecules", file=sys.stderr)


if __name__ == "__main__":
    main()
