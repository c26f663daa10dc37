"""Pole tables for the three example families.

Each family is listed with its natural type, so a root is printed as
-d/m in the family's own m even when the weights reduce. Roots marked
``sym`` vanish by a parity of f; ``pole`` roots have a nonzero criterion
integral, certified by positivity or by quadrature.

Run: python3 demos/02_family_sweeps.py
"""
from bspole.cli import family_rows
from bspole.quadrature import Tolerances

MARK = {"Pole": "pole", "NotPoleSymmetry": "sym", "NotPoleNumeric": "zero?", "Indeterminate": "?"}
TITLES = {"xn+ym": "x^n + y^m", "xm+xyn": "x^m + x y^n", "xny+xym": "x^n y + x y^m"}

for family, spec in [("xn+ym", "2..6"), ("xm+xyn", "2..6"), ("xny+xym", "2..5")]:
    print(f"== {TITLES[family]}, parameters {spec}")
    rows = family_rows(family, spec, Tolerances(), threads=4)
    members: dict[tuple[int, int], list[dict]] = {}
    for r in rows:
        members.setdefault((r["p1"], r["p2"]), []).append(r)
    for (p1, p2), rs in members.items():
        cells = "  ".join(f"{r['natural_d']}:{MARK[r['status']]}" for r in rs) or "(empty window)"
        print(f"  ({p1},{p2}) {rs[0]['polynomial'] if rs else '':<14} {cells}")
    print()
