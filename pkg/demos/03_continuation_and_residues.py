"""The zeta function itself, on both sides of a candidate pole.

Z(s) = ∫ |f|^s phi is computed directly for s > 0 and by integration by parts
below 0. Near a window root s0 = -d/m the product (s - s0) Z(s) settles on
the residue, which is compared with the closed form built from the criterion
integrals. With phi chosen to pick out a symmetric representation, both
vanish.

Run: python3 demos/03_continuation_and_residues.py   (about 10 s)
"""
from bspole.polyring import infer_weights, parse_poly
from bspole.zetaoracle import BumpSpec2D, residue_closed_form, residue_numeric_fit, zeta_continued, zeta_direct

f = parse_poly("x^2+y^3")
w = infer_weights(f)
phi = BumpSpec2D(w.m, 0, 0)

print("x^2+y^3 with phi = bump, phi(0,0) = 1")
print("      s       direct            continued")
for s in (1.0, 0.5, 0.25):
    print(f"  {s:6.3f}  {zeta_direct(f, phi, s):.12f}  {zeta_continued(f, w, phi, s):.12f}")
for s in (0.0, -0.5, -0.8):
    print(f"  {s:6.3f}  {'':14}  {zeta_continued(f, w, phi, s):.12f}")
print(f"  phi integral = {phi.integral():.12f}  (the value at s = 0)")

s0 = -5 / 6
phi0 = BumpSpec2D(0, 0, 0)
closed = residue_closed_form(f, w, 5, phi0)
print("\nresidue at -5/6")
for e in (1e-2, 1e-3, 1e-4):
    print(f"  e = {e:.0e}: e * Z(s0 + e) = {e * zeta_continued(f, w, phi0, s0 + e):.9f}")
print(f"  closed form {closed:.12f}, extrapolated fit {residue_numeric_fit(f, w, 5, phi0):.12f}")

f = parse_poly("x^4+y^3")
w = infer_weights(f)
print("\nx^4+y^3")
for d, (i, j) in [(7, (0, 0)), (10, (1, 0)), (11, (0, 1))]:
    phi = BumpSpec2D(max(i, j), i, j)
    print(f"  d = {d:2d}, bump picks partial ({i},{j}): closed {residue_closed_form(f, w, d, phi):+.9f}, "
          f"fit {residue_numeric_fit(f, w, d, phi):+.9f}")
