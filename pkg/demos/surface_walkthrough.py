"""Walk through the free surface h = x y (x + y)(x z + y).

Computes Der(log h), a Saito basis, brackets, the syzygy chain and the
symbol-level obstruction.  Run: python3 demos/surface_walkthrough.py
"""

from logcomp import bracket_decompose, derlog_generators, parse_poly
from logcomp.dmodcheck import check_nonregularity_witness, grF_analysis, resolution_check
from logcomp.golden import SURFACE_VARS, surface_fields, surface_witness
from logcomp.logder import basis_from_fields, same_module, saito_basis

h = parse_poly("x*y*(x+y)*(x*z+y)", SURFACE_VARS)
print("h =", h)

# Der(log h) straight from the syzygies of (h_x, h_y, h_z, h)
gens = derlog_generators(h)
print(f"\n{len(gens)} generators of Der(log h):")
for g in gens:
    print("  ", g.delta, "  with cofactor", g.cofactor)

# A basis found automatically, and the hand-picked one; both span the same module
auto = saito_basis(gens, h)
ref = basis_from_fields(surface_fields(), h)
print("\nreference basis spans Der(log h):", same_module(gens, ref.derivations))
print("automatic basis spans it too:   ", same_module(gens, auto.derivations))
for i, (d, a) in enumerate(zip(ref.deltas, ref.cofactors), 1):
    print(f"  d{i} = {d}    d{i}(h) = ({a}) h")

st = bracket_decompose(ref)
print("\nbrackets [d_i, d_j] in the basis:")
for (i, j), coeffs in sorted(st.alpha.items()):
    print(f"  [d{i + 1}, d{j + 1}] =", ", ".join(str(c) for c in coeffs))

res = resolution_check(ref, st)
print("\nbracket relations are syzygies:", res.relations_are_syzygies)
print("second syzygy generators:", len(res.second_syzygies))
for s in res.second_syzygies:
    print("  ", ", ".join(str(c) for c in s))

# The symbols of d1, d2, d3 are not a regular sequence
gr = grF_analysis(ref)
print("\nsymbols:", ", ".join(str(s) for s in gr.symbols))
w = surface_witness()
not_in, prod_in = check_nonregularity_witness(gr.symbols, w, 2)
print(f"witness {w}: outside <s1, s2>: {not_in}; times s3 lands inside: {prod_in}")
