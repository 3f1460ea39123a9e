"""Contrast a quasi-homogeneous curve with one that is not.

For each curve we test quasi-homogeneity two ways, check the duality
identities and run the Ext^2 jet probe.  Run: python3 demos/curve_comparison.py
"""

from logcomp import bracket_decompose, derlog_generators, parse_poly, qh_test, saito_basis
from logcomp.dmodcheck import (annihilator_containment, duality_check, ext2_jet_probe, grF_analysis,
                               lct_verdict, resolution_check)

for src in ("x^2 - y^3", "x^4 + y^5 + x*y^4"):
    f = parse_poly(src, ("x", "y"))
    basis = saito_basis(derlog_generators(f), f)
    st = bracket_decompose(basis)
    print(f"== f = {src}")
    for i, (d, a) in enumerate(zip(basis.deltas, basis.cofactors), 1):
        print(f"  d{i} = {d}    d{i}(f) = ({a}) f")

    qh = qh_test(basis.derivations, f)
    print("  quasi-homogeneous:", qh.quasi_homogeneous,
          "| unit cofactor index:", qh.unit_witness, "| f in Jacobian ideal:", qh.jacobian_member)

    du = duality_check(basis, st)
    print("  transposed presentation equals twisted ideal:", du.equal)

    # Solve d1^t u1 + d2^t u2 = 1 modulo m^K; failure certifies Ext^2 != 0
    probe = ext2_jet_probe(basis, st, 10)
    print("  probe:", {k: v for k, v in sorted(probe.solvable.items())})
    if probe.certificate:
        print(f"  unsolvable at K = {probe.first_unsolvable}")

    v = lct_verdict(2, qh, du, resolution_check(basis, st), grF_analysis(basis),
                    annihilator_containment(basis), probe)
    print("  verdict:", v.label, "\n")
