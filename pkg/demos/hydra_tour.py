"""Hydra maps and their numina.

A hydra map divides by p on one residue class and applies an affine branch
on the others.  Its numen is the series chi whose values on periodic points
recover the map's periodic orbits.

Run with:  python3 demos/hydra_tour.py
"""
from padicfs.series import evalAtNat
from padicfs.hydra import (HydraMapZ, iterate, canonical_cycle, cycleSearch, sqrt7_cycles,
                           numen, correspondenceCheck, poleReport, fmt_quad)

T3 = HydraMapZ.T(3)
rec = iterate(T3, 27)
print("T_3 orbit of 27: %d steps, peak %d, cycle %s" % (len(rec.steps), max(rec.steps),
                                                         canonical_cycle(list(rec.cycle))))
print("cycles of T_3 from [-1000, 1000]:", cycleSearch(T3, range(-1000, 1001)))

cycles = sqrt7_cycles(100)
print("\nnonzero cycles of the Z[sqrt7] hydra inside the box of size 100:")
for c in cycles:
    print("  ", " -> ".join(fmt_quad(x) for x in c))

chi = numen(T3)
print("\nnumen of T_3 on 0..7:", [str(evalAtNat(chi, m)) for m in range(8)])
for z, x in (("pre:;per:10", 2), ("pre:;per:01", 1)):
    r = correspondenceCheck(T3, z, x)
    print("  chi_3(%s) = %s  (%s, %s)" % (z, r["value"], r["kind"], r["status"]))

print("\npoles of chi_q(0):")
for q in (1, 3, 5, 7):
    r = poleReport(q)
    print("  q = %d: %s%s" % (q, r["class"], "" if "X0" not in r else ", X0 = " + r["X0"]))
