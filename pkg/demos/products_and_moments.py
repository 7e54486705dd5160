"""Powers of a series: the transform lattice, formal solutions and moments.

For a series X with parameters (a, b), the n-th power X^n satisfies its own
affine functional equation, up to lower powers.  TransformLattice builds the
transform of every power up to a top index, and formalSolve recovers the same
tables from the formal equation alone.

Run with:  python3 demos/products_and_moments.py
"""
import warnings
from fractions import Fraction

import mpmath

from padicfs.padic import DualElement
from padicfs.scalars import symbol, rootOfUnity, to_string, to_complex
from padicfs.sbfourier import dual_tree
from padicfs.series import FSeriesSpec
from padicfs.products import ProductSpec, TransformLattice, momentSequence, measureNormCheck
from padicfs.inversion import formalSolve, breakdownScan

warnings.simplefilter("ignore")

off = FSeriesSpec(2, [Fraction(1, 2), Fraction(5, 2)], [0, Fraction(1, 2)])
P = ProductSpec([off])
L = TransformLattice(P, (3,))
print("breakdown scan for a = (1/2, 5/2):", [r["verdict"] for r in breakdownScan(P, 3)])
for n in (1, 2, 3):
    print("  X^%d hat(0) = %s" % (n, L.x0((n,))))

Y = formalSolve(P, (2,), L, 4)
agree = all(Y.coeff(t) == L.fhat((2,)).coeff(t) - L.g[P.index(2)].coeff(t) for t in dual_tree(2, 4))
print("formal solution for n = 2 equals f-hat - g-hat on |t| <= 16:", agree)

q = symbol("q")
chiq = FSeriesSpec(2, [Fraction(1, 2), q / 2], [0, Fraction(1, 2)])
print("\nsymbolic chi_q breaks down where")
for row in breakdownScan(ProductSpec([chiq]), 4):
    print("  n = %d: %s" % (row["index"][0], row["relation"]))
Lq = TransformLattice(ProductSpec([chiq]), (2,))
print("X_q^2 hat(0) =", to_string(Lq[(2,)].coeff(DualElement(2, 0, 0))))

s45 = FSeriesSpec(2, [Fraction(1, 4), Fraction(5, 4)], [1, 1])
print("\nsum 5^#1 / 4^n: measure at 3 and at infinity?",
      measureNormCheck(ProductSpec([s45]), (1,), 3)["verdict"],
      measureNormCheck(ProductSpec([s45]), (1,), "inf")["verdict"])
print("its moments:", [str(m) for m in momentSequence(ProductSpec([s45]), 4)])

z4 = rootOfUnity(4, 1)
spec = FSeriesSpec(2, [1 / (1 + z4), Fraction(1)], [0, z4])
m = momentSequence(ProductSpec([spec]), 24)
print("\ncomplex parameters a = (1/(1+i), 1), b = (0, i)")
print("  m_1 =", to_string(m[1]), "  m_2 =", to_string(m[2]))
for n in (10, 15, 20):
    r = to_complex(m[n + 1]) / to_complex(m[n]) / (n + 1)
    print("  n = %d: m_{n+1} / ((n+1) m_n) = %s" % (n, mpmath.nstr(r, 6)))
print("  compare i/ln 2 =", mpmath.nstr(1j / mpmath.log(2), 6))
