"""A walk through the chi_3 series: closed transform, partial sums, convergence.

chi_3 is the numen of the Shortened 3x+1 map.  Its alpha(0) equals 1, so the
closed transform sits in the breakdown branch and its partial Fourier sums
only converge in a frame: 3-adically at rational points, in the reals at
the natural numbers.

Run with:  python3 demos/chi3_transform.py
"""
import warnings
from fractions import Fraction

from padicfs.padic import DualElement
from padicfs.scalars import to_string
from padicfs.sbfourier import dual_tree
from padicfs.series import FSeriesSpec, evalAtNat, closedTransform
from padicfs.frames import DigitalFrame, frameCertify, convergenceDemo

warnings.simplefilter("ignore")

chi3 = FSeriesSpec(2, [Fraction(1, 2), Fraction(3, 2)], [0, Fraction(1, 2)])
print("chi_3 on 0..9:", [str(evalAtNat(chi3, m)) for m in range(10)])

ct = closedTransform(chi3, frame=False)
print("\nclosed transform on |t| <= 4")
for t in dual_tree(2, 2):
    print("  t = %-4s X-hat(t) = %s" % (t, to_string(ct.coeff(t))))
print("X-hat(0) =", ct.coeff(DualElement(2, 0, 0)), "and X-hat(1/2) =", ct.coeff(DualElement(2, 1, 1)))

frame = DigitalFrame(2, {0: "inf", 1: "3"})
print("\nframe certified for chi_3:", frameCertify(frame, [chi3], [0, 7, -1, Fraction(-1, 3)])["certified"])

rep = convergenceDemo(chi3, frame, Fraction(-1, 3), 12)
print("\nat z = -1/3 the errors are measured 3-adically (%s)" % rep["place"])
for row in rep["rows"]:
    print("  N = %2d  v_3(Delta_N) = %s" % (row["N"], row["valuation"]))
print("tail minimum:", rep["trend"]["tail_min"])

rep = convergenceDemo(chi3, frame, 7, 16, precisionBits=64)
print("\nat z = 7 the errors are real numbers")
for row in rep["rows"][::3]:
    print("  N = %2d  Delta_N = %-12s |Delta_N| <= %.3g" % (row["N"], row["delta"], row["abs"][1]))
first = next(r["N"] for r in rep["rows"] if r["abs"][1] < 2 ** -8)
print("first N with |Delta_N| < 2^-8:", first)
