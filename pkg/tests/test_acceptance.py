"""Acceptance criteria A1-A11, one PASS/FAIL line per criterion.

Each test calls ``record`` so the summary at the end of the run lists every
criterion.  Two criteria are not attainable as worded (A9 and A11, plus the
Archimedean half of A5); those carry a strict xfail for the literal wording and
a separate passing test for the statement that does hold.
"""
import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from conftest import record
from padicfs.padic import DualElement
from padicfs.scalars import (symbol, rootOfUnity, substitute, ellAdicValuation, archNorm,
                             to_complex, DenominatorVanishes)
from padicfs.sbfourier import (SBFunction, forward, inverse, pair, haarIntegral,
                               pointwiseProduct, convolve, dual_tree)
from padicfs.series import (FSeriesSpec, aXPartialSum, closedTransform, deltaTriangle,
                            deltaDirect)
from padicfs.products import (ProductSpec, TransformLattice, truncatedProductRecursion,
                              measureNormCheck, momentSequence)
from padicfs.inversion import (SortingOperator, inversionCheck, formalSolve, NoSolution,
                               AffineSolutionFamily, breakdownScan)
from padicfs.frames import EvaluationMap, applyEvaluation
from padicfs.hydra import (HydraMapZ, iterate, canonical_cycle, sqrt7_cycles,
                           correspondenceCheck)
from padicfs.suites import random_multipliers

Q = symbol("q")
R = symbol("r")
CHI3 = FSeriesSpec(2, [Fraction(1, 2), Fraction(3, 2)], [0, Fraction(1, 2)])
CHIQ = FSeriesSpec(2, [Fraction(1, 2), Q / 2], [0, Fraction(1, 2)])
S45 = FSeriesSpec(2, [Fraction(1, 4), Fraction(5, 4)], [1, 1])
OFF = FSeriesSpec(2, [Fraction(1, 2), Fraction(5, 2)], [0, Fraction(1, 2)])


# ---------------------------------------------------------------------------
# A1

# functions per (p, N) cell for each tier; 200 per tier in total.  Level 6^4
# has 1296 points, so it gets a single function, and 6^3 gets three.  The convolution side is a
# direct double sum over the dual group: it runs on every function up to 27
# points, on the first CONV_SAMPLE functions of the 36 and 81 point cells, and
# not at all beyond 81 points.
A1_CELLS = {
    (2, 0): 8, (2, 1): 12, (2, 2): 14, (2, 3): 14, (2, 4): 16,
    (3, 0): 8, (3, 1): 12, (3, 2): 14, (3, 3): 14, (3, 4): 10,
    (6, 0): 8, (6, 1): 14, (6, 2): 52, (6, 3): 3, (6, 4): 1,
}
CONV_LIMIT = 81
CONV_FULL = 27
CONV_SAMPLE = 1


def _a1_value(rng, tier, p, N):
    v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    if tier == "rational":
        return v
    if tier == "cyclotomic":
        if N == 0 or rng.random() < 0.3:
            return v
        j = rng.randint(1, min(N, 2))
        M = p ** j
        return v + Fraction(rng.randint(-3, 3), rng.randint(1, 2)) * rootOfUnity(M, rng.randrange(M))
    return v + rng.randint(-2, 2) * Q + rng.randint(-1, 1) * Q * R


def test_a1_inversion_and_parseval():
    assert sum(A1_CELLS.values()) == 200
    rng = random.Random(20261014)
    start = time.time()
    counts = {}
    bad = []
    for tier in ("rational", "cyclotomic", "symbolic"):
        for (p, N), k in A1_CELLS.items():
            for i in range(k):
                phi = SBFunction(p, N, [_a1_value(rng, tier, p, N) for _ in range(p ** N)])
                psi = SBFunction(p, N, [_a1_value(rng, tier, p, N) for _ in range(p ** N)])
                T = forward(phi)
                if inverse(T) != phi:
                    bad.append((tier, p, N, "inverse"))
                if pair(T, psi) != haarIntegral(pointwiseProduct(phi, psi)):
                    bad.append((tier, p, N, "pair"))
                size = p ** N
                if size <= CONV_FULL or (size <= CONV_LIMIT and i < CONV_SAMPLE):
                    U = forward(psi)
                    if convolve(T, U) != forward(pointwiseProduct(phi, psi)):
                        bad.append((tier, p, N, "convolution"))
                counts[tier] = counts.get(tier, 0) + 1
    elapsed = time.time() - start
    ok = not bad and elapsed < 60 and all(c == 200 for c in counts.values())
    record("A1", ok, "%d functions, %d failures, %.1f s" % (sum(counts.values()), len(bad), elapsed))
    assert not bad, bad[:5]
    assert elapsed < 60


# ---------------------------------------------------------------------------
# A2


def test_a2_truncated_recursion():
    cases = [(ProductSpec([CHI3]), (1,)), (ProductSpec([CHI3]), (2,)),
             (ProductSpec([CHIQ]), (1,)), (ProductSpec([CHIQ]), (2,)),
             (ProductSpec([CHI3, S45]), (1, 1)), (ProductSpec([CHIQ, CHI3]), (1, 1))]
    failures = []
    for P, n in cases:
        for N in range(1, 5):
            rep = truncatedProductRecursion(P, n, N)
            if rep["status"] != "exact-equal":
                failures.append(rep)
    record("A2", not failures, "%d (spec, n, N) cases, %d failures" % (len(cases) * 4, len(failures)))
    assert not failures


# ---------------------------------------------------------------------------
# A3


def _a3_points(p):
    rng = random.Random(p)
    pts = [0, 1, 5, 17, -1, Fraction(-1, p + 1), Fraction(1, 3) if p == 2 else Fraction(1, 2)]
    while len(pts) < 16:
        den = rng.choice([1, 3, 5, 7]) if p == 2 else rng.choice([1, 2, 4, 5])
        pts.append(Fraction(rng.randint(-50, 50), den))
    return pts


def test_a3_ahat_partial_sums():
    specs = [CHI3, S45, CHIQ,
             FSeriesSpec(3, [Fraction(1, 3), Fraction(2), Fraction(5)], [1, -1, Fraction(2, 7)]),
             FSeriesSpec(3, [Fraction(1, 3), Q / 3, Fraction(2)], [0, Fraction(1, 3), Q])]
    checks = 0
    failures = []
    for spec in specs:
        for N in range(1, 6):
            for z in _a3_points(spec.p):
                rep = aXPartialSum(spec, N, z)
                checks += 1
                if rep["status"] != "exact-equal":
                    failures.append(rep)
    record("A3", not failures, "%d checks over p in {2,3}, numeric and symbolic" % checks)
    assert not failures


# ---------------------------------------------------------------------------
# A4


def test_a4_inversion_lemma():
    rng = random.Random(4)
    operators = []
    for _ in range(10):
        for p in (2, 3):
            operators.append(SortingOperator(p, random_multipliers(rng, p)))
    operators.append(SortingOperator(2, [Q, R]))
    operators.append(SortingOperator(3, [Q, Fraction(2), R]))
    failures = 0
    checks = 0
    for L in operators:
        for n in range(4):
            for k in range(L.p ** n):
                checks += 1
                if inversionCheck(L, n, k)["status"] != "exact-equal":
                    failures += 1
    record("A4", failures == 0, "%d (L, n, k) checks, %d failures" % (checks, failures))
    assert failures == 0


# ---------------------------------------------------------------------------
# A5


def test_a5_three_adic_convergence():
    ct = closedTransform(CHI3, frame=False)
    z = Fraction(-1, 3)
    vals = []
    for N in range(1, 13):
        tri = deltaTriangle(CHI3, N, z, ct)
        assert deltaDirect(CHI3, N, z, ct, method="orbit") == tri
        if N <= 8:
            assert deltaDirect(CHI3, N, z, ct, method="direct") == tri
        vals.append(ellAdicValuation(tri, 3))
    ok = all(v >= math.ceil(N / 2) - 2 for N, v in enumerate(vals, start=1))
    record("A5", ok, "3-adic: v_3(Delta_N) = %s at -1/3, bound ceil(N/2)-2 holds" % vals)
    assert ok


def _arch_delta(N):
    ct = closedTransform(CHI3, frame=False)
    tri = deltaTriangle(CHI3, N, 7, ct)
    assert deltaDirect(CHI3, N, 7, ct, method="orbit") == tri
    return tri, archNorm(tri)


@pytest.mark.xfail(strict=True, reason="|Delta_12(7)| = 81/4096 > 2^-8; the bound first holds at N = 15")
def test_a5_archimedean_bound_at_12():
    tri, iv = _arch_delta(12)
    ok = iv.b < 2.0 ** -8
    record("A5-arch", ok, "|Delta_12(7)| = %s, needs < 2^-8" % tri)
    assert ok


def test_a5_archimedean_decay():
    mags = []
    for N in range(1, 16):
        tri, iv = _arch_delta(N)
        # independent closed form: Delta_N(7) = (N/4) 27 / 2^N once N > 3
        if N > 3:
            assert tri == Fraction(27 * N, 4 * 2 ** N)
        mags.append(iv)
    assert all(mags[i + 1].b < mags[i].a for i in range(3, 14))
    assert mags[14].b < 2.0 ** -8 <= mags[13].a


# ---------------------------------------------------------------------------
# A6


def test_a6_measure_certification():
    P = ProductSpec([S45])
    at3 = measureNormCheck(P, (1,), 3)["verdict"]
    atinf = measureNormCheck(P, (1,), "inf")["verdict"]
    x0 = closedTransform(S45, frame=False).coeff(DualElement(2, 0, 0))
    chi = measureNormCheck(ProductSpec([CHI3]), (1,), "inf")["verdict"]
    ok = at3 == atinf == "measure-certified" and x0 == 4 and chi == "not-certified"
    record("A6", ok, "S45: %s at 3, %s at inf, X-hat(0) = %s; chi_3 at inf: %s" % (at3, atinf, x0, chi))
    assert ok


# ---------------------------------------------------------------------------
# A7


def test_a7_formal_vs_closed():
    P = ProductSpec([OFF])
    assert all(r["verdict"] == "off-variety" for r in breakdownScan(P, 3))
    L = TransformLattice(P, (3,))
    mismatches = 0
    for n in (2, 3):
        Y = formalSolve(P, (n,), L, 4)
        fh = L.fhat((n,))
        g = L.g[P.index(n)]
        for t in dual_tree(2, 4):
            if Y.coeff(t) != fh.coeff(t) - g.coeff(t):
                mismatches += 1
    P3 = ProductSpec([CHI3])
    with pytest.raises(NoSolution):
        formalSolve(P3, (1,), TransformLattice(P3, (1,)), 3)
    aff = FSeriesSpec(2, [Fraction(1, 2), Fraction(3, 2)], [Fraction(1, 2), Fraction(-1, 2)])
    PA = ProductSpec([aff])
    init = {PA.index(0): TransformLattice(PA, (0,))[(0,)]}
    with pytest.raises(AffineSolutionFamily) as info:
        formalSolve(PA, (1,), init, 3)
    A = info.value.direction
    Y1 = formalSolve(PA, (1,), init, 4, y0=0)
    Y2 = formalSolve(PA, (1,), init, 4, y0=Fraction(-5, 2))
    affine = all(Y2.coeff(t) - Y1.coeff(t) == Fraction(-5, 2) * A.coeff(t) for t in dual_tree(2, 4))
    ok = mismatches == 0 and affine
    record("A7", ok, "n=2,3 formal = f-hat - g-hat on |t| <= 16; NoSolution for chi_3; affine family")
    assert ok


# ---------------------------------------------------------------------------
# A8


def test_a8_breakdown_scan():
    rows = breakdownScan(ProductSpec([CHIQ]), 4)
    ok = True
    for n, row in enumerate(rows, start=1):
        alpha0 = (Q ** n + 1) / 2 ** (n + 1)
        # alpha_n(0) - 1 vanishes exactly on q^n + 1 = 2^(n+1)
        ok &= substitute(alpha0 - 1, {"q": 3}) == (0 if n == 1 else Fraction(3 ** n + 1, 2 ** (n + 1)) - 1)
        ok &= row["relation"] == "-%d + q%s = 0" % (2 ** (n + 1) - 1, "" if n == 1 else "^%d" % n)
        ok &= row["alpha0"] == ("1/4 + 1/4*q" if n == 1 else "1/%d + 1/%d*q^%d" % (2 ** (n + 1), 2 ** (n + 1), n))
    num = breakdownScan(ProductSpec([applyEvaluation(EvaluationMap({"q": 3}), CHIQ)]), 4)
    on = [r["index"][0] for r in num if r["verdict"] == "on-variety"]
    ok &= on == [1]
    record("A8", ok, "relations %s; q=3 flags n in %s" % ([r["relation"] for r in rows], on))
    assert ok


# ---------------------------------------------------------------------------
# A9

ZETA4 = rootOfUnity(4, 1)
A9_SPEC = FSeriesSpec(2, [1 / (1 + ZETA4), Fraction(1)], [0, ZETA4])


@pytest.fixture(scope="module")
def a9_moments():
    start = time.time()
    m = momentSequence(ProductSpec([A9_SPEC]), 24)
    return m, time.time() - start


def _series_mul(f, g, n):
    return [mpmath.fsum(f[j] * g[k - j] for j in range(k + 1)) for k in range(n + 1)]


def _series_inv(f, n):
    out = [1 / f[0]]
    for k in range(1, n + 1):
        out.append(-mpmath.fsum(f[j] * out[k - j] for j in range(1, k + 1)) / f[0])
    return out


def _a9_oracle(nmax, factors=220):
    """n! times the Taylor coefficients of prod_k (2 - exp(i s/(1+i)^k))^-1, in mpmath.

    Each factor is expanded as a power series and inverted term by term, so
    no numerical differentiation is involved.  Also returns |1/product| just
    off s = -i ln 2 as a check on the pole.
    """
    with mpmath.workdps(50):
        i = mpmath.mpc(0, 1)
        total = [mpmath.mpc(1)] + [mpmath.mpc(0)] * nmax
        for k in range(factors):
            c = i / (1 + i) ** k
            f = [2 - c ** j / mpmath.factorial(j) if j == 0 else -c ** j / mpmath.factorial(j)
                 for j in range(nmax + 1)]
            total = _series_mul(total, _series_inv(f, nmax), nmax)
        phi = lambda s: mpmath.fprod([1 / (2 - mpmath.exp(i * s / (1 + i) ** k))
                                      for k in range(factors)])
        pole = abs(1 / phi(-i * mpmath.log(2) + mpmath.mpf("1e-15")))
        return [c * mpmath.factorial(n) for n, c in enumerate(total)], pole


def test_a9_pole_structure_and_moments(a9_moments):
    m, elapsed = a9_moments
    assert elapsed < 120
    assert m[1] == 1 + ZETA4
    oracle, pole = _a9_oracle(24)
    # the partial products blow up at s = -i ln 2
    assert pole < 1e-10
    for n in range(25):
        assert abs(to_complex(m[n], dps=50) - oracle[n]) <= 1e-25 * max(1, abs(oracle[n]))


@pytest.mark.xfail(strict=True, reason="the ratio grows like (n+1) i/ln 2, not i ln 2")
def test_a9_ratio_as_stated(a9_moments):
    m, _ = a9_moments
    r = to_complex(m[21]) / to_complex(m[20])
    target = 1j * math.log(2)
    ok = abs(complex(r) - target) <= 0.08 * math.log(2)
    record("A9", ok, "m_21/m_20 = %.4f%+.4fi, target i ln 2" % (r.real, r.imag))
    assert ok


def test_a9_ratio_corrected(a9_moments):
    # a simple pole at s0 = -i ln 2 gives m_{n+1}/((n+1) m_n) -> 1/s0 = i/ln 2
    m, _ = a9_moments
    r = complex(to_complex(m[21]) / to_complex(m[20])) / 21
    assert abs(r - 1j / math.log(2)) <= 0.08 / math.log(2)


# ---------------------------------------------------------------------------
# A10


def test_a10_hydra_suite():
    T3 = HydraMapZ.T(3)
    reached = 0
    for n in range(1, 1001):
        rec = iterate(T3, n, maxSteps=10 ** 5, record=False)
        if rec.status == "cycle" and canonical_cycle(list(rec.cycle)) == (1, 2):
            reached += 1
    cycles = sqrt7_cycles(100)
    per10 = correspondenceCheck(T3, "pre:;per:10", 2)["status"]
    per01 = correspondenceCheck(T3, "pre:;per:01", 1)["status"]
    ok = (reached == 1000 and cycles == [canonical_cycle([(2, 1), (4, 1), (4, 2)])]
          and per10 == per01 == "exact-equal")
    record("A10", ok, "%d/1000 reach {1,2}; sqrt7 cycles %s; chi_3 checks %s, %s"
           % (reached, cycles, per10, per01))
    assert ok


# ---------------------------------------------------------------------------
# A11


def _specialized(lattice, n, t, q):
    return substitute(lattice[n].coeff(t), {"q": q})


@pytest.mark.xfail(strict=True, raises=(AssertionError, DenominatorVanishes),
                   reason="q = 3 lies on the breakdown variety; symbolic entries have q - 3 denominators")
def test_a11_descent_at_q3():
    L = TransformLattice(ProductSpec([CHIQ]), (2,))
    ref = TransformLattice(ProductSpec([CHI3]), (2,))
    ok = False
    try:
        ok = all(_specialized(L, (n,), t, 3) == ref[(n,)].coeff(t)
                 for n in (1, 2) for t in dual_tree(2, 3))
        detail = "coefficientwise specialization agrees" if ok else "entries differ"
    except DenominatorVanishes as exc:
        detail = "specialization hits a pole: %s" % exc
    record("A11", ok, "q -> 3: " + detail)
    assert ok


@pytest.mark.parametrize("q", [5, 7, Fraction(-1, 3)])
def test_a11_descent_off_variety(q):
    L = TransformLattice(ProductSpec([CHIQ]), (2,))
    num = FSeriesSpec(2, [Fraction(1, 2), Fraction(q) / 2], [0, Fraction(1, 2)])
    ref = TransformLattice(ProductSpec([num]), (2,))
    for n in (1, 2):
        for t in dual_tree(2, 3):
            assert _specialized(L, (n,), t, q) == ref[(n,)].coeff(t)
