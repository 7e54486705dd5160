import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicfs.padic import DualElement, as_point, truncate, shiftIter, dual_range
from padicfs.scalars import symbol, div
from padicfs.sbfourier import forward, partialSum
from padicfs.series import (FSeriesSpec, SpecError, MFunction, kappa, mfunctionEval, evalAtNat,
                            evalAtPeriodic, evaluate, truncation, truncatedTransform, alphaData,
                            closedTransform, FrameNotAttached, aXPartialSum, tildeRecurrence,
                            deltaTriangle, deltaDirect, deltaN, ahat_transform)

T0 = DualElement(2, 0, 0)


def test_spec_validation():
    with pytest.raises(SpecError):
        FSeriesSpec(2, [1, 2], [1, 0])
    with pytest.raises(SpecError):
        FSeriesSpec(2, [1, 2], [0, 0])
    with pytest.raises(SpecError):
        FSeriesSpec(2, [0, 2], [0, 0])
    s = FSeriesSpec(2, [1, 2], [0, 0], x0=5)
    assert evalAtNat(s, 0) == 5


def test_json_round_trip(chiq):
    s = FSeriesSpec.from_json(chiq.to_json())
    assert s.to_json() == chiq.to_json()


def test_values_at_naturals(chiq):
    assert evalAtNat(chiq, 0) == 0
    assert evalAtNat(chiq, 1) == Fraction(1, 2)
    pp = symbol("pp")
    q = symbol("q")
    s = FSeriesSpec(2, [1 / pp, q / pp], [1, 1])
    assert evalAtNat(s, 0) == div(pp, pp - 1)
    assert evalAtNat(s, 1) == 1 + div(q, pp - 1)


def test_periodic_values(chi3):
    assert evalAtPeriodic(chi3, "pre:;per:01") == 1
    assert evalAtPeriodic(chi3, "pre:;per:10") == 2
    assert evaluate(chi3, 0) == 0


CHI3 = FSeriesSpec(2, [Fraction(1, 2), Fraction(3, 2)], [0, Fraction(1, 2)])


@given(st.integers(0, 2000), st.integers(0, 1))
def test_functional_equation(m, j):
    assert evalAtNat(CHI3, 2 * m + j) == CHI3.a[j] * evalAtNat(CHI3, m) + CHI3.b[j]


def test_truncated_transform(chi3):
    T = truncatedTransform(chi3, 1)
    assert T.coeff(T0) == Fraction(1, 4)
    assert forward(truncation(chi3, 3)) == truncatedTransform(chi3, 3)


def test_kappa_and_mfunction():
    M = MFunction(2, [Fraction(1, 4), Fraction(3, 4)])
    assert mfunctionEval(M, 0, -1) == 1
    assert mfunctionEval(M, 3, -1) == Fraction(27, 64)
    rng = random.Random(4)
    M3 = MFunction(3, [Fraction(1, 3), 2, 5])
    for _ in range(20):
        z = as_point(3, Fraction(rng.randint(-50, 50), rng.choice([1, 2, 4, 5])))
        m, n = rng.randint(0, 4), rng.randint(0, 4)
        left = kappa(M3, truncate(shiftIter(z, m), n))
        right = kappa(M3, truncate(z, m + n)) / kappa(M3, truncate(z, m))
        assert left == right


def test_alpha_data(chi3):
    ad = alphaData(chi3)
    assert ad.alpha0() == 1
    A = ahat_transform(ad)
    assert A.coeff(T0) == 1
    for t in [DualElement(2, 1, 1)]:
        assert A.coeff(t) == ad.alpha(t)


def test_closed_transform_values(chi3, s45):
    X = closedTransform(chi3, frame=False)
    assert X.coeff(T0) == 0
    assert X.coeff(DualElement(2, 1, 1)) == Fraction(-1, 8)
    assert closedTransform(s45, frame=False).coeff(T0) == 4


def test_closed_transform_warns_without_frame(chi3):
    with pytest.warns(FrameNotAttached):
        closedTransform(chi3)


def test_symbolic_poles(chiq):
    X = closedTransform(chiq, frame=False)
    q = symbol("q")
    assert X.coeff(T0) == div(-1, q - 3)
    for t in dual_range(2, 2):
        if t.n == 2:
            assert (X.coeff(t) * (q * q - 4 * q + 3)).den.is_const()


@pytest.mark.parametrize("N", range(0, 5))
def test_partial_sums_against_triangle(s45, N):
    X = closedTransform(s45, frame=False)
    for z in range(8):
        assert partialSum(X, N, z) == evaluate(s45, z) - deltaTriangle(s45, N, z, X)


POINTS = [0, 1, 5, 7, Fraction(-1, 3), -1, "pre:11;per:01"]


@pytest.mark.parametrize("N", range(1, 6))
def test_ax_partial_sums(chi3, chiq, s45, N):
    for spec in (chi3, s45):
        for z in POINTS:
            assert aXPartialSum(spec, N, z)["status"] == "exact-equal"
    for z in POINTS[:4]:
        assert aXPartialSum(chiq, min(N, 3), z)["status"] == "exact-equal"


def test_ax_partial_sum_p3():
    s = FSeriesSpec(3, [Fraction(1, 3), 2, 5], [1, -1, Fraction(2, 7)])
    for N in range(1, 5):
        for z in [0, 4, Fraction(1, 2), -1]:
            assert aXPartialSum(s, N, z)["status"] == "exact-equal"
            assert tildeRecurrence(s, N, z)["status"] == "exact-equal"


@pytest.mark.parametrize("N", range(1, 7))
def test_tilde_recurrence_and_delta(chi3, N):
    ct = closedTransform(chi3, frame=False)
    for z in POINTS:
        assert tildeRecurrence(chi3, N, z, ct)["status"] == "exact-equal"
        assert deltaDirect(chi3, N, z, ct) == deltaTriangle(chi3, N, z, ct)
        deltaN(chi3, N, 2, z, ct)


def test_delta_examples(chi3, s45):
    ct = closedTransform(chi3, frame=False)
    z = as_point(2, Fraction(-1, 3))
    for N in range(0, 9):
        expected = (evaluate(chi3, shiftIter(z, N)) + Fraction(N, 4)) * Fraction(3 ** ((N + 1) // 2), 2 ** N)
        assert deltaTriangle(chi3, N, z, ct) == expected
    assert deltaTriangle(chi3, 0, 5, ct) == evaluate(chi3, 5) - ct.coeff(T0)
    X = closedTransform(s45, frame=False)
    for N in range(4, 8):
        # z = 5 has lambda = 3 < N
        assert deltaDirect(s45, N, 5, X) == (evaluate(s45, 0) - 4) * Fraction(1, 4) ** N * 25
    zero = FSeriesSpec(2, [Fraction(1, 2), Fraction(1, 3)], [0, 0])
    Z = closedTransform(zero, frame=False)
    assert all(deltaTriangle(zero, N, 7, Z) == 0 for N in range(5))


def test_orbit_and_direct_partial_sums_agree(chi3):
    ct = closedTransform(chi3, frame=False)
    for N in range(6):
        for z in POINTS:
            assert partialSum(ct, N, z, method="orbit") == partialSum(ct, N, z)
