import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padicfs.padic import DualElement, character, as_point
from padicfs.sbfourier import (SBFunction, FourierTable, forward, inverse, inverse_direct, pair,
                               pair_direct, convolve, convolve_direct, pointwiseProduct,
                               haarIntegral, haar, single_entry, dirichletKernel, partialSum,
                               adjointResum, shiftTransform, ClosedTransform, dual_range)
from padicfs.suites import random_sb


def test_two_point_transform():
    T = forward(SBFunction.indicator(2, 1, 1))
    assert T.coeff(DualElement(2, 0, 0)) == Fraction(1, 2)
    assert T.coeff(DualElement(2, 1, 1)) == Fraction(-1, 2)
    assert forward(SBFunction.constant(2, 1)) == haar(2)


@pytest.mark.parametrize("p,n,k", [(2, 2, 3), (3, 2, 5), (6, 1, 4)])
def test_indicator_transform(p, n, k):
    T = forward(SBFunction.indicator(p, n, k))
    for t in dual_range(p, n):
        assert T.coeff(t) == Fraction(1, p ** n) * character(-t, k)


def test_inverse_examples():
    assert inverse(haar(2)) == SBFunction.constant(2, 1)
    phi = inverse(single_entry(2, DualElement(2, 1, 1), 1))
    assert phi == SBFunction(2, 1, [1, -1])


def test_haar_integral():
    assert haarIntegral(SBFunction.constant(3, 1)) == 1
    assert haarIntegral(SBFunction.indicator(3, 2, 4)) == Fraction(1, 9)
    assert haarIntegral(SBFunction(2, 1, [1, -1])) == 0


def test_products_and_pairing_examples():
    e = SBFunction.indicator(2, 1, 0)
    assert pointwiseProduct(e, e) == e
    delta = FourierTable(2, 3, {t: Fraction(1) for t in dual_range(2, 3)})
    assert pair(delta, e) == 1
    phi = random_sb(random.Random(3), 2, 2)
    assert pair(haar(2), phi) == haarIntegral(phi)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("p,N", [(2, 3), (3, 2), (6, 2)])
@pytest.mark.parametrize("tier", ["rational", "cyclotomic", "symbolic"])
def test_inversion_paths_agree(seed, p, N, tier):
    rng = random.Random(seed * 100 + p * 10 + N)
    phi = random_sb(rng, p, N, tier)
    T = forward(phi)
    assert inverse(T) == phi
    assert inverse_direct(T) == phi


@pytest.mark.parametrize("p,N", [(2, 2), (3, 2), (2, 3)])
def test_convolution_and_pairing_duality(p, N):
    rng = random.Random(p * N)
    phi, psi = random_sb(rng, p, N, "cyclotomic"), random_sb(rng, p, N, "rational")
    T, U = forward(phi), forward(psi)
    prod = forward(pointwiseProduct(phi, psi))
    assert convolve(T, U) == prod
    assert convolve_direct(T, U) == prod
    assert pair(T, psi) == pair_direct(T, psi) == haarIntegral(pointwiseProduct(phi, psi))
    chi = random_sb(rng, p, N)
    assert pair(T, psi + chi) == pair(T, psi) + pair(T, chi)


def test_dirichlet_kernel_and_partial_sums():
    D = forward(dirichletKernel(3, 1))
    assert all(D.coeff(t) == 1 for t in dual_range(3, 1))
    for N in range(4):
        assert partialSum(haar(2), N, 7) == 1


@pytest.mark.parametrize("seed", range(3))
def test_partial_sum_paths(seed):
    rng = random.Random(seed)
    T = forward(random_sb(rng, 2, 4, "cyclotomic"))
    for N in range(5):
        z = as_point(2, Fraction(rng.randint(-20, 20), 3))
        assert partialSum(T, N, z) == partialSum(T, N, z, method="dirichlet")


def test_adjoint_resummation():
    rng = random.Random(8)
    for r in (1, 2):
        f = forward(random_sb(rng, 2, 3))
        g = forward(random_sb(rng, 2, 3))
        assert adjointResum(f, g, r, 3)["status"] == "exact-equal"
    f = forward(random_sb(rng, 3, 2))
    rep = adjointResum(f, haar(3), 1, 1)
    assert rep["left"] == sum(f.coeff(s) for s in dual_range(3, 1))
    assert rep["status"] == "exact-equal"
    rep = adjointResum(haar(2), forward(random_sb(rng, 2, 2)), 1, 2)
    assert rep["status"] == "exact-equal"


@pytest.mark.parametrize("p", [2, 3])
def test_shift_identity(p):
    rng = random.Random(p)
    chi = forward(random_sb(rng, p, 3))
    q = [Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(p)]
    for n in (0, 1, 2):
        assert shiftTransform(chi, q, n, 3, 11)["status"] == "exact-equal"
    rep = shiftTransform(haar(p), [1] * p, 2, 3, 5)
    assert rep["left"] == rep["right"] == 1


def test_table_json_round_trip():
    T = forward(random_sb(random.Random(1), 2, 2, "cyclotomic"))
    back = FourierTable.from_json(2, T.to_json())
    assert back == T


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_parseval_level_two(vals):
    phi = SBFunction(3, 2, vals)
    T = forward(phi)
    # sum_t |phi-hat(t)|^2 with conjugation t -> -t
    s = sum(T.coeff(t) * T.coeff(-t) for t in dual_range(3, 2))
    assert s == haarIntegral(pointwiseProduct(phi, phi))


def test_closed_transform_cache_and_table():
    calls = []

    def rule(t):
        calls.append(t)
        return Fraction(t.n)

    ct = ClosedTransform(2, rule)
    ct.coeff(DualElement(2, 1, 1))
    ct.coeff(DualElement(2, 1, 1))
    assert len(calls) == 1
    assert ct.table(2).coeff(DualElement(2, 3, 2)) == 2
