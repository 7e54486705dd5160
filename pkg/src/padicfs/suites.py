"""Named exact-identity suites, shared by ``padicfs verify`` and the tests.

Every suite takes a seeded ``random.Random`` and optional user series, and
returns a list of report dicts. A report passes when its status is one of
:data:`PASSING`.
"""

import random
from fractions import Fraction

from .scalars import symbol, rootOfUnity
from .sbfourier import (SBFunction, forward, inverse, pair, convolve, pointwiseProduct,
                        haarIntegral, adjointResum, shiftTransform)
from .series import (FSeriesSpec, MFunction, closedTransform, ahat_transform, alphaData,
                     aXPartialSum, tildeRecurrence, deltaN)
from .products import (ProductSpec, TransformLattice, truncatedProductRecursion,
                       fHatPartialSum, fTildeRecurrence, productDeltaIdentity,
                       formalEquationCheck)
from .inversion import (SortingOperator, inversionCheck, formalMatchesLattice, formalSolve,
                        NoSolution, dirichletCrossCheck, eigenPairing, tensorPairing)

PASSING = ("exact-equal", "bound-holds", "pass-as-expected")


def chi(q):
    """The numen of the shortened qx+1 map."""
    return FSeriesSpec(2, [Fraction(1, 2), q * Fraction(1, 2)], [0, Fraction(1, 2)])


def default_series():
    """chi_3, symbolic chi_q and sum_n 5^{#1([z]_{2^n})} / 4^n."""
    return [chi(3), chi(symbol("q")),
            FSeriesSpec(2, [Fraction(1, 4), Fraction(5, 4)], [1, 1])]


POINTS = ["pre:;per:1", "pre:;per:10", "pre:1;per:0", "pre:11;per:01", "7", "0"]


def random_rational(rng, size=9):
    return Fraction(rng.randint(-size, size), rng.randint(1, 4))


def random_scalar(rng, tier, p, N):
    """A random value of the given tier: rational, cyclotomic or symbolic-small."""
    c = random_rational(rng)
    if tier == "rational":
        return c
    if tier == "cyclotomic":
        M = rng.choice([3, 4, 8, p ** max(N, 1)])
        return c + random_rational(rng) * rootOfUnity(M, rng.randrange(M))
    if tier == "symbolic":
        return c + random_rational(rng) * symbol(rng.choice("qs"))
    raise ValueError("unknown tier %r" % tier)


def random_sb(rng, p, N, tier="rational", density=0.7):
    vals = [random_scalar(rng, tier, p, N) if rng.random() < density else 0
            for _ in range(p ** N)]
    return SBFunction(p, N, vals)


def random_multipliers(rng, p):
    while True:
        r = [random_rational(rng, 5) for _ in range(p)]
        if sum(r) != p and all(r):
            return r


def _d1(specs):
    return [s for s in (specs or default_series()) if isinstance(s, FSeriesSpec)]


def suite_inversion(rng, specs=None):
    out = []
    for p, N in [(2, 2), (3, 1), (2, 3)]:
        for tier in ("rational", "cyclotomic"):
            phi = random_sb(rng, p, N, tier)
            psi = random_sb(rng, p, N, tier)
            T, U = forward(phi), forward(psi)
            ok = inverse(T) == phi
            out.append({"identity": "Fourier inversion", "p": p, "N": N, "tier": tier,
                        "status": "exact-equal" if ok else "counterexample"})
            prod = pointwiseProduct(phi, psi)
            ok = pair(T, psi) == haarIntegral(prod)
            out.append({"identity": "Parseval pairing", "p": p, "N": N, "tier": tier,
                        "status": "exact-equal" if ok else "counterexample"})
            ok = convolve(T, U) == forward(prod)
            out.append({"identity": "convolution duality", "p": p, "N": N, "tier": tier,
                        "status": "exact-equal" if ok else "counterexample"})
    for p in (2, 3):
        L = SortingOperator(p, random_multipliers(rng, p))
        for n in range(4):
            for k in range(p ** n):
                out.append(inversionCheck(L, n, k))
    return out


def suite_truncation(rng, specs=None):
    out = []
    for s in _d1(specs):
        P = ProductSpec([s])
        for N in range(1, 4):
            out.append(truncatedProductRecursion(P, (1,), N))
    P = ProductSpec([chi(3), chi(3)])
    for N in range(1, 4):
        out.append(truncatedProductRecursion(P, (1, 1), N))
    return out


def suite_axsum(rng, specs=None):
    return [aXPartialSum(s, N, z) for s in _d1(specs) for N in (1, 3) for z in POINTS[:4]]


def suite_tilde(rng, specs=None):
    out = []
    for s in _d1(specs):
        ct = closedTransform(s, frame=False)
        for N in (1, 2, 4):
            for z in POINTS[:4]:
                out.append(tildeRecurrence(s, N, z, ct))
    return out


def suite_delta(rng, specs=None):
    out = []
    for s in _d1(specs):
        ct = closedTransform(s, frame=False)
        for N in (1, 3, 5):
            for z in POINTS[:4]:
                try:
                    v = deltaN(s, N, 0, z, ct)
                    out.append({"identity": "Delta two paths", "N": N, "z": z, "value": v,
                                "status": "exact-equal"})
                except AssertionError as exc:
                    out.append({"identity": "Delta two paths", "N": N, "z": z,
                                "status": "counterexample", "detail": str(exc)})
    return out


def _product_cases(specs):
    base = _d1(specs)
    numeric = [s for s in base if s.is_numeric()]
    cases = [(TransformLattice(ProductSpec([s]), (2,)), (2,)) for s in numeric[:2]]
    if len(numeric) >= 1:
        s = numeric[-1]
        cases.append((TransformLattice(ProductSpec([s, s]), (1, 1)), (1, 1)))
    return cases


def suite_fhat(rng, specs=None):
    out = []
    for lat, n in _product_cases(specs):
        out.append(formalEquationCheck(lat, n, 3))
        for z in POINTS[:3]:
            out.append(fHatPartialSum(lat, n, 3, z))
            out.append(fTildeRecurrence(lat, n, 3, z))
            out.append(productDeltaIdentity(lat, n, 2, z))
    return out


def suite_adjoint(rng, specs=None):
    out = []
    for s in _d1(specs):
        X = closedTransform(s, frame=False)
        A = ahat_transform(alphaData(s))
        for N, r in [(2, 1), (3, 1), (3, 2)]:
            out.append(adjointResum(X, A, r, N))
    return out


def suite_shift(rng, specs=None):
    out = []
    for s in _d1(specs):
        X = closedTransform(s, frame=False)
        for n, N in [(1, 2), (2, 3)]:
            for z in POINTS[:3]:
                out.append(shiftTransform(X, s.a, n, N, z))
    return out


def suite_eigen(rng, specs=None):
    out = []
    for p in (2, 3):
        M = MFunction(p, random_multipliers(rng, p))
        for N in (1, 2):
            out.append(eigenPairing(M, random_sb(rng, p, N)))
    return out


def suite_tensor(rng, specs=None):
    out = []
    for p in (2, 3):
        Ms = [MFunction(p, random_multipliers(rng, p)) for _ in range(2)]
        terms = [(random_rational(rng), [random_sb(rng, p, 1), random_sb(rng, p, 2)])
                 for _ in range(2)]
        out.append(tensorPairing(Ms, terms))
    return out


def suite_dirichlet(rng, specs=None):
    out = []
    for lat, n in _product_cases(specs):
        for N in (1, 3):
            for z in POINTS[:3]:
                out.append(dirichletCrossCheck(lat, n, N, z))
    return out


def suite_formal_vs_closed(rng, specs=None):
    s = FSeriesSpec(2, [Fraction(1, 2), Fraction(5, 2)], [0, Fraction(1, 2)])
    if specs:
        s = _d1(specs)[0]
    lat = TransformLattice(ProductSpec([s]), (3,))
    out = [formalMatchesLattice(lat.spec, (n,), 4, lat) for n in (2, 3)]
    chi3 = TransformLattice(ProductSpec([chi(3)]), (1,))
    try:
        formalSolve(chi3.spec, (1,), chi3, 2)
        out.append({"identity": "chi_3 n=1 has no formal solution", "status": "counterexample"})
    except NoSolution as exc:
        out.append({"identity": "chi_3 n=1 has no formal solution", "status": "pass-as-expected",
                    "detail": str(exc)})
    return out


SUITES = {
    "inversion": suite_inversion,
    "truncation": suite_truncation,
    "axsum": suite_axsum,
    "tilde": suite_tilde,
    "delta": suite_delta,
    "fhat": suite_fhat,
    "adjoint": suite_adjoint,
    "shift": suite_shift,
    "eigen": suite_eigen,
    "tensor": suite_tensor,
    "dirichlet": suite_dirichlet,
    "formal-vs-closed": suite_formal_vs_closed,
}


def run_suite(name, seed=0, specs=None):
    rng = random.Random(seed)
    reports = SUITES[name](rng, specs)
    failures = [r for r in reports if r.get("status") not in PASSING]
    return {"suite": name, "seed": seed, "checks": len(reports),
            "passed": not failures, "reports": reports}
