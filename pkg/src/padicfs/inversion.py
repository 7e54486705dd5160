"""Sorting operators, the closed-form (1 - L)^(-1), formal solutions and breakdown.

L{phi}(z) = p^(-1) sum_k r_k phi(p z + k) lowers the level of a locally
constant function by one. Off the breakdown locus alpha(0) = p^(-1) sum r_k != 1,
1 - L is inverted in closed form on indicators, and the formal Fourier-side
equation for a product transform is solved outward from t = 0.
"""

from fractions import Fraction

from .padic import DualElement, as_point, truncate, shiftIter
from .scalars import (coerce, is_zero, div, SymbolicScalar, to_string)
from .sbfourier import (SBFunction, FourierTable,
                        pair_direct, partialSum, dual_tree, haarIntegral)
from .series import MFunction, kappa, on_breakdown, ahat_transform, AlphaData
from .products import MultiIndex, TransformLattice, _report


class OnBreakdownVariety(ArithmeticError):
    pass


class NoSolution(OnBreakdownVariety):
    pass


class AffineSolutionFamily(OnBreakdownVariety):
    """Raised when alpha_n(0) = 1 and the obstruction vanishes.

    ``direction`` is the closed transform A-hat_n: any two solutions differ by
    a multiple of it. Pass ``y0`` to :func:`formalSolve` to pick one.
    """

    def __init__(self, msg, direction):
        OnBreakdownVariety.__init__(self, msg)
        self.direction = direction


class Inconclusive(Exception):
    pass


class SortingOperator:
    def __init__(self, p, r):
        self.p = p
        self.r = tuple(coerce(v) for v in r)
        if len(self.r) != p:
            raise ValueError("need p coefficients")

    def alpha0(self):
        s = Fraction(0)
        for v in self.r:
            s = s + v
        return s * Fraction(1, self.p)

    def mprod(self, m, k):
        """r_0^m kappa([k]_{p^m}) = prod_{i<m} r_{digit i of k}; fine with zero multipliers."""
        out = Fraction(1)
        for _ in range(m):
            out = out * self.r[k % self.p]
            k //= self.p
        return out

    def __call__(self, phi):
        return applyL(self, phi)


def applyL(L, phi):
    p = L.p
    if phi.N == 0:
        return SBFunction(p, 0, [L.alpha0() * phi.values[0]])
    M = p ** (phi.N - 1)
    vals = []
    for z in range(M):
        s = Fraction(0)
        for k, rk in enumerate(L.r):
            if not is_zero(rk):
                s = s + rk * phi.values[(p * z + k) % (M * p)]
        vals.append(s * Fraction(1, p))
    return SBFunction(p, phi.N - 1, vals)


def applyLPower_direct(L, m, phi):
    for _ in range(m):
        phi = applyL(L, phi)
    return phi


def applyLPower(L, m, n, k):
    """Closed form of L^m applied to the indicator of k mod p^n."""
    p = L.p
    if m < n:
        c = L.mprod(m, k) * Fraction(1, p ** m)
        target = k // p ** m
        return SBFunction(p, n - m, [c if z == target else Fraction(0)
                                     for z in range(p ** (n - m))])
    c = L.mprod(n, k) * Fraction(1, p ** n) * L.alpha0() ** (m - n)
    return SBFunction(p, 0, [c])


def lpower_check(L, m, n, k):
    direct = applyLPower_direct(L, m, SBFunction.indicator(L.p, n, k))
    closed = applyLPower(L, m, n, k)
    return _report("L power on indicator", direct == closed, m=m, n=n, k=k)


def invertOneMinusL(L, n, k):
    """S_{n,k} with (1 - L) S_{n,k} = [z = k mod p^n]."""
    a0 = L.alpha0()
    if on_breakdown(a0):
        raise OnBreakdownVariety("alpha(0) = 1: 1 - L is not invertible")
    p = L.p
    M = p ** n
    const = div(L.mprod(n, k) * Fraction(1, M), 1 - a0)
    vals = [const] * M
    for m in range(n):
        c = L.mprod(m, k) * Fraction(1, p ** m)
        target = k // p ** m
        step = p ** (n - m)
        for z in range(target, M, step):
            vals[z] = vals[z] + c
    return SBFunction(p, n, vals)


def invertOneMinusL_function(L, phi):
    """(1 - L)^(-1) phi through the level-N indicator basis."""
    out = SBFunction(L.p, phi.N, [Fraction(0)] * (L.p ** phi.N))
    for k, v in enumerate(phi.values):
        if not is_zero(v):
            out = out + invertOneMinusL(L, phi.N, k).scale(v)
    return out


def one_minus_L(L, phi):
    return phi - applyL(L, phi)


def inversionCheck(L, n, k):
    S = invertOneMinusL(L, n, k)
    left = one_minus_L(L, S)
    ind = SBFunction.indicator(L.p, n, k)
    return _report("inversion of 1 - L", left == ind, n=n, k=k)


def operatorNormCheck(L, phi, place):
    """|L phi|_sup <= bound * |phi|_sup with the max (non-arch) or sum (arch) of |r_k / p|."""
    from .frames import Place
    from .scalars import ellAdicUpperBound, archNorm
    place = place if isinstance(place, Place) else Place.parse(place)
    p = L.p
    out = applyL(L, phi)
    if place.archimedean:
        def size(x):
            return float(archNorm(x).b)
        bound = sum((size(r) for r in L.r if not is_zero(r)), 0.0) / p
    else:
        def size(x):
            return 0 if is_zero(x) else ellAdicUpperBound(x, place.ell)
        bound = max((size(Fraction(r) / p if isinstance(r, Fraction) else r * Fraction(1, p))
                     for r in L.r if not is_zero(r)), default=0)
    lhs = max((size(v) for v in out.values), default=0)
    rhs = bound * max((size(v) for v in phi.values), default=0)
    ok = lhs <= rhs if not place.archimedean else float(lhs) <= float(rhs) * (1 + 1e-12)
    return {"identity": "operator norm bound", "place": str(place), "lhs": float(lhs),
            "rhs": float(rhs), "status": "bound-holds" if ok else "counterexample"}


# ---------------------------------------------------------------------------
# formal solutions


def _zero(p):
    return DualElement(p, 0, 0)


def formalSolve(spec, n, initialTransforms, tmax, y0=None):
    """Solve Y(t) = alpha_n(t) Y(p t) + sum_{m<n} alpha_{m,n}(t) X-hat_m(p t) on |t| <= p^tmax."""
    n = spec.index(n)
    p = spec.p
    lower = [m for m in n.below() if m < n]
    if isinstance(initialTransforms, TransformLattice):
        lat = initialTransforms
        initialTransforms = {m: lat[m] for m in lower}
    z = _zero(p)
    a0 = spec.alpha_mn(n, n, z)
    obstruction = Fraction(0)
    for m in lower:
        obstruction = obstruction + spec.alpha_mn(m, n, z) * initialTransforms[m].coeff(z)
    if on_breakdown(a0):
        if not is_zero(obstruction):
            raise NoSolution("alpha_n(0) = 1 and the obstruction %s is nonzero"
                             % to_string(obstruction))
        if y0 is None:
            ad = AlphaData(p, [spec.rn(n, k) for k in range(p)], [0] * p)
            raise AffineSolutionFamily("alpha_n(0) = 1 with vanishing obstruction: "
                                       "solutions form a line through A-hat_n",
                                       ahat_transform(ad))
        start = coerce(y0)
    else:
        if y0 is not None and coerce(y0) != div(obstruction, 1 - a0):
            raise ValueError("Y(0) is forced off the breakdown locus")
        start = div(obstruction, 1 - a0)
    table = {}
    for t in dual_tree(p, tmax):
        if t.n == 0:
            table[t] = start
            continue
        pt = t.times_p()
        v = spec.alpha_mn(n, n, t) * table[pt]
        for m in lower:
            v = v + spec.alpha_mn(m, n, t) * initialTransforms[m].coeff(pt)
        table[t] = v
    return FourierTable(p, tmax, table)


def formalMatchesLattice(spec, n, tmax, lattice=None):
    lattice = lattice or TransformLattice(spec, n)
    Y = formalSolve(spec, n, lattice, tmax)
    X = lattice[n]
    for t in dual_tree(spec.p, tmax):
        if Y.coeff(t) != X.coeff(t):
            return _report("formal solution vs f-hat minus g-hat", False, n=str(spec.index(n)),
                           t=str(t), formal=Y.coeff(t), closed=X.coeff(t))
    return _report("formal solution vs f-hat minus g-hat", True, n=str(spec.index(n)), tmax=tmax)


def dirichletCrossCheck(lattice, n, N, z, method="direct"):
    """Partial sum of the formal solution against its digit-sum closed form.

    closed = r_{n,0}^N kappa_n([z]_{p^N}) Y(0)
             + sum_{k<N} r_{n,0}^k kappa_n([z]_{p^k}) sum_{m<n} r_{m,n,[theta^k z]_p} X~_{m,N-k-1}(theta^(k+1) z)
    with Y(0) = sum_{m<n} alpha_{m,n}(0) X-hat_m(0) / (1 - alpha_n(0)).
    """
    spec = lattice.spec
    n = spec.index(n)
    p = spec.p
    z = as_point(p, z)
    Y = formalSolve(spec, n, lattice, N)
    direct = Fraction(0)
    from .padic import character
    for t in dual_tree(p, N):
        c = Y.coeff(t)
        if not is_zero(c):
            direct = direct + c * character(t, z)
    lower = [m for m in n.below() if m < n]
    Mn = MFunction(p, [spec.rn(n, k) for k in range(p)])
    r0 = spec.rn(n, 0)
    closed = r0 ** N * kappa(Mn, truncate(z, N)) * Y.coeff(_zero(p))
    for k in range(N):
        d = shiftIter(z, k).digit(0)
        inner = Fraction(0)
        for m in lower:
            rm = spec.r(m, n, d)
            if not is_zero(rm):
                inner = inner + rm * partialSum(lattice[m], N - k - 1, shiftIter(z, k + 1),
                                                method=method)
        closed = closed + r0 ** k * kappa(Mn, truncate(z, k)) * inner
    return _report("Dirichlet cross-check", direct == closed, n=str(n), N=N, z=str(z),
                   direct=direct, closed=closed)


def dirichletLiteralForm(lattice, n, N, z, method="direct"):
    """The same closed form with a first line r^N kappa / (p^N (1 - alpha_n(0))) * sum_k r_{m,n,k} X-hat_m(0).

    Kept so tests can show where this variant disagrees with the direct sum.
    """
    spec = lattice.spec
    n = spec.index(n)
    p = spec.p
    z = as_point(p, z)
    rep = dirichletCrossCheck(lattice, n, N, z, method)
    lower = [m for m in n.below() if m < n]
    Mn = MFunction(p, [spec.rn(n, k) for k in range(p)])
    r0 = spec.rn(n, 0)
    a0 = spec.alpha_mn(n, n, _zero(p))
    s = Fraction(0)
    for m in lower:
        for k in range(p):
            s = s + spec.r(m, n, k) * lattice.x0(m)
    first_literal = div(r0 ** N * kappa(Mn, truncate(z, N)) * s, p ** N * (1 - a0))
    first_used = r0 ** N * kappa(Mn, truncate(z, N)) * div(s * Fraction(1, p), 1 - a0)
    literal = rep["closed"] - first_used + first_literal
    return _report("Dirichlet cross-check, literal first line", literal == rep["direct"],
                   direct=rep["direct"], literal=literal)


# ---------------------------------------------------------------------------
# breakdown


def _relation(x):
    """Clear denominators of a symbolic alpha(0) - 1 and print the polynomial relation."""
    num = x.num
    den = x.den
    if den.is_const():
        scale = Fraction(1)
        for c in num.terms.values():
            if isinstance(c, Fraction):
                scale = scale * c.denominator // _gcd(scale.numerator, c.denominator)
        num = num.scale(Fraction(scale))
    return to_string(SymbolicScalar(num)) + " = 0"


def _gcd(a, b):
    from math import gcd
    return gcd(int(a), int(b))


def breakdownScan(spec, maxDegree):
    """alpha_n(0) for every 1 <= Sigma(n) <= maxDegree, with the on/off verdict."""
    out = []
    top = MultiIndex([maxDegree] * spec.d)
    p = spec.p
    for n in top.below():
        if not 1 <= n.sigma <= maxDegree:
            continue
        a0 = spec.alpha_mn(n, n, _zero(p))
        on = on_breakdown(a0)
        rep = {"index": list(n), "alpha0": to_string(a0),
               "verdict": "on-variety" if on else "off-variety"}
        if isinstance(a0 - 1, SymbolicScalar):
            rep["relation"] = _relation(a0 - 1)
        out.append(rep)
    return out


def degeneracyTest(mu, frame, samplePoints, Nmax):
    """Three-valued verdict: 'degenerate', 'not-certified' or raise Inconclusive."""
    from .frames import rootTestCertify
    if isinstance(mu, FourierTable):
        phi = None
        from .sbfourier import inverse
        phi = inverse(mu)
        zero = all(is_zero(v) for v in phi.values)
        return {"verdict": "degenerate" if zero else "not-certified", "kind": "finite table"}
    ad = getattr(mu, "alpha_data", None)
    if ad is None or mu.meta.get("name") != "A-hat" or not on_breakdown(ad.alpha0()):
        raise Inconclusive("no closed collapse or finite support available")
    p = mu.p
    M = MFunction(p, ad.a)
    rows = []
    ok = True
    for z in samplePoints:
        z = as_point(p, z)
        for N in range(Nmax + 1):
            s = partialSum(mu, N, z, method="orbit" if mu.equivariant else "direct")
            if s != ad.a[0] ** N * kappa(M, truncate(z, N)):
                raise AssertionError("A-hat partial sum collapse failed at N=%d" % N)
        res = rootTestCertify(M, z, frame.place_for(z))
        rows.append(res)
        ok = ok and res["verdict"] == "summable"
    return {"verdict": "degenerate" if ok else "not-certified", "kind": "A-hat", "rows": rows}


# ---------------------------------------------------------------------------
# pairings


def measure_pair(mu, phi):
    """integral of phi against the distribution with coefficients mu: sum_t phi-hat(t) mu(-t)."""
    return pair_direct(mu, phi)


def eigenPairing(M, phi):
    """integral (1 - L_M) phi dM = (1 - alpha_M(0)) phi-hat(0), with dM the A-hat distribution."""
    p = M.p
    L = SortingOperator(p, M.r)
    ad = AlphaData(p, M.r, [0] * p)
    mu = ahat_transform(ad)
    psi = one_minus_L(L, phi)
    left = measure_pair(mu, psi.lift(phi.N) if psi.N < phi.N else psi)
    right = (1 - L.alpha0()) * haarIntegral(phi)
    return _report("eigen pairing", left == right, left=left, right=right)


def tensorPairing(Ms, terms):
    """d-fold version: terms is a list of (coefficient, [phi_1, ..., phi_d]) product indicators."""
    left = Fraction(0)
    right0 = Fraction(0)
    for coeff, factors in terms:
        if len(factors) != len(Ms):
            raise ValueError("each term needs one factor per M-function")
        prod_left = coerce(coeff)
        prod_haar = coerce(coeff)
        for M, phi in zip(Ms, factors):
            L = SortingOperator(M.p, M.r)
            mu = ahat_transform(AlphaData(M.p, M.r, [0] * M.p))
            psi = one_minus_L(L, phi)
            prod_left = prod_left * measure_pair(mu, psi)
            prod_haar = prod_haar * haarIntegral(phi)
        left = left + prod_left
        right0 = right0 + prod_haar
    factor = Fraction(1)
    for M in Ms:
        factor = factor * (1 - SortingOperator(M.p, M.r).alpha0())
    right = right0 * factor
    return _report("tensor eigen pairing", left == right, left=left, right=right)
