"""Products X_n = prod_j X_j^{n_j} of d F-series sharing a base p.

The transforms are built bottom-up over the multi-index lattice. Each entry
with Sigma(n) >= 2 is f-hat minus g-hat, where f-hat is the explicit nested
sum over lower entries and g-hat is the closed transform of the derived
affine series with multipliers r_{n,k} and constants c_{n,k}.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian
from math import comb

from .padic import DualElement, character, truncate, shiftIter, as_point
from .scalars import (is_zero, div, ellAdicUpperBound, archNorm,
                      RamifiedPlace, prime_factors)
from .sbfourier import SBFunction, forward, ClosedTransform, partialSum, dual_tree, dual_range
from .series import (AffineSystem, MFunction, kappa, closed_from_params,
                     evaluate, on_breakdown, SpecError, deltaTriangle, _report)


class BreakdownHit(ArithmeticError):
    def __init__(self, n):
        ArithmeticError.__init__(self, "alpha_n(0) = 1 at n = %s" % (n,))
        self.n = n


class LatticeCapExceeded(ValueError):
    pass


class MultiIndex(tuple):
    """A vector of nonnegative integers with the componentwise partial order."""

    def __new__(cls, entries):
        entries = tuple(int(v) for v in entries)
        if any(v < 0 for v in entries):
            raise ValueError("multi-index entries must be nonnegative")
        return tuple.__new__(cls, entries)

    @property
    def sigma(self):
        return sum(self)

    def __le__(self, other):
        return len(self) == len(other) and all(a <= b for a, b in zip(self, other))

    def __lt__(self, other):
        return self <= other and tuple(self) != tuple(other)

    def __sub__(self, other):
        return MultiIndex(a - b for a, b in zip(self, other))

    def below(self):
        """All m <= self, in graded lexicographic order."""
        out = [MultiIndex(m) for m in _cartesian(*[range(v + 1) for v in self])]
        out.sort(key=lambda m: (m.sigma, tuple(m)))
        return out

    def binom(self, other):
        out = 1
        for a, b in zip(self, other):
            out *= comb(a, b)
        return out

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")"


def _as_index(n, d):
    if isinstance(n, int):
        n = (n,)
    n = MultiIndex(n)
    if len(n) != d:
        raise ValueError("multi-index %s does not have length %d" % (n, d))
    return n


class ProductSpec:
    """d F-series over one base; coefficient tables for every product."""

    def __init__(self, specs, symbolic_cap=4):
        specs = list(specs)
        if not specs:
            raise SpecError("need at least one series")
        p = specs[0].p
        if any(s.p != p for s in specs):
            raise SpecError("all factors must share the base p")
        self.p = p
        self.d = len(specs)
        self.specs = specs
        self.symbolic = any(not s.is_numeric() for s in specs)
        self.symbolic_cap = symbolic_cap
        self.r = lru_cache(maxsize=None)(self._r)

    def index(self, n):
        return _as_index(n, self.d)

    def _power(self, which, m, k):
        out = Fraction(1)
        for j, e in enumerate(m):
            if e:
                v = (self.specs[j].a if which == "a" else self.specs[j].b)[k]
                out = out * v ** e
        return out

    def _r(self, m, n, k):
        """r_{m,n,k} = binom(n, m) a_{m,k} b_{n-m,k}."""
        if not m <= n:
            return Fraction(0)
        return n.binom(m) * self._power("a", m, k) * self._power("b", n - m, k)

    def rn(self, n, k):
        return self.r(n, n, k)

    def alpha_mn(self, m, n, t):
        s = Fraction(0)
        for k in range(self.p):
            c = self.r(m, n, k)
            if not is_zero(c):
                s = s + c * character(-t, k)
        return s * Fraction(1, self.p)

    def evaluate(self, n, z):
        """X_n at a point (exact, through each factor)."""
        out = Fraction(1)
        for j, e in enumerate(n):
            if e:
                out = out * evaluate(self.specs[j], z) ** e
        return out

    def truncation(self, n, N):
        M = self.p ** N
        return SBFunction(self.p, N, [self.evaluate(n, m) for m in range(M)])


def productFunctionalCoeffs(spec, m, n, k):
    return spec.r(spec.index(m), spec.index(n), k)


def checkProductFunctionalEquation(spec, n, N):
    """X_n(p z + k) = sum_{m<=n} r_{m,n,k} X_m(z) on every z < p^(N-1), k < p."""
    n = spec.index(n)
    p = spec.p
    for z in range(p ** max(N - 1, 0)):
        for k in range(p):
            left = spec.evaluate(n, p * z + k)
            right = Fraction(0)
            for m in n.below():
                right = right + spec.r(m, n, k) * spec.evaluate(m, z)
            if left != right:
                return _report("product functional equation", False, n=str(n), z=z, k=k)
    return _report("product functional equation", True, n=str(n), N=N)


def _delta_zero_transform(p):
    return ClosedTransform(p, lambda t: Fraction(1) if t.n == 0 else Fraction(0),
                           meta={"name": "indicator of 0"}, equivariant=True)


class TransformLattice:
    """X-hat_m for every m <= top, built in graded lexicographic order."""

    def __init__(self, spec, top, cache=4096):
        self.spec = spec
        top = spec.index(top)
        if spec.symbolic and (top.sigma > spec.symbolic_cap or spec.p > 3):
            raise LatticeCapExceeded("symbolic lattices are capped at Sigma <= %d, p <= 3"
                                     % spec.symbolic_cap)
        self.top = top
        self.cache = cache
        self.entries = {}
        self.fhat_parts = {}
        self.g = {}
        self.g_systems = {}
        self.manifest = []
        for m in top.below():
            self._build(m)

    def _build(self, n):
        spec = self.spec
        p = spec.p
        if n.sigma == 0:
            self.entries[n] = _delta_zero_transform(p)
            self.manifest.append({"index": str(n), "branch": "base", "alpha0": "1"})
            return
        r = [spec.rn(n, k) for k in range(p)]
        lower = [m for m in n.below() if m < n]
        x0s = {m: self.entries[m].coeff(DualElement(p, 0, 0)) for m in lower}
        c = []
        for k in range(p):
            s = Fraction(0)
            for m in lower:
                s = s + spec.r(m, n, k) * x0s[m]
            c.append(-s)
        self.g_systems[n] = AffineSystem(p, r, c)
        g = closed_from_params(p, r, c, name="g-hat " + str(n), cache=self.cache)
        self.g[n] = g
        eq = all(isinstance(v, Fraction) for v in r + c)
        parts = {m: self._fhat_mn(m, n) for m in lower}
        self.fhat_parts[n] = parts
        fhat = ClosedTransform(p, lambda t: _sum(parts[m].coeff(t) for m in lower),
                               meta={"name": "f-hat " + str(n)}, equivariant=eq, cache=self.cache)
        self.fhat_parts[n]["total"] = fhat

        if n.sigma == 1:
            j = list(n).index(1)
            entry = closed_from_params(p, spec.specs[j].a, spec.specs[j].b,
                                       name="X-hat " + str(n), cache=self.cache)
        else:
            entry = ClosedTransform(p, lambda t: fhat.coeff(t) - g.coeff(t),
                                    meta={"name": "X-hat " + str(n)}, equivariant=eq,
                                    cache=self.cache)
        entry.meta["branch"] = g.meta["branch"]
        entry.meta["alpha0"] = g.meta["alpha0"]
        entry.breakdown = g.breakdown
        self.entries[n] = entry
        self.manifest.append({"index": str(n), "branch": g.meta["branch"],
                              "alpha0": str(g.meta["alpha0"])})

    def _fhat_mn(self, m, n):
        """f-hat_{m,n}(t) = [|t| >= p^2] (alpha_{m,n}(t) X-hat_m(p t) + alpha_n(t) f-hat_{m,n}(p t))."""
        spec = self.spec
        Xm = self.entries[m]

        def rule(t):
            if t.n < 2:
                return Fraction(0)
            pt = t.times_p()
            return (spec.alpha_mn(m, n, t) * Xm.coeff(pt) +
                    spec.alpha_mn(n, n, t) * ct.coeff(pt))

        ct = ClosedTransform(spec.p, rule, meta={"name": "f-hat %s,%s" % (str(m), str(n))},
                             equivariant=spec_is_rational(spec), cache=self.cache)
        return ct

    def __getitem__(self, n):
        return self.entries[self.spec.index(n)]

    def fhat(self, n):
        return self.fhat_parts[self.spec.index(n)]["total"]

    def fhat_mn(self, m, n):
        return self.fhat_parts[self.spec.index(n)][self.spec.index(m)]

    def x0(self, n):
        return self[n].coeff(DualElement(self.spec.p, 0, 0))


def _sum(values):
    out = Fraction(0)
    for v in values:
        out = out + v
    return out


def spec_is_rational(spec):
    return all(s.is_rational() for s in spec.specs)


def buildTransform(spec, n, lattice=None):
    lattice = lattice or TransformLattice(spec, n)
    return lattice[n]


def fhat_mn_explicit(lattice, m, n, t):
    """The nested-sum definition of f-hat_{m,n}(t), used to cross-check the recursion."""
    spec = lattice.spec
    m, n = spec.index(m), spec.index(n)
    L = t.n
    out = Fraction(0)
    prod = Fraction(1)
    for k in range(0, L - 1):
        tk = t.times_p(k)
        out = out + prod * spec.alpha_mn(m, n, tk) * lattice[m].coeff(t.times_p(k + 1))
        prod = prod * spec.alpha_mn(n, n, tk)
    return out


# ---------------------------------------------------------------------------
# identities


def truncatedProductRecursion(spec, n, N):
    """X-hat_{n,N}(t) = sum_{m<=n} alpha_{m,n}(t) X-hat_{m,N-1}(p t) for |t| <= p^N."""
    n = spec.index(n)
    tables = {}
    for m in n.below():
        tables[m] = (forward(spec.truncation(m, N)), forward(spec.truncation(m, N - 1)))
    for t in dual_range(spec.p, N):
        left = tables[n][0].coeff(t)
        right = Fraction(0)
        for m in n.below():
            right = right + spec.alpha_mn(m, n, t) * tables[m][1].coeff(t.times_p())
        if left != right:
            return _report("truncated product recursion", False, n=str(n), N=N, t=str(t),
                           left=left, right=right)
    return _report("truncated product recursion", True, n=str(n), N=N)


def formalEquationCheck(lattice, n, N=4):
    """X-hat_n(t) = sum_{m<=n} alpha_{m,n}(t) X-hat_m(p t) on |t| <= p^N."""
    spec = lattice.spec
    n = spec.index(n)
    for t in dual_tree(spec.p, N):
        left = lattice[n].coeff(t)
        right = Fraction(0)
        for m in n.below():
            right = right + spec.alpha_mn(m, n, t) * lattice[m].coeff(t.times_p())
        if left != right:
            return _report("formal Fourier equation", False, n=str(n), t=str(t),
                           left=left, right=right)
    return _report("formal Fourier equation", True, n=str(n), N=N)


def _kappa_n(spec, n):
    return MFunction(spec.p, [spec.rn(n, k) for k in range(spec.p)])


def tildeX_m(lattice, m, N, z, method="direct"):
    if N < 0:
        N = 0
    return partialSum(lattice[m], N, z, method=method)


def fHatPartialSum(lattice, n, N, z, method="direct"):
    """Partial sums of each f-hat_{m,n}: direct, and via the r_0^n kappa_n digit sum."""
    spec = lattice.spec
    n = spec.index(n)
    p = spec.p
    z = as_point(p, z)
    M = _kappa_n(spec, n)
    r0 = spec.rn(n, 0)
    details = []
    ok = True
    total_direct = Fraction(0)
    for m in [m for m in n.below() if m < n]:
        direct = partialSum(lattice.fhat_mn(m, n), N, z, method=method)
        x0 = lattice.x0(m)
        closed = Fraction(0)
        for k in range(0, N - 1):
            y = shiftIter(z, k)
            pref = r0 ** k * kappa(M, truncate(z, k))
            diff = tildeX_m(lattice, m, N - k - 1, shiftIter(z, k + 1), method) - x0
            closed = closed + pref * spec.r(m, n, y.digit(0)) * diff
        details.append({"m": str(m), "direct": direct, "closed": closed})
        ok = ok and direct == closed
        total_direct = total_direct + direct
    return _report("f-hat partial sum", ok, n=str(n), N=N, z=str(z), value=total_direct,
                   terms=details)


def fTildeRecurrence(lattice, n, N, z, method="direct"):
    """f~_{n,N}(z) = r_{n,[z]} f~_{n,N-1}(theta z) + sum_{m<n} r_{m,n,[z]}(X~_{m,N-1}(theta z) - X-hat_m(0))."""
    spec = lattice.spec
    n = spec.index(n)
    z = as_point(spec.p, z)
    d = z.digit(0)
    f = lattice.fhat(n)
    left = partialSum(f, N, z, method=method)
    right = spec.rn(n, d) * partialSum(f, max(N - 1, 0), shiftIter(z, 1), method=method)
    for m in [m for m in n.below() if m < n]:
        right = right + spec.r(m, n, d) * (tildeX_m(lattice, m, N - 1, shiftIter(z, 1), method)
                                           - lattice.x0(m))
    return _report("f-tilde recurrence", left == right, n=str(n), N=N, z=str(z),
                   left=left, right=right)


def f_value(lattice, n, z):
    """f_n(z) = X_n(z) + g_n(z) at an eventually periodic point."""
    spec = lattice.spec
    n = spec.index(n)
    g = lattice.g_systems[n]
    return spec.evaluate(n, z) + evaluate(g, z)


def deltaX_m(lattice, m, N, shift, z, method="direct"):
    """Delta_N^(shift){X_m}(z) = X_m(theta^shift z) - X~_{m,N}(theta^shift z)."""
    spec = lattice.spec
    y = shiftIter(as_point(spec.p, z), shift)
    return spec.evaluate(spec.index(m), y) - tildeX_m(lattice, m, N, y, method)


def productDeltaIdentity(lattice, n, N, z, method="direct"):
    """Delta_N{f_n} via the shift decomposition, and Delta_N{X_n} = Delta_N{f_n} - Delta_N{g_n}."""
    spec = lattice.spec
    n = spec.index(n)
    p = spec.p
    z = as_point(p, z)
    M = _kappa_n(spec, n)
    r0 = spec.rn(n, 0)
    f = lattice.fhat(n)
    f_direct = f_value(lattice, n, z) - partialSum(f, N, z, method=method)
    d0 = f_value(lattice, n, shiftIter(z, N)) - f.coeff(DualElement(p, 0, 0))
    f_closed = r0 ** N * kappa(M, truncate(z, N)) * d0
    for k in range(N):
        inner = Fraction(0)
        dk = shiftIter(z, k).digit(0)
        for m in [m for m in n.below() if m < n]:
            inner = inner + spec.r(m, n, dk) * deltaX_m(lattice, m, N - 1 - k, k + 1, z, method)
        f_closed = f_closed + r0 ** k * kappa(M, truncate(z, k)) * inner
    g_sys = lattice.g_systems[n]
    g_delta = deltaTriangle(g_sys, N, z, lattice.g[n])
    x_direct = deltaX_m(lattice, n, N, 0, z, method)
    x_closed = f_closed - g_delta
    ok = f_direct == f_closed and x_direct == x_closed
    return _report("product Delta decomposition", ok, n=str(n), N=N, z=str(z),
                   delta_f=f_direct, delta_f_closed=f_closed, delta_X=x_direct,
                   delta_X_closed=x_closed)


# ---------------------------------------------------------------------------
# measure criteria and moments


def _coeff_norm_nonarch(coeffs, ell):
    worst = Fraction(0)
    for c in coeffs:
        if not is_zero(c):
            worst = max(worst, ellAdicUpperBound(c, ell))
    return worst


def _coeff_norm_arch(coeffs, p, bits=128):
    total = None
    for c in coeffs:
        if is_zero(c):
            continue
        iv = archNorm(c, bits)
        total = iv if total is None else total + iv
    if total is None:
        return Fraction(0), Fraction(0)
    return total.a / p, total.b / p


def measureNormCheck(spec, n, place):
    """Sufficient conditions for X_n dz to be a measure at a place ("inf" or a prime)."""
    if spec.symbolic:
        raise ValueError("measure criteria need numeric parameters")
    n = spec.index(n)
    p = spec.p
    if place in ("inf", "infinity", None):
        worst = None
        witness = None
        for m in n.below():
            if m.sigma == 0:
                continue
            for pair in ((m, m), (m, n)):
                lo, hi = _coeff_norm_arch([spec.r(pair[0], pair[1], k) for k in range(p)], p)
                if worst is None or hi > worst.b:
                    worst = _Bound(lo, hi)
                    witness = "alpha_%s,%s" % (str(pair[0]), str(pair[1]))
        a0 = _sum(spec.rn(n, k) for k in range(p)) * Fraction(1, p)
        ok = worst is not None and worst.b < 1 and not on_breakdown(a0)
        return {"verdict": "measure-certified" if ok else "not-certified", "place": "inf",
                "sup_bound": float(worst.b) if worst is not None else 0.0, "witness": witness}
    ell = int(place)
    if any(q in prime_factors(p) for q in prime_factors(ell)):
        raise RamifiedPlace("place %d divides p = %d" % (ell, p))
    worst = Fraction(0)
    witness = None
    for m in n.below():
        b = _coeff_norm_nonarch([spec.r(m, n, k) for k in range(p)], ell)
        if b > worst:
            worst, witness = b, "alpha_%s,%s" % (str(m), str(n))
    ok = worst <= 1
    return {"verdict": "measure-certified" if ok else "not-certified", "place": ell,
            "sup_bound": str(worst), "witness": witness}


class _Bound:
    def __init__(self, a, b):
        self.a, self.b = a, b


def momentSequence(spec, nMax, allow_breakdown=False):
    """X-hat^{*n}(0) for n = 0..nMax from the d = 1 lattice constant terms."""
    if spec.d != 1:
        raise ValueError("moments are defined for a single series")
    p = spec.p
    out = [Fraction(1)]
    for n in range(1, nMax + 1):
        ni = MultiIndex((n,))
        r = [spec.rn(ni, k) for k in range(p)]
        a0 = _sum(r) * Fraction(1, p)
        if on_breakdown(a0):
            if not allow_breakdown:
                raise BreakdownHit(n)
            out.append(Fraction(0))
            continue
        s = Fraction(0)
        for k in range(p):
            for m in range(n):
                c = spec.r(MultiIndex((m,)), ni, k)
                if not is_zero(c):
                    s = s + c * out[m]
        # X-hat_n(0) = -g-hat_n(0) = -beta_n(0)/(1 - alpha_n(0)), beta_n(0) = -s/p
        out.append(div(s * Fraction(1, p), 1 - a0))
    return out
