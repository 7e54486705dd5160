"""Single F-series: X(p n + j) = a_j X(n) + b_j.

Covers evaluation (at integers and at eventually periodic points), truncations,
M-functions and the kappa factor, the closed-form transform with its two
branches, and the partial-sum identities that tie the transform back to X.
"""

from fractions import Fraction
from functools import lru_cache
import warnings

from .padic import (DualElement, character, truncate, shiftIter, count_digit,
                    epsilonN, as_point)
from .scalars import coerce, is_zero, div, SymbolicScalar, variables_of, substitute, to_string
from .sbfourier import SBFunction, forward, ClosedTransform, partialSum, dual_tree


class SpecError(ValueError):
    pass


class SingularComposite(ArithmeticError):
    pass


class AffineFamily(ArithmeticError):
    pass


class AlphaVanishes(ZeroDivisionError):
    pass


class FrameNotAttached(UserWarning):
    pass


def _one(x):
    return coerce(x) == 1


class AffineSystem:
    """X(p z + j) = a_j X(z) + b_j with no validation; X(0) pinned if possible.

    Derived systems (the g-series of a product) can sit on the breakdown
    locus, so they are kept apart from the validated :class:`FSeriesSpec`.
    """

    def __init__(self, p, a, b, x0=None):
        self.p = p
        self.a = tuple(coerce(v) for v in a)
        self.b = tuple(coerce(v) for v in b)
        self.x0 = coerce(x0) if x0 is not None else None
        self._memo = {}

    def X0(self):
        if self.x0 is not None:
            return self.x0
        if _one(self.a[0]):
            if is_zero(self.b[0]):
                raise AffineFamily("a_0 = 1, b_0 = 0: X(0) is free")
            raise SingularComposite("a_0 = 1, b_0 != 0: X(0) has no solution")
        return div(self.b[0], 1 - self.a[0])

    def is_rational(self):
        return all(isinstance(v, Fraction) for v in self.a + self.b)


class FSeriesSpec(AffineSystem):
    """Parameters a_j, b_j (j < p) of a degree-one F-series, plus optional X(0)."""

    def __init__(self, p, a, b, x0=None):
        if len(a) != p or len(b) != p:
            raise SpecError("need p = %d values of a and of b" % p)
        AffineSystem.__init__(self, p, a, b)
        for v in self.a:
            if is_zero(v):
                raise SpecError("multipliers a_j must be nonzero")
        if _one(self.a[0]):
            if not is_zero(self.b[0]):
                raise SpecError("a_0 = 1 with b_0 != 0: X(0) = X(0) + b_0 has no solution")
            if x0 is None:
                raise SpecError("a_0 = 1, b_0 = 0: X(0) is free and must be given explicitly")
        elif x0 is not None and coerce(x0) != div(self.b[0], 1 - self.a[0]):
            raise SpecError("explicit X(0) is only legal when a_0 = 1 and b_0 = 0")
        self.x0 = coerce(x0) if x0 is not None else None

    @classmethod
    def from_json(cls, d):
        return cls(int(d["p"]), d["a"], d["b"], d.get("x0"))

    def to_json(self):
        out = {"p": self.p, "a": [to_string(v) for v in self.a],
               "b": [to_string(v) for v in self.b]}
        if self.x0 is not None:
            out["x0"] = to_string(self.x0)
        return out

    def is_numeric(self):
        return not any(isinstance(v, SymbolicScalar) for v in self.a + self.b)

    def variables(self):
        names = set()
        for v in self.a + self.b:
            names.update(variables_of(v))
        return sorted(names)

    def subs(self, values):
        x0 = substitute(self.x0, values) if self.x0 is not None else None
        return FSeriesSpec(self.p, [substitute(v, values) for v in self.a],
                           [substitute(v, values) for v in self.b], x0)

    def __repr__(self):
        return "FSeriesSpec(p=%d, a=%s, b=%s)" % (
            self.p, [to_string(v) for v in self.a], [to_string(v) for v in self.b])


# ---------------------------------------------------------------------------
# evaluation


def evalAtNat(spec, m):
    """X(m) for a nonnegative integer m. Memoized per spec, single-session."""
    memo = spec._memo
    if m in memo:
        return memo[m]
    stack = []
    n = m
    while n and n not in memo:
        stack.append(n)
        n //= spec.p
    val = memo[n] if n else spec.X0()
    for n in reversed(stack):
        j = n % spec.p
        val = spec.a[j] * val + spec.b[j]
        memo[n] = val
    if m == 0:
        return val
    return memo[m]


def _composite(spec, digits):
    """(A, B) with H_{d0} o H_{d1} o ... (x) = A x + B."""
    A, B = Fraction(1), Fraction(0)
    for d in digits:
        A, B = A * spec.a[d], A * spec.b[d] + B
    return A, B


def evalAtPeriodic(spec, z):
    """X(z) at an eventually periodic z: fixed point of the period's composite."""
    z = as_point(spec.p, z)
    if z.per == (0,):
        tail = spec.X0()
    else:
        A, B = _composite(spec, z.per)
        if A == 1:
            if is_zero(B):
                raise AffineFamily("period composite is the identity; X is not pinned down")
            raise SingularComposite("period composite x -> x + B has no fixed point")
        tail = div(B, 1 - A)
    A, B = _composite(spec, z.pre)
    return A * tail + B


def evaluate(spec, z):
    """X at an integer or at an eventually periodic point."""
    if isinstance(z, int) and z >= 0:
        return evalAtNat(spec, z)
    z = as_point(spec.p, z)
    if z.is_natural():
        return evalAtNat(spec, truncate(z, len(z.pre)))
    return evalAtPeriodic(spec, z)


def truncation(spec, N):
    """X_N(z) = X([z]_{p^N}) as an SBFunction."""
    return SBFunction(spec.p, N, [evalAtNat(spec, m) for m in range(spec.p ** N)])


def truncatedTransform(spec, N):
    return forward(truncation(spec, N))


# ---------------------------------------------------------------------------
# M-functions


class MFunction:
    """M_n(z) = prod_{k<n} r_{[theta^k z]_p} with nonzero multipliers r_j."""

    def __init__(self, p, r):
        r = tuple(coerce(v) for v in r)
        if len(r) != p:
            raise SpecError("need p multipliers")
        if any(is_zero(v) for v in r):
            raise SpecError("multipliers must be nonzero")
        self.p, self.r = p, r

    def ratios(self):
        return [div(v, self.r[0]) for v in self.r]


def kappa(M, m):
    """kappa(m) = prod_{j>=1} (r_j / r_0)^{#_{p:j}(m)} for an integer m >= 0."""
    out = Fraction(1)
    ratios = None
    for j in range(1, M.p):
        c = count_digit(m, j, M.p)
        if c:
            if ratios is None:
                ratios = M.ratios()
            out = out * ratios[j] ** c
    return out


def mfunctionEval(M, n, z, check=True):
    """r_0^n kappa([z]_{p^n}); with check=True also the digit product, compared."""
    z = as_point(M.p, z)
    closed = M.r[0] ** n * kappa(M, truncate(z, n)) if n else Fraction(1)
    if check:
        prod = Fraction(1)
        for k in range(n):
            prod = prod * M.r[z.digit(k)]
        if prod != closed:
            raise AssertionError("M-function constructions disagree at n=%d" % n)
    return closed


def spec_kappa(spec, m):
    return kappa(MFunction(spec.p, spec.a), m)


# ---------------------------------------------------------------------------
# alpha, beta, gamma and A-hat


class AlphaData:
    """Trigonometric polynomials alpha, beta, gamma = beta/alpha and A-hat."""

    def __init__(self, p, a, b, cache=2048):
        self.p = p
        self.a = tuple(a)
        self.b = tuple(b)
        self.alpha = lru_cache(maxsize=cache)(self._alpha)
        self.beta = lru_cache(maxsize=cache)(self._beta)
        self.Ahat = lru_cache(maxsize=cache)(self._Ahat)

    def _trig(self, coeffs, t):
        s = Fraction(0)
        for j, c in enumerate(coeffs):
            if not is_zero(c):
                s = s + c * character(-t, j)
        return s * Fraction(1, self.p)

    def _alpha(self, t):
        return self._trig(self.a, t)

    def _beta(self, t):
        return self._trig(self.b, t)

    def gamma(self, t):
        al = self.alpha(t)
        if is_zero(al):
            raise AlphaVanishes("alpha(%s) = 0" % t)
        return div(self.beta(t), al)

    def _Ahat(self, t):
        if t.n == 0:
            return Fraction(1)
        return self.alpha(t) * self.Ahat(t.times_p())

    def alpha0(self):
        return self.alpha(DualElement(self.p, 0, 0))

    def beta0(self):
        return self.beta(DualElement(self.p, 0, 0))


def alphaData(spec):
    return AlphaData(spec.p, spec.a, spec.b)


def on_breakdown(alpha0):
    return coerce(alpha0) == 1


def closedTransform(spec, frame=None):
    """The closed-form transform, branching on whether alpha(0) = 1.

    ``frame`` is an optional certificate from :mod:`padicfs.frames`; the
    identities here are algebraic and hold without one, so a missing frame
    only triggers a :class:`FrameNotAttached` warning (pass ``False`` to
    silence it on purpose).
    """
    if frame is None:
        warnings.warn("closed transform built without a frame certificate", FrameNotAttached,
                      stacklevel=2)
    ct = closed_from_params(spec.p, spec.a, spec.b, name="X-hat")
    ct.spec = spec
    ct.frame = frame or None
    return ct


def closed_from_params(p, a, b, name="X-hat", cache=4096):
    """Closed-form transform for multipliers a and constants b (no validation)."""
    ad = AlphaData(p, a, b, cache=cache)
    a0 = ad.alpha0()
    b0 = ad.beta0()
    breakdown = on_breakdown(a0)
    if breakdown:
        def rule(t):
            if t.n == 0:
                return Fraction(0)
            return (b0 * (-t.n) + ad.gamma(t.scaled_unit())) * ad.Ahat(t)
    else:
        const = div(b0, 1 - a0)

        def rule(t):
            if t.n == 0:
                return const
            return (const + ad.gamma(t.scaled_unit())) * ad.Ahat(t)

    rational = all(isinstance(v, Fraction) for v in tuple(a) + tuple(b))
    ct = ClosedTransform(p, rule, meta={"name": name,
                                        "branch": "alpha0=1" if breakdown else "alpha0!=1",
                                        "alpha0": a0, "beta0": b0},
                         equivariant=rational, cache=cache)
    ct.alpha_data = ad
    ct.breakdown = breakdown
    return ct


def ahat_transform(spec_or_ad):
    ad = spec_or_ad if isinstance(spec_or_ad, AlphaData) else alphaData(spec_or_ad)
    ct = ClosedTransform(ad.p, ad.Ahat, meta={"name": "A-hat"},
                         equivariant=all(isinstance(v, Fraction) for v in ad.a))
    ct.alpha_data = ad
    return ct


# ---------------------------------------------------------------------------
# partial-sum identities


def _report(identity, ok, **kw):
    out = {"identity": identity, "status": "exact-equal" if ok else "counterexample"}
    out.update(kw)
    return out


def aXPartialSum(spec, N, z):
    """Both digit-counting identities for partial sums of A-hat and gamma A-hat."""
    z = as_point(spec.p, z)
    ad = alphaData(spec)
    p = spec.p
    a0 = spec.a[0]
    left = Fraction(0)
    gleft = Fraction(0)
    for t in dual_tree(p, N):
        ch = character(t, z)
        A = ad.Ahat(t)
        left = left + A * ch
        if t.n:
            gleft = gleft + ad.gamma(t.scaled_unit()) * A * ch
    M = MFunction(p, spec.a)
    geo = Fraction(0)
    for n in range(N):
        geo = geo + a0 ** n * kappa(M, truncate(z, n))
    right = a0 ** N * kappa(M, truncate(z, N)) + (1 - ad.alpha0()) * geo
    gright = Fraction(0)
    for n in range(N):
        eps = epsilonN(z, n)
        inner = Fraction(0)
        for j in range(1, p):
            inner = inner + ad.beta(DualElement(p, j, 1)) * eps ** j
        gright = gright + inner * a0 ** n * kappa(M, truncate(z, n))
    ok = left == right and gleft == gright
    return _report("A-hat partial sums", ok, N=N, z=str(z), value=left, closed=right,
                   gamma_value=gleft, gamma_closed=gright)


def tildeX(ct, N, z, method="direct"):
    """X-tilde_N(z): the N-th partial Fourier sum of the closed transform."""
    return partialSum(ct, N, z, method=method)


def tildeRecurrence(spec, N, z, ct=None):
    """X~_N(z) = a_d X~_{N-1}(theta z) + b_d - [alpha(0)=1] beta(0) a_0^N kappa([z]_{p^N})."""
    ct = ct or closedTransform(spec, frame=False)
    z = as_point(spec.p, z)
    ad = ct.alpha_data
    d = z.digit(0)
    left = tildeX(ct, N, z)
    prev = tildeX(ct, N - 1, shiftIter(z, 1))
    corr = Fraction(0)
    if on_breakdown(ad.alpha0()):
        corr = ad.beta0() * spec.a[0] ** N * spec_kappa(spec, truncate(z, N))
    right = spec.a[d] * prev + spec.b[d] - corr
    return _report("X-tilde recurrence", left == right, N=N, z=str(z), left=left, right=right)


def deltaTriangle(spec, N, z, ct=None):
    """Delta_N^(0) via the iterative triangle: (Delta_0(theta^N z) + N c) a_0^N kappa."""
    ct = ct or closedTransform(spec, frame=False)
    z = as_point(spec.p, z)
    ad = ct.alpha_data
    c = ad.beta0() if on_breakdown(ad.alpha0()) else Fraction(0)
    d0 = evaluate(spec, shiftIter(z, N)) - ct.coeff(DualElement(spec.p, 0, 0))
    return (d0 + N * c) * spec.a[0] ** N * spec_kappa(spec, truncate(z, N))


def deltaDirect(spec, N, z, ct=None, method="direct"):
    ct = ct or closedTransform(spec, frame=False)
    z = as_point(spec.p, z)
    return evaluate(spec, z) - tildeX(ct, N, z, method=method)


def deltaN(spec, N, m, z, ct=None, method="direct"):
    """Delta_N^(m){X}(z) = X(theta^m z) - X~_N(theta^m z), both ways; returns the value."""
    ct = ct or closedTransform(spec, frame=False)
    y = shiftIter(as_point(spec.p, z), m)
    direct = deltaDirect(spec, N, y, ct, method=method)
    tri = deltaTriangle(spec, N, y, ct)
    if direct != tri:
        raise AssertionError("Delta paths disagree at N=%d: %s vs %s" % (N, direct, tri))
    return direct
