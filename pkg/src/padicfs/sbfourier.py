"""Locally constant functions on Z_p and their exact Fourier transforms.

An :class:`SBFunction` at level N is a list of p^N values, one per residue
class mod p^N. Its transform is a :class:`FourierTable` supported on
|t|_p <= p^N. Distributions are anything with a ``coeff(t)`` method, either a
finite table or a closed-form rule (see :class:`ClosedTransform`).

Exact transforms of rational data have a useful symmetry: if t has order d
in Q/Z and k is a unit mod d, then phi_hat(k t) is the image of phi_hat(t)
under zeta_d -> zeta_d^k. Several routines below first check that symmetry
entry by entry and then replace a sum over a Galois orbit by a field trace.
This is what keeps level 4 at p = 6 (1296 residues, coefficients in
Q(zeta_1296)) within reach. The plain double sums remain as the fallback and
as the cross-check in the tests.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .padic import (DualElement, PAdicInt, dual_range, character, truncate, as_point,
                    shiftIter)
from .scalars import (Cyclotomic, SymbolicScalar, Poly, _make_cyc, _reduce_vec,
                      _ramanujan_table, coerce, is_zero, lcm, galois,
                      rootOfUnity)

LEVEL_CAP = 4096


class LevelTooLarge(ValueError):
    pass


def _check_level(p, N):
    if p ** N > LEVEL_CAP:
        raise LevelTooLarge("p^N = %d exceeds the level cap %d" % (p ** N, LEVEL_CAP))


# ---------------------------------------------------------------------------
# functions


class SBFunction:
    """A function on Z_p that is constant on residue classes mod p^N."""

    def __init__(self, p, N, values):
        _check_level(p, N)
        values = [coerce(v) for v in values]
        if len(values) != p ** N:
            raise ValueError("need %d values, got %d" % (p ** N, len(values)))
        self.p, self.N, self.values = p, N, values

    @classmethod
    def from_callable(cls, p, N, f):
        return cls(p, N, [f(m) for m in range(p ** N)])

    @classmethod
    def constant(cls, p, c, N=0):
        return cls(p, N, [c] * p ** N)

    @classmethod
    def indicator(cls, p, n, k, N=None):
        """[z = k mod p^n], optionally presented at a higher level N."""
        N = n if N is None else N
        M = p ** n
        return cls(p, N, [1 if m % M == k % M else 0 for m in range(p ** N)])

    def __call__(self, z):
        if isinstance(z, PAdicInt):
            return self.values[truncate(z, self.N)]
        return self.values[z % self.p ** self.N]

    def lift(self, N):
        if N < self.N:
            raise ValueError("cannot lower the level")
        M = self.p ** self.N
        return SBFunction(self.p, N, [self.values[m % M] for m in range(self.p ** N)])

    def levelLift(self, N):
        return self.lift(N)

    def _common(self, other):
        N = max(self.N, other.N)
        return self.lift(N), other.lift(N)

    def __eq__(self, other):
        if not isinstance(other, SBFunction) or other.p != self.p:
            return NotImplemented
        a, b = self._common(other)
        return all(x == y for x, y in zip(a.values, b.values))

    def __add__(self, other):
        a, b = self._common(other)
        return SBFunction(self.p, a.N, [x + y for x, y in zip(a.values, b.values)])

    def __sub__(self, other):
        a, b = self._common(other)
        return SBFunction(self.p, a.N, [x - y for x, y in zip(a.values, b.values)])

    def scale(self, c):
        c = coerce(c)
        return SBFunction(self.p, self.N, [c * v for v in self.values])

    def translate(self, a):
        """z -> phi(z + a) for an integer a."""
        M = self.p ** self.N
        return SBFunction(self.p, self.N, [self.values[(m + a) % M] for m in range(M)])

    def to_json(self):
        from .scalars import to_string
        return {"p": self.p, "N": self.N, "values": [to_string(v) for v in self.values]}

    def __repr__(self):
        return "SBFunction(p=%d, N=%d)" % (self.p, self.N)


def pointwiseProduct(phi, psi):
    a, b = phi._common(psi)
    return SBFunction(phi.p, a.N, [x * y for x, y in zip(a.values, b.values)])


def haarIntegral(phi):
    """phi_hat(0) = p^-N * sum of the values."""
    s = Fraction(0)
    for v in phi.values:
        s = s + v
    return s * Fraction(1, phi.p ** phi.N)


# ---------------------------------------------------------------------------
# tables


class FourierTable:
    """A finitely supported coefficient function on the dual group.

    ``channels`` optionally records a decomposition sum_c u_c * F_c with each
    F_c the transform of a rational-valued function; it is filled in by
    :func:`forward` and lets :func:`inverse` and :func:`pair` work one rational
    piece at a time.
    """

    equivariant = None   # unknown until checked

    def __init__(self, p, N, entries, channels=None):
        self.p, self.N = p, N
        self.entries = {t: v for t, v in entries.items() if not is_zero(v)}
        for t in self.entries:
            if t.n > N:
                raise ValueError("entry %s outside the declared support" % t)
        self.channels = channels
        self._eq_cache = {}

    def coeff(self, t):
        return self.entries.get(t, Fraction(0))

    __getitem__ = coeff

    def support(self):
        return dual_range(self.p, self.N)

    def __eq__(self, other):
        if not isinstance(other, FourierTable) or self.p != other.p:
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.coeff(t) == other.coeff(t) for t in keys)

    def __add__(self, other):
        N = max(self.N, other.N)
        keys = set(self.entries) | set(other.entries)
        return FourierTable(self.p, N, {t: self.coeff(t) + other.coeff(t) for t in keys})

    def scale(self, c):
        c = coerce(c)
        return FourierTable(self.p, self.N, {t: c * v for t, v in self.entries.items()})

    def to_json(self):
        from .scalars import to_string
        return [{"t": str(t), "value": to_string(self.coeff(t))} for t in self.support()]

    @classmethod
    def from_json(cls, p, rows):
        from .scalars import parse_scalar
        entries = {DualElement.parse(p, r["t"]): parse_scalar(r["value"]) for r in rows}
        N = max([t.n for t in entries] + [0])
        return cls(p, N, entries)

    def __repr__(self):
        return "FourierTable(p=%d, N=%d, %d nonzero)" % (self.p, self.N, len(self.entries))


def haar(p):
    """The Haar distribution: transform 1_0."""
    return FourierTable(p, 0, {DualElement(p, 0, 0): Fraction(1)})


def single_entry(p, t, value):
    return FourierTable(p, t.n, {t: coerce(value)})


# ---------------------------------------------------------------------------
# orbit bookkeeping


def exact_order(t):
    """Order d of t in Q/Z, and the unit u with t = u/d."""
    if t.n == 0:
        return 1, 0
    M = t.p ** t.n
    g = gcd(t.k, M)
    return M // g, t.k // g


@lru_cache(maxsize=None)
def orbit_blocks(p, N):
    """Group the t with |t|_p <= p^N by exact order d: d -> [(unit u, t)]."""
    blocks = {}
    for t in dual_range(p, N):
        d, u = exact_order(t)
        blocks.setdefault(d, []).append((u, t))
    out = {}
    for d, items in blocks.items():
        items.sort(key=lambda it: it[0])
        out[d] = tuple(items)
    return out


def _rep(items):
    for u, t in items:
        if u == 1 or len(items) == 1:
            return t
    raise AssertionError("orbit without representative")


def block_is_equivariant(T, d, items):
    """True when T(u/d) = sigma_u(T(1/d)) for every unit u mod d.

    The verdict is cached on tables, since pairing and convolution ask for the
    same block many times.
    """
    cache = getattr(T, "_eq_cache", None)
    if cache is not None and d in cache:
        return cache[d]
    ok = _check_block(T, d, items)
    if cache is not None:
        cache[d] = ok
    return ok


def _check_block(T, d, items):
    if d <= 2:
        return True
    base = T.coeff(_rep(items))
    if not _in_field(base, d):
        return False
    for u, t in items:
        v = T.coeff(t)
        if not _in_field(v, d):
            return False
        if u != 1 and v != galois(base, u, d):
            return False
    return True


def _in_field(x, d):
    """x is a number lying in Q(zeta_d) as stored."""
    if isinstance(x, Fraction):
        return True
    return isinstance(x, Cyclotomic) and d % x.order == 0


def _trace_times_root(x, d, z):
    """Tr_{Q(zeta_d)/Q}(x * zeta_d^z) for x rational or cyclotomic."""
    if d == 1:
        return x
    tab = _ramanujan_table(d)
    if isinstance(x, Fraction):
        return x * tab[z % d]
    vec = Cyclotomic(d, x.lift(d), x.den) if x.order != d else x
    s = 0
    for i, c in vec.nonzero():
        s += c * tab[(i + z) % d]
    return Fraction(s, vec.den)


def _field_trace(x, d):
    return _trace_times_root(x, d, 0)


# ---------------------------------------------------------------------------
# forward transform


def _rational_forward(p, N, values):
    """Transform of a Fraction-valued level-N function, by folding per order."""
    M = p ** N
    D = 1
    for v in values:
        D = lcm(D, v.denominator)
    ints = [v.numerator * (D // v.denominator) for v in values]
    entries = {}
    for d, items in orbit_blocks(p, N).items():
        fold = [0] * d
        for m, v in enumerate(ints):
            if v:
                fold[m % d] += v
        for u, t in items:
            if d == 1:
                entries[t] = Fraction(fold[0], D * M)
                continue
            vec = [0] * d
            for j, v in enumerate(fold):
                if v:
                    vec[(-u * j) % d] += v
            entries[t] = _make_cyc(d, _reduce_vec(vec, d), D * M)
    return FourierTable(p, N, entries)


def _channel_split(values):
    """Split values into rational channels: list of (unit u_c, rational values)."""
    if all(isinstance(v, Fraction) for v in values):
        return [(Fraction(1), values)]
    if any(isinstance(v, SymbolicScalar) and not v.den.is_const() for v in values):
        return None
    L = 1
    for v in values:
        for c in _coeff_list(v):
            if isinstance(c, Cyclotomic):
                L = lcm(L, c.order)
    keys = {}
    n = len(values)
    for m, v in enumerate(values):
        for mono, c in _mono_items(v):
            if isinstance(c, Cyclotomic):
                vec = c.lift(L)
                for i, a in enumerate(vec):
                    if a:
                        keys.setdefault((mono, i), [Fraction(0)] * n)[m] += Fraction(a, c.den)
            elif c:
                keys.setdefault((mono, 0), [Fraction(0)] * n)[m] += c
    out = []
    for (mono, i), vals in sorted(keys.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
        u = rootOfUnity(L, i) if L > 1 else Fraction(1)
        if mono:
            u = SymbolicScalar(Poly({mono: u}))
        out.append((u, vals))
    return out


def _coeff_list(v):
    if isinstance(v, SymbolicScalar):
        return list(v.num.terms.values())
    return [v]


def _mono_items(v):
    if isinstance(v, SymbolicScalar):
        return list(v.num.terms.items())
    return [((), v)]


def _direct_forward(phi):
    p, N = phi.p, phi.N
    M = p ** N
    entries = {}
    for t in dual_range(p, N):
        s = Fraction(0)
        for m, v in enumerate(phi.values):
            if not is_zero(v):
                s = s + v * character(-t, m)
        entries[t] = s * Fraction(1, M)
    return FourierTable(p, N, entries)


def forward(phi):
    """phi_hat(t) = p^-N sum_m phi(m) e^{-2 pi i {t m}_p} on |t|_p <= p^N."""
    split = _channel_split(phi.values)
    if split is None:
        return _direct_forward(phi)
    if len(split) == 1 and split[0][0] == 1:
        T = _rational_forward(phi.p, phi.N, split[0][1])
        T.channels = [(Fraction(1), T)]
        return T
    channels = [(u, _rational_forward(phi.p, phi.N, vals)) for u, vals in split]
    entries = {}
    for t in dual_range(phi.p, phi.N):
        s = Fraction(0)
        for u, F in channels:
            c = F.coeff(t)
            if not is_zero(c):
                s = s + u * c
        entries[t] = s
    return FourierTable(phi.p, phi.N, entries, channels)


# ---------------------------------------------------------------------------
# inverse transform


def _inverse_rational_table(T):
    """Inverse of a table whose blocks are (mostly) Galois-equivariant."""
    p, N = T.p, T.N
    M = p ** N
    out = [Fraction(0)] * M
    for d, items in orbit_blocks(p, N).items():
        if block_is_equivariant(T, d, items):
            base = T.coeff(_rep(items))
            if is_zero(base):
                continue
            if d <= 2:
                # a single element: the value times (+-1)^z
                contrib = [base * (1 if d == 1 or z % 2 == 0 else -1) for z in range(d)]
            else:
                contrib = [_trace_times_root(base, d, z) for z in range(d)]
        else:
            contrib = [_generic_block(T, d, items, z) for z in range(d)]
        for m in range(M):
            c = contrib[m % d]
            if not is_zero(c):
                out[m] = out[m] + c
    return out


def _generic_block(T, d, items, z):
    s = Fraction(0)
    for u, t in items:
        v = T.coeff(t)
        if not is_zero(v):
            s = s + v * rootOfUnity(d, u * z)
    return s


def inverse(T):
    """phi(z) = sum_t T(t) e^{2 pi i {t z}_p}, as a level-N SBFunction."""
    p, N = T.p, T.N
    if T.channels:
        total = [Fraction(0)] * p ** N
        for u, F in T.channels:
            vals = _inverse_rational_table(F)
            for m, v in enumerate(vals):
                if not is_zero(v):
                    total[m] = total[m] + u * v
        return SBFunction(p, N, total)
    return SBFunction(p, N, _inverse_rational_table(T))


def inverse_direct(T):
    """Reference inverse: the plain double sum over t and z."""
    p, N = T.p, T.N
    vals = []
    for m in range(p ** N):
        s = Fraction(0)
        for t in dual_range(p, N):
            v = T.coeff(t)
            if not is_zero(v):
                s = s + v * character(t, m)
        vals.append(s)
    return SBFunction(p, N, vals)


# ---------------------------------------------------------------------------
# convolution and pairing


def _conv_direct_at(T, U, t, N):
    s = Fraction(0)
    for r in dual_range(T.p, N):
        a = T.coeff(r)
        if is_zero(a):
            continue
        b = U.coeff(t - r)
        if not is_zero(b):
            s = s + a * b
    return s


def _convolve_tables(T, U):
    p = T.p
    N = max(T.N, U.N)
    entries = {}
    blocks = orbit_blocks(p, N)
    eq = (all(block_is_equivariant(T, d, it) for d, it in orbit_blocks(p, T.N).items()) and
          all(block_is_equivariant(U, d, it) for d, it in orbit_blocks(p, U.N).items()))
    for d, items in blocks.items():
        if eq and d > 2:
            base = _conv_direct_at(T, U, _rep(items), N)
            for u, t in items:
                entries[t] = base if u == 1 else galois(base, u, d)
        else:
            for u, t in items:
                entries[t] = _conv_direct_at(T, U, t, N)
    return FourierTable(p, N, entries)


def convolve(T, U):
    """(T * U)(t) = sum_s T(s) U(t - s), the transform of the pointwise product."""
    if T.p != U.p:
        raise ValueError("mixed bases")
    if T.channels and U.channels and (len(T.channels) > 1 or len(U.channels) > 1):
        out = None
        for u, F in T.channels:
            for w, G in U.channels:
                piece = _convolve_tables(F, G).scale(u * w)
                out = piece if out is None else out + piece
        return out
    return _convolve_tables(T, U)


def convolve_direct(T, U):
    p = T.p
    N = max(T.N, U.N)
    return FourierTable(p, N, {t: _conv_direct_at(T, U, t, N) for t in dual_range(p, N)})


def _pair_rational(F, mu, N):
    """sum_t F(t) mu(-t) where F is a table at level N."""
    p = F.p
    s = Fraction(0)
    mu_is_table = isinstance(mu, FourierTable)
    for d, items in orbit_blocks(p, N).items():
        if d > 2 and mu_is_table and block_is_equivariant(F, d, items) and \
                _neg_block_equivariant(mu, d, items):
            t0 = _rep(items)
            a = F.coeff(t0)
            b = mu.coeff(-t0)
            if not is_zero(a) and not is_zero(b):
                s = s + _field_trace(a * b, d)
        else:
            for u, t in items:
                a = F.coeff(t)
                if not is_zero(a):
                    b = mu.coeff(-t)
                    if not is_zero(b):
                        s = s + a * b
    return s


def _neg_block_equivariant(mu, d, items):
    # -t runs over the same orbit, and sigma_u commutes with sigma_{-1}
    return block_is_equivariant(mu, d, items)


def pair(mu, phi):
    """<d mu, phi> = sum_t phi_hat(t) mu_hat(-t) over the support of phi_hat."""
    T = forward(phi) if isinstance(phi, SBFunction) else phi
    if T.channels and isinstance(mu, FourierTable) and mu.channels:
        s = Fraction(0)
        for u, F in T.channels:
            for w, G in mu.channels:
                v = _pair_rational(F, G, T.N)
                if not is_zero(v):
                    s = s + u * w * v
        return s
    if T.channels:
        s = Fraction(0)
        for u, F in T.channels:
            v = _pair_rational(F, mu, T.N)
            if not is_zero(v):
                s = s + u * v
        return s
    return _pair_rational(T, mu, T.N)


def pair_direct(mu, phi):
    T = forward(phi) if isinstance(phi, SBFunction) else phi
    s = Fraction(0)
    for t in dual_range(T.p, T.N):
        a = T.coeff(t)
        if not is_zero(a):
            b = mu.coeff(-t)
            if not is_zero(b):
                s = s + a * b
    return s


# ---------------------------------------------------------------------------
# Dirichlet kernel and partial sums


def dirichletKernel(p, N):
    """D_N(z) = p^N [z = 0 mod p^N]."""
    M = p ** N
    return SBFunction(p, N, [M if m == 0 else 0 for m in range(M)])


def dual_tree(p, N):
    """All t with |t|_p <= p^N in depth-first order (parents before children)."""
    yield DualElement(p, 0, 0)
    if N == 0:
        return
    stack = [DualElement(p, j, 1) for j in range(p - 1, 0, -1)]
    while stack:
        t = stack.pop()
        yield t
        if t.n < N:
            for j in range(p - 1, -1, -1):
                stack.append(t.over_p(1, j))


def partialSum(mu, N, z, method="direct"):
    """sum_{|t|_p <= p^N} mu_hat(t) e^{2 pi i {t z}_p}.

    ``method`` is "direct" (term by term), "dirichlet" (pairing against the
    translated Dirichlet kernel) or "orbit" (one field trace per Galois orbit;
    only for rules declared Galois-equivariant with numeric values).
    """
    p = mu.p
    z = as_point(p, z)
    if method == "direct":
        s = Fraction(0)
        for t in dual_tree(p, N):
            c = mu.coeff(t)
            if not is_zero(c):
                s = s + c * character(t, z)
        return s
    if method == "dirichlet":
        M = p ** N
        zz = truncate(z, N)
        kernel = SBFunction(p, N, [M if m == zz else 0 for m in range(M)])
        return pair_direct(mu, kernel)
    if method == "orbit":
        if not getattr(mu, "equivariant", False):
            raise ValueError("orbit summation needs a Galois-equivariant rule")
        zz = truncate(z, N)
        s = Fraction(0)
        for d, items in orbit_blocks(p, N).items():
            t0 = _rep(items)
            c = mu.coeff(t0)
            if is_zero(c):
                continue
            if d <= 2:
                s = s + c * (1 if d == 1 or zz % 2 == 0 else -1)
            else:
                s = s + _trace_times_root(c, d, zz * 1)
        return s
    raise ValueError("unknown method %r" % method)


# ---------------------------------------------------------------------------
# identities on coefficient rules


def adjointResum(fhat, ghat, r, N):
    """Check sum_{|t|<=p^N} f(t) g(p^r t) = sum_{|t|<=p^(N-r)} sum_{|s|<=p^r} f((t+s)/p^r) g(t)."""
    p = fhat.p
    left = Fraction(0)
    for t in dual_range(p, N):
        a = fhat.coeff(t)
        if not is_zero(a):
            left = left + a * ghat.coeff(t.times_p(r))
    right = Fraction(0)
    for t in dual_range(p, N - r):
        g = ghat.coeff(t)
        if is_zero(g):
            continue
        inner = Fraction(0)
        for j in range(p ** r):
            inner = inner + fhat.coeff(t.over_p(r, j))
        right = right + inner * g
    return {"identity": "adjoint resummation", "r": r, "N": N,
            "left": left, "right": right, "status": _status(left == right)}


def _status(ok):
    return "exact-equal" if ok else "counterexample"


def shiftTransform(chihat, q, n, N, z):
    """Both sides of the shift identity for the multipliers q_0..q_{p-1}."""
    p = chihat.p
    q = [coerce(c) for c in q]
    z = as_point(p, z)
    left = Fraction(0)
    for t in dual_range(p, N):
        c = chihat.coeff(t.times_p(n))
        if is_zero(c):
            continue
        prod = Fraction(1)
        for k in range(n):
            pk = t.times_p(k)
            inner = Fraction(0)
            for j, qj in enumerate(q):
                inner = inner + qj * character(-pk, j)
            prod = prod * inner * Fraction(1, p)
        left = left + c * prod * character(t, z)
    mult = Fraction(1)
    for k in range(n):
        mult = mult * q[z.digit(k)]
    right = mult * partialSum(chihat, N - n, shiftIter(z, n))
    return {"identity": "transforms and shifts", "n": n, "N": N,
            "left": left, "right": right, "status": _status(left == right)}


class ClosedTransform:
    """A coefficient rule t -> scalar with a small cache and metadata.

    ``equivariant`` declares that rule(u t) is the Galois image of rule(t)
    for units u (true when the defining parameters are rational).
    """

    def __init__(self, p, rule, meta=None, equivariant=False, cache=512):
        self.p = p
        self._rule = rule
        self.meta = dict(meta or {})
        self.equivariant = equivariant
        self.coeff = lru_cache(maxsize=cache)(self._eval)

    def _eval(self, t):
        return self._rule(t)

    def __call__(self, t):
        return self.coeff(t)

    def table(self, N):
        return FourierTable(self.p, N, {t: self.coeff(t) for t in dual_tree(self.p, N)})

    def __repr__(self):
        return "ClosedTransform(p=%d, %s)" % (self.p, self.meta.get("name", "rule"))


Distribution = (FourierTable, ClosedTransform)
