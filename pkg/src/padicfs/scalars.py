"""Exact scalars: rationals, cyclotomic numbers and symbolic rational functions.

Three tiers, with upward coercion:

* ``Fraction`` (from the standard library) for rationals;
* :class:`Cyclotomic` for elements of Q(zeta_M);
* :class:`SymbolicScalar` for quotients of multivariate polynomials whose
  coefficients are rationals or cyclotomic numbers.

Every arithmetic result is demoted to the smallest tier that holds it, so a
cyclotomic computation that lands in Q comes back as a ``Fraction``.
"""

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
import re

import mpmath


class DivisionByZero(ZeroDivisionError):
    pass


class RamifiedPlace(ValueError):
    pass


class DenominatorVanishes(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# small integer helpers


@lru_cache(maxsize=None)
def prime_factors(n):
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def is_prime(n):
    return n >= 2 and prime_factors(n) == (n,)


@lru_cache(maxsize=None)
def euler_phi(n):
    r = n
    for q in prime_factors(n):
        r = r // q * (q - 1)
    return r


def divisors(n):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _mobius(n):
    fs = prime_factors(n)
    m = 1
    for q in fs:
        if (n // q) % q == 0:
            return 0
        m = -m
    return m


def lcm(a, b):
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def _sparse_divide(num, den):
    """Exact division of integer polynomials (lists, low degree first); den monic."""
    num = list(num)
    d = len(den) - 1
    terms = [(j, c) for j, c in enumerate(den[:-1]) if c]
    q = [0] * (len(num) - d)
    for e in range(len(num) - 1, d - 1, -1):
        c = num[e]
        if c:
            q[e - d] = c
            num[e] = 0
            for j, cj in terms:
                num[e - d + j] -= c * cj
    if any(num[:d]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomicPolynomial(M):
    """Phi_M as a tuple of integer coefficients, constant term first.

    Computed by dividing x^M - 1 successively by Phi_d for the proper
    divisors d of M (which is the same as dividing by their product).
    """
    if M < 1:
        raise ValueError("M must be positive")
    poly = [-1] + [0] * (M - 1) + [1]
    for d in divisors(M)[:-1]:
        poly = _sparse_divide(poly, cyclotomicPolynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _phi_terms(M):
    phi = cyclotomicPolynomial(M)
    return len(phi) - 1, tuple((j, c) for j, c in enumerate(phi[:-1]) if c)


def _reduce_vec(vec, M):
    """Reduce an integer coefficient list modulo Phi_M in place; return length-phi(M) list."""
    d, terms = _phi_terms(M)
    for e in range(len(vec) - 1, d - 1, -1):
        c = vec[e]
        if c:
            vec[e] = 0
            base = e - d
            for j, cj in terms:
                vec[base + j] -= c * cj
    if len(vec) < d:
        vec.extend([0] * (d - len(vec)))
    del vec[d:]
    return vec


@lru_cache(maxsize=None)
def _ramanujan_table(M):
    """Trace of zeta_M^e from Q(zeta_M) down to Q, for e = 0..M-1."""
    out = []
    for e in range(M):
        g = gcd(e, M)
        out.append(sum(_mobius(M // d) * d for d in divisors(g)))
    return tuple(out)


# ---------------------------------------------------------------------------
# the cyclotomic tier


class Cyclotomic:
    """An element of Q(zeta_M) in the power basis 1, zeta, ..., zeta^(phi(M)-1).

    Stored as an integer numerator vector over a positive common denominator.
    Instances are produced through :func:`_make_cyc`, which normalizes and
    demotes rational results to ``Fraction``.
    """

    __slots__ = ("order", "num", "den")

    def __init__(self, order, num, den=1):
        self.order = order
        self.num = tuple(num)
        self.den = den

    # -- basic views
    @property
    def coeffs(self):
        return tuple(Fraction(c, self.den) for c in self.num)

    def nonzero(self):
        return [(i, c) for i, c in enumerate(self.num) if c]

    def lift(self, M):
        """Integer vector (with the same denominator) of self inside Q(zeta_M)."""
        if M == self.order:
            return list(self.num)
        if M % self.order:
            raise ValueError("order %d does not divide %d" % (self.order, M))
        step = M // self.order
        vec = [0] * max(euler_phi(M), step * (len(self.num) - 1) + 1)
        for i, c in enumerate(self.num):
            if c:
                vec[i * step] = c
        return _reduce_vec(vec, M)

    def galois(self, k):
        """The automorphism zeta_M -> zeta_M^k (gcd(k, M) = 1)."""
        M = self.order
        vec = [0] * M
        for i, c in self.nonzero():
            vec[(i * k) % M] += c
        return _make_cyc(M, _reduce_vec(vec, M), self.den)

    def trace(self):
        """Trace from Q(zeta_M) to Q."""
        tab = _ramanujan_table(self.order)
        return Fraction(sum(c * tab[i] for i, c in self.nonzero()), self.den)

    def __repr__(self):
        return "Cyclotomic(%s)" % to_string(self)

    def __str__(self):
        return to_string(self)

    # -- arithmetic
    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.num], self.den)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            d = other.denominator
            num = [c * d for c in self.num]
            num[0] += other.numerator * self.den
            return _make_cyc(self.order, num, self.den * d)
        if isinstance(other, Cyclotomic):
            M = lcm(self.order, other.order)
            a, b = self.lift(M), other.lift(M)
            d1, d2 = self.den, other.den
            g = gcd(d1, d2)
            m1, m2 = d2 // g, d1 // g
            return _make_cyc(M, [x * m1 + y * m2 for x, y in zip(a, b)], d1 * m1)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return Fraction(0)
            return _make_cyc(self.order, [c * other.numerator for c in self.num],
                             self.den * other.denominator)
        if isinstance(other, Cyclotomic):
            M = lcm(self.order, other.order)
            a = self.lift(M)
            b = other.lift(M)
            na = [(i, c) for i, c in enumerate(a) if c]
            nb = [(i, c) for i, c in enumerate(b) if c]
            if len(na) > len(nb):
                na, nb = nb, na
            out = [0] * (2 * euler_phi(M))
            for i, c in na:
                for j, e in nb:
                    out[i + j] += c * e
            return _make_cyc(M, _reduce_vec(out, M), self.den * other.den)
        return NotImplemented

    __rmul__ = __mul__

    def inv(self):
        return _cyc_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inv()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inv() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return False  # normalized cyclotomics are never rational
        if isinstance(other, Cyclotomic):
            if self.order == other.order:
                return self.num == other.num and self.den == other.den
            M = lcm(self.order, other.order)
            return (self.den == other.den and self.lift(M) == other.lift(M))
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        # The normalized trace does not depend on the ambient field, so equal
        # values hash equally even when stored at different orders.
        return hash(self.trace() / euler_phi(self.order))

    def __bool__(self):
        return True


def _make_cyc(M, num, den):
    """Normalize an integer vector over den at order M; demote rationals."""
    num = list(num)
    if den < 0:
        den = -den
        num = [-c for c in num]
    g = reduce(gcd, num, den)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    nz = [i for i, c in enumerate(num) if c]
    if not nz:
        return Fraction(0)
    if nz == [0] or M <= 2:
        return Fraction(num[0], den)
    # descend to subfields Q(zeta_{M/q}) while q^2 | M and the support allows it
    changed = True
    while changed:
        changed = False
        for q in prime_factors(M):
            if M % (q * q) == 0 and all(i % q == 0 for i in nz):
                num = num[::q][:euler_phi(M // q)]
                M //= q
                nz = [i for i, c in enumerate(num) if c]
                changed = True
                break
    if nz == [0]:
        return Fraction(num[0], den)
    return Cyclotomic(M, num, den)


def cyclotomic_from_exponents(M, terms):
    """Build sum(c * zeta_M^e) from an iterable of (e, c) pairs, c rational."""
    den = 1
    items = []
    for e, c in terms:
        c = Fraction(c)
        if c:
            items.append((e % M, c))
            den = lcm(den, c.denominator)
    vec = [0] * M
    for e, c in items:
        vec[e] += c.numerator * (den // c.denominator)
    return _make_cyc(M, _reduce_vec(vec, M), den)


def rootOfUnity(M, k):
    """The canonical image of exp(2 pi i k / M)."""
    if M < 1:
        raise ValueError("M must be positive")
    k %= M
    g = gcd(k, M)
    M //= g
    k //= g
    if M == 1:
        return Fraction(1)
    if M == 2:
        return Fraction(-1)
    vec = [0] * M
    vec[k] = 1
    return _make_cyc(M, _reduce_vec(vec, M), 1)


def _poly_divmod_frac(a, b):
    """Division of Fraction polynomials (low degree first)."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for e in range(len(a) - 1, db - 1, -1):
        c = a[e]
        if c:
            f = c / lead
            q[e - db] = f
            for j, bj in enumerate(b):
                if bj:
                    a[e - db + j] -= f * bj
    r = a[:db] if db > 0 else [Fraction(0)]
    while len(r) > 1 and not r[-1]:
        r.pop()
    return q, r


def _trim(p):
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _cyc_inverse(x):
    """Inverse in Q(zeta_M) by the extended Euclidean algorithm against Phi_M."""
    M = x.order
    phi = [Fraction(c) for c in cyclotomicPolynomial(M)]
    a = _trim([Fraction(c) for c in x.num])
    # invariant: r_i = s_i * a (mod phi)
    r0, r1 = phi, a
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1 or r1[0] == 0:
        if len(r1) == 1 and r1[0] == 0:
            raise DivisionByZero("zero divisor in Q(zeta_%d)" % M)
        q, r = _poly_divmod_frac(r0, r1)
        # s2 = s0 - q*s1
        prod = [Fraction(0)] * (len(q) + len(s1) - 1)
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        n = max(len(s0), len(prod))
        s2 = [(s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0) for i in range(n)]
        r0, r1 = r1, r
        s0, s1 = s1, _trim(s2)
    c = r1[0]
    coeffs = [v / c for v in s1]
    # reduce modulo phi and rebuild
    _, rem = _poly_divmod_frac(coeffs, phi) if len(coeffs) >= len(phi) else (None, coeffs)
    den = 1
    for v in rem:
        den = lcm(den, v.denominator)
    vec = [int(v * den) for v in rem]
    # x = num/x.den and num * s = 1, so 1/x = x.den * s
    return _make_cyc(M, [v * x.den for v in vec], den)


# ---------------------------------------------------------------------------
# multivariate polynomials over Q(zeta)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _mono_div(m1, m2):
    """m1 / m2 if it is a monomial, else None."""
    d = dict(m1)
    for v, e in m2:
        if d.get(v, 0) < e:
            return None
        d[v] -= e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class Poly:
    """A multivariate polynomial: mapping monomial -> nonzero coefficient.

    A monomial is a sorted tuple of (variable name, positive exponent).
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @staticmethod
    def const(c):
        return Poly({(): c})

    @staticmethod
    def var(name):
        return Poly({((name, 1),): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or list(self.terms) == [()]

    def const_value(self):
        return self.terms.get((), Fraction(0))

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s != 0:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly(t)

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    def scale(self, c):
        return Poly({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _key(self, m, names):
        d = dict(m)
        return tuple(d.get(v, 0) for v in names)

    def leading(self, names=None):
        names = names or self.variables()
        m = max(self.terms, key=lambda mm: self._key(mm, names))
        return m, self.terms[m]

    def monomial_content(self):
        """The gcd monomial of all terms."""
        it = iter(self.terms)
        first = dict(next(it))
        for m in it:
            d = dict(m)
            for v in list(first):
                first[v] = min(first[v], d.get(v, 0))
        return tuple(sorted((v, e) for v, e in first.items() if e))

    def div_monomial(self, mono):
        return Poly({_mono_div(m, mono): c for m, c in self.terms.items()})

    def divexact(self, other):
        """Quotient self/other if other divides self exactly, else None."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        names = sorted(set(self.variables()) | set(other.variables()))
        lm, lc = other.leading(names)
        rem = Poly(self.terms)
        quot = {}
        steps = 0
        while not rem.is_zero():
            m, c = rem.leading(names)
            qm = _mono_div(m, lm)
            if qm is None:
                return None
            qc = c / lc
            quot[qm] = quot.get(qm, 0) + qc
            rem = rem - other * Poly({qm: qc})
            steps += 1
            if steps > 100000:
                return None
        return Poly(quot)

    def evaluate(self, values):
        """Substitute variables (mapping name -> scalar or Poly-compatible scalar)."""
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                if v in values:
                    term = term * _pow(values[v], e)
                else:
                    term = term * _pow(SymbolicScalar.var(v), e)
            total = total + term
        return total


def _pow(x, e):
    r = Fraction(1)
    for _ in range(e):
        r = r * x
    return r


# ---------------------------------------------------------------------------
# the symbolic tier


class SymbolicScalar:
    """num/den with num, den multivariate polynomials over Q(zeta).

    Equality is decided by cross-multiplication. Fractions are tidied by
    constant and monomial content and by exact trial division, which never
    changes the value.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num
        self.den = den if den is not None else Poly.const(Fraction(1))

    @staticmethod
    def var(name):
        return SymbolicScalar(Poly.var(name))

    def variables(self):
        return sorted(set(self.num.variables()) | set(self.den.variables()))

    def __repr__(self):
        return "SymbolicScalar(%s)" % to_string(self)

    def __str__(self):
        return to_string(self)

    def __neg__(self):
        return SymbolicScalar(-self.num, self.den)

    def __add__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return _make_sym(self.num + o.num, self.den)
        q = o.den.divexact(self.den) if not self.den.is_const() else None
        if q is not None:
            return _make_sym(self.num * q + o.num, o.den)
        q = self.den.divexact(o.den) if not o.den.is_const() else None
        if q is not None:
            return _make_sym(self.num + o.num * q, self.den)
        return _make_sym(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        if o.den.is_const() and o.num.is_const():
            return _make_sym(self.num.scale(o.num.const_value()), self.den)
        n1, d2 = self.num, o.den
        n2, d1 = o.num, self.den
        q = n1.divexact(d2) if not d2.is_const() else None
        if q is not None:
            n1, d2 = q, Poly.const(Fraction(1))
        q = n2.divexact(d1) if not d1.is_const() else None
        if q is not None:
            n2, d1 = q, Poly.const(Fraction(1))
        return _make_sym(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise DivisionByZero("division by zero")
        return _make_sym(self.den, self.num)

    def __truediv__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        r = Fraction(1)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        o = _as_sym(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.den.is_const():
            return hash(self.num)
        return hash("symbolic-quotient")

    def __bool__(self):
        return not self.num.is_zero()

    def subs(self, values):
        """Substitute the variables in ``values``; raises DenominatorVanishes."""
        d = self.den.evaluate(values)
        if is_zero(d):
            raise DenominatorVanishes("denominator vanishes under substitution")
        return div(self.num.evaluate(values), d)


def _as_sym(x):
    if isinstance(x, SymbolicScalar):
        return x
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, (Fraction, Cyclotomic)):
        return SymbolicScalar(Poly.const(x))
    return None


def _make_sym(num, den):
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return Fraction(0)
    if not den.is_const():
        mc = den.monomial_content()
        if mc:
            nc = num.monomial_content()
            common = tuple(sorted((v, min(e, dict(nc).get(v, 0))) for v, e in mc))
            common = tuple((v, e) for v, e in common if e)
            if common:
                num = num.div_monomial(common)
                den = den.div_monomial(common)
    if not den.is_const():
        q = num.divexact(den)
        if q is not None:
            num, den = q, Poly.const(Fraction(1))
    if den.is_const():
        c = den.const_value()
        if c != 1:
            num = num.scale(1 / c if isinstance(c, Fraction) else c.inv())
        den = Poly.const(Fraction(1))
        if num.is_const():
            return num.const_value()
        return SymbolicScalar(num, den)
    # make the denominator's leading coefficient 1
    _, lc = den.leading()
    if lc != 1:
        li = 1 / lc if isinstance(lc, Fraction) else lc.inv()
        num = num.scale(li)
        den = den.scale(li)
    return SymbolicScalar(num, den)


def symbol(name):
    return SymbolicScalar.var(name)


# ---------------------------------------------------------------------------
# generic helpers used throughout the package


def coerce(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Cyclotomic, SymbolicScalar)):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError("cannot coerce %r to an exact scalar" % (x,))


def is_zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, Cyclotomic):
        return False
    if isinstance(x, SymbolicScalar):
        return x.num.is_zero()
    raise TypeError(type(x))


def inv(x):
    x = coerce(x)
    if is_zero(x):
        raise DivisionByZero("inverse of zero")
    if isinstance(x, Fraction):
        return 1 / x
    return x.inv()


def div(x, y):
    return coerce(x) * inv(y)


def fieldArith(op, x, y=None):
    """Named field operation: 'add', 'mul', 'neg' or 'inv'."""
    x = coerce(x)
    if op == "add":
        return x + coerce(y)
    if op == "mul":
        return x * coerce(y)
    if op == "neg":
        return -x
    if op == "inv":
        return inv(x)
    raise ValueError("unknown operation %r" % op)


def tier(x):
    if isinstance(x, (int, Fraction)):
        return "rational"
    if isinstance(x, Cyclotomic):
        return "cyclotomic"
    return "symbolic"


def galois(x, k, M):
    """Apply zeta_M -> zeta_M^k to a scalar (coefficientwise on symbolic values)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Cyclotomic):
        L = lcm(x.order, M)
        # extend k to a unit mod L that is congruent to k mod M
        kk = k
        while gcd(kk, L) != 1:
            kk += M
        return x.galois(kk % L) if L == x.order else \
            Cyclotomic(L, x.lift(L), x.den).galois(kk % L)
    if isinstance(x, SymbolicScalar):
        def g(poly):
            return Poly({m: galois(c, k, M) for m, c in poly.terms.items()})
        return _make_sym(g(x.num), g(x.den))
    raise TypeError(type(x))


def substitute(x, values):
    """Substitute symbol values into any scalar (non-symbolic values pass through)."""
    if isinstance(x, SymbolicScalar):
        return x.subs({k: coerce(v) for k, v in values.items()})
    return x


def variables_of(x):
    return x.variables() if isinstance(x, SymbolicScalar) else []


# ---------------------------------------------------------------------------
# valuations and absolute values


def ellAdicValuation(x, ell):
    """v_ell(x) for rational x; returns math.inf for 0."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    n, d = x.numerator, x.denominator
    while n % ell == 0:
        n //= ell
        v += 1
    while d % ell == 0:
        d //= ell
        v -= 1
    return v


def ellAdicUpperBound(x, ell):
    """ell^(-min_k v_ell(c_k)) over power-basis coefficients; exact for rationals."""
    x = coerce(x)
    if isinstance(x, Fraction):
        if x == 0:
            return Fraction(0)
        return Fraction(ell) ** (-ellAdicValuation(x, ell))
    if isinstance(x, Cyclotomic):
        if x.order % ell == 0:
            raise RamifiedPlace("place %d divides the order %d" % (ell, x.order))
        v = min(ellAdicValuation(c, ell) for c in x.coeffs if c)
        return Fraction(ell) ** (-v)
    raise TypeError("ell-adic bounds need numeric scalars")


def archNorm(x, precisionBits=128):
    """Interval enclosing |sigma(x)| with sigma(zeta_M) = exp(2 pi i / M)."""
    if precisionBits < 53:
        raise ValueError("precisionBits must be at least 53")
    x = coerce(x)
    iv = mpmath.iv
    old = iv.prec
    iv.prec = precisionBits + 10
    try:
        if isinstance(x, Fraction):
            v = iv.mpf(x.numerator) / x.denominator
            return abs(v) if x >= 0 else -v
        if not isinstance(x, Cyclotomic):
            raise TypeError("archNorm needs a numeric scalar")
        M = x.order
        re_ = iv.mpf(0)
        im_ = iv.mpf(0)
        for i, c in x.nonzero():
            ang = 2 * iv.pi * i / M
            re_ += c * iv.cos(ang)
            im_ += c * iv.sin(ang)
        r = iv.sqrt(re_ * re_ + im_ * im_) / x.den
        lo = max(r.a, iv.mpf(0).a)
        return iv.mpf([lo, r.b])
    finally:
        iv.prec = old


def to_complex(x, dps=30):
    """mpmath complex value of a numeric scalar under the canonical embedding."""
    x = coerce(x)
    with mpmath.workdps(dps):
        if isinstance(x, Fraction):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
        M = x.order
        s = mpmath.mpc(0)
        for i, c in x.nonzero():
            s += c * mpmath.expjpi(mpmath.mpf(2 * i) / M)
        return s / x.den


# ---------------------------------------------------------------------------
# text grammar


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<zeta>zeta)|(?P<id>[A-Za-z_][A-Za-z0-9_]*(?:\{[0-9,\s]*\})?)"
    r"|(?P<op>[-+*/^()]))")


def _tokenize(s):
    pos, out = 0, []
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError("bad scalar string %r at %d" % (s, pos))
        pos = m.end()
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


class _Parser:
    def __init__(self, s):
        self.toks = _tokenize(s)
        self.i = 0
        self.src = s

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, val=None):
        tok = self.peek()
        if val is not None and tok[1] != val:
            raise ValueError("expected %r in %r" % (val, self.src))
        self.i += 1
        return tok

    def expr(self):
        kind, val = self.peek()
        if val in ("+", "-"):
            self.take()
            left = self.term()
            if val == "-":
                left = -left
        else:
            left = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.power()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            right = self.power()
            left = left * right if op == "*" else div(left, right)
        return left

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise ValueError("integer exponent expected in %r" % self.src)
            e = int(val)
            if isinstance(base, tuple):   # zeta(M)^k
                return rootOfUnity(base[1], -e if neg else e)
            r = base ** e if not isinstance(base, Fraction) else base ** e
            return inv(r) if neg else r
        if isinstance(base, tuple):
            return rootOfUnity(base[1], 1)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Fraction(int(val))
        if kind == "zeta":
            self.take("(")
            k2, m = self.take()
            if k2 != "num":
                raise ValueError("zeta needs an integer order")
            self.take(")")
            return ("zeta", int(m))
        if kind == "id":
            return SymbolicScalar.var(re.sub(r"\s", "", val))
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        raise ValueError("unexpected token %r in %r" % (val, self.src))


def parse_scalar(s):
    """Parse the scalar grammar: integers, a/b, zeta(M)^k, symbols, + - * / ^ ( )."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    p = _Parser(str(s))
    v = p.expr()
    if p.i != len(p.toks):
        raise ValueError("trailing input in %r" % s)
    if isinstance(v, tuple):
        v = rootOfUnity(v[1], 1)
    return coerce(v)


def _frac_str(c):
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def _cyc_str(x):
    parts = []
    for i, c in x.nonzero():
        c = Fraction(c, x.den)
        if i == 0:
            parts.append(_frac_str(c))
            continue
        z = "zeta(%d)" % x.order + ("^%d" % i if i != 1 else "")
        if c == 1:
            parts.append(z)
        elif c == -1:
            parts.append("-" + z)
        else:
            parts.append("%s*%s" % (_frac_str(c), z))
    return _join(parts)


def _join(parts):
    out = parts[0]
    for p in parts[1:]:
        out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return out


def _poly_str(poly):
    names = poly.variables()

    def key(m):
        d = dict(m)
        return tuple(d.get(v, 0) for v in names)

    parts = []
    for m in sorted(poly.terms, key=key):
        c = poly.terms[m]
        mono = "*".join(v if e == 1 else "%s^%d" % (v, e) for v, e in m)
        if not mono:
            parts.append(to_string(c))
            continue
        if isinstance(c, Fraction):
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (_frac_str(c), mono))
        else:
            parts.append("(%s)*%s" % (to_string(c), mono))
    return _join(parts)


def to_string(x):
    """Serialize a scalar in the same grammar that :func:`parse_scalar` reads."""
    x = coerce(x)
    if isinstance(x, Fraction):
        return _frac_str(x)
    if isinstance(x, Cyclotomic):
        return _cyc_str(x)
    if x.den.is_const():
        return _poly_str(x.num)
    return "(%s)/(%s)" % (_poly_str(x.num), _poly_str(x.den))
