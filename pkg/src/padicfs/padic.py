"""Eventually periodic p-adic integers, the shift, digit statistics and characters.

A point of Z_p is stored as a finite preperiod followed by a repeating period
of base-p digits. These are exactly the rationals whose denominator is prime
to p, so every quantity below is an exact rational. Composite p works the same
way: digits are taken in base p directly.
"""

from fractions import Fraction
from math import gcd

from .scalars import rootOfUnity


class DigitOutOfRange(ValueError):
    pass


def _primitive_period(per):
    n = len(per)
    for L in range(1, n + 1):
        if n % L == 0 and per[:L] * (n // L) == per:
            return per[:L]
    return per


class PAdicInt:
    """z = d_0 + d_1 p + ... with digits pre + per + per + ...

    >>> PAdicInt.parse(2, "pre:;per:10").to_rational()
    Fraction(-1, 3)
    """

    __slots__ = ("p", "pre", "per")

    def __init__(self, p, pre=(), per=(0,)):
        if p < 2:
            raise ValueError("base must be at least 2")
        pre, per = list(pre), list(per)
        if not per:
            raise ValueError("period must be nonempty")
        for d in pre + per:
            if not 0 <= d < p:
                raise DigitOutOfRange("digit %r is not < %d" % (d, p))
        per = _primitive_period(per)
        # absorb trailing preperiod digits into the period, greedily from the right
        while pre and pre[-1] == per[-1]:
            per = [pre.pop()] + per[:-1]
        self.p = p
        self.pre = tuple(pre)
        self.per = tuple(per)

    # -- construction
    @classmethod
    def from_int(cls, p, n):
        return cls.from_rational(p, Fraction(n))

    @classmethod
    def from_rational(cls, p, x):
        x = Fraction(x)
        if gcd(x.denominator, p) != 1:
            raise ValueError("%s is not a %d-adic integer" % (x, p))
        digits, seen = [], {}
        while x not in seen:
            seen[x] = len(digits)
            d = (x.numerator * pow(x.denominator, -1, p)) % p
            digits.append(d)
            x = (x - d) / p
        start = seen[x]
        return cls(p, digits[:start], digits[start:])

    @classmethod
    def parse(cls, p, s):
        """Read "pre:d0d1...;per:e0e1..." (digits may be comma separated when p > 10)."""
        s = s.strip()
        if s.lstrip("-").isdigit():
            return cls.from_int(p, int(s))
        if "/" in s and not s.startswith("pre"):
            return cls.from_rational(p, Fraction(s))
        fields = dict(part.split(":", 1) for part in s.split(";"))
        pre = _digits(fields.get("pre", ""))
        per = _digits(fields.get("per", "0"))
        return cls(p, pre, per)

    def __str__(self):
        sep = "," if self.p > 10 else ""
        return "pre:%s;per:%s" % (sep.join(map(str, self.pre)), sep.join(map(str, self.per)))

    def __repr__(self):
        return "PAdicInt(%d, %r, %r)" % (self.p, self.pre, self.per)

    def __eq__(self, other):
        return (isinstance(other, PAdicInt) and self.p == other.p and
                self.pre == other.pre and self.per == other.per)

    def __hash__(self):
        return hash((self.p, self.pre, self.per))

    # -- values
    def digit(self, i):
        if i < len(self.pre):
            return self.pre[i]
        return self.per[(i - len(self.pre)) % len(self.per)]

    def digits(self, n):
        return [self.digit(i) for i in range(n)]

    def is_natural(self):
        return self.per == (0,)

    def to_rational(self):
        p = self.p
        a = sum(d * p ** i for i, d in enumerate(self.pre))
        L = len(self.per)
        b = sum(d * p ** i for i, d in enumerate(self.per))
        return Fraction(a) + Fraction(p ** len(self.pre) * b, 1 - p ** L)

    def __add__(self, other):
        return PAdicInt.from_rational(self.p, self.to_rational() + _rat(other, self.p))

    def __mul__(self, other):
        return PAdicInt.from_rational(self.p, self.to_rational() * _rat(other, self.p))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return PAdicInt.from_rational(self.p, -self.to_rational())

    def __sub__(self, other):
        return self + (-_rat(other, self.p))


def _rat(x, p):
    if isinstance(x, PAdicInt):
        if x.p != p:
            raise ValueError("mixed bases")
        return x.to_rational()
    return Fraction(x)


def _digits(s):
    s = s.strip()
    if not s:
        return []
    if "," in s:
        return [int(t) for t in s.split(",") if t.strip()]
    return [int(c) for c in s]


def as_point(p, z):
    """Coerce an int, Fraction, string or PAdicInt to a PAdicInt in base p."""
    if isinstance(z, PAdicInt):
        return z
    if isinstance(z, str):
        return PAdicInt.parse(p, z)
    return PAdicInt.from_rational(p, Fraction(z))


# ---------------------------------------------------------------------------
# digit operations


def truncate(z, n):
    """[z]_{p^n}: the integer in [0, p^n) congruent to z mod p^n."""
    p = z.p
    return sum(z.digit(i) * p ** i for i in range(n))


def shift(z):
    """theta_p(z) = (z - [z]_p) / p."""
    if z.pre:
        return PAdicInt(z.p, z.pre[1:], z.per)
    return PAdicInt(z.p, (), z.per[1:] + z.per[:1])


def shiftIter(z, m):
    if m <= len(z.pre):
        return PAdicInt(z.p, z.pre[m:], z.per)
    r = (m - len(z.pre)) % len(z.per)
    return PAdicInt(z.p, (), z.per[r:] + z.per[:r])


def int_digits(m, p):
    out = []
    while m:
        out.append(m % p)
        m //= p
    return out


def lambdaP(m, p=2):
    """Number of base-p digits of m (0 for m = 0)."""
    n = 0
    while m:
        m //= p
        n += 1
    return n


def count_digit(m, k, p):
    """#_{p:k}(m) for a nonnegative integer m; for k = 0 only leading digits count."""
    c = 0
    while m:
        if m % p == k:
            c += 1
        m //= p
    return c


def digitCount(z, k, n):
    """#_{p:k}([z]_{p^n})."""
    p = z.p
    if k == 0:
        m = truncate(z, n)
        return lambdaP(m, p) - sum(count_digit(m, j, p) for j in range(1, p))
    return sum(1 for i in range(n) if z.digit(i) == k)


def epsilonN(z, n):
    """epsilon_n(z) = zeta_{p^{n+1}}^{[z]_{p^{n+1}} - [z]_{p^n}}."""
    p = z.p
    return rootOfUnity(p ** (n + 1), truncate(z, n + 1) - truncate(z, n))


class DigitDensities(dict):
    """digit -> density, plus ``cls`` holding the digit-class index."""

    cls = 0


def digit_class(z):
    """0 when the period is [0]; else the smallest nonzero digit of the period."""
    if z.per == (0,):
        return 0
    return min(d for d in z.per if d)


def densities(z):
    L = len(z.per)
    out = DigitDensities({k: Fraction(z.per.count(k), L) for k in range(z.p)})
    out.cls = digit_class(z)
    return out


def spaceChange(z, q):
    """psi_{q,p}: transport the base-p digits of z to base q."""
    for d in set(z.pre) | set(z.per):
        if d >= q:
            raise DigitOutOfRange("digit %d does not fit base %d" % (d, q))
    return PAdicInt(q, z.pre, z.per)


# ---------------------------------------------------------------------------
# the dual group


class DualElement:
    """t = k / p^n in Z[1/p]/Z with p not dividing k (or t = 0)."""

    __slots__ = ("p", "k", "n")

    def __init__(self, p, k, n):
        if n < 0:
            raise ValueError("negative exponent")
        M = p ** n
        k %= M
        while n > 0 and k % p == 0:
            k //= p
            n -= 1
        if n == 0:
            k = 0
        self.p, self.k, self.n = p, k, n

    @classmethod
    def parse(cls, p, s):
        s = s.strip()
        if s == "0":
            return cls(p, 0, 0)
        k, rest = s.split("/")
        if "^" in rest:
            base, e = rest.split("^")
            if int(base) != p:
                raise ValueError("denominator base %s differs from p=%d" % (base, p))
            return cls(p, int(k), int(e))
        d = int(rest)
        n = 0
        while d > 1:
            if d % p:
                raise ValueError("%s is not in Z[1/%d]" % (s, p))
            d //= p
            n += 1
        return cls(p, int(k), n)

    def __str__(self):
        if self.n == 0:
            return "0"
        return "%d/%d^%d" % (self.k, self.p, self.n)

    __repr__ = __str__

    def __eq__(self, other):
        return isinstance(other, DualElement) and (self.p, self.k, self.n) == (other.p, other.k, other.n)

    def __hash__(self):
        return hash((self.p, self.k, self.n))

    def is_zero(self):
        return self.n == 0

    @property
    def vp(self):
        return float("inf") if self.n == 0 else -self.n

    @property
    def abs(self):
        return 0 if self.n == 0 else self.p ** self.n

    def as_fraction(self):
        return Fraction(self.k, self.p ** self.n)

    def __neg__(self):
        return DualElement(self.p, -self.k, self.n)

    def __add__(self, other):
        n = max(self.n, other.n)
        return DualElement(self.p, self.k * self.p ** (n - self.n) + other.k * self.p ** (n - other.n), n)

    def __sub__(self, other):
        return self + (-other)

    def times_p(self, r=1):
        """p^r t."""
        if self.n <= r:
            return DualElement(self.p, 0, 0)
        return DualElement(self.p, self.k, self.n - r)

    def over_p(self, r=1, s=0):
        """(t + s) / p^r as an element of level n + r, with s an integer."""
        return DualElement(self.p, self.k + s * self.p ** self.n, self.n + r)

    def scaled_unit(self):
        """t |t|_p / p = k / p, the digit of t that selects the gamma branch."""
        if self.n == 0:
            return DualElement(self.p, 0, 0)
        return DualElement(self.p, self.k, 1)


def dual_range(p, N):
    """All t with |t|_p <= p^N, ordered by level then numerator."""
    out = [DualElement(p, 0, 0)]
    for n in range(1, N + 1):
        M = p ** n
        out.extend(DualElement(p, k, n) for k in range(M) if k % p)
    return out


def dual_level(p, n):
    if n == 0:
        return [DualElement(p, 0, 0)]
    return [DualElement(p, k, n) for k in range(p ** n) if k % p]


def character(t, z):
    """exp(2 pi i {t z}_p) for t = k/p^n; z a PAdicInt or nonnegative integer."""
    if t.n == 0:
        return Fraction(1)
    M = t.p ** t.n
    zz = truncate(z, t.n) if isinstance(z, PAdicInt) else z % M
    return rootOfUnity(M, t.k * zz)
