"""Collatz-type maps, their numens, cycles and the quadratic-ring example.

A hydra map on Z picks the branch H_j(x) = (aNum_j x + bNum_j) / den_j by the
residue of x mod p. Its numen is the F-series with a_j = aNum_j/den_j and
b_j = bNum_j/den_j. If z is purely periodic in Z_p, the numen's value at z is
a periodic point of the map. It need not be an integer.
"""

from fractions import Fraction
from math import gcd

from .padic import PAdicInt, as_point
from .scalars import coerce, symbol, to_string, SymbolicScalar
from .series import FSeriesSpec, evalAtPeriodic, closedTransform
from .sbfourier import dual_tree


class HydraMapZ:
    """Branches (aNum_j, bNum_j, den_j) for residues j mod p."""

    def __init__(self, p, branches, name=None, window=64):
        if len(branches) != p:
            raise ValueError("need one branch per residue class")
        self.p = p
        self.branches = [tuple(int(v) for v in br) for br in branches]
        self.name = name or "hydra"
        self._check(window)

    @classmethod
    def T(cls, q):
        """The shortened qx+1 map: x/2 on evens, (qx+1)/2 on odds."""
        if q % 2 == 0:
            raise ValueError("q must be odd")
        return cls(2, [(1, 0, 2), (q, 1, 2)], name="T_%d" % q)

    def _check(self, window):
        for z in range(-window, window):
            for j, (a, b, d) in enumerate(self.branches):
                integral = (a * z + b) % d == 0
                if integral != (z % self.p == j):
                    raise ValueError("branch %d integrality fails at %d" % (j, z))

    def residue(self, x):
        x = Fraction(x)
        if gcd(x.denominator, self.p) != 1:
            raise ValueError("%s is not a %d-adic integer" % (x, self.p))
        return (x.numerator * pow(x.denominator, -1, self.p)) % self.p

    def __call__(self, x):
        j = self.residue(x)
        a, b, d = self.branches[j]
        return (a * Fraction(x) + b) / d


class QuadHydra:
    """A hydra on Z[sqrt D]; elements are pairs (a, b) meaning a + b sqrt(D).

    Each branch is (predicate, map) where predicate(a, b) says whether the
    branch applies and map(a, b) returns the image.
    """

    def __init__(self, D, branches, name=None):
        self.D = D
        self.branches = list(branches)
        self.name = name or "quad hydra"

    @classmethod
    def sqrt7(cls):
        def even_ok(a, b):
            return a % 2 == 0 and b % 2 == 0

        def even(a, b):
            return (a // 2, b // 2)

        def odd_ok(a, b):
            return a % 2 == 0 and b % 2 == 1

        def odd(a, b):
            # (sqrt7 (a + b sqrt7) + 1) / 2 = (7b + 1)/2 + (a/2) sqrt7
            return ((7 * b + 1) // 2, a // 2)

        return cls(7, [(even_ok, even), (odd_ok, odd)], name="Z[sqrt7] hydra")

    def step(self, x):
        a, b = x
        hits = [f for ok, f in self.branches if ok(a, b)]
        if not hits:
            return None
        if len(hits) > 1:
            raise ValueError("more than one branch applies at %s" % (x,))
        return hits[0](a, b)


def fmt_quad(x, D=7):
    a, b = x
    if b == 0:
        return str(a)
    root = "sqrt%d" % D
    coeff = root if b == 1 else ("-" + root if b == -1 else "%d*%s" % (b, root))
    if a == 0:
        return coeff
    return "%d%s%s" % (a, "" if coeff.startswith("-") else "+", coeff)


class OrbitRecord:
    def __init__(self, start, steps, status, cycle=None):
        self.start = start
        self.steps = steps
        self.status = status
        self.cycle = cycle

    def to_json(self, show=str):
        out = {"start": show(self.start), "steps": [show(s) for s in self.steps],
               "status": self.status}
        if self.cycle is not None:
            out["cycle"] = [show(c) for c in self.cycle]
        return out


def _magnitude(x):
    if isinstance(x, tuple):
        return max(abs(v) for v in x)
    return abs(x)


def iterate(hmap, start, maxSteps=10 ** 5, magnitudeBound=10 ** 30, record=True):
    """Iterate with stored-set cycle detection; reports cycle, escaped, stuck or maxed-out."""
    seen = {}
    steps = []
    x = start
    for i in range(maxSteps + 1):
        if x in seen:
            k = seen[x]
            cyc = steps[k:] if record else _replay_cycle(hmap, x)
            return OrbitRecord(start, steps if record else [], "cycle", cycle=cyc)
        seen[x] = i
        steps.append(x)
        if _magnitude(x) > magnitudeBound:
            return OrbitRecord(start, steps if record else [], "escaped(bound)")
        if i == maxSteps:
            break
        nxt = hmap.step(x) if isinstance(hmap, QuadHydra) else hmap(x)
        if nxt is None:
            return OrbitRecord(start, steps if record else [], "stuck")
        if isinstance(nxt, Fraction) and nxt.denominator == 1:
            nxt = int(nxt)
        x = nxt
    return OrbitRecord(start, steps if record else [], "maxed-out")


def _replay_cycle(hmap, x):
    out = [x]
    y = hmap.step(x) if isinstance(hmap, QuadHydra) else hmap(x)
    while y != x:
        out.append(y)
        y = hmap.step(y) if isinstance(hmap, QuadHydra) else hmap(y)
    return out


def canonical_cycle(cycle):
    """Rotate so the smallest element (by magnitude, then value) comes first."""
    i = min(range(len(cycle)), key=lambda k: (_magnitude(cycle[k]), cycle[k]))
    return tuple(cycle[i:] + cycle[:i])


def cycleSearch(hmap, starts, maxSteps=10 ** 4, magnitudeBound=10 ** 12, box=None):
    """All distinct cycles reached from the starts; with ``box``, only cycles inside it."""
    found = set()
    for s in starts:
        rec = iterate(hmap, s, maxSteps, magnitudeBound)
        if rec.status == "cycle":
            c = canonical_cycle(list(rec.cycle))
            if box is None or all(_magnitude(v) < box for v in c):
                found.add(c)
    return sorted(found, key=lambda c: (len(c), [_magnitude(v) for v in c]))


def sqrt7_cycles(bound=100):
    """Nonzero cycles of the Z[sqrt7] hydra whose members satisfy max(|a|,|b|) < bound."""
    H = QuadHydra.sqrt7()
    starts = [(a, b) for a in range(-bound + 1, bound) for b in range(-bound + 1, bound)]
    cycles = cycleSearch(H, starts, maxSteps=10 ** 4, magnitudeBound=10 ** 9, box=bound)
    return [c for c in cycles if c != ((0, 0),)]


# ---------------------------------------------------------------------------
# numens and the correspondence


def numen(hmap):
    a = [Fraction(an, d) for an, _, d in hmap.branches]
    b = [Fraction(bn, d) for _, bn, d in hmap.branches]
    return FSeriesSpec(hmap.p, a, b)


def chi_q_closed(q, m):
    """chi_q(m) = -1/(q-1) + (sum_{n<lambda} q^{#1([m]_{2^n})}/2^n + q^{#1(m)} 2^{1-lambda}) / (2(q-1))."""
    q = Fraction(q)
    lam = m.bit_length()
    s = Fraction(0)
    for n in range(lam):
        s += q ** bin(m % 2 ** n).count("1") / Fraction(2) ** n
    s += q ** bin(m).count("1") * Fraction(2) ** (1 - lam)
    return -1 / (q - 1) + s / (2 * (q - 1))


def correspondenceCheck(hmap, z, expected=None):
    """chi(z) for purely periodic z, then the map's orbit from it against z's digits."""
    spec = numen(hmap)
    z = as_point(hmap.p, z)
    if z.pre:
        raise ValueError("the correspondence check needs a purely periodic point")
    x = evalAtPeriodic(spec, z)
    L = len(z.per)
    want = list(reversed(z.per))
    residues = []
    y = x
    for _ in range(L):
        residues.append(hmap.residue(y))
        y = hmap(y)
    periodic = y == x
    integral = x.denominator == 1
    out = {"point": str(z), "value": to_string(x), "periodic": periodic,
           "parity_vector": residues, "expected_parity": want,
           "parity_matches": residues == want,
           "kind": "integer cycle" if integral else "rational periodic point"}
    if integral and periodic:
        rec = iterate(hmap, int(x), maxSteps=L + 1)
        out["cycle"] = [str(v) for v in rec.cycle]
    ok = periodic and residues == want and (expected is None or coerce(expected) == x)
    out["status"] = "exact-equal" if ok else "counterexample"
    return out


def cycle_to_point(hmap, cycle):
    """Purely periodic z whose numen value is cycle[0] (digits are the reversed residues)."""
    res = [hmap.residue(v) for v in cycle]
    return PAdicInt(hmap.p, (), list(reversed(res)))


# ---------------------------------------------------------------------------
# the chi_q transform


def _linear_roots(poly, var):
    """Rational roots of a univariate polynomial with rational coefficients."""
    coeffs = {}
    for mono, c in poly.terms.items():
        e = dict(mono).get(var, 0)
        coeffs[e] = Fraction(c)
    deg = max(coeffs)
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = {e: int(c * den) for e, c in coeffs.items()}
    lead = abs(ints[deg])
    low_e = min(coeffs)
    const = abs(ints[low_e])
    roots = []
    if low_e > 0:
        roots.append(Fraction(0))

    def divs(n):
        return [d for d in range(1, n + 1) if n % d == 0] if n else [1]

    for a in divs(const):
        for b in divs(lead):
            for sgn in (1, -1):
                r = Fraction(sgn * a, b)
                if r not in roots and sum(c * r ** e for e, c in coeffs.items()) == 0:
                    roots.append(r)
    return sorted(roots)


def poleReport(qValue=None, tmax=2):
    """Denominator factors of the symbolic chi_q transform and a numeric classification."""
    q = symbol("q")
    spec = FSeriesSpec(2, [Fraction(1, 2), q / 2], [0, Fraction(1, 2)])
    ct = closedTransform(spec, frame=False)
    roots = set()
    entries = []
    for t in dual_tree(2, tmax):
        v = ct.coeff(t)
        entries.append({"t": str(t), "value": to_string(v)})
        if isinstance(v, SymbolicScalar) and not v.den.is_const():
            roots.update(_linear_roots(v.den, "q"))
    alpha0 = ct.meta["alpha0"]
    out = {"transform": entries, "alpha0": to_string(alpha0),
           "denominator_factors": ["q - %s" % r if r >= 0 else "q + %s" % -r for r in sorted(roots)],
           "breakdown_condition": "(q+1)/4 = 1"}
    if qValue is not None:
        qv = coerce(qValue)
        if (qv + 1) / 4 == 1:
            cls = "breakdown"
        elif qv in roots:
            cls = "pole-at-%s" % to_string(qv)
        else:
            cls = "regular"
        out["q"] = to_string(qv)
        out["class"] = cls
        if cls in ("regular", "breakdown"):
            num = closedTransform(FSeriesSpec(2, [Fraction(1, 2), qv / 2], [0, Fraction(1, 2)],
                                              x0=0 if cls == "breakdown" else None), frame=False)
            out["X0"] = to_string(num.coeff(dual_tree(2, 0).__next__()))
    return out
