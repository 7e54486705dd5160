"""Places of Q, digital frames, the root test, and parameter evaluation.

A frame is finite data: each digit class D_k of Z_p is sent to a place of Q.
Convergence claims are made per point, as an exact value plus the place
that certifies it.
"""

from fractions import Fraction
import math

import mpmath

from .padic import as_point, digit_class, densities
from .scalars import (coerce, is_zero, ellAdicValuation, ellAdicUpperBound, archNorm,
                      RamifiedPlace, is_prime, substitute, to_string, parse_scalar,
                      prime_factors)
from .sbfourier import ClosedTransform, FourierTable
from .series import (FSeriesSpec, MFunction, closedTransform, deltaTriangle, deltaDirect)


class FrameError(ValueError):
    pass


class NonUniqueSolutionIdeal(ValueError):
    pass


class Place:
    """Either the archimedean place ("inf") or a prime ell."""

    def __init__(self, ell=None):
        if ell is not None:
            ell = int(ell)
            if not is_prime(ell):
                raise FrameError("%d is not prime" % ell)
        self.ell = ell

    @classmethod
    def parse(cls, s):
        s = str(s).strip().lower()
        if s in ("inf", "infinity", "arch", "archimedean"):
            return cls(None)
        if s.startswith("prime:"):
            s = s[len("prime:"):]
        try:
            return cls(int(s))
        except ValueError:
            raise FrameError("cannot read place %r" % s)

    @property
    def archimedean(self):
        return self.ell is None

    def check_base(self, p):
        if self.ell is not None and self.ell in prime_factors(p):
            raise RamifiedPlace("prime place %d divides the base %d" % (self.ell, p))

    def __str__(self):
        return "inf" if self.ell is None else "prime:%d" % self.ell

    __repr__ = __str__

    def __eq__(self, other):
        return isinstance(other, Place) and self.ell == other.ell

    def __hash__(self):
        return hash(self.ell)


class DigitalFrame:
    """Assignment D_k -> Place for every digit class k = 0..p-1."""

    def __init__(self, p, classes):
        self.p = p
        self.classes = {}
        for k, place in classes.items():
            if isinstance(k, str):
                k = int(k.lstrip("Dd"))
            if not 0 <= k < p:
                raise FrameError("digit class D%d does not exist for p = %d" % (k, p))
            place = place if isinstance(place, Place) else Place.parse(place)
            place.check_base(p)
            self.classes[k] = place
        missing = [k for k in range(p) if k not in self.classes]
        if missing:
            raise FrameError("frame does not assign a place to D%s" % missing[0])

    @classmethod
    def from_json(cls, d):
        return cls(int(d["p"]), d["classes"])

    def to_json(self):
        return {"p": self.p, "classes": {"D%d" % k: str(v) for k, v in sorted(self.classes.items())}}

    def place_for(self, z):
        return self.classes[digit_class(as_point(self.p, z))]


class EvaluationMap:
    """Substitution of symbolic parameters by exact scalars."""

    def __init__(self, values=None):
        self.values = {k: coerce(v) for k, v in (values or {}).items()}

    @classmethod
    def from_json(cls, d):
        return cls({k: parse_scalar(str(v)) for k, v in d.items()})

    def is_identity(self):
        return not self.values

    def __call__(self, x):
        return substitute(x, self.values) if self.values else x

    def guard(self, spec):
        a0 = self(spec.a[0])
        if coerce(a0) == 1:
            b0 = self(spec.b[0])
            if not is_zero(b0) or spec.x0 is None:
                raise NonUniqueSolutionIdeal(
                    "a_0 evaluates to 1 but b_0 -> %s%s" % (to_string(b0), "" if spec.x0 is not None
                                                          else " and no explicit X(0)"))


# ---------------------------------------------------------------------------
# the root test


def _log_abs_bounds_prime(r, ell):
    """(exponent, exact): log|r|_ell <= exponent * log(ell)."""
    r = coerce(r)
    if isinstance(r, Fraction):
        return Fraction(-ellAdicValuation(r, ell)), True
    ub = ellAdicUpperBound(r, ell)
    # ub = ell^e for a rational e
    e = Fraction(0)
    x = Fraction(ub)
    while x.numerator % ell == 0:
        x /= ell
        e += 1
    while x.denominator % ell == 0:
        x *= ell
        e -= 1
    return e, False


def rootTestCertify(M, z, place, precisionBits=128):
    """Decide summability of |M_n(z)| at a place by the root test.

    With d_k the digit densities of the period of z, the limsup of
    |M_n(z)|^(1/n) is exp(sum_k d_k log|r_k|); the series is summable when
    that log is strictly negative.
    """
    if not isinstance(place, Place):
        place = Place.parse(place)
    place.check_base(M.p)
    z = as_point(M.p, z)
    dens = densities(z)
    if place.archimedean:
        with mpmath.workprec(precisionBits):
            total = mpmath.iv.mpf(0)
            for k, d in dens.items():
                if d:
                    iv = archNorm(M.r[k], precisionBits)
                    total = total + mpmath.iv.mpf(d.numerator) / d.denominator * mpmath.iv.log(iv)
            lo, hi = total.a, total.b
            if hi < 0:
                verdict = "summable"
            elif lo >= 0:
                verdict = "not-summable"
            else:
                verdict = "inconclusive"
            margin = mpmath.iv.exp(total)
            return {"verdict": verdict, "place": str(place), "point": str(z),
                    "log_value": [float(lo), float(hi)],
                    "margin": [float(margin.a), float(margin.b)]}
    ell = place.ell
    coeff = Fraction(0)
    exact = True
    for k, d in dens.items():
        if d:
            e, ex = _log_abs_bounds_prime(M.r[k], ell)
            coeff += d * e
            exact = exact and ex
    if coeff < 0:
        verdict = "summable"
    elif exact:
        verdict = "not-summable"
    else:
        verdict = "inconclusive"
    return {"verdict": verdict, "place": str(place), "point": str(z),
            "log_coefficient": str(coeff), "exact": exact,
            "margin": "%d^(%s)" % (ell, coeff), "margin_value": float(ell) ** float(coeff)}


def frameCertify(frame, specs, samplePoints):
    """Root test for every series' M-function at every sample point."""
    if isinstance(specs, FSeriesSpec):
        specs = [specs]
    rows = []
    certified = True
    for z in samplePoints:
        z = as_point(frame.p, z)
        place = frame.place_for(z)
        for j, spec in enumerate(specs):
            if not spec.is_numeric():
                raise ValueError("frame certification needs numeric parameters; "
                                 "apply an EvaluationMap first")
            res = rootTestCertify(MFunction(spec.p, spec.a), z, place)
            res["series"] = j
            rows.append(res)
            certified = certified and res["verdict"] == "summable"
    return {"certified": certified, "rows": rows}


def _size(x, place, precisionBits=128):
    if place.archimedean:
        iv = archNorm(x, precisionBits)
        return {"abs": [float(iv.a), float(iv.b)]}
    x = coerce(x)
    if isinstance(x, Fraction):
        v = ellAdicValuation(x, place.ell)
        return {"valuation": "inf" if v == math.inf else int(v)}
    e, _ = _log_abs_bounds_prime(x, place.ell)
    return {"valuation_lower_bound": str(-e)}


def _trend(rows, place):
    if place.archimedean:
        mags = [r["abs"][1] for r in rows if r["abs"][1] > 0]
        if len(mags) < 2:
            return {"mean_ratio": 0.0}
        return {"mean_ratio": (mags[-1] / mags[0]) ** (1.0 / (len(mags) - 1))}
    vals = [r.get("valuation") for r in rows]
    key = [math.inf if v == "inf" else v for v in vals]
    if any(v is None for v in key):
        return {"tail_min": None}
    tail_min = []
    running = math.inf
    for v in reversed(key):
        running = min(running, v)
        tail_min.append(running)
    tail_min.reverse()
    increasing_from = None
    for i in range(len(key) - 1):
        if all(b > a for a, b in zip(key[i:], key[i + 1:])):
            increasing_from = rows[i]["N"]
            break
    return {"tail_min": ["inf" if v == math.inf else v for v in tail_min],
            "strictly_increasing_from": increasing_from}


def convergenceDemo(spec, frame, z, Nmax, check_direct=6, precisionBits=128):
    """Exact Delta_N^(0){X}(z) for N = 1..Nmax, sized at the frame's place for z."""
    z = as_point(spec.p, z)
    place = frame.place_for(z)
    cert = frameCertify(frame, [spec], [z])
    ct = closedTransform(spec, frame=frame)
    method = "orbit" if ct.equivariant else "direct"
    rows = []
    for N in range(1, Nmax + 1):
        d = deltaTriangle(spec, N, z, ct)
        row = {"N": N, "delta": to_string(d)}
        if N <= check_direct:
            row["direct_agrees"] = deltaDirect(spec, N, z, ct, method=method) == d
        row.update(_size(d, place, precisionBits))
        rows.append(row)
    return {"point": str(z), "place": str(place), "certified": cert["certified"],
            "rows": rows, "trend": _trend(rows, place)}


# ---------------------------------------------------------------------------
# evaluation maps


def applyEvaluation(e, obj):
    """Substitute the map's values through specs, transforms, tables or lattices."""
    from .products import ProductSpec, TransformLattice

    if e.is_identity():
        return obj
    if isinstance(obj, FSeriesSpec):
        e.guard(obj)
        return obj.subs(e.values)
    if isinstance(obj, ProductSpec):
        return ProductSpec([applyEvaluation(e, s) for s in obj.specs], obj.symbolic_cap)
    if isinstance(obj, TransformLattice):
        return TransformLattice(applyEvaluation(e, obj.spec), obj.top, obj.cache)
    if isinstance(obj, ClosedTransform):
        spec = getattr(obj, "spec", None)
        if spec is not None:
            e.guard(spec)
        rule = obj.coeff
        out = ClosedTransform(obj.p, lambda t: e(rule(t)),
                              meta=dict(obj.meta, evaluated=True), equivariant=False)
        return out
    if isinstance(obj, FourierTable):
        return FourierTable(obj.p, obj.N, {t: e(v) for t, v in obj.entries.items()})
    return e(obj)
