"""Truncated formal power series in one and two variables and the y-Borel
transform.

The transform sends f(x) = sum A_n x^n to the bivariate series
Q(x, y) = sum A_n x^n y^(n(n+1)/2).  It satisfies B_1(f) = f, B_0(f) = A_0,
and the semigroup law B_y(f) = B_{y/y0}(B_{y0}(f)) for y0 != 0.

Two coefficient rings are supported and never mixed inside one series:
exact arbitrary-precision rationals (``Fraction``; the oracle ring for all
identity tests) and balls (``ErrFloat`` under a PrecisionContext).  All
operations are exact modulo the truncation ideal (x^(trunc_x+1),
y^(trunc_y+1)): products compute only retained terms, so every identity is
decidable on a finite window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import ErrFloat, Sign

__all__ = [
    "APPROX",
    "BiSeries",
    "CoeffSeq",
    "EXACT",
    "GapDetected",
    "NonzeroConstantTerm",
    "RingMismatch",
    "borel_at_y",
    "borel_transform",
    "exp_compose",
    "log1p_compose",
    "semigroup_check",
    "series_compare",
    "triangular",
]


class RingMismatch(Exception):
    """Operands live over different coefficient rings."""


class NonzeroConstantTerm(Exception):
    """Series composition requires a vanishing constant term."""


class GapDetected(Exception):
    """A coefficient inside the support range is zero (or not certified
    nonzero), so the zero-series machinery does not apply."""


def triangular(n: int) -> int:
    """n(n+1)/2, the y-exponent attached to x^n by the transform."""
    return n * (n + 1) // 2


@dataclass(frozen=True)
class CoeffRing:
    """Tag for the coefficient ring of a series: exact rationals or balls."""

    tag: str  # "exact" | "approx"

    def coerce(self, value):
        if self.tag == "exact":
            if isinstance(value, ErrFloat):
                raise RingMismatch("ball coefficient in exact ring")
            return Fraction(value)
        return ErrFloat._coerce(value)

    def zero(self):
        return Fraction(0) if self.tag == "exact" else ErrFloat(0)

    def one(self):
        return Fraction(1) if self.tag == "exact" else ErrFloat(1)

    def is_zero(self, value) -> bool:
        if self.tag == "exact":
            return value == 0
        return value.is_exact and value.mid == 0


EXACT = CoeffRing("exact")
APPROX = CoeffRing("approx")


def _ring_of(values) -> CoeffRing:
    return APPROX if any(isinstance(v, ErrFloat) for v in values) else EXACT


@dataclass(frozen=True)
class CoeffSeq:
    """Coefficient sequence A_0..A_N of a series/polynomial in x.

    ``no_gaps`` certifies every stored coefficient is nonzero (for balls:
    certified sign), the admissibility condition for the zero-series solve.
    """

    coeffs: tuple
    ring: CoeffRing
    no_gaps: bool = False

    @staticmethod
    def make(values, ring: CoeffRing | None = None) -> "CoeffSeq":
        values = list(values)
        if ring is None:
            ring = _ring_of(values)
        coefs = tuple(ring.coerce(v) for v in values)
        if ring is EXACT or ring.tag == "exact":
            gapfree = all(c != 0 for c in coefs)
        else:
            gapfree = all(c.sign() in (Sign.POSITIVE, Sign.NEGATIVE) for c in coefs)
        return CoeffSeq(coeffs=coefs, ring=ring, no_gaps=gapfree)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return self.ring.zero()

    def require_no_gaps(self):
        if not self.no_gaps:
            raise GapDetected("coefficient sequence has a (possible) zero entry")


@dataclass
class BiSeries:
    """Sparse truncated series in (x, y): coefficient map (i, j) -> ring elem.

    Stored keys never exceed the truncation orders; an absent key means the
    coefficient is zero.  Equality is coefficient-wise on the common
    truncation rectangle.
    """

    ring: CoeffRing
    trunc_x: int
    trunc_y: int
    coeffs: dict = field(default_factory=dict)

    def copy(self) -> "BiSeries":
        return BiSeries(self.ring, self.trunc_x, self.trunc_y, dict(self.coeffs))

    def get(self, i: int, j: int):
        return self.coeffs.get((i, j), self.ring.zero())

    def set(self, i: int, j: int, value):
        if i > self.trunc_x or j > self.trunc_y:
            return
        if self.ring.is_zero(value):
            self.coeffs.pop((i, j), None)
        else:
            self.coeffs[(i, j)] = value

    def constant_term(self):
        return self.get(0, 0)

    @staticmethod
    def from_terms(terms, trunc_x: int, trunc_y: int, ring: CoeffRing | None = None):
        vals = [v for (_, _, v) in terms]
        if ring is None:
            ring = _ring_of(vals)
        s = BiSeries(ring, trunc_x, trunc_y)
        for (i, j, v) in terms:
            s.set(i, j, ring.coerce(v))
        return s

    # ---------------------------------------------------------------- algebra
    def _check_ring(self, other: "BiSeries"):
        if self.ring.tag != other.ring.tag:
            raise RingMismatch(f"{self.ring.tag} vs {other.ring.tag}")

    def __add__(self, other: "BiSeries") -> "BiSeries":
        self._check_ring(other)
        tx = min(self.trunc_x, other.trunc_x)
        ty = min(self.trunc_y, other.trunc_y)
        out = BiSeries(self.ring, tx, ty)
        keys = set(self.coeffs) | set(other.coeffs)
        for (i, j) in keys:
            if i <= tx and j <= ty:
                out.set(i, j, self.get(i, j) + other.get(i, j))
        return out

    def __neg__(self) -> "BiSeries":
        out = BiSeries(self.ring, self.trunc_x, self.trunc_y)
        for k, v in self.coeffs.items():
            out.coeffs[k] = -v
        return out

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self.__add__(-other)

    def __mul__(self, other) -> "BiSeries":
        if not isinstance(other, BiSeries):
            out = BiSeries(self.ring, self.trunc_x, self.trunc_y)
            c = self.ring.coerce(other)
            for k, v in self.coeffs.items():
                out.set(*k, v * c)
            return out
        self._check_ring(other)
        tx = min(self.trunc_x, other.trunc_x)
        ty = min(self.trunc_y, other.trunc_y)
        out = BiSeries(self.ring, tx, ty)
        acc = {}
        for (i1, j1), v1 in self.coeffs.items():
            if i1 > tx or j1 > ty:
                continue
            for (i2, j2), v2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i > tx or j > ty:
                    continue
                key = (i, j)
                prod = v1 * v2
                if key in acc:
                    acc[key] = acc[key] + prod
                else:
                    acc[key] = prod
        for k, v in acc.items():
            out.set(*k, v)
        return out

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        if self.ring.tag != other.ring.tag:
            return False
        cmp = series_compare(self, other)
        if self.ring.tag == "exact":
            return cmp == "equal"
        raise TypeError("use series_compare for ball-coefficient series")

    def __hash__(self):
        return id(self)

    # -------------------------------------------------------------- serialize
    def to_json(self) -> dict:
        terms = []
        for (i, j) in sorted(self.coeffs):
            v = self.coeffs[(i, j)]
            if self.ring.tag == "exact":
                terms.append([i, j, str(v)])
            else:
                terms.append([i, j, v.to_json()])
        return {"ring": self.ring.tag, "trunc_x": self.trunc_x,
                "trunc_y": self.trunc_y, "terms": terms}

    def __repr__(self):
        parts = []
        for (i, j) in sorted(self.coeffs)[:8]:
            parts.append(f"({i},{j}):{self.coeffs[(i, j)]}")
        more = "..." if len(self.coeffs) > 8 else ""
        return f"BiSeries[{self.ring.tag}, x^<={self.trunc_x}, y^<={self.trunc_y}; {', '.join(parts)}{more}]"


def series_compare(a: BiSeries, b: BiSeries) -> str:
    """Trichotomy on the common truncation rectangle.

    "equal": exact coefficient equality (exact ring) or every pair of
    enclosures overlaps (ball ring); "distinct": some coefficient pair is
    certified different; "indeterminate" otherwise (ball ring only).
    """
    if a.ring.tag != b.ring.tag:
        raise RingMismatch("cannot compare series over different rings")
    tx = min(a.trunc_x, b.trunc_x)
    ty = min(a.trunc_y, b.trunc_y)
    keys = {k for k in set(a.coeffs) | set(b.coeffs) if k[0] <= tx and k[1] <= ty}
    if a.ring.tag == "exact":
        for k in keys:
            if a.get(*k) != b.get(*k):
                return "distinct"
        return "equal"
    all_overlap = True
    for k in keys:
        va, vb = a.get(*k), b.get(*k)
        diff = va - vb
        s = diff.sign()
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            return "distinct"
        if s is Sign.INDETERMINATE and not va.overlaps(vb):
            all_overlap = False
    return "equal" if all_overlap else "indeterminate"


# ----------------------------------------------------------------------------
# The transform
# ----------------------------------------------------------------------------

def borel_transform(f: CoeffSeq, trunc_x: int, trunc_y: int) -> BiSeries:
    """Formal transform: support {(n, n(n+1)/2)}, coefficient A_n at each."""
    out = BiSeries(f.ring, trunc_x, trunc_y)
    for n in range(min(f.degree, trunc_x) + 1):
        j = triangular(n)
        if j <= trunc_y:
            out.set(n, j, f[n])
    return out


def borel_at_y(f: CoeffSeq, y) -> CoeffSeq:
    """Transform at a fixed ring element y: coefficients A_n y^(n(n+1)/2)."""
    yv = f.ring.coerce(y)
    out = []
    power = f.ring.one()   # y^(T_n), built incrementally
    step = yv              # y^(n+1)
    for n in range(f.degree + 1):
        if n > 0:
            power = power * step
            step = step * yv
        out.append(f[n] * power)
    return CoeffSeq.make(out, ring=f.ring)


def log1p_compose(s: BiSeries) -> BiSeries:
    """log(1 + s) for s with zero constant term, truncated.

    sum_{q>=1} (-1)^(q+1) s^q / q; exact rational coefficients on the exact
    ring.
    """
    if not s.ring.is_zero(s.constant_term()):
        raise NonzeroConstantTerm("log composition needs s(0,0) = 0")
    out = BiSeries(s.ring, s.trunc_x, s.trunc_y)
    power = None
    # s has positive total valuation, so s^q dies once q exceeds the window
    qmax = s.trunc_x + s.trunc_y + 1
    for q in range(1, qmax + 1):
        power = s.copy() if power is None else power * s
        if not power.coeffs:
            break
        sign = 1 if q % 2 == 1 else -1
        coef = (Fraction(sign, q) if s.ring.tag == "exact"
                else ErrFloat.exact(Fraction(sign, q)))
        out = out + power * coef
    return out


def exp_compose(s: BiSeries) -> BiSeries:
    """exp(s) - for s with zero constant term - truncated."""
    if not s.ring.is_zero(s.constant_term()):
        raise NonzeroConstantTerm("exp composition needs s(0,0) = 0")
    one = BiSeries.from_terms([(0, 0, 1)], s.trunc_x, s.trunc_y, ring=s.ring)
    out = one.copy()
    power = None
    fact = 1
    qmax = s.trunc_x + s.trunc_y + 1
    for q in range(1, qmax + 1):
        power = s.copy() if power is None else power * s
        if not power.coeffs:
            break
        fact *= q
        coef = (Fraction(1, fact) if s.ring.tag == "exact"
                else ErrFloat.exact(Fraction(1, fact)))
        out = out + power * coef
    return out


def semigroup_check(f: CoeffSeq, y0, y) -> bool:
    """Whether B_y(f) == B_{y/y0}(B_{y0}(f)) coefficient-wise.

    Exact equality on the exact ring; certified-overlap on balls.
    """
    y0v = f.ring.coerce(y0)
    if f.ring.is_zero(y0v):
        raise ZeroDivisionError("semigroup law needs y0 != 0")
    yv = f.ring.coerce(y)
    lhs = borel_at_y(f, yv)
    rhs = borel_at_y(borel_at_y(f, y0v), yv / y0v)
    if f.ring.tag == "exact":
        return list(lhs.coeffs) == list(rhs.coeffs)
    return all(a.overlaps(b) for a, b in zip(lhs.coeffs, rhs.coeffs))
