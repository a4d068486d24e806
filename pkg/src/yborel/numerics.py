"""Ball arithmetic with certified sign decisions, real-root isolation, and the
lacunary-series constant solver.

All real quantities that carry numerical error are represented as balls
(midpoint + radius): an ``ErrFloat`` with midpoint ``mid`` and radius ``rad``
guarantees that the true value lies in ``[mid - rad, mid + rad]``.  Midpoints
are mpmath ``mpf`` values computed at the ambient working precision; radii are
propagated outward so the enclosure stays sound through every operation.
mpmath's field operations (+, -, *, /, sqrt) are correctly rounded, so a
one-ulp term covers midpoint rounding; transcendental functions get a wider
ulp allowance.  mpmath exponents are unbounded, which rules out silent
overflow or underflow of midpoints and radii.

Sign queries on a ball have four outcomes; ``Sign.INDETERMINATE`` is returned
whenever the enclosure straddles zero and is never silently coerced.  Callers
that need a decision must raise the working precision and retry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
from mpmath import mpf

__all__ = [
    "DEFAULT_CONTEXT",
    "DegenerateInput",
    "ErrFloat",
    "IsolationResult",
    "NoConvergence",
    "PrecisionContext",
    "Sign",
    "certified_eval",
    "isolate_real_roots",
    "lacunary_half_sum",
    "mpf_to_fraction",
    "solve_rho",
]


class NoConvergence(Exception):
    """A certified iteration could not reach the requested tolerance."""


class DegenerateInput(Exception):
    """Input so degraded that no certified answer exists (e.g. every
    coefficient enclosure contains zero)."""


class Sign(enum.Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1
    INDETERMINATE = 9


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (bits), absolute error target, and iteration caps.

    All operations are deterministic for a fixed context.  The error target
    applies to O(1) quantities (the constant solver, quadrature of moment
    integrals); coefficient enclosures inherit relative accuracy from it
    through exact prefactors.
    """

    working_precision: int = 256
    target_abs_error: float = 1e-40
    max_terms: int = 100_000

    def __post_init__(self):
        if self.working_precision < 64:
            raise ValueError("working_precision must be at least 64 bits")
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.max_terms <= 0:
            raise ValueError("max_terms must be positive")

    def activate(self):
        """Context manager setting mpmath's working precision."""
        return mp.workprec(self.working_precision)

    def tol(self) -> mpf:
        return mpf(self.target_abs_error)


DEFAULT_CONTEXT = PrecisionContext()


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of an mpf (mpf values are dyadic)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    x = mpf(x)
    if x == 0:
        return Fraction(0)
    man, exp = mp.libmp.to_man_exp(x._mpf_)
    man = int(man)
    if x < 0:
        man = -man
    return Fraction(man) * Fraction(2) ** exp


def _ulp(x: mpf) -> mpf:
    # generous bound |x| * 2^(2-prec); exact zero needs no ulp term
    if x == 0:
        return mpf(0)
    return abs(mp.ldexp(x, 2 - mp.mp.prec))


def _up(r: mpf) -> mpf:
    # outward slack absorbing correctly-rounded radius arithmetic
    if r == 0:
        return r
    return r + abs(mp.ldexp(r, -20))


class ErrFloat:
    """High-precision real with a guaranteed enclosure [mid - rad, mid + rad].

    Immutable.  Arithmetic propagates radii outward, so the true value of any
    composed expression lies in the result's enclosure whenever the true
    inputs lie in the input enclosures.
    """

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        # existing mpf values pass through unrounded
        m = mid if type(mid) is mpf else mpf(mid)
        r = rad if type(rad) is mpf else mpf(rad)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "mid", m)
        object.__setattr__(self, "rad", r)

    def __setattr__(self, *a):
        raise AttributeError("ErrFloat is immutable")

    # ------------------------------------------------------------- builders
    @staticmethod
    def exact(value) -> "ErrFloat":
        """Ball from an exactly representable value (int, dyadic Fraction,
        mpf, float) or a general Fraction / decimal string (certified
        few-ulp radius)."""
        if isinstance(value, ErrFloat):
            return value
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1) == 0:  # power of two: exactly representable
                return ErrFloat(mp.ldexp(mpf(value.numerator), -(den.bit_length() - 1)))
            mid = mpf(value.numerator) / mpf(value.denominator)
            return ErrFloat(mid, _up(3 * _ulp(mid)))
        if isinstance(value, str):
            mid = mpf(value)
            return ErrFloat(mid, _up(2 * _ulp(mid)))
        return ErrFloat(mpf(value))

    @staticmethod
    def from_endpoints(lo, hi) -> "ErrFloat":
        lo = mpf(lo)
        hi = mpf(hi)
        if hi < lo:
            raise ValueError("empty interval")
        mid = (lo + hi) / 2
        rad = _up((hi - lo) / 2 + 2 * _ulp(mid))
        return ErrFloat(mid, rad)

    @staticmethod
    def pi() -> "ErrFloat":
        v = +mp.pi
        return ErrFloat(v, _up(2 * _ulp(v)))

    # ------------------------------------------------------------ accessors
    def lower(self) -> mpf:
        """Certified lower endpoint (rounded outward)."""
        if self.rad == 0:
            return self.mid
        v = self.mid - self.rad
        return v - 2 * _ulp(v) - 2 * _ulp(self.mid)

    def upper(self) -> mpf:
        if self.rad == 0:
            return self.mid
        v = self.mid + self.rad
        return v + 2 * _ulp(v) + 2 * _ulp(self.mid)

    def lower_fraction(self) -> Fraction:
        return mpf_to_fraction(self.mid) - mpf_to_fraction(self.rad)

    def upper_fraction(self) -> Fraction:
        return mpf_to_fraction(self.mid) + mpf_to_fraction(self.rad)

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    def sign(self) -> Sign:
        if self.rad == 0:
            if self.mid == 0:
                return Sign.ZERO
            return Sign.POSITIVE if self.mid > 0 else Sign.NEGATIVE
        if self.mid - self.rad > 0:
            return Sign.POSITIVE
        if self.mid + self.rad < 0:
            return Sign.NEGATIVE
        return Sign.INDETERMINATE

    def contains_zero(self) -> bool:
        return self.sign() in (Sign.ZERO, Sign.INDETERMINATE)

    def contains(self, value) -> bool:
        """Whether the exact rational/dyadic ``value`` lies in the enclosure."""
        v = value if isinstance(value, Fraction) else mpf_to_fraction(value)
        return self.lower_fraction() <= v <= self.upper_fraction()

    def overlaps(self, other: "ErrFloat") -> bool:
        return (self.lower_fraction() <= other.upper_fraction()
                and other.lower_fraction() <= self.upper_fraction())

    def __repr__(self):
        if self.rad == 0:
            return f"ErrFloat({mp.nstr(self.mid, 17)})"
        return f"ErrFloat({mp.nstr(self.mid, 17)} +/- {mp.nstr(self.rad, 5)})"

    def __float__(self):
        return float(self.mid)

    # ----------------------------------------------------------- arithmetic
    @staticmethod
    def _coerce(x):
        if isinstance(x, ErrFloat):
            return x
        if isinstance(x, (int, float, mpf, Fraction, str)):
            return ErrFloat.exact(x)
        return NotImplemented

    def __neg__(self):
        return ErrFloat(-self.mid, self.rad)

    def __abs__(self):
        return ErrFloat(abs(self.mid), self.rad)

    def __add__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        mid = self.mid + o.mid
        if self.rad == 0 and o.rad == 0:
            if mp.fadd(self.mid, o.mid, exact=True) == mid:
                return ErrFloat(mid)
            return ErrFloat(mid, _ulp(mid))
        rad = _up(self.rad + o.rad + _ulp(mid))
        return ErrFloat(mid, rad)

    __radd__ = __add__

    def __sub__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        mid = self.mid * o.mid
        if self.rad == 0 and o.rad == 0:
            if mp.fmul(self.mid, o.mid, exact=True) == mid:
                return ErrFloat(mid)
            return ErrFloat(mid, _ulp(mid))
        rad = _up(abs(self.mid) * o.rad + abs(o.mid) * self.rad
                  + self.rad * o.rad + _ulp(mid))
        return ErrFloat(mid, rad)

    __rmul__ = __mul__

    def reciprocal(self) -> "ErrFloat":
        lo = abs(self.mid) - self.rad
        if not lo > 0:
            raise ZeroDivisionError("enclosure contains zero")
        mid = 1 / self.mid
        # |1/t - 1/m| <= rad / (|m| (|m| - rad)) for t in the ball
        rad = _up(self.rad / (abs(self.mid) * lo) + _ulp(mid))
        return ErrFloat(mid, rad)

    def __truediv__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.rad == 0:
            if o.mid == 0:
                raise ZeroDivisionError("division by exact zero")
            mid = self.mid / o.mid
            if self.rad == 0 and mp.fmul(mid, o.mid, exact=True) == self.mid:
                return ErrFloat(mid)
            rad = _up(self.rad / abs(o.mid) + _ulp(mid))
            return ErrFloat(mid, rad)
        return self.__mul__(o.reciprocal())

    def __rtruediv__(self, other):
        o = ErrFloat._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (self ** (-n)).reciprocal()
        result = ErrFloat(mpf(1))
        base = self
        e = n
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def sqrt(self) -> "ErrFloat":
        lo = self.lower()
        hi = self.upper()
        if lo < 0:
            raise ValueError("sqrt of an enclosure reaching below zero")
        slo = mp.sqrt(lo)
        shi = mp.sqrt(hi)
        slo = max(slo - 2 * _ulp(slo), mpf(0))
        shi = shi + 2 * _ulp(shi)
        return ErrFloat.from_endpoints(slo, shi)

    def exp(self) -> "ErrFloat":
        mid = mp.exp(self.mid)
        if self.rad == 0:
            return ErrFloat(mid, _up(4 * _ulp(mid)))
        # |exp(t) - exp(m)| <= exp(m) (exp(rad) - 1) on the ball
        growth = mp.expm1(self.rad)
        rad = _up(mid * growth + mid * growth * growth + 4 * _ulp(mid))
        return ErrFloat(mid, rad)

    def log(self) -> "ErrFloat":
        lo = self.lower()
        if not lo > 0:
            raise ValueError("log of an enclosure reaching zero")
        mid = mp.log(self.mid)
        rad = _up(self.rad / lo + 4 * _ulp(mpf(1) if mid == 0 else mid))
        return ErrFloat(mid, rad)

    def cos(self) -> "ErrFloat":
        mid = mp.cos(self.mid)
        rad = _up(self.rad + mp.ldexp(mpf(1), 2 - mp.mp.prec))
        return ErrFloat(mid, rad)

    # -------------------------------------------------------------- compare
    def lt(self, other) -> bool:
        """Certified strict less-than."""
        o = ErrFloat._coerce(other)
        return self.upper_fraction() < o.lower_fraction()

    def gt(self, other) -> bool:
        o = ErrFloat._coerce(other)
        return self.lower_fraction() > o.upper_fraction()

    # ------------------------------------------------------------ serialize
    def to_json(self) -> dict:
        """Exact decimal serialization {mantissa, exponent, err}.

        value = int(mantissa) * 10^exponent exactly; err likewise (as an
        "MeE" string).  Round trips bit-exactly because mpf values are
        dyadic rationals.
        """
        man, exp10 = _dyadic_mantissa(self.mid)
        return {"mantissa": man, "exponent": exp10, "err": _dyadic_decimal(self.rad)}

    @staticmethod
    def from_json(d: dict) -> "ErrFloat":
        mid = _decimal_to_mpf(d["mantissa"], int(d["exponent"]))
        rad = _decimal_str_to_mpf(d["err"])
        return ErrFloat(mid, rad)


def _dyadic_mantissa(x: mpf) -> tuple[str, int]:
    """(mantissa_digits, exponent10) with x == mantissa * 10^exponent10 exactly."""
    if x == 0:
        return "0", 0
    man, exp = mp.libmp.to_man_exp(x._mpf_)
    man = int(man)
    if x < 0:
        man = -man
    if exp >= 0:
        return str(man * (1 << exp)), 0
    return str(man * 5 ** (-exp)), exp


def _dyadic_decimal(x: mpf) -> str:
    m, e = _dyadic_mantissa(x)
    return f"{m}e{e}"


def _exact_mpf(man: int, exp: int) -> mpf:
    # construct man * 2^exp without precision rounding
    return mp.make_mpf(mp.libmp.from_man_exp(man, exp))


def _decimal_to_mpf(mantissa: str, exponent: int) -> mpf:
    m = int(mantissa)
    if exponent == 0:
        return _exact_mpf(m, 0)
    if exponent > 0:
        return _exact_mpf(m * 10 ** exponent, 0)
    # m * 10^e = (m / 5^-e) * 2^e; m is divisible by 5^-e by construction
    p5 = 5 ** (-exponent)
    q, r = divmod(m, p5)
    if r != 0:
        raise ValueError("mantissa does not encode a dyadic value")
    return _exact_mpf(q, exponent)


def _decimal_str_to_mpf(s: str) -> mpf:
    if "e" in s:
        m, e = s.split("e")
        return _decimal_to_mpf(m, int(e))
    return _exact_mpf(int(s), 0)


# ----------------------------------------------------------------------------
# Polynomial evaluation and real-root isolation
# ----------------------------------------------------------------------------

@dataclass
class IsolationResult:
    """Disjoint closed intervals each holding exactly one real root.

    ``certified`` is True when every part of the query interval was decided;
    otherwise ``indeterminate`` lists subintervals where coefficient
    enclosures prevented a sign decision.  Endpoints are exact rationals.
    """

    intervals: list = field(default_factory=list)
    certified: bool = True
    indeterminate: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.intervals)


def _is_exact_coeffs(coeffs) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in coeffs)


def certified_eval(coeffs, point) -> ErrFloat:
    """Enclosure of p(point) by Horner evaluation in ball arithmetic.

    ``coeffs`` ascending by degree, entries int/Fraction/ErrFloat; ``point``
    anything ``ErrFloat.exact`` accepts.
    """
    x = ErrFloat._coerce(point)
    acc = ErrFloat(mpf(0))
    for c in reversed(list(coeffs)):
        acc = acc * x + ErrFloat._coerce(c)
    return acc


def _poly_eval_fraction(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _fraction_derivative(coeffs):
    return [k * c for k, c in enumerate(coeffs)][1:]


def _fraction_divmod(a, b):
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    q = [Fraction(0)] * max(0, da - db + 1)
    for k in range(da - db, -1, -1):
        coef = a[db + k] / b[db]
        q[k] = coef
        if coef:
            for j in range(db + 1):
                a[k + j] -= coef * b[j]
    r = a[:db] if db > 0 else []
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _fraction_gcd(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while b:
        _, r = _fraction_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _squarefree_part(coeffs):
    d = _fraction_derivative(coeffs)
    if not any(d):
        return coeffs
    g = _fraction_gcd(coeffs, d)
    if len(g) == 1:
        return coeffs
    q, r = _fraction_divmod(coeffs, g)
    assert not r
    return q


def _shift_by_one(coeffs):
    """p(t) -> p(t + 1), ring-generic in-place Taylor shift."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + out[j + 1]
    return out


def _variations_exact(coeffs) -> int:
    v = 0
    last = 0
    for c in coeffs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if last and s != last:
            v += 1
        last = s
    return v


def _variations_01_exact(coeffs) -> int:
    """Descartes count for roots in (0, 1): variations of (1+s)^d p(1/(1+s))."""
    return _variations_exact(_shift_by_one(list(reversed(coeffs))))


def _affine_to_01(coeffs, lo: Fraction, hi: Fraction):
    """Coefficients of q(t) = p(lo + (hi - lo) t)."""
    width = hi - lo
    scaled = [c * width ** k for k, c in enumerate(coeffs)]
    shifted = list(scaled)
    n = len(shifted)
    s = lo / width
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            shifted[j] = shifted[j] + s * shifted[j + 1]
    return shifted


def _variations_on(coeffs, a: Fraction, b: Fraction) -> int:
    return _variations_01_exact(_affine_to_01(coeffs, a, b))


def _shrink_endpoint_roots(coeffs, a: Fraction, b: Fraction):
    """Given exactly one root of square-free p inside open (a, b), shrink the
    interval until neither closed endpoint is a root."""
    for _ in range(10_000):
        a_zero = _poly_eval_fraction(coeffs, a) == 0
        b_zero = _poly_eval_fraction(coeffs, b) == 0
        if not a_zero and not b_zero:
            return (a, b)
        m = (a + b) / 2
        if _poly_eval_fraction(coeffs, m) == 0:
            return (m, m)
        if _variations_on(coeffs, m, b) == 1:
            a = m
        else:
            b = m
    raise NoConvergence("endpoint shrink did not terminate")


def _isolate_exact(coeffs, lo: Fraction, hi: Fraction):
    """VCA bisection on a square-free Fraction polynomial over (lo, hi)."""
    out = []

    def on_01(p01, a: Fraction, b: Fraction):
        v = _variations_01_exact(p01)
        if v == 0:
            return
        if v == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        if _poly_eval_fraction(coeffs, mid) == 0:
            out.append((mid, mid))
        half = [c / Fraction(2 ** k) for k, c in enumerate(p01)]
        on_01(half, a, mid)
        on_01(_shift_by_one(half), mid, b)

    on_01(_affine_to_01(coeffs, lo, hi), lo, hi)
    # open isolating intervals may touch a root sitting exactly on a
    # subdivision boundary; shrink so the reported closed intervals stay
    # disjoint with one root each
    final = []
    for (a, b) in sorted(out):
        if a == b:
            final.append((a, b))
        else:
            final.append(_shrink_endpoint_roots(coeffs, a, b))
    return sorted(final)


class _BallSign:
    """Sign options of a ball coefficient for variation-range counting."""

    __slots__ = ("can_pos", "can_neg", "can_zero")

    def __init__(self, e: ErrFloat):
        s = e.sign()
        self.can_pos = s in (Sign.POSITIVE, Sign.INDETERMINATE)
        self.can_neg = s in (Sign.NEGATIVE, Sign.INDETERMINATE)
        self.can_zero = s in (Sign.ZERO, Sign.INDETERMINATE)


def _variation_range(balls):
    """(min, max) possible sign-variation counts over all instantiations."""
    INF = 10 ** 9
    best = {0: (0, 0)}  # key: last nonzero sign (0 = none yet)
    for b in balls:
        opts = []
        if b.can_pos:
            opts.append(1)
        if b.can_neg:
            opts.append(-1)
        if b.can_zero:
            opts.append(0)
        nxt = {}
        for last, (vlo, vhi) in best.items():
            for o in opts:
                if o == 0:
                    key, step = last, 0
                else:
                    key = o
                    step = 1 if (last != 0 and o != last) else 0
                cur = nxt.get(key, (INF, -INF))
                nxt[key] = (min(cur[0], vlo + step), max(cur[1], vhi + step))
        best = nxt
    return (min(v[0] for v in best.values()),
            max(v[1] for v in best.values()))


def _isolate_ball(coeffs, lo: Fraction, hi: Fraction, max_depth: int):
    """Descartes bisection with ball coefficients.

    Certification semantics: a reported interval holds exactly one root of
    every polynomial whose coefficients lie in the given enclosures, hence of
    the true polynomial.  Undecidable boxes land in ``uncertain``.
    """
    isolated = []
    uncertain = []

    def to_01(a: Fraction, b: Fraction):
        width = b - a
        w = ErrFloat.exact(width)
        scaled = [c * w ** k for k, c in enumerate(coeffs)]
        shifted = list(scaled)
        n = len(shifted)
        s = ErrFloat.exact(a / width)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                shifted[j] = shifted[j] + s * shifted[j + 1]
        return shifted

    def recurse(a: Fraction, b: Fraction, depth: int):
        p01 = to_01(a, b)
        transformed = _shift_by_one(list(reversed(p01)))
        vlo, vhi = _variation_range([_BallSign(c) for c in transformed])
        if vhi == 0:
            return
        if vlo == vhi == 1:
            isolated.append((a, b))
            return
        if depth >= max_depth:
            uncertain.append((a, b))
            return
        mid = (a + b) / 2
        # the split point must carry a certified nonzero value, otherwise a
        # root could sit on the boundary and be double counted
        if certified_eval(coeffs, mid).contains_zero():
            for k in (1, -1, 3, -3, 5, -5):
                cand = mid + (b - a) * Fraction(k, 64)
                if not certified_eval(coeffs, cand).contains_zero():
                    mid = cand
                    break
            else:
                uncertain.append((a, b))
                return
        recurse(a, mid, depth + 1)
        recurse(mid, b, depth + 1)

    recurse(lo, hi, 0)
    return sorted(isolated), sorted(uncertain)


def isolate_real_roots(coeffs, interval, max_depth: int = 64) -> IsolationResult:
    """Isolate the real roots of a univariate polynomial on [lo, hi].

    ``coeffs`` ascending by degree with int/Fraction entries (exact path;
    square-free reduction applied first) or ErrFloat entries (certified
    Descartes bisection; regions where coefficient enclosures prevent a sign
    decision are reported as indeterminate rather than guessed).
    """
    lo, hi = interval
    lo = Fraction(lo)
    hi = Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    coeffs = list(coeffs)
    if not coeffs:
        raise DegenerateInput("empty polynomial")

    if _is_exact_coeffs(coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DegenerateInput("zero polynomial")
        if len(coeffs) == 1:
            return IsolationResult()
        sqf = _squarefree_part(coeffs)
        out = []
        if _poly_eval_fraction(sqf, lo) == 0:
            out.append((lo, lo))
        if _poly_eval_fraction(sqf, hi) == 0:
            out.append((hi, hi))
        out.extend(_isolate_exact(sqf, lo, hi))
        return IsolationResult(intervals=sorted(set(out)))

    balls = [ErrFloat._coerce(c) for c in coeffs]
    if all(b.contains_zero() for b in balls):
        raise DegenerateInput("every coefficient enclosure contains zero")
    while balls and balls[-1].is_exact and balls[-1].mid == 0:
        balls.pop()
    endpoint_unknowns = []
    for pt in (lo, hi):
        if certified_eval(balls, pt).contains_zero():
            endpoint_unknowns.append((pt, pt))
    isolated, uncertain = _isolate_ball(balls, lo, hi, max_depth)
    uncertain = sorted(set(uncertain + endpoint_unknowns))
    return IsolationResult(intervals=isolated,
                           certified=not uncertain,
                           indeterminate=uncertain)


# ----------------------------------------------------------------------------
# The lacunary-series constant: positive root of sum_{k>=1} rho^(k^2) = 1/2
# ----------------------------------------------------------------------------

def lacunary_half_sum(rho: ErrFloat, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrFloat:
    """Certified enclosure of S(rho) = sum_{k>=1} rho^(k^2), 0 < rho < 1.

    The tail after K terms is bounded by rho^((K+1)^2) / (1 - rho).
    """
    with ctx.activate():
        rho = ErrFloat._coerce(rho)
        up_end = rho.upper()
        if not (rho.lower() > 0 and up_end < 1):
            raise ValueError("need 0 < rho < 1")
        tol = ctx.tol() / 4
        one_minus = ErrFloat.from_endpoints(1 - up_end, 1 - rho.lower())
        total = ErrFloat(mpf(0))
        rho2 = rho * rho
        power = ErrFloat(mpf(1))   # rho^(k^2), built incrementally
        odd = rho                  # rho^(2k+1)
        k = 0
        while True:
            k += 1
            power = power * odd    # now rho^(k^2)
            odd = odd * rho2
            total = total + power
            # power*odd = rho^(k^2 + 2k + 1) = rho^((k+1)^2)
            tail = power * odd / one_minus
            if tail.upper() < tol:
                return ErrFloat(total.mid, _up(total.rad + tail.upper()))
            if k > ctx.max_terms:
                raise NoConvergence("lacunary sum did not meet tolerance")


def solve_rho(ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrFloat:
    """Certified enclosure of the positive root of S(rho) = 1/2.

    Bisection with certified sign evaluations of S - 1/2.  S is strictly
    increasing on (0, 1) and S(1/4) < 1/2 < S(3/4) brackets the root.
    """
    with ctx.activate():
        half = Fraction(1, 2)
        lo = Fraction(1, 4)
        hi = Fraction(3, 4)
        target = mpf_to_fraction(ctx.tol())
        max_iters = 64 + 4 * ctx.working_precision
        for _ in range(max_iters):
            if hi - lo <= target:
                return ErrFloat(*_fraction_interval_ball(lo, hi))
            mid = (lo + hi) / 2
            s = lacunary_half_sum(ErrFloat.exact(mid), ctx)
            if s.upper_fraction() < half:
                lo = mid
            elif s.lower_fraction() > half:
                hi = mid
            else:
                if hi - lo <= 4 * target:
                    return ErrFloat(*_fraction_interval_ball(lo, hi))
                raise NoConvergence(
                    "bisection sign test indeterminate before tolerance reached")
        raise NoConvergence("bisection iteration cap reached")


def _fraction_interval_ball(lo: Fraction, hi: Fraction):
    l = mpf(lo.numerator) / mpf(lo.denominator)
    h = mpf(hi.numerator) / mpf(hi.denominator)
    l = l - 2 * _ulp(l)
    h = h + 2 * _ulp(h)
    mid = (l + h) / 2
    rad = _up((h - l) / 2 + 2 * _ulp(mid))
    return mid, rad
