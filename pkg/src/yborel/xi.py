"""High-precision Maclaurin coefficients of the Riemann Xi function.

The even entire function Xi(z) = sum (-1)^n A_n z^(2n) is the Fourier
transform 2 int_0^infty Phi(u) cos(zu) du of

    Phi(u) = sum_{k>=1} (4 pi^2 k^4 e^(9u/2) - 6 pi k^2 e^(5u/2))
             exp(-pi k^2 e^(2u)),

so expanding the cosine gives the moment formula

    A_n = (2 / (2n)!) int_0^infty Phi(u) u^(2n) du .

This module certifies those moments: Phi is evaluated in ball arithmetic
with a geometric tail comparison, the finite integral is done panel-wise by
certified Clenshaw-Curtis with an analyticity remainder (Phi extends
holomorphically to |Im z| < pi/4 because Re e^(2z) > 0 there), and the
integral beyond the last panel gets an explicit super-exponential bound.
Enclosures for the Turan ratios Omega_n = A_(n-1) A_(n+1) / A_n^2 and their
rational bounds follow, plus a bit-exact persistent cache.

All A_n are strictly positive; an enclosure that fails to certify
positivity raises PrecisionExhausted instead of guessing.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath as mp
from mpmath import mpf

from .numerics import DEFAULT_CONTEXT, ErrFloat, PrecisionContext, _up
from .quadrature import cc_nodes_weights, cc_order_for, cc_remainder

__all__ = [
    "CACHE_VERSION",
    "ChecksumMismatch",
    "MissingCache",
    "PrecisionDowngrade",
    "PrecisionExhausted",
    "TuranReport",
    "XiCache",
    "XiCoeff",
    "closed_form_a0",
    "default_cache_path",
    "omega_turan_report",
    "phi_disk_sup",
    "phi_eval",
    "xi_coefficients",
    "xi_moments",
]

GUARD_BITS = 64


class PrecisionExhausted(Exception):
    """An enclosure could not certify the required property (e.g. positivity)
    at the given context."""


class MissingCache(FileNotFoundError):
    pass


class ChecksumMismatch(Exception):
    pass


class PrecisionDowngrade(Exception):
    """Cached coefficients are below the requested precision."""


def _pi2_constants():
    pi = ErrFloat.pi()
    return 4 * pi * pi, 6 * pi, pi


def phi_eval(u, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrFloat:
    """Certified enclosure of Phi(u) for real u >= 0.

    Terms are summed until the geometric comparison bound for the remaining
    tail drops below target_abs_error / 4; the tail bound is added to the
    radius.
    """
    with mp.workprec(ctx.working_precision + GUARD_BITS):
        uu = ErrFloat._coerce(u)
        if uu.lower() < 0:
            raise ValueError("Phi is evaluated for u >= 0 only")
        c4, c6, pi = _pi2_constants()
        half_u = uu / 2
        E = half_u.exp()          # e^(u/2)
        E9 = E ** 9
        E5 = E ** 5
        E2 = E ** 4               # e^(2u)
        e2_lo = E2.lower()        # >= 1 for u >= 0
        tol = mpf(ctx.target_abs_error) / 4
        total = ErrFloat(0)
        k = 0
        while True:
            k += 1
            if k > ctx.max_terms:
                raise PrecisionExhausted("Phi series cap reached")
            k2 = k * k
            decay = (-(pi * k2) * E2).exp()
            term = (c4 * (k2 * k2) * E9 - c6 * k2 * E5) * decay
            total = total + term
            mag = ((c4 * (k2 * k2) * E9 + c6 * k2 * E5) * decay).upper()
            # ratio of consecutive magnitude bounds, valid for all j >= k
            ratio = (ErrFloat.exact(Fraction((k + 1) ** 4, k ** 4))
                     * (-(pi * (2 * k + 1)) * ErrFloat(e2_lo)).exp()).upper()
            if ratio < mpf("0.5"):
                tail = mag * ratio * 2
                if tail < tol:
                    return ErrFloat(total.mid, _up(total.rad + tail))


def phi_disk_sup(a, b, r) -> mpf:
    """Certified sup of |Phi| on the closed complex r-neighborhood of [a, b].

    For z with Re z in [a - r, b + r] and |Im z| <= r < pi/4 we have
    Re e^(2z) >= e^(2(a-r)) cos(2r) > 0, and each term of Phi is bounded by
    its coefficient magnitudes at Re z = b + r times exp(-pi k^2 Re e^(2z)).
    """
    a = mpf(a)
    b = mpf(b)
    r = mpf(r)
    if not r < mpf("0.78"):
        raise ValueError("analyticity margin must stay below pi/4")
    c4, c6, pi = _pi2_constants()
    x_hi = ErrFloat(b + r)
    e9 = (x_hi * 9 / 2).exp()
    e5 = (x_hi * 5 / 2).exp()
    # lower bound of Re e^(2z) over the neighborhood
    c_min = ((ErrFloat(a - r) * 2).exp() * (ErrFloat(r) * 2).cos())
    if not c_min.lower() > 0:
        raise ValueError("neighborhood touches the analyticity boundary")
    c_lo = ErrFloat(c_min.lower())
    total = ErrFloat(0)
    k = 0
    while True:
        k += 1
        if k > 10_000:
            raise PrecisionExhausted("Phi disk bound did not converge")
        k2 = k * k
        decay = (-(pi * k2) * c_lo).exp()
        mag = (c4 * (k2 * k2) * e9 + c6 * k2 * e5) * decay
        total = total + mag
        ratio = (ErrFloat.exact(Fraction((k + 1) ** 4, k ** 4))
                 * (-(pi * (2 * k + 1)) * c_lo).exp()).upper()
        if ratio < mpf("0.5"):
            rest = abs(mag).upper() * ratio * 2
            if rest < total.upper() * mpf(2) ** -30 or rest < mpf("1e-300"):
                return _up(total.upper() + rest)


def _moment_tail_bound(U: mpf, n: int) -> mpf:
    """Upper bound for int_U^infty Phi(u) u^(2n) du, U >= 1.

    For u >= 1/2, Phi(u) <= 6 pi^2 e^(9u/2) exp(-pi e^(2u)) (the k = 1 term
    dominates: the k >= 2 remainder is below 1e-9 of it, and
    4 pi^2 + 6 pi < 6 pi^2).  Substituting u = U + t and using
    e^(2u) >= e^(2U)(1 + 2t) and (1 + t/U)^(2n) <= e^(2nt/U) leaves a plain
    exponential integral.
    """
    with mp.workprec(mp.mp.prec + 32):
        U = mpf(U)
        lam = 2 * mp.pi * mp.exp(2 * U)
        mu = lam - mpf(9) / 2 - 2 * n / U
        if not mu > 0:
            raise ValueError("tail bound needs a larger U")
        pref = 6 * mp.pi ** 2 * mp.exp(mpf(9) * U / 2) * mp.power(U, 2 * n)
        val = pref * mp.exp(-mp.pi * mp.exp(2 * U)) / mu
        return _up(val + abs(mp.ldexp(val, -40)))


def xi_moments(max_n: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
               panel_width=None) -> list[ErrFloat]:
    """Certified enclosures of m_n = int_0^infty Phi(u) u^(2n) du, n <= max_n.

    Panel-wise certified quadrature on [0, U] with shared Phi evaluations
    across all n, plus the explicit bound for the tail beyond U.
    ``panel_width`` (default 1/2) exists so independent reruns can use
    distinct quadrature parameters.
    """
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    with mp.workprec(ctx.working_precision + GUARD_BITS):
        tol = mpf(ctx.target_abs_error)
        U = mpf(3)
        while _moment_tail_bound(U, max_n) > tol / 4:
            U += mpf(1) / 2
        # panel width must be dyadic so the panel edges tile [0, U'] exactly
        if panel_width is None:
            h = mpf(1) / 2
        else:
            fr = Fraction(panel_width)
            if fr.denominator & (fr.denominator - 1):
                raise ValueError("panel_width must be dyadic")
            if not 0 < fr <= 1:
                raise ValueError("panel_width must lie in (0, 1]")
            h = mpf(fr.numerator) / fr.denominator
        npanels = int(mp.ceil(U / h))
        U = npanels * h  # exact; tail bound only improves when U grows
        r = min(h, mpf("0.7"))
        panel_tol = (tol / 2) / npanels
        moments = [ErrFloat(0) for _ in range(max_n + 1)]
        for k in range(npanels):
            a = k * h
            b = (k + 1) * h
            m_phi = phi_disk_sup(a, b, r)
            x_sup = b + r
            m_worst = m_phi * (mp.power(x_sup, 2 * max_n) if x_sup > 1 else mpf(1))
            N = cc_order_for(m_worst, a, b, r, panel_tol)
            nodes, weights = cc_nodes_weights(N)
            mid = ErrFloat.exact((a + b) / 2)
            half = ErrFloat.exact((b - a) / 2)
            pts = [mid + half * x for x in nodes]
            phis = [phi_eval(p, ctx) for p in pts]
            sq = [p * p for p in pts]
            pw = [ErrFloat(1) for _ in pts]
            for n in range(max_n + 1):
                if n > 0:
                    pw = [pw_i * sq_i for pw_i, sq_i in zip(pw, sq)]
                acc = ErrFloat(0)
                for w, phi_i, pw_i in zip(weights, phis, pw):
                    acc = acc + w * phi_i * pw_i
                acc = acc * half
                m_n = m_phi * (mp.power(x_sup, 2 * n) if x_sup > 1 else mpf(1))
                rem = cc_remainder(m_n, a, b, r, N)
                moments[n] = moments[n] + ErrFloat(acc.mid, acc.rad + rem)
        for n in range(max_n + 1):
            tail = _moment_tail_bound(U, n)
            moments[n] = ErrFloat(moments[n].mid, _up(moments[n].rad + tail))
        return moments


@dataclass(frozen=True)
class XiCoeff:
    """One certified Maclaurin coefficient A_n (dimensionless, > 0)."""

    n: int
    value: ErrFloat
    method: str  # "quadrature" | "cache"


def _coeffs_from_moments(moments: list[ErrFloat]) -> list[XiCoeff]:
    out = []
    for n, m in enumerate(moments):
        scale = ErrFloat.exact(Fraction(2, math.factorial(2 * n)))
        value = m * scale
        if not value.lower() > 0:
            raise PrecisionExhausted(
                f"enclosure of A_{n} cannot certify positivity")
        out.append(XiCoeff(n=n, value=value, method="quadrature"))
    return out


def xi_coefficients(max_n: int,
                    ctx: PrecisionContext = DEFAULT_CONTEXT,
                    cache: "XiCache | None" = None,
                    cache_path=None,
                    panel_width=None) -> list[XiCoeff]:
    """Certified A_0..A_max_n, via cache when possible, quadrature otherwise.

    Cache hits are accepted only when the cached precision meets or exceeds
    the requested one; on miss the full run is stored back when a path is
    given.
    """
    if cache is None and cache_path is not None:
        try:
            cache = XiCache.load(cache_path, require=ctx)
        except (MissingCache, PrecisionDowngrade, ChecksumMismatch):
            cache = None
    if cache is not None and cache.covers(max_n, ctx):
        return [cache.get(n) for n in range(max_n + 1)]
    with mp.workprec(ctx.working_precision + GUARD_BITS):
        coeffs = _coeffs_from_moments(xi_moments(max_n, ctx, panel_width=panel_width))
    if cache_path is not None:
        XiCache.from_coefficients(coeffs, ctx).store(cache_path)
    return coeffs


def closed_form_a0(ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrFloat:
    """Independent route to A_0 = Xi(0) = -(1/8) pi^(-1/4) Gamma(1/4) zeta(1/2).

    mpmath's gamma/zeta/pi are used as oracles with a generous ulp radius;
    this value cross-checks the quadrature route, it is not part of it.
    """
    with mp.workprec(ctx.working_precision + GUARD_BITS):
        v = -(mpf(1) / 8) * mp.power(mp.pi, -mpf(1) / 4) \
            * mp.gamma(mpf(1) / 4) * mp.zeta(mpf(1) / 2)
        rad = abs(mp.ldexp(v, 16 - mp.mp.prec))
        return ErrFloat(v, rad)


# ----------------------------------------------------------------------------
# Turan ratios
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TuranReport:
    """Certified verdict for one ratio Omega_n against its rational bounds
    (2n-1)/(2n+1) * n/(n+1) <= Omega_n <= n/(n+1)."""

    n: int
    omega: ErrFloat
    lower: Fraction
    upper: Fraction
    verdict: str  # "pass" | "fail" | "indeterminate"


def omega_turan_report(max_n: int,
                       ctx: PrecisionContext = DEFAULT_CONTEXT,
                       coeffs: list[XiCoeff] | None = None,
                       cache_path=None) -> list[TuranReport]:
    """One certified report per n in [1, max_n]; needs A_0..A_(max_n+1)."""
    if coeffs is None:
        coeffs = xi_coefficients(max_n + 1, ctx, cache_path=cache_path)
    if len(coeffs) < max_n + 2:
        raise ValueError("need coefficients through max_n + 1")
    out = []
    with mp.workprec(ctx.working_precision + GUARD_BITS):
        for n in range(1, max_n + 1):
            om = (coeffs[n - 1].value * coeffs[n + 1].value
                  / (coeffs[n].value * coeffs[n].value))
            lower = Fraction(2 * n - 1, 2 * n + 1) * Fraction(n, n + 1)
            upper = Fraction(n, n + 1)
            lo_f = om.lower_fraction()
            hi_f = om.upper_fraction()
            if lo_f >= lower and hi_f <= upper:
                verdict = "pass"
            elif hi_f < lower or lo_f > upper:
                verdict = "fail"
            else:
                verdict = "indeterminate"
            out.append(TuranReport(n=n, omega=om, lower=lower, upper=upper,
                                   verdict=verdict))
    return out


# ----------------------------------------------------------------------------
# Persistent cache
# ----------------------------------------------------------------------------

CACHE_VERSION = 1


def _canonical_payload(d: dict) -> bytes:
    return json.dumps(d, sort_keys=True, separators=(",", ":")).encode()


@dataclass
class XiCache:
    """Bit-exact file-backed store of certified coefficients."""

    precision_bits: int
    target_error: float
    records: dict  # n -> XiCoeff

    def covers(self, max_n: int, ctx: PrecisionContext) -> bool:
        if self.precision_bits < ctx.working_precision:
            return False
        if self.target_error > ctx.target_abs_error:
            return False
        return all(n in self.records for n in range(max_n + 1))

    def get(self, n: int) -> XiCoeff:
        rec = self.records[n]
        return XiCoeff(n=n, value=rec.value, method="cache")

    @staticmethod
    def from_coefficients(coeffs: list[XiCoeff], ctx: PrecisionContext) -> "XiCache":
        return XiCache(precision_bits=ctx.working_precision,
                       target_error=ctx.target_abs_error,
                       records={c.n: c for c in coeffs})

    def _payload(self) -> dict:
        return {
            "version": CACHE_VERSION,
            "precision_bits": self.precision_bits,
            "target_error": repr(self.target_error),
            "records": [
                {"n": n, "value": self.records[n].value.to_json(),
                 "method": self.records[n].method}
                for n in sorted(self.records)
            ],
        }

    def store(self, path) -> None:
        """Atomic write: temp file in the target directory, then rename."""
        payload = self._payload()
        checksum = hashlib.sha256(_canonical_payload(payload)).hexdigest()
        doc = dict(payload, checksum=checksum)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, indent=0)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @staticmethod
    def load(path, require: PrecisionContext | None = None) -> "XiCache":
        path = Path(path)
        if not path.exists():
            raise MissingCache(str(path))
        with open(path) as fh:
            doc = json.load(fh)
        checksum = doc.pop("checksum", None)
        expect = hashlib.sha256(_canonical_payload(doc)).hexdigest()
        if checksum != expect:
            raise ChecksumMismatch(f"{path}: checksum does not match content")
        records = {}
        for rec in doc["records"]:
            val = ErrFloat.from_json(rec["value"])
            records[rec["n"]] = XiCoeff(n=rec["n"], value=val, method="cache")
        cache = XiCache(precision_bits=int(doc["precision_bits"]),
                        target_error=float(doc["target_error"]),
                        records=records)
        if require is not None:
            if (cache.precision_bits < require.working_precision
                    or cache.target_error > require.target_abs_error):
                raise PrecisionDowngrade(
                    f"cache at {cache.precision_bits} bits / {cache.target_error} "
                    f"below request {require.working_precision} bits / "
                    f"{require.target_abs_error}")
        return cache


def default_cache_path() -> Path:
    """Location of the cache shipped with the package (256 bits, 1e-40)."""
    return Path(__file__).parent / "data" / "xi_cache_default.json"
