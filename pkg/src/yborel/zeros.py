"""Zero power series of the transformed series B_y(f).

For a gap-free f (all A_n nonzero), the zeros of B_y(f), viewed over the
field of formal Laurent series in y, are x_p(y) = -1/alpha_p(y) where
alpha_p(y) = sum_{q >= p} u_p(q) y^q has y-valuation exactly p and leading
coefficient u_p(p) = A_p / A_{p-1}.  The factorization

    B_y(f)(x) = A_0 prod_p (1 + alpha_p(y) x)      (mod y^(Q+1))

determines the u_p(q) uniquely; we solve the implied elementary-symmetric
system order by order in q.  At level q, with all lower levels known and the
level-q slots zeroed, the residual of the x^p coefficient at y-order
q + (p-1)p/2 equals A_{p-1} * sum_{r >= p} u_r(q): the unknowns decouple by
differencing consecutive residuals.  Only coefficients A_0..A_Q enter the
solve through order Q, so any truncation of degree >= Q yields the exact
series coefficients of the full f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .numerics import ErrFloat, Sign
from .series import (
    BiSeries,
    CoeffRing,
    CoeffSeq,
    GapDetected,
    borel_transform,
    series_compare,
    triangular,
)

__all__ = [
    "AlphaSeries",
    "NearZeroDenominator",
    "RadiusEstimate",
    "ZeroEval",
    "ZeroLeading",
    "compute_alpha_series",
    "reconstruct_check",
    "radius_estimate",
    "zero_eval",
]


class ZeroLeading(Exception):
    """The constant coefficient A_0 vanishes."""


class NearZeroDenominator(Exception):
    """alpha_p(y) enclosure contains zero; the zero value 1/alpha blows up."""


@dataclass(frozen=True)
class AlphaSeries:
    """Truncated zero series alpha_p(y) = sum_{q=p}^{Q} u_p(q) y^q."""

    p: int
    Q: int
    ring: CoeffRing
    coeffs: tuple  # index q in 0..Q; entries below q = p are zero

    def u(self, q: int):
        if 0 <= q <= self.Q:
            return self.coeffs[q]
        return self.ring.zero()

    @property
    def leading(self):
        return self.coeffs[self.p]

    def is_polynomial_tail_zero(self) -> bool:
        """True when every stored coefficient above the leading one is zero."""
        return all(self.ring.is_zero(c) for c in self.coeffs[self.p + 1:])

    def eval(self, y: ErrFloat) -> ErrFloat:
        """Ball evaluation of the truncated series at y (no tail bound)."""
        yv = ErrFloat._coerce(y)
        acc = ErrFloat(0)
        for q in range(self.Q, self.p - 1, -1):
            c = self.coeffs[q]
            ce = c if isinstance(c, ErrFloat) else ErrFloat.exact(c)
            acc = acc * yv + ce
        return acc * yv ** self.p

    def to_json(self) -> dict:
        terms = []
        for q in range(self.p, self.Q + 1):
            c = self.coeffs[q]
            if self.ring.is_zero(c):
                continue
            terms.append([q, str(c) if self.ring.tag == "exact" else c.to_json()])
        return {"p": self.p, "Q": self.Q, "coeffs": terms}


def compute_alpha_series(f: CoeffSeq, Q: int) -> list[AlphaSeries]:
    """Solve for alpha_p, p = 1..min(Q, deg f), through y-order Q."""
    if f.degree < 0 or f.ring.is_zero(f[0]):
        raise ZeroLeading("A_0 must be nonzero")
    f.require_no_gaps()
    if Q < 1:
        raise ValueError("Q must be >= 1")
    ring = f.ring
    d = f.degree
    P = min(Q, d)
    zero = ring.zero()
    u = [[zero] * (Q + 1) for _ in range(P + 1)]  # u[p][q], p >= 1

    for q in range(1, Q + 1):
        G = _product_arrays(f, u, P, Q)
        pmax = min(q, P)
        S = [zero] * (pmax + 2)
        for p in range(1, pmax + 1):
            depth = q - p
            gval = G[p][depth] if depth < len(G[p]) else zero
            target = f[p] if q == p else zero
            S[p] = (target - gval) / f[p - 1]
        for p in range(1, pmax + 1):
            u[p][q] = S[p] - S[p + 1]

    out = []
    for p in range(1, P + 1):
        out.append(AlphaSeries(p=p, Q=Q, ring=ring, coeffs=tuple(u[p])))
    return out


def _product_arrays(f: CoeffSeq, u, P: int, Q: int):
    """x-coefficients of A_0 prod_{r<=P} (1 + alpha_r x) in a valuation-offset
    layout: G[p][j] holds the coefficient of x^p y^(p(p+1)/2 + j).

    Depth Q - p + 1 per degree covers every residual the level solve reads
    (y-order up to Q + (p-1)p/2 at x^p)."""
    ring = f.ring
    zero = ring.zero()
    G = [[zero] * (Q - p + 1) for p in range(P + 1)]
    G[0][0] = f[0]
    for r in range(1, P + 1):
        alpha = u[r]
        support = [s for s in range(r, Q + 1) if not ring.is_zero(alpha[s])]
        if not support:
            continue
        for p in range(min(P, r), 0, -1):
            src = G[p - 1]
            dst = G[p]
            if not dst:
                continue
            base_src = triangular(p - 1)
            base_dst = triangular(p)
            for j, gv in enumerate(src):
                if ring.is_zero(gv):
                    continue
                for s in support:
                    off = base_src + j + s - base_dst
                    if off < 0:
                        continue
                    if off >= len(dst):
                        break
                    dst[off] = dst[off] + gv * alpha[s]
    return G


def reconstruct_check(alphas: list[AlphaSeries], f: CoeffSeq, Q: int) -> bool:
    """Whether A_0 prod (1 + alpha_p(y) x) reproduces B_y(f) mod y^(Q+1).

    Exact coefficient equality on the exact ring; certified overlap on balls.
    Factors with p > Q cannot contribute below y^(Q+1) since alpha_p has
    valuation p.
    """
    ring = f.ring
    tx = min(len(alphas), f.degree)
    prod = BiSeries.from_terms([(0, 0, f[0])], tx, Q, ring=ring)
    for a in alphas:
        factor = BiSeries(ring, tx, Q)
        factor.set(0, 0, ring.one())
        for q in range(a.p, a.Q + 1):
            factor.set(1, q, a.u(q))
        prod = prod * factor
    target = borel_transform(f, tx, Q)
    return series_compare(prod, target) == "equal"


@dataclass(frozen=True)
class ZeroEval:
    """Enclosure of x_p(y) = -1/alpha_p(y) from the truncated series.

    ``tail_term`` is the magnitude of the last retained term of alpha_p at y;
    ``trusted`` is the heuristic flag |last term| <= tol.  The enclosure is
    certified relative to the *truncated* series; the flag (and the
    convergence floor) qualify how well that approximates the full zero.
    """

    p: int
    value: ErrFloat
    tail_term: mp.mpf
    trusted: bool


def zero_eval(p: int, y, alphas: list[AlphaSeries], tol: float = 1e-30) -> ZeroEval:
    """Evaluate the p-th zero at y through the truncated alpha series."""
    matches = [a for a in alphas if a.p == p]
    if not matches:
        raise ValueError(f"no alpha series with p = {p}")
    a = matches[0]
    yv = ErrFloat._coerce(y)
    denom = a.eval(yv)
    if denom.contains_zero():
        raise NearZeroDenominator(f"alpha_{p}(y) enclosure contains zero")
    last = a.coeffs[a.Q]
    last_ball = last if isinstance(last, ErrFloat) else ErrFloat.exact(last)
    tail = abs(last_ball * yv ** a.Q)
    value = -denom.reciprocal()
    return ZeroEval(p=p, value=value, tail_term=tail.upper(),
                    trusted=bool(tail.upper() <= mp.mpf(tol)))


@dataclass(frozen=True)
class RadiusEstimate:
    """Root-test proxy for the convergence radius of one alpha series."""

    p: int
    estimate: mp.mpf  # mp.inf for polynomial alphas
    method: str
    guaranteed_floor: mp.mpf | None = None


def radius_estimate(alpha: AlphaSeries, omega=None, rho_sq=None) -> RadiusEstimate:
    """min over the stored tail half of |u_p(q)|^(-1/q), the root-test proxy.

    ``omega`` (sup of the consecutive-coefficient ratios) and ``rho_sq`` (the
    lacunary constant squared) attach the guaranteed convergence floor
    rho^2 / omega when both are known and omega is finite.
    """
    if alpha.Q < 2 * alpha.p:
        raise ValueError("need Q >= 2p for a meaningful tail estimate")
    start = (alpha.p + alpha.Q + 1) // 2
    vals = []
    for q in range(start, alpha.Q + 1):
        c = alpha.coeffs[q]
        mag = abs(mp.mpf(float(c))) if isinstance(c, Fraction) else abs(c.mid)
        if mag > 0:
            vals.append(mp.power(mag, mp.mpf(-1) / q))
    if not vals and alpha.is_polynomial_tail_zero():
        est = mp.inf
    elif not vals:
        est = mp.inf
    else:
        est = min(vals)
    floor = None
    if omega is not None and rho_sq is not None and mp.isfinite(mp.mpf(float(omega))):
        om = mp.mpf(float(omega))
        if om > 0:
            rs = rho_sq.mid if isinstance(rho_sq, ErrFloat) else mp.mpf(float(rho_sq))
            floor = rs / om
    return RadiusEstimate(p=alpha.p, estimate=est, method="root-test", guaranteed_floor=floor)
