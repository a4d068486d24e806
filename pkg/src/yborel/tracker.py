"""Numerical root finding for transformed polynomials and trajectory
tracking across the deformation parameter y.

Roots are found simultaneously by the Aberth-Ehrlich iteration with
Newton-polygon initial guesses (radii from the upper convex hull of
(k, log |c_k|), which handles the extreme magnitude spread of the
transformed coefficients).  Every returned root carries a rigorous residual
upper bound |P(root)| from a running-error Horner evaluation.  Reality at
finite precision is a calibrated classification, not a proof: a root is
flagged real when its imaginary part is below reality_tol relative to its
magnitude and it does not pair up with a distinct conjugate partner.

A sweep samples a y grid, matches roots between consecutive samples
(nearest neighbour with an optimal-assignment fallback near collisions),
refines adaptively around reality flips and separation minima, and records
collision events.  At a double zero (a, b) of the two-variable polynomial,
the colliding pair follows a square-root branch: for y = b + h the
imaginary part grows like (|a|/sqrt(b)) sqrt(h), which
``puiseux_branch_check`` verifies by a log-log fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp
from mpmath import mpc, mpf

from .numerics import DEFAULT_CONTEXT, ErrFloat, PrecisionContext
from .series import CoeffSeq, triangular

__all__ = [
    "CollisionEvent",
    "FindRootsResult",
    "InsufficientSamples",
    "PuiseuxReport",
    "RootEstimate",
    "SweepResult",
    "TrackConfig",
    "Trajectory",
    "TrajectorySample",
    "borel_poly_midpoints",
    "find_roots",
    "puiseux_branch_check",
    "sweep_y",
]


class InsufficientSamples(Exception):
    """The collision pair could not be resolved on the sampling ladder."""


@dataclass(frozen=True)
class RootEstimate:
    value: mpc
    residual: mpf          # certified upper bound for |P(value)|
    converged: bool


@dataclass(frozen=True)
class FindRootsResult:
    roots: list
    converged: bool
    iterations: int


def _to_mpc(c) -> mpc:
    if isinstance(c, ErrFloat):
        return mpc(c.mid)
    if isinstance(c, Fraction):
        return mpc(mpf(c.numerator) / c.denominator)
    return mpc(c)


def _horner_with_bound(coeffs, z: mpc):
    """(value, certified residual bound) of P at z: running-error Horner."""
    acc = mpc(0)
    amag = mpf(0)
    zmag = abs(z)
    for c in reversed(coeffs):
        acc = acc * z + c
        amag = amag * zmag + abs(c)
    n = len(coeffs)
    u = mp.ldexp(mpf(1), 4 - mp.mp.prec)
    bound = abs(acc) + (2 * n + 1) * u * amag
    return acc, bound


def _initial_guesses(coeffs):
    """Newton-polygon radii (upper hull of (k, log2 |c_k|)) with spread
    angles; deterministic."""
    pts = [(k, mp.log(abs(c), 2)) for k, c in enumerate(coeffs) if abs(c) > 0]
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    guesses = []
    for e, ((k1, v1), (k2, v2)) in enumerate(zip(hull, hull[1:])):
        m = k2 - k1
        radius = mp.power(2, (v1 - v2) / m)
        for j in range(m):
            theta = 2 * mp.pi * (j + mpf("0.3731")) / m + mpf("0.91") * (e + 1)
            guesses.append(radius * mpc(mp.cos(theta), mp.sin(theta)))
    return guesses


def find_roots(coeffs, ctx: PrecisionContext = DEFAULT_CONTEXT,
               maxsteps: int = 400) -> FindRootsResult:
    """All roots of a polynomial (coefficients ascending; ErrFloat midpoints,
    Fractions, mpf/mpc or floats accepted), with residual bounds.

    Deterministic for a fixed context: fixed initial configuration and
    iteration order.  When the iteration cap is reached the best iterates
    are returned flagged unconverged.
    """
    cs = [_to_mpc(c) for c in coeffs]
    while cs and abs(cs[-1]) == 0:
        cs.pop()
    if len(cs) < 2:
        return FindRootsResult(roots=[], converged=True, iterations=0)
    prec = max(ctx.working_precision, 64)
    with mp.workprec(prec + 32):
        cs = [mpc(c) for c in cs]
        n = len(cs) - 1
        z = _initial_guesses(cs)
        assert len(z) == n
        eps = mp.ldexp(mpf(1), -(prec - 4))
        converged = False
        it = 0
        stall = 0
        last_max = mp.inf
        for it in range(1, maxsteps + 1):
            corrections = []
            maxcorr = mpf(0)
            for j in range(n):
                pj, _ = _horner_with_bound(cs, z[j])
                dpj = _dhorner(cs, z[j])
                if abs(dpj) == 0:
                    w = mpc(eps)
                else:
                    w = pj / dpj
                s = mpc(0)
                for i in range(n):
                    if i != j:
                        d = z[j] - z[i]
                        if abs(d) == 0:
                            d = mpc(eps) * (1 + abs(z[j]))
                        s += 1 / d
                denom = 1 - w * s
                corr = w if abs(denom) == 0 else w / denom
                corrections.append(corr)
                rel = abs(corr) / max(mpf(1), abs(z[j]))
                maxcorr = max(maxcorr, rel)
            for j in range(n):
                z[j] = z[j] - corrections[j]
            if maxcorr <= eps:
                converged = True
                break
            if maxcorr >= last_max * mpf("0.9"):
                stall += 1
                # clusters (multiple roots) stop contracting quadratically;
                # accept once corrections are far below the reality scale
                if stall > 24 and maxcorr < mp.ldexp(mpf(1), -(prec // 2)):
                    converged = True
                    break
            else:
                stall = 0
            last_max = maxcorr
        roots = []
        for j in range(n):
            _, bound = _horner_with_bound(cs, z[j])
            roots.append(RootEstimate(value=z[j], residual=bound, converged=converged))
        roots.sort(key=lambda r: (mp.re(r.value), mp.im(r.value)))
        return FindRootsResult(roots=roots, converged=converged, iterations=it)


def _dhorner(coeffs, z: mpc) -> mpc:
    acc = mpc(0)
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * z + k * coeffs[k]
    return acc


def borel_poly_midpoints(coeffs, y) -> list:
    """Midpoint coefficients of B_y applied to the given x-polynomial:
    c_k y^(k(k+1)/2) as mpf/mpc values (numeric, for the tracker)."""
    yv = mpf(y) if not isinstance(y, (mpf, mpc)) else y
    out = []
    power = mpf(1)
    step = yv
    for k, c in enumerate(coeffs):
        if k > 0:
            power = power * step
            step = step * yv
        out.append(_to_mpc(c) * power)
    return out


# ----------------------------------------------------------------------------
# Sweeps over y
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TrackConfig:
    y_grid: tuple
    reality_tol: float = 1e-20
    simplicity_tol: float = 1e-6
    refine_steps: int = 40
    ctx: PrecisionContext = DEFAULT_CONTEXT

    def __post_init__(self):
        ys = tuple(self.y_grid)
        if not ys or any(not 0 < float(y) < 1 for y in ys):
            raise ValueError("y_grid must lie strictly inside (0, 1)")
        if list(ys) != sorted(set(float(y) for y in ys)) and \
           [float(y) for y in ys] != sorted(set(float(y) for y in ys)):
            raise ValueError("y_grid must be strictly increasing")
        if self.reality_tol <= 0 or self.simplicity_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class TrajectorySample:
    y: float
    value: mpc
    residual: mpf
    is_real: bool
    min_separation: float


@dataclass
class Trajectory:
    index: int
    samples: list = field(default_factory=list)


@dataclass(frozen=True)
class CollisionEvent:
    """Closest-approach / reality-flip record: double-root point estimate."""

    a: float   # colliding root location (real part)
    b: float   # y at the collision
    pair: tuple
    kind: str  # "reality_flip" | "separation_dip"


@dataclass
class SweepResult:
    trajectories: list
    events: list
    verdicts: list  # (y, "all_real_simple" | "real_with_collision" | "complex_present")
    y_values: list


def _classify(roots, reality_tol):
    """Boolean reality flags: small relative imaginary part, and no distinct
    near-conjugate partner with a significant imaginary part."""
    n = len(roots)
    tol = mpf(reality_tol)
    flags = []
    for j, r in enumerate(roots):
        scale = max(mpf(1), abs(r))
        small_im = abs(mp.im(r)) <= tol * scale
        if small_im and abs(mp.im(r)) > 0:
            for i in range(n):
                if i == j:
                    continue
                partner = abs(roots[i] - mp.conj(r)) <= 4 * tol * scale
                opposite = mp.im(roots[i]) * mp.im(r) < 0
                if partner and opposite and abs(mp.im(roots[i])) > tol * scale:
                    small_im = False
                    break
        flags.append(bool(small_im))
    return flags


def _min_separation(roots) -> float:
    n = len(roots)
    if n < 2:
        return math.inf
    best = mp.inf
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(roots[i] - roots[j]) / max(mpf(1), abs(roots[i]), abs(roots[j]))
            best = min(best, d)
    return float(best)


def _match(prev, cur):
    """Match current roots to previous ones; nearest neighbour first, optimal
    assignment when that collides."""
    n = len(cur)
    taken = {}
    order = []
    collision = False
    for i, r in enumerate(cur):
        j = min(range(n), key=lambda k: abs(r - prev[k]))
        if j in taken:
            collision = True
            break
        taken[j] = i
        order.append(j)
    if not collision:
        perm = [0] * n
        for i, j in enumerate(order):
            perm[j] = i
        return perm
    import numpy as np
    from scipy.optimize import linear_sum_assignment
    cost = np.array([[float(mp.log(abs(cur[i] - prev[j]) + mpf("1e-300")))
                      for j in range(n)] for i in range(n)])
    rows, cols = linear_sum_assignment(cost)
    perm = [0] * n
    for i, j in zip(rows, cols):
        perm[j] = i
    return perm


def _verdict(flags, min_sep, simplicity_tol) -> str:
    if not all(flags):
        return "complex_present"
    if min_sep <= simplicity_tol:
        return "real_with_collision"
    return "all_real_simple"


def sweep_y(coeffs, config: TrackConfig) -> SweepResult:
    """Track the roots of B_y(P) across the grid; P given by ascending
    coefficients (balls, rationals, or numbers).

    Adaptive refinement: between adjacent samples whose verdicts differ, or
    where the separation dips below 4x the simplicity tolerance, midpoints
    are inserted (up to refine_steps rounds) so flips are localized.
    Collision events record reality flips with a bisection estimate of the
    double-root point.
    """
    if isinstance(coeffs, CoeffSeq):
        coeffs = list(coeffs.coeffs)
    ys = [mpf(y) for y in config.y_grid]
    ctx = config.ctx

    def solve(y):
        res = find_roots(borel_poly_midpoints(coeffs, y), ctx)
        return res

    samples = {}
    for y in ys:
        samples[float(y)] = solve(y)

    # refinement rounds
    for _ in range(config.refine_steps):
        keys = sorted(samples)
        inserted = False
        for y0, y1 in zip(keys, keys[1:]):
            r0 = samples[y0].roots
            r1 = samples[y1].roots
            f0 = _classify([r.value for r in r0], config.reality_tol)
            f1 = _classify([r.value for r in r1], config.reality_tol)
            v0 = _verdict(f0, _min_separation([r.value for r in r0]), config.simplicity_tol)
            v1 = _verdict(f1, _min_separation([r.value for r in r1]), config.simplicity_tol)
            if v0 != v1 and (y1 - y0) > 1e-9:
                ym = (y0 + y1) / 2
                samples[ym] = solve(mpf(ym))
                inserted = True
        if not inserted:
            break

    keys = sorted(samples)
    n = len(samples[keys[0]].roots)
    trajectories = [Trajectory(index=i) for i in range(n)]
    verdicts = []
    events = []
    prev_roots = None
    prev_flags = None
    prev_y = None
    order = list(range(n))
    for y in keys:
        res = samples[y]
        roots = [r.value for r in res.roots]
        if prev_roots is not None:
            perm = _match(prev_roots, roots)
            roots = [roots[perm[i]] for i in range(n)]
            ests = [res.roots[perm[i]] for i in range(n)]
        else:
            ests = list(res.roots)
        flags = _classify(roots, config.reality_tol)
        min_sep = _min_separation(roots)
        verdicts.append((y, _verdict(flags, min_sep, config.simplicity_tol)))
        for i in range(n):
            trajectories[i].samples.append(TrajectorySample(
                y=y, value=roots[i], residual=ests[i].residual,
                is_real=bool(flags[i]), min_separation=min_sep))
        if prev_flags is not None and all(prev_flags) and not all(flags):
            pair = tuple(i for i in range(n) if not flags[i])[:2]
            a, b = _bisect_flip(coeffs, prev_y, y, config)
            events.append(CollisionEvent(a=a, b=b, pair=pair, kind="reality_flip"))
        prev_roots = roots
        prev_flags = flags
        prev_y = y
    return SweepResult(trajectories=trajectories, events=events,
                       verdicts=verdicts, y_values=keys)


def _bisect_flip(coeffs, y_real, y_complex, config) -> tuple:
    """Bisect the reality flip between two y samples; returns (a, b) with a
    the colliding root location at the last all-real parameter."""
    lo = mpf(y_real)
    hi = mpf(y_complex)
    ctx = config.ctx
    a_loc = None
    for _ in range(config.refine_steps + 20):
        mid = (lo + hi) / 2
        res = find_roots(borel_poly_midpoints(coeffs, mid), ctx)
        flags = _classify([r.value for r in res.roots], config.reality_tol)
        if all(flags):
            lo = mid
            roots = sorted((r.value for r in res.roots), key=lambda z: mp.re(z))
            best = None
            for u, v in zip(roots, roots[1:]):
                d = abs(u - v)
                if best is None or d < best[0]:
                    best = (d, (mp.re(u) + mp.re(v)) / 2)
            a_loc = best[1]
        else:
            hi = mid
        if hi - lo < mpf("1e-12"):
            break
    if a_loc is None:
        res = find_roots(borel_poly_midpoints(coeffs, lo), ctx)
        roots = sorted((r.value for r in res.roots), key=lambda z: mp.re(z))
        best = min(((abs(u - v), (mp.re(u) + mp.re(v)) / 2)
                    for u, v in zip(roots, roots[1:])), key=lambda t: t[0])
        a_loc = best[1]
    return float(a_loc), float((lo + hi) / 2)


# ----------------------------------------------------------------------------
# Square-root branch verification at a collision
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PuiseuxReport:
    exponent_fit: float
    kappa_fit: float
    predicted_kappa: float
    relative_error: float
    samples: tuple


def puiseux_branch_check(event: CollisionEvent, coeffs,
                         ctx: PrecisionContext = DEFAULT_CONTEXT,
                         h_values=None) -> PuiseuxReport:
    """Fit the branch exponent and amplitude of the imaginary part emerging
    from a collision at (a, b): expect Im ~ (|a|/sqrt(b)) h^(1/2).

    Samples y = b + h on a geometric ladder, takes the conjugate pair
    nearest the collision location, fits log |Im| against log h by least
    squares, and reports the amplitude at the smallest resolved h.
    """
    if isinstance(coeffs, CoeffSeq):
        coeffs = list(coeffs.coeffs)
    a = mpf(event.a)
    b = mpf(event.b)
    if not 0 < b < 1 or a == 0:
        raise ValueError("need a collision with b in (0,1) and real a != 0")
    if h_values is None:
        h_values = [mpf(10) ** (-e) for e in (3, 4, 5, 6, 7, 8)]
    pts = []
    for h in h_values:
        res = find_roots(borel_poly_midpoints(coeffs, b + h), ctx)
        cand = [r for r in res.roots if mp.im(r.value) > 0]
        cand.sort(key=lambda r: abs(mp.re(r.value) - a))
        if not cand:
            continue
        best = cand[0]
        im = mp.im(best.value)
        if im <= best.residual * 4:
            continue  # pair not resolved above the numeric noise floor
        pts.append((h, im))
    if len(pts) < 3:
        raise InsufficientSamples(
            f"only {len(pts)} resolved samples on the h ladder")
    xs = [mp.log(h) for h, _ in pts]
    ys = [mp.log(im) for _, im in pts]
    m = len(pts)
    xbar = sum(xs) / m
    ybar = sum(ys) / m
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) \
        / sum((x - xbar) ** 2 for x in xs)
    h_min, im_min = min(pts, key=lambda t: t[0])
    kappa_fit = im_min / mp.sqrt(h_min)
    predicted = abs(a) / mp.sqrt(b)
    rel = abs(kappa_fit - predicted) / predicted
    return PuiseuxReport(exponent_fit=float(slope), kappa_fit=float(kappa_fit),
                         predicted_kappa=float(predicted),
                         relative_error=float(rel),
                         samples=tuple((float(h), float(im)) for h, im in pts))
