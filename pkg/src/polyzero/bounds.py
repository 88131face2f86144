"""Inclusion radii for the zeros of a polyanalytic polynomial.

With one top-degree coefficient dominating the others by a surplus
``alpha_n > 0``, every zero satisfies |z| <= r0, where r0 is the positive
root of t**n - sum c_k t**k.  The closed forms r1 (Lagrange) and r2
(Cauchy) bound r0 from above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polycore import PolyPoly, degrees

GUARD_REL = 1e-12
BISECT_STEPS = 40
NEWTON_RTOL = 1e-14


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class BoundsReport:
    alpha_n: float | None
    c: tuple[float, ...]
    r0: float | None
    r1: float | None
    r2: float | None
    applicable: bool
    ell: int | None = None


def dominance_surplus(P: PolyPoly) -> tuple[int, float] | None:
    """(l, alpha_n) for the largest top-degree coefficient, if strictly dominant."""
    if P.is_zero() or P.n < 1:
        raise BoundsError("need deg(P) >= 1")
    top = np.abs(P.top_form())
    ell = int(np.argmax(top))
    rest = float(np.sum(top) - top[ell])
    surplus = float(top[ell]) - rest
    if surplus <= GUARD_REL * float(np.sum(top)):
        return None
    return ell, surplus


def auxiliary_poly(P: PolyPoly) -> list[float]:
    """c_k = sum_j |alpha[j, k - j]| / alpha_n for k = 0..n-1."""
    dom = dominance_surplus(P)
    if dom is None:
        raise BoundsError("no strictly dominant top-degree coefficient")
    _, alpha_n = dom
    return [float(np.sum(np.abs(P.degree_slice(k)))) / alpha_n for k in range(P.n)]


def _q(c: np.ndarray, t: float) -> tuple[float, float]:
    """q(t) = t**n - sum c_k t**k and q'(t), by Horner."""
    n = len(c)
    coef = np.concatenate([-c, [1.0]])
    v, dv = 0.0, 0.0
    for k in range(n, -1, -1):
        dv = dv * t + v
        v = v * t + coef[k]
    return v, dv


def radius_r0(c) -> float:
    """Unique positive root of t**n - sum c_k t**k (0 if every c_k is 0).

    Descartes' rule gives exactly one positive root, and it lies in
    [0, min(r1, r2)]; bisect that bracket, then polish with Newton kept
    inside the bracket.
    """
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        raise BoundsError("empty coefficient list")
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise BoundsError("auxiliary coefficients must be finite and nonnegative")
    if not np.any(c):
        return 0.0
    lo, hi = 0.0, min(max(1.0, float(np.sum(c))), 1.0 + float(np.max(c)))
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if _q(c, mid)[0] < 0:
            lo = mid
        else:
            hi = mid
    # a root far below the bisection resolution: walk down geometrically
    while lo == 0.0 and hi > 0.0 and _q(c, 0.5 * hi)[0] > 0:
        hi *= 0.5
    if lo == 0.0:
        lo = 0.5 * hi
    t = 0.5 * (lo + hi)
    for _ in range(50):
        v, dv = _q(c, t)
        if v == 0 or dv <= 0:
            break
        t_new = min(max(t - v / dv, lo), hi)
        done = abs(t_new - t) <= NEWTON_RTOL * t
        t = t_new
        if done:
            break
    return float(t)


def bounds_report(P: PolyPoly) -> BoundsReport:
    if P.is_zero() or degrees(P).deg < 1:
        raise BoundsError("need deg(P) >= 1")
    dom = dominance_surplus(P)
    if dom is None:
        return BoundsReport(None, (), None, None, None, False)
    ell, alpha_n = dom
    c = auxiliary_poly(P)
    if not any(c):
        return BoundsReport(alpha_n, tuple(c), 0.0, 1.0, 1.0, True, ell)
    r1 = max(1.0, sum(c))
    r2 = 1.0 + max(c)
    r0 = float(min(radius_r0(c), r1, r2))
    return BoundsReport(alpha_n, tuple(c), r0, r1, r2, True, ell)
