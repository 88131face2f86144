"""Harmonic polynomials of degree n with the maximal n**2 zeros.

P_1 = a_1 zbar and P_k = P_{k-1} + a_k z**k (k even) or + a_k zbar**k
(k odd).  For |a_k| small enough P_k keeps one zero near each zero of
P_{k-1} and gains 2k - 1 zeros near the circle |z| = |a_{k-1}| / |a_k|.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polycore import PolyPoly, evaluate
from .rootfind import CensusZero, NewtonOptions, ZeroCensus, _index_radii, dedupe, newton_many
from .winding import Circle, index, winding

log = logging.getLogger(__name__)

# a_1 .. a_10 of the worked ten-stage example
EXAMPLE_COEFFS: tuple[float, ...] = (1.0, 1.0, 1e-1, 1e-3, 1e-6, 1e-10, 1e-16, 1e-24, 1e-34, 1e-47)

CIRCLE_SAMPLES = 1024
MARGIN = 0.5
MAX_SHRINKS = 200
MAX_MAGNITUDE = 1e300
FIDELITY = 0.05


class ExtremalError(RuntimeError):
    pass


class ExtremalRangeError(ExtremalError, OverflowError):
    pass


@dataclass(frozen=True)
class ExtremalSchedule:
    """Coefficients a_1..a_n, enclosing radii r_1..r_n and the Rouche
    slack 1 - |a_k| / bound_k recorded for each stage."""

    a: tuple[complex, ...]
    r: tuple[float, ...]
    margins: tuple[float, ...]

    def __post_init__(self):
        if not self.a or any(x == 0 for x in self.a):
            raise ValueError("coefficients must be nonzero")
        if not (len(self.a) == len(self.r) == len(self.margins)):
            raise ValueError("schedule lists differ in length")
        if any(r1 >= r2 for r1, r2 in zip(self.r, self.r[1:])):
            raise ValueError("radii must increase strictly")

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class Seed:
    k: int
    j: int
    zeta: complex


def _poly(a: Sequence[complex]) -> PolyPoly:
    terms = {}
    for k, ak in enumerate(a, 1):
        terms[(k, 0) if k % 2 == 0 else (0, k)] = ak
    return PolyPoly.from_terms(terms)


def extremal_poly(schedule: ExtremalSchedule) -> PolyPoly:
    """sum a_{2k} z**(2k) + sum a_{2k-1} zbar**(2k-1)."""
    return _poly(schedule.a)


def _stage_seeds(a_prev: complex, a_k: complex, k: int) -> list[Seed]:
    rho = abs(a_prev) / abs(a_k)
    phase = cmath.phase(a_prev / a_k)
    return [Seed(k, j, rho * cmath.exp(1j * (phase + (2 * j + 1) * math.pi) / (2 * k - 1))) for j in range(1, 2 * k)]


def _seeds_for(a: Sequence[complex]) -> list[Seed]:
    seeds = [Seed(1, 1, 0j)]
    for k in range(2, len(a) + 1):
        seeds += _stage_seeds(a[k - 2], a[k - 1], k)
    return seeds


def truncation_seeds(schedule: ExtremalSchedule) -> list[Seed]:
    """Zeros of the truncations a_k z**k + a_{k-1} zbar**(k-1), plus 0."""
    return _seeds_for(schedule.a)


def _sign_for(k: int) -> int:
    return 1 if k % 2 == 0 else -1


def _stage_zeros(P: PolyPoly, seeds: np.ndarray) -> np.ndarray | None:
    """Distinct converged Newton limits from ``seeds``, or None if any fails."""
    res = newton_many(P, seeds, scale=P.abs_eval)
    if not all(r.converged for r in res):
        return None
    pts = np.array([r.z for r in res])
    return pts[dedupe(pts)]


def _rouche_ratios(P_prev: PolyPoly, zeros: np.ndarray, r_prev: float, a_k: complex, k: int) -> tuple[float, float]:
    """|a_k| over the two Rouche bounds: around each old zero and on |z| = r_prev."""
    th = np.exp(2j * np.pi * np.arange(CIRCLE_SAMPLES) / CIRCLE_SAMPLES)
    if len(zeros) > 1:
        dist = np.abs(zeros[:, None] - zeros[None, :])
        np.fill_diagonal(dist, np.inf)
        deltas = 0.5 * dist.min(axis=1)
    else:
        deltas = np.array([r_prev])
    m = math.inf
    for zj, dj in zip(zeros, deltas):
        w = zj + dj * th
        m = min(m, float(np.min(np.abs(evaluate(P_prev, w)) / np.abs(w) ** k)))
    ring = r_prev * th
    m2 = float(np.min(np.abs(evaluate(P_prev, ring)))) / r_prev**k
    return abs(a_k) / m, abs(a_k) / m2


def _accept(a, ak, k, zeros, r_prev, r_k, limit, check_fidelity) -> tuple[float, np.ndarray] | None:
    """(Rouche ratio, zeros of P_k) if the proposal a_k passes.

    Checks both Rouche inequalities, k**2 distinct zeros, the winding on
    |z| = r_k and, for generated coefficients, that every zero stays within
    FIDELITY (relative) of its truncation seed.
    """
    ratio = max(_rouche_ratios(_poly(a), zeros, r_prev, ak, k))
    if not ratio < limit:
        return None
    Pk = _poly(a + [ak])
    seeds = np.array([s.zeta for s in _seeds_for(a + [ak])])
    new = _stage_zeros(Pk, np.concatenate([zeros, seeds[len(zeros):]]))
    if new is None or len(new) != k * k:
        return None
    if check_fidelity:
        drift = np.abs(new - seeds)[seeds != 0] / np.abs(seeds[seeds != 0])
        if np.any(drift > FIDELITY):
            return None
    if winding(Pk, Circle(0j, r_k)).wind != _sign_for(k) * k:
        return None
    return ratio, new


def extremal_coefficients(n: int, base: Sequence[complex] | None = None, margin: float = MARGIN) -> ExtremalSchedule:
    """Choose a_1..a_n so that every stage provably gains 2k - 1 zeros.

    Each proposal is checked against both Rouche inequalities (sampled on
    1024 points per circle) and by counting the k**2 zeros of P_k; failing
    proposals are divided by 10.  Generated proposals must clear the
    inequalities with ratio below ``margin`` and keep every zero within 5%
    of its truncation seed; coefficients taken from ``base`` only need
    ratio below 1.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if base is not None and any(b == 0 for b in base):
        raise ValueError("base coefficients must be nonzero")
    a: list[complex] = [complex(base[0]) if base else 1.0 + 0j]
    if n == 1:
        return ExtremalSchedule(tuple(a), (1.0,), (1.0,))
    zeros = np.array([0j])
    radii: list[float] = [math.nan]
    margins = [1.0]
    for k in range(2, n + 1):
        from_base = base is not None and len(base) >= k
        ak = complex(base[k - 1]) if from_base else abs(a[-1]) * 10.0 ** (-(k + 1))
        limit = 1.0 if from_base else margin
        for _ in range(MAX_SHRINKS):
            rho = abs(a[-1]) / abs(ak)
            r_prev = rho / 4 if k == 2 else radii[-1]
            r_k = 2 * rho
            # |z|**k on the stage circles and |a_k| r_k**k must stay representable
            if k * math.log10(r_k) + max(0.0, math.log10(abs(ak))) > math.log10(MAX_MAGNITUDE):
                raise ExtremalRangeError(f"stage {k}: magnitudes beyond 1e300")
            passed = _accept(a, ak, k, zeros, r_prev, r_k, limit, check_fidelity=not from_base)
            if passed is not None:
                break
            ak /= 10
            limit = margin
            from_base = False
        else:
            raise ExtremalError(f"stage {k}: no admissible coefficient after {MAX_SHRINKS} shrinks")
        ratio, new = passed
        if k == 2:
            radii[0] = r_prev
        a.append(ak)
        radii.append(r_k)
        margins.append(1.0 - ratio)
        zeros = new
    return ExtremalSchedule(tuple(a), tuple(radii), tuple(margins))


def verify_extremal(schedule: ExtremalSchedule, opts: NewtonOptions | None = None) -> tuple[ZeroCensus, float]:
    """Newton from every truncation seed; check n**2 distinct zeros and the
    index bookkeeping.

    Residuals are relative to |a_k z**k| for a seed of stage k.  Returns the
    census (ordered by seed) and the largest relative residual.
    """
    n = schedule.n
    P = extremal_poly(schedule)
    seeds = truncation_seeds(schedule)
    ks = np.array([s.k for s in seeds])
    ak = np.array([abs(schedule.a[k - 1]) for k in ks])

    def scale(z):
        return ak * np.abs(z) ** ks

    res = newton_many(P, [s.zeta for s in seeds], opts, scale)
    bad = [s for s, r in zip(seeds, res) if not r.converged]
    if bad:
        raise ExtremalError(f"Newton failed from {len(bad)} seeds, first at stage {bad[0].k}")
    pts = np.array([r.z for r in res])
    keep = dedupe(pts)
    if len(keep) != n * n:
        raise ExtremalError(f"found {len(keep)} distinct zeros, expected {n * n}")
    outer = schedule.r[-1]
    radii = _index_radii(pts, 2 * outer)
    idx = [index(P, pts[i], radii[i]) for i in range(n * n)]
    boundary = winding(P, Circle(0j, outer)).wind
    expected = _sign_for(n) * n
    if boundary != expected or sum(idx) != boundary:
        raise ExtremalError(f"index sum {sum(idx)}, boundary winding {boundary}, expected {expected}")
    zeros = []
    for r, k in zip(res, idx):
        sign = r.jacobian_sign if abs(k) == 1 else 0
        zeros.append(CensusZero(r.z, k, sign, r.residual))
    census = ZeroCensus(tuple(zeros), boundary, True, float(outer), sum(idx))
    return census, max(r.residual for r in res)
