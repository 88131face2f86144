"""Polyanalytic Newton iteration and the zero atlas.

Newton linearizes P(z + d) ~ P + a d + b conj(d) with a = dP/dz and
b = dP/dzbar, and solves the real 2x2 system in closed form.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .polycore import PolyPoly, evaluate, wirtinger
from .winding import Circle, WindingError, index, winding

log = logging.getLogger(__name__)

MAX_HALVINGS = 20
SINGULAR_REL = 1e-6
CLUSTER_REL = 1e-5


class SingularPointError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NewtonOptions:
    max_iter: int = 100
    tol_step: float = 1e-14
    tol_residual: float = 1e-12
    jacobian_floor: float = 1e-300

    def __post_init__(self):
        if min(self.max_iter, self.tol_step, self.tol_residual, self.jacobian_floor) <= 0:
            raise ValueError("Newton options must be positive")


@dataclass(frozen=True)
class RootResult:
    z: complex
    converged: bool
    iters: int
    residual: float
    jacobian_sign: int
    status: str = ""


@dataclass(frozen=True)
class CensusZero:
    z: complex
    index: int
    jacobian_sign: int
    residual: float


@dataclass(frozen=True)
class ZeroCensus:
    zeros: tuple[CensusZero, ...]
    total_winding: int
    certified: bool
    disk_radius: float
    index_sum: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.zeros)

    @property
    def points(self) -> np.ndarray:
        return np.array([c.z for c in self.zeros], dtype=complex)

    @property
    def indices(self) -> list[int]:
        return [c.index for c in self.zeros]

    @property
    def r_star(self) -> float:
        """Largest zero modulus, 0 when there are no zeros."""
        return max((abs(c.z) for c in self.zeros), default=0.0)


def default_scale(P: PolyPoly) -> Callable[[np.ndarray], np.ndarray]:
    """Residual scale max(1, |z|**n) * max|alpha|."""
    n, m = P.n, P.max_abs_coeff()
    return lambda z: np.maximum(1.0, np.abs(z) ** n) * m


class _Derivs:
    def __init__(self, P: PolyPoly):
        self.P = P
        self.dz = wirtinger(P, "dz")
        self.dzb = wirtinger(P, "dzbar")


def newton_step(P: PolyPoly, z: complex, jacobian_floor: float = 1e-300) -> complex:
    """One undamped Newton step from z."""
    a = complex(evaluate(wirtinger(P, "dz"), z))
    b = complex(evaluate(wirtinger(P, "dzbar"), z))
    J = abs(a) ** 2 - abs(b) ** 2
    if abs(J) <= jacobian_floor:
        raise SingularPointError(f"singular point {z!r} (J = {J:g})")
    p = complex(evaluate(P, z))
    return z + (b * p.conjugate() - a.conjugate() * p) / J


def newton_many(
    P: PolyPoly,
    seeds: Sequence[complex] | np.ndarray,
    opts: NewtonOptions | None = None,
    scale: Callable[[np.ndarray], np.ndarray] | None = None,
    *,
    _derivs: _Derivs | None = None,
) -> list[RootResult]:
    """Damped Newton from every seed, vectorized across seeds.

    A step is halved (up to 20 times) until |P| decreases; iteration for a
    seed stops when the step is below ``tol_step * max(1, |z|)``, when no
    halving decreases |P|, at a singular point, or after ``max_iter``.
    ``converged`` is decided by the final relative residual
    |P(z)| / scale(z) <= tol_residual.
    """
    opts = opts or NewtonOptions()
    scale = scale or default_scale(P)
    d = _derivs or _Derivs(P)
    z = np.array(seeds, dtype=complex).ravel()
    m = z.size
    iters = np.zeros(m, dtype=int)
    status = np.full(m, "max_iter", dtype=object)
    active = np.ones(m, dtype=bool)
    for it in range(opts.max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zi = z[idx]
        p = evaluate(P, zi)
        a = evaluate(d.dz, zi)
        b = evaluate(d.dzb, zi)
        J = np.abs(a) ** 2 - np.abs(b) ** 2
        hit = p == 0
        sing = (np.abs(J) <= opts.jacobian_floor) & ~hit
        status[idx[hit]] = "exact"
        status[idx[sing]] = "singular"
        active[idx[hit | sing]] = False
        keep = ~(hit | sing)
        idx, zi, p, a, b, J = idx[keep], zi[keep], p[keep], a[keep], b[keep], J[keep]
        if idx.size == 0:
            break
        delta = (b * np.conj(p) - np.conj(a) * p) / J
        ap = np.abs(p)
        t = np.ones(idx.size)
        trial = zi + delta
        with np.errstate(over="ignore", invalid="ignore"):
            pt = np.abs(evaluate(P, np.where(np.isfinite(trial), trial, zi)))
        ok = np.isfinite(trial) & (pt < ap)
        for _ in range(MAX_HALVINGS):
            if ok.all():
                break
            nb = ~ok
            t[nb] *= 0.5
            trial[nb] = zi[nb] + t[nb] * delta[nb]
            with np.errstate(over="ignore", invalid="ignore"):
                pt[nb] = np.abs(evaluate(P, np.where(np.isfinite(trial[nb]), trial[nb], zi[nb])))
            ok[nb] = np.isfinite(trial[nb]) & (pt[nb] < ap[nb])
        stall = ~ok
        status[idx[stall]] = "stalled"
        active[idx[stall]] = False
        mv = idx[ok]
        z[mv] = trial[ok]
        iters[mv] = it + 1
        step = t[ok] * np.abs(delta[ok])
        small = step <= opts.tol_step * np.maximum(1.0, np.abs(z[mv]))
        status[mv[small]] = "step"
        active[mv[small]] = False

    p = evaluate(P, z)
    sc = scale(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        res = np.where(p == 0, 0.0, np.abs(p) / sc)
    res = np.where(np.isfinite(res), res, np.inf)
    J = np.abs(evaluate(d.dz, z)) ** 2 - np.abs(evaluate(d.dzb, z)) ** 2
    sign = np.where(np.abs(J) <= opts.jacobian_floor, 0, np.sign(J)).astype(int)
    return [
        RootResult(complex(z[i]), bool(res[i] <= opts.tol_residual), int(iters[i]), float(res[i]), int(sign[i]), str(status[i]))
        for i in range(m)
    ]


def newton(
    P: PolyPoly,
    z0: complex,
    opts: NewtonOptions | None = None,
    scale: Callable[[np.ndarray], np.ndarray] | None = None,
) -> RootResult:
    return newton_many(P, [z0], opts, scale)[0]


def hex_seeds(radius: float, spacing: float) -> np.ndarray:
    """Hexagonal lattice points inside the closed disk |z| <= radius."""
    dy = spacing * math.sqrt(3) / 2
    rows = int(math.ceil(radius / dy))
    cols = int(math.ceil(radius / spacing)) + 1
    iy = np.arange(-rows, rows + 1)
    ix = np.arange(-cols, cols + 1)
    X, Y = np.meshgrid(ix * spacing, iy * dy)
    X = X + np.where(iy[:, None] % 2 == 1, spacing / 2, 0.0)
    pts = (X + 1j * Y).ravel()
    return pts[np.abs(pts) <= radius]


def dedupe(points: Sequence[complex], rel: float = 1e-8) -> list[int]:
    """Indices of representatives, in input order, merging points within
    ``rel * (1 + |z|)`` of an earlier representative."""
    reps: list[int] = []
    pts = np.asarray(points, dtype=complex)
    for i, z in enumerate(pts):
        if reps:
            d = np.abs(pts[reps] - z)
            if np.any(d <= rel * (1 + np.abs(z))):
                continue
        reps.append(i)
    return reps


def _near_singular(P: PolyPoly, z: np.ndarray) -> np.ndarray:
    a = np.abs(evaluate(wirtinger(P, "dz"), z)) ** 2
    b = np.abs(evaluate(wirtinger(P, "dzbar"), z)) ** 2
    return np.abs(a - b) <= SINGULAR_REL * (a + b)


def _merge_singular(P: PolyPoly, reps: list[RootResult], scale) -> list[RootResult]:
    """Collapse clusters around zeros where the Jacobian vanishes.

    Newton only resolves such zeros to about sqrt(eps), so copies of one
    zero can sit farther apart than the dedupe radius.
    """
    if len(reps) < 2:
        return reps
    pts = np.array([r.z for r in reps])
    sing = _near_singular(P, pts)
    parent = list(range(len(reps)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if (sing[i] or sing[j]) and abs(pts[i] - pts[j]) <= CLUSTER_REL * (1 + abs(pts[i])):
                parent[root(j)] = root(i)
    groups: dict[int, list[int]] = {}
    for i in range(len(reps)):
        groups.setdefault(root(i), []).append(i)
    out = []
    for members in groups.values():
        if len(members) == 1:
            out.append(reps[members[0]])
            continue
        zc = complex(np.mean(pts[members]))
        pc = abs(complex(evaluate(P, zc)))
        res = pc / float(scale(np.array([zc]))[0]) if pc else 0.0
        best = reps[members[0]]
        out.append(RootResult(zc, True, best.iters, res, 0, "merged"))
    return out


def polish_singular(P: PolyPoly, z0: complex, max_iter: int = 20) -> complex:
    """Refine a zero where J = 0 by Gauss-Newton on (Re P, Im P, J) = 0.

    Plain Newton stalls near sqrt(eps) at such zeros, but the augmented
    real system is usually still regular there.  Returns z0 unchanged when
    the augmented Jacobian is rank deficient or the iteration wanders off.
    """
    a_, b_ = wirtinger(P, "dz"), wirtinger(P, "dzbar")
    az, azb, bz, bzb = (wirtinger(a_, "dz"), wirtinger(a_, "dzbar"), wirtinger(b_, "dz"), wirtinger(b_, "dzbar"))
    z = complex(z0)
    limit = CLUSTER_REL * (1 + abs(z0))
    for _ in range(max_iter):
        p, a, b = (complex(evaluate(Q, z)) for Q in (P, a_, b_))
        w = abs(a) + abs(b)
        if w == 0:
            return complex(z0)
        J = (abs(a) ** 2 - abs(b) ** 2) / w
        dJ = (complex(evaluate(az, z)) * a.conjugate() + a * complex(evaluate(azb, z)).conjugate()
              - complex(evaluate(bz, z)) * b.conjugate() - b * complex(evaluate(bzb, z)).conjugate()) / w
        px, py = a + b, 1j * (a - b)
        M = np.array([[px.real, py.real], [px.imag, py.imag], [2 * dJ.real, -2 * dJ.imag]])
        sv = np.linalg.svd(M, compute_uv=False)
        if sv[-1] <= 1e-8 * sv[0]:
            return complex(z0)
        step, *_ = np.linalg.lstsq(M, -np.array([p.real, p.imag, J]), rcond=None)
        z += complex(step[0], step[1])
        if abs(z - z0) > limit:
            return complex(z0)
        if math.hypot(step[0], step[1]) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return z


def _polish_all(P: PolyPoly, reps: list[RootResult], scale) -> list[RootResult]:
    if not reps:
        return reps
    sing = _near_singular(P, np.array([r.z for r in reps]))
    out = []
    for r, s in zip(reps, sing):
        if s:
            z = polish_singular(P, r.z)
            pz = abs(complex(evaluate(P, z)))
            res = pz / float(scale(np.array([z]))[0]) if pz else 0.0
            if z != r.z and res <= max(r.residual, 1e-300) * 10:
                r = RootResult(z, r.converged, r.iters, res, 0, r.status + "+polished")
        out.append(r)
    return out


def _index_radii(points: np.ndarray, disk_radius: float) -> np.ndarray:
    """A quarter of the distance to the nearest other zero, kept inside the disk."""
    m = len(points)
    out = np.empty(m)
    for i, z in enumerate(points):
        others = np.delete(points, i)
        near = np.min(np.abs(others - z)) if m > 1 else 1.0 + abs(z)
        out[i] = min(0.25 * near, 0.5 * (disk_radius - abs(z)))
    return out


def zero_atlas(
    P: PolyPoly,
    disk_radius: float,
    opts: NewtonOptions | None = None,
    extra_seeds: Sequence[complex] = (),
    *,
    spacing: float | None = None,
    scale: Callable[[np.ndarray], np.ndarray] | None = None,
    dedupe_rel: float = 1e-8,
    threads: int = 1,
) -> ZeroCensus:
    """Find, classify and certify the zeros of P in |z| < disk_radius.

    Seeds are a hexagonal grid (spacing ``disk_radius / (4 deg P)`` unless
    given) followed by ``extra_seeds``.  The census is certified when the
    indices sum to the winding of P on |z| = disk_radius.
    """
    if P.is_zero():
        raise ValueError("zero polynomial")
    opts = opts or NewtonOptions()
    n = max(P.n, 1)
    spacing = spacing or disk_radius / (4 * n)
    boundary = winding(P, Circle(0j, disk_radius)).wind

    seeds = np.concatenate([hex_seeds(disk_radius, spacing), np.asarray(extra_seeds, dtype=complex).ravel()])
    results = newton_many(P, seeds, opts, scale)
    found = [r for r in results if r.converged and abs(r.z) < disk_radius]
    # smallest residual first so each cluster keeps its best point
    found.sort(key=lambda r: (r.residual, abs(r.z), r.z.real, r.z.imag))
    reps = [found[i] for i in dedupe([r.z for r in found], dedupe_rel)]
    reps = _polish_all(P, _merge_singular(P, reps, scale or default_scale(P)), scale or default_scale(P))
    reps.sort(key=lambda r: (abs(r.z), math.atan2(r.z.imag, r.z.real)))
    pts = np.array([r.z for r in reps], dtype=complex)
    radii = _index_radii(pts, disk_radius)

    def one(i: int) -> int | None:
        try:
            return index(P, pts[i], radii[i])
        except WindingError:
            return None

    if threads > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            idx = list(ex.map(one, range(len(reps))))
    else:
        idx = [one(i) for i in range(len(reps))]

    notes = []
    zeros = []
    for r, k in zip(reps, idx):
        if k is None:
            notes.append(f"index failed at {r.z!r}")
            k = 0
        # a zero with index other than +-1 cannot be a regular point
        sign = r.jacobian_sign if abs(k) == 1 else 0
        zeros.append(CensusZero(r.z, int(k), int(sign), r.residual))
    total = sum(z.index for z in zeros)
    certified = total == boundary and not notes
    if total != boundary:
        notes.append(f"index sum {total} != boundary winding {boundary}")
        log.warning("census not certified: index sum %d, boundary winding %d", total, boundary)
    return ZeroCensus(tuple(zeros), boundary, certified, float(disk_radius), total, tuple(notes))
