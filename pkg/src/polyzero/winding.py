"""Winding numbers by adaptive argument continuation, and zero indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polycore import PolyPoly, evaluate

INITIAL_SAMPLES = 256
SAMPLES_PER_DEGREE = 16
MAX_DEPTH = 24
PHASE_JUMP = math.pi / 2
ROUNDING_TOL = 1e-6
SAFETY_REL = 1e-13


class WindingError(RuntimeError):
    pass


class ZeroOnCurveError(WindingError):
    pass


class CannotCertifyError(WindingError):
    pass


class NonIsolatedZeroError(WindingError):
    pass


@dataclass(frozen=True)
class Circle:
    center: complex = 0j
    radius: float = 1.0
    positive: bool = True

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    def points(self, t: np.ndarray) -> np.ndarray:
        sgn = 1.0 if self.positive else -1.0
        return self.center + self.radius * np.exp(sgn * 2j * np.pi * t)

    def reversed(self) -> Circle:
        return Circle(self.center, self.radius, not self.positive)

    @property
    def extent(self) -> float:
        return abs(self.center) + self.radius


@dataclass(frozen=True)
class ClosedPolyline:
    """Closed polygon; the first vertex is repeated at the end."""

    vertices: tuple[complex, ...]
    positive: bool = True

    def __post_init__(self):
        v = tuple(complex(x) for x in self.vertices)
        if len(v) < 2 or v[0] != v[-1]:
            raise ValueError("polyline must be closed (first == last vertex)")
        if len(set(v[:-1])) < 3:
            raise ValueError("polyline needs at least 3 distinct vertices")
        object.__setattr__(self, "vertices", v)

    def points(self, t: np.ndarray) -> np.ndarray:
        v = np.array(self.vertices if self.positive else self.vertices[::-1])
        m = len(v) - 1
        s = np.clip(np.asarray(t) * m, 0, m)
        i = np.minimum(np.floor(s).astype(int), m - 1)
        f = s - i
        return v[i] * (1 - f) + v[i + 1] * f

    def reversed(self) -> ClosedPolyline:
        return ClosedPolyline(self.vertices, not self.positive)

    @property
    def extent(self) -> float:
        return max(abs(v) for v in self.vertices)


Curve = Circle | ClosedPolyline


@dataclass(frozen=True)
class WindingResult:
    wind: int
    min_modulus: float
    samples: int


def _initial_params(curve: Curve, degree: int) -> np.ndarray:
    # at least 16 samples per possible turn, so high degrees cannot alias
    count = max(INITIAL_SAMPLES, SAMPLES_PER_DEGREE * degree)
    if isinstance(curve, Circle):
        return np.linspace(0.0, 1.0, count + 1)
    # segment endpoints must be sample points
    m = len(curve.vertices) - 1
    per = max(2, -(-count // m))
    return np.unique(np.concatenate([np.linspace(i / m, (i + 1) / m, per + 1) for i in range(m)]))


def winding(P: PolyPoly, curve: Curve, safety_tol: float | None = None, *, density: int = 1) -> WindingResult:
    """Winding of P along ``curve``.

    Consecutive samples whose phase differs by more than pi/2 are bisected
    until the continuation is unambiguous.  ``safety_tol`` is an absolute
    floor on |P|; by default a sample counts as a zero when |P| falls below
    1e-13 times the term-magnitude sum at that point.  ``density``
    multiplies the initial sample count.
    """
    t = _initial_params(curve, P.n)
    if density > 1:
        frac = np.arange(density) / density
        t = np.append((t[:-1, None] + np.diff(t)[:, None] * frac).ravel(), 1.0)
    z = curve.points(t)
    z[-1] = z[0]
    w = evaluate(P, z)

    def check(zs, ws):
        tol = safety_tol if safety_tol is not None else SAFETY_REL * P.abs_eval(zs)
        bad = np.abs(ws) <= tol
        if np.any(bad):
            zbad = complex(np.atleast_1d(zs)[np.argmax(np.atleast_1d(bad))])
            raise ZeroOnCurveError(f"|P| below safety tolerance on the curve near {zbad:.6g}")

    check(z, w)
    for _ in range(MAX_DEPTH + 1):
        jumps = np.abs(np.angle(w[1:] / w[:-1]))
        bad = np.nonzero(jumps > PHASE_JUMP)[0]
        if bad.size == 0:
            break
        tm = 0.5 * (t[bad] + t[bad + 1])
        zm = curve.points(tm)
        wm = evaluate(P, zm)
        check(zm, wm)
        t = np.insert(t, bad + 1, tm)
        w = np.insert(w, bad + 1, wm)
    else:
        raise CannotCertifyError("adaptive refinement depth exceeded")

    total = float(np.sum(np.angle(w[1:] / w[:-1]))) / (2 * math.pi)
    k = round(total)
    if abs(total - k) > ROUNDING_TOL:
        raise CannotCertifyError(f"accumulated winding {total!r} is not near an integer")
    return WindingResult(int(k), float(np.min(np.abs(w))), int(len(w) - 1))


def index(P: PolyPoly, z0: complex, radius_hint: float, *, max_halvings: int = 20) -> int:
    """Index of P at an isolated zero z0 (winding on a small circle)."""
    r = float(radius_hint)
    for _ in range(max_halvings + 1):
        try:
            return winding(P, Circle(complex(z0), r)).wind
        except WindingError:
            r *= 0.5
    raise NonIsolatedZeroError(f"nonisolated or clustered zero near {complex(z0):.6g}")


def winding_annulus(P: PolyPoly, r_inner: float, r_outer: float, center: complex = 0j) -> int:
    """Boundary winding of the annulus r_inner < |z - center| < r_outer."""
    if not 0 < r_inner < r_outer:
        raise ValueError("need 0 < r_inner < r_outer")
    return winding(P, Circle(center, r_outer)).wind - winding(P, Circle(center, r_inner)).wind


def polyline(vertices: Sequence[complex], positive: bool = True) -> ClosedPolyline:
    v = [complex(x) for x in vertices]
    if v[0] != v[-1]:
        v.append(v[0])
    return ClosedPolyline(tuple(v), positive)
