"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import numpy as np


def naive_eval(terms: dict, z: complex) -> complex:
    """Direct sum of alpha * z**j * zbar**k, one monomial at a time."""
    z = complex(z)
    zb = z.conjugate()
    total = 0j
    for (j, k), a in terms.items():
        total += complex(a) * z**j * zb**k
    return total


def naive_product(p: dict, q: dict) -> dict:
    """Quadruple-loop convolution of two term dictionaries."""
    out: dict = {}
    for (j1, k1), a in p.items():
        for (j2, k2), b in q.items():
            key = (j1 + j2, k1 + k2)
            out[key] = out.get(key, 0) + complex(a) * complex(b)
    return {key: v for key, v in out.items() if v != 0}


def terms_of(P) -> dict:
    return {(j, k): a for j, k, a in P.terms()}


def fd_jacobian(f, z: complex, h: float = 1e-6) -> float:
    """det of the real 2x2 derivative of (Re f, Im f) by central differences."""
    fx = (f(z + h) - f(z - h)) / (2 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    return fx.real * fy.imag - fx.imag * fy.real


def dense_winding(f, center: complex, radius: float, m: int = 1_000_000) -> float:
    """Unrounded winding from m equispaced samples (no adaptivity)."""
    t = np.linspace(0.0, 2 * np.pi, m + 1)
    w = f(center + radius * np.exp(1j * t))
    return float(np.sum(np.angle(w[1:] / w[:-1])) / (2 * np.pi))


def grid_zero_cells(f, half_width: float, m: int = 2048) -> list[complex]:
    """Centers of grid cells around which f winds nontrivially.

    The square [-half_width, half_width]**2 is split into m x m cells and
    the phase increments of f along the four cell edges are summed.  For zeros of
    index +-1 that are not too close together each zero is caught by exactly
    one cell.
    """
    x = np.linspace(-half_width, half_width, m + 1)
    Z = x[None, :] + 1j * x[:, None]
    W = f(Z)

    def dphi(a, b):
        return np.angle(b / a)

    # counterclockwise: bottom-left -> bottom-right -> top-right -> top-left
    bl, br, tr, tl = W[:-1, :-1], W[:-1, 1:], W[1:, 1:], W[1:, :-1]
    total = dphi(bl, br) + dphi(br, tr) + dphi(tr, tl) + dphi(tl, bl)
    wind = np.rint(total / (2 * np.pi)).astype(int)
    rows, cols = np.nonzero(wind)
    h = x[1] - x[0]
    return [complex(x[c] + h / 2, x[r] + h / 2) for r, c in zip(rows, cols)]


def hsv_rgb255(hue: float, value: float) -> tuple[int, int, int]:
    import colorsys
    import math

    r, g, b = colorsys.hsv_to_rgb(hue % 1.0, 1.0, value)
    return tuple(int(math.floor(255 * c + 0.5)) for c in (r, g, b))
