"""Phase plots shaded by orientation, written as binary PPM.

Hue follows arg P on the six-sector wheel (0 is red, counterclockwise
through yellow, green, cyan, blue, magenta).  Sense-preserving points
(J >= 0) get value 1.0 and sense-reversing points value 0.55.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .polycore import PolyPoly, evaluate, wirtinger

DARK = 0.55
WHITE = np.array([255, 255, 255], dtype=np.uint8)


@dataclass(frozen=True)
class PhaseImage:
    pixels: np.ndarray  # (height, width, 3) uint8, row 0 at the top
    window: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    overflow: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("pixels must be a nonempty (H, W, 3) uint8 array")
        a, b, c, d = self.window
        if not (a < b and c < d):
            raise ValueError("degenerate window")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _channel(x: np.ndarray) -> np.ndarray:
    return np.floor(255.0 * x + 0.5).astype(np.uint8)


def phase_colors(w: np.ndarray, jac_sign: np.ndarray) -> np.ndarray:
    """RGB (..., 3) uint8 for values ``w`` and orientation signs."""
    w = np.asarray(w, dtype=complex)
    theta = np.arctan2(w.imag, w.real)
    # colour |theta| on the upper half wheel, mirror green/blue below
    x = 3.0 * np.abs(theta) / math.pi
    r = np.clip(2.0 - x, 0.0, 1.0)
    g = np.clip(x, 0.0, 1.0)
    b = np.clip(x - 2.0, 0.0, 1.0)
    lower = theta < 0
    g, b = np.where(lower, b, g), np.where(lower, g, b)
    v = np.where(np.asarray(jac_sign) < 0, DARK, 1.0)
    rgb = np.stack([r * v, g * v, b * v], axis=-1)
    rgb[w == 0] = 0.0
    return _channel(rgb)


def phase_color(w: complex, jac_sign: int) -> tuple[int, int, int]:
    return tuple(int(c) for c in phase_colors(np.array(w), np.array(jac_sign)))


def pixel_centers(window, width: int, height: int) -> np.ndarray:
    """Complex pixel centers, (height, width); row 0 is the top (im_max).

    Coordinates are center + half_extent * t with t = (2i + 1 - N) / N, so
    a window symmetric about an axis gives exactly mirrored centers.
    """
    re_min, re_max, im_min, im_max = map(float, window)
    tx = (2.0 * np.arange(width) + 1 - width) / width
    ty = (height - 1 - 2.0 * np.arange(height)) / height
    x = 0.5 * (re_min + re_max) + 0.5 * (re_max - re_min) * tx
    y = 0.5 * (im_min + im_max) + 0.5 * (im_max - im_min) * ty
    return x[None, :] + 1j * y[:, None]


def contraction(z: np.ndarray) -> np.ndarray:
    """z exp(|z|^2), an orientation-preserving homeomorphism of the plane."""
    with np.errstate(over="ignore", invalid="ignore"):
        return z * np.exp(np.abs(z) ** 2)


def render_phase(
    P: PolyPoly,
    window: tuple[float, float, float, float],
    width: int,
    height: int,
    premap: str = "identity",
    marks: Sequence[complex] = (),
) -> PhaseImage:
    """Phase plot of P (or P o contraction).

    Pixels where the premap or P overflows are white and counted in
    ``overflow``.  ``marks`` are points in the window drawn as black discs
    of radius max(2, 0.004 * width) pixels.
    """
    if width < 1 or height < 1:
        raise ValueError("image dimensions must be positive")
    if premap not in ("identity", "contraction"):
        raise ValueError(f"unknown premap {premap!r}")
    z = pixel_centers(window, width, height)
    u = contraction(z) if premap == "contraction" else z
    finite = np.isfinite(u)
    pts = u[finite]
    dz, dzb = wirtinger(P, "dz"), wirtinger(P, "dzbar")
    with np.errstate(over="ignore", invalid="ignore"):
        w = evaluate(P, pts) if pts.size else np.zeros(0, complex)
        # sign of |dz P|**2 - |dzbar P|**2 without squaring (which overflows first)
        J = np.abs(evaluate(dz, pts)) - np.abs(evaluate(dzb, pts)) if pts.size else np.zeros(0)
    good = np.isfinite(w) & np.isfinite(J)
    pix = np.empty(z.shape + (3,), dtype=np.uint8)
    pix[...] = WHITE
    flat = np.nonzero(finite.ravel())[0]
    view = pix.reshape(-1, 3)
    view[flat[good]] = phase_colors(w[good], np.sign(J[good]))
    overflow = int(z.size - np.count_nonzero(good))
    img = PhaseImage(pix, tuple(map(float, window)), overflow, {"premap": premap})
    if len(marks):
        img = mark_points(img, marks)
    return img


def mark_points(img: PhaseImage, points: Sequence[complex]) -> PhaseImage:
    """Black filled discs at ``points`` (window coordinates)."""
    re_min, re_max, im_min, im_max = img.window
    h, w = img.height, img.width
    rad = max(2.0, 0.004 * w)
    cols = np.arange(w) + 0.5
    rows = np.arange(h) + 0.5
    pix = img.pixels.copy()
    for p in points:
        p = complex(p)
        cx = (p.real - re_min) / (re_max - re_min) * w
        cy = (im_max - p.imag) / (im_max - im_min) * h
        mask = (cols[None, :] - cx) ** 2 + (rows[:, None] - cy) ** 2 <= rad * rad
        pix[mask] = 0
    return PhaseImage(pix, img.window, img.overflow, img.meta)


def inverse_contraction(u: complex) -> complex:
    """Point z with z exp(|z|^2) = u, for placing marks on contracted plots."""
    s = abs(u)
    if s == 0:
        return 0j
    # solve r exp(r^2) = s for r >= 0
    r = math.sqrt(math.log1p(s)) if s < 1 else math.sqrt(max(math.log(s), 1e-300))
    for _ in range(100):
        f = math.log(r) + r * r - math.log(s)
        step = f / (1.0 / r + 2.0 * r)
        r -= step
        if r <= 0:
            r = 1e-300
        if abs(step) <= 1e-15 * r:
            break
    return r * u / s


def write_ppm(img: PhaseImage, path) -> None:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes())
    except OSError as exc:
        raise OSError(f"cannot write PPM to {path}: {exc}") from exc


def read_ppm(path) -> np.ndarray:
    """Pixels of a binary P6 file with maxval 255."""
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1
    if fields[0] != b"P6" or fields[3] != b"255":
        raise ValueError(f"{path}: not an 8-bit binary PPM")
    w, h = int(fields[1]), int(fields[2])
    px = np.frombuffer(data, dtype=np.uint8, count=w * h * 3, offset=pos)
    return px.reshape(h, w, 3).copy()
