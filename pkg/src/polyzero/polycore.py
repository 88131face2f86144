"""Polyanalytic polynomials P(z, zbar) = sum alpha[j, k] z**j zbar**k.

Coefficients live in a dense triangular array ``coeffs[j, k]`` with
``j + k <= n``; entries outside the triangle are always zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

NEG_INF = float("-inf")


class PolyFormatError(ValueError):
    """Malformed polynomial text; ``lineno`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass(frozen=True)
class DegreeTriple:
    deg: float
    deg_z: float
    deg_zbar: float
    is_zero: bool = False


def _triangular(n: int) -> np.ndarray:
    j, k = np.indices((n + 1, n + 1))
    return j + k <= n


def _as_complex(z) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite evaluation point")
    return arr


class PolyPoly:
    """Immutable polyanalytic polynomial.

    Construct from a coefficient array or with :meth:`from_terms`; the
    generators :meth:`z` and :meth:`zbar` together with ``+``, ``-``, ``*``
    and ``**`` cover most fixtures::

        z, zb = PolyPoly.z(), PolyPoly.zbar()
        p3 = z**2 + z + zb + 1
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex, copy=True)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
            raise ValueError("coefficient array must be square (n+1, n+1)")
        n = c.shape[0] - 1
        if np.any(c[~_triangular(n)] != 0):
            raise ValueError("nonzero coefficient with j + k > n")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        c = _trim(c)
        c.setflags(write=False)
        self._c = c

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], complex] | Iterable, n: int | None = None) -> PolyPoly:
        """Build from ``{(j, k): alpha}`` or an iterable of ``(j, k, alpha)``."""
        items = terms.items() if isinstance(terms, Mapping) else (((j, k), a) for j, k, a in terms)
        items = [((int(j), int(k)), complex(a)) for (j, k), a in items]
        deg = max((j + k for (j, k), _ in items), default=0)
        if n is None:
            n = deg
        elif deg > n:
            raise ValueError(f"term degree {deg} exceeds declared n={n}")
        c = np.zeros((n + 1, n + 1), dtype=complex)
        for (j, k), a in items:
            if j < 0 or k < 0:
                raise ValueError(f"negative exponent in term ({j}, {k})")
            c[j, k] += a
        return cls(c)

    @classmethod
    def const(cls, value: complex) -> PolyPoly:
        return cls([[value]])

    @classmethod
    def zero(cls) -> PolyPoly:
        return cls([[0]])

    @classmethod
    def z(cls) -> PolyPoly:
        return cls.from_terms({(1, 0): 1})

    @classmethod
    def zbar(cls) -> PolyPoly:
        return cls.from_terms({(0, 1): 1})

    @classmethod
    def monomial(cls, j: int, k: int, coef: complex = 1) -> PolyPoly:
        return cls.from_terms({(j, k): coef})

    @classmethod
    def analytic(cls, coeffs: Iterable[complex]) -> PolyPoly:
        """sum a_k z**k from ascending coefficients."""
        return cls.from_terms({(k, 0): a for k, a in enumerate(coeffs)})

    # -- accessors --------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def n(self) -> int:
        """Size of the stored triangle; equals deg(P) for nonzero P."""
        return self._c.shape[0] - 1

    def is_zero(self) -> bool:
        return not np.any(self._c)

    def terms(self) -> list[tuple[int, int, complex]]:
        """Nonzero terms ordered by total degree, then by j."""
        out = []
        for d in range(self.n + 1):
            for j in range(d + 1):
                a = self._c[j, d - j]
                if a != 0:
                    out.append((j, d - j, complex(a)))
        return out

    def top_form(self) -> np.ndarray:
        """Top-degree coefficients alpha[l, n - l] for l = 0..n."""
        n = self.n
        return np.array([self._c[l, n - l] for l in range(n + 1)])

    def degree_slice(self, d: int) -> np.ndarray:
        """Coefficients alpha[j, d - j], j = 0..d."""
        return np.array([self._c[j, d - j] for j in range(d + 1)])

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self._c)))

    # -- evaluation -------------------------------------------------------

    def __call__(self, z):
        return evaluate(self, z)

    def abs_eval(self, z):
        """sum |alpha[j, k]| |z|**(j + k): the rounding scale of ``self(z)``."""
        r = np.abs(_as_complex(z))
        sums = np.array([np.sum(np.abs(self.degree_slice(d))) for d in range(self.n + 1)])
        acc = np.zeros_like(r)
        for d in range(self.n, -1, -1):
            acc = acc * r + sums[d]
        return acc

    # -- algebra ----------------------------------------------------------

    def __add__(self, other) -> PolyPoly:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> PolyPoly:
        return PolyPoly(-self._c)

    def __sub__(self, other) -> PolyPoly:
        return add(self, -_coerce(other))

    def __rsub__(self, other) -> PolyPoly:
        return add(_coerce(other), -self)

    def __mul__(self, other) -> PolyPoly:
        if isinstance(other, Number):
            return PolyPoly(self._c * complex(other))
        return multiply(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PolyPoly:
        if not isinstance(e, (int, np.integer)) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out, base = PolyPoly.const(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyPoly):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self) -> int:
        return hash((self._c.shape, self._c.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "PolyPoly(0)"
        parts = [f"({a.real:g}{a.imag:+g}j)*z^{j}*zbar^{k}" for j, k, a in self.terms()]
        return "PolyPoly(" + " + ".join(parts) + ")"


def _coerce(x) -> PolyPoly:
    if isinstance(x, PolyPoly):
        return x
    if isinstance(x, Number):
        return PolyPoly.const(complex(x))
    raise TypeError(f"cannot combine PolyPoly with {type(x).__name__}")


def _trim(c: np.ndarray) -> np.ndarray:
    """Drop all-zero top degrees (exact test)."""
    n = c.shape[0] - 1
    while n > 0 and not any(c[j, n - j] != 0 for j in range(n + 1)):
        n -= 1
    return np.ascontiguousarray(c[: n + 1, : n + 1])


def evaluate(P: PolyPoly, z):
    """Nested Horner: outer loop in zbar, inner in z.  Accepts arrays."""
    z = _as_complex(z)
    zb = np.conj(z)
    c = P.coeffs
    n = P.n
    acc = np.zeros_like(z)
    for k in range(n, -1, -1):
        inner = np.zeros_like(z)
        for j in range(n - k, -1, -1):
            inner = inner * z + c[j, k]
        acc = acc * zb + inner
    return acc if acc.ndim else complex(acc)


def wirtinger(P: PolyPoly, which: str) -> PolyPoly:
    """Wirtinger derivative; ``which`` is ``"dz"`` or ``"dzbar"``."""
    c = P.coeffs
    n = P.n
    if n == 0:
        return PolyPoly.zero()
    out = np.zeros((n, n), dtype=complex)
    if which == "dz":
        for j in range(1, n + 1):
            for k in range(n - j + 1):
                out[j - 1, k] = j * c[j, k]
    elif which == "dzbar":
        for k in range(1, n + 1):
            for j in range(n - k + 1):
                out[j, k - 1] = k * c[j, k]
    else:
        raise ValueError(f"unknown derivative {which!r}")
    return PolyPoly(out)


def jacobian(P: PolyPoly, z, *, derivs: tuple[PolyPoly, PolyPoly] | None = None):
    """|dP/dz|^2 - |dP/dzbar|^2; positive where P preserves orientation."""
    dz, dzb = derivs if derivs is not None else (wirtinger(P, "dz"), wirtinger(P, "dzbar"))
    a = evaluate(dz, z)
    b = evaluate(dzb, z)
    return np.abs(a) ** 2 - np.abs(b) ** 2


def degrees(P: PolyPoly) -> DegreeTriple:
    if P.is_zero():
        return DegreeTriple(NEG_INF, NEG_INF, NEG_INF, is_zero=True)
    jj, kk = np.nonzero(P.coeffs)
    return DegreeTriple(int(np.max(jj + kk)), int(np.max(jj)), int(np.max(kk)))


def add(P: PolyPoly, Q: PolyPoly) -> PolyPoly:
    n = max(P.n, Q.n)
    c = np.zeros((n + 1, n + 1), dtype=complex)
    c[: P.n + 1, : P.n + 1] += P.coeffs
    c[: Q.n + 1, : Q.n + 1] += Q.coeffs
    return PolyPoly(c)


def multiply(P: PolyPoly, Q: PolyPoly) -> PolyPoly:
    """Cauchy product over both exponents."""
    p, q = P.coeffs, Q.coeffs
    n = P.n + Q.n
    c = np.zeros((n + 1, n + 1), dtype=complex)
    for j, k in zip(*np.nonzero(p)):
        c[j : j + Q.n + 1, k : k + Q.n + 1] += p[j, k] * q
    return PolyPoly(c)


def conjugate(P: PolyPoly) -> PolyPoly:
    """Coefficients conj(alpha[k, j]); evaluates to conj(P(z))."""
    return PolyPoly(np.conj(P.coeffs).T)


def self_conjugate_lambda(P: PolyPoly, tol: float = 1e-12) -> complex | None:
    """Unit lambda with P = lambda * conj(P), or None.

    Equality is checked coefficient-wise relative to the largest
    coefficient magnitude.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if P.is_zero():
        raise ValueError("zero polynomial")
    c = P.coeffs
    ct = np.conj(c).T
    scale = P.max_abs_coeff()
    j, k = np.unravel_index(np.argmax(np.abs(c)), c.shape)
    if abs(ct[j, k]) <= tol * scale:
        return None
    lam = c[j, k] / ct[j, k]
    if abs(abs(lam) - 1.0) > tol * 10:
        return None
    lam /= abs(lam)
    if np.max(np.abs(c - lam * ct)) > tol * scale:
        return None
    return complex(lam)


# -- text format ----------------------------------------------------------


def parse_poly(text: str) -> PolyPoly:
    """Read the ``j k re im`` line format.

    ``#`` starts a comment; an optional ``n <N>`` header bounds the total
    degree of every term.  Repeated index pairs are rejected.
    """
    declared = None
    terms: dict[tuple[int, int], complex] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "n":
            if declared is not None or terms:
                raise PolyFormatError("header 'n' must come first and only once", lineno)
            if len(fields) != 2:
                raise PolyFormatError("expected 'n <N>'", lineno)
            try:
                declared = int(fields[1])
            except ValueError:
                raise PolyFormatError(f"bad degree {fields[1]!r}", lineno) from None
            if declared < 0:
                raise PolyFormatError("negative degree", lineno)
            continue
        if len(fields) not in (3, 4):
            raise PolyFormatError("expected 'j k re [im]'", lineno)
        try:
            j, k = int(fields[0]), int(fields[1])
            re = float(fields[2])
            im = float(fields[3]) if len(fields) == 4 else 0.0
        except ValueError:
            raise PolyFormatError(f"cannot parse term {line!r}", lineno) from None
        if j < 0 or k < 0:
            raise PolyFormatError("negative exponent", lineno)
        if declared is not None and j + k > declared:
            raise PolyFormatError(f"term degree {j + k} exceeds n={declared}", lineno)
        if not (math.isfinite(re) and math.isfinite(im)):
            raise PolyFormatError("non-finite coefficient", lineno)
        if (j, k) in terms:
            raise PolyFormatError(f"duplicate term ({j}, {k})", lineno)
        terms[(j, k)] = complex(re, im)
    return PolyPoly.from_terms(terms, n=declared)


def format_poly(P: PolyPoly) -> str:
    lines = [f"n {P.n}"]
    for j, k, a in P.terms():
        lines.append(f"{j} {k} {a.real!r} {a.imag!r}")
    return "\n".join(lines) + "\n"


def read_poly(path) -> PolyPoly:
    with open(path, encoding="utf-8") as fh:
        return parse_poly(fh.read())


def write_poly(P: PolyPoly, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_poly(P))
