"""Existence, finiteness and counting of zeros, decided from coefficients."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .polycore import PolyPoly, degrees, self_conjugate_lambda

GUARD_REL = 1e-12


class FinitenessError(ValueError):
    """Raised when a zero-count bound needs finiteness that was not shown."""


@dataclass(frozen=True)
class ExistenceVerdict:
    balk: bool
    dominant_ell: int | None

    @property
    def guaranteed(self) -> bool:
        return self.balk or self.dominant_ell is not None


class CertificateKind(enum.Enum):
    MONIC_IN_Z = "MonicInZ"
    MONIC_IN_ZBAR = "MonicInZbar"
    ASYMMETRIC_COEFFICIENT = "AsymmetricCoefficient"
    SELF_CONJUGATE = "SelfConjugate"
    INCONCLUSIVE = "Inconclusive"


FINITE_KINDS = {CertificateKind.MONIC_IN_Z, CertificateKind.MONIC_IN_ZBAR, CertificateKind.ASYMMETRIC_COEFFICIENT}


@dataclass(frozen=True)
class FinitenessCertificate:
    kind: CertificateKind
    witness: tuple[int, int] | complex | None = None

    @property
    def finite(self) -> bool:
        return self.kind in FINITE_KINDS


def _nonzero(P: PolyPoly) -> None:
    if P.is_zero():
        raise ValueError("zero polynomial")


def balk_existence(P: PolyPoly) -> bool:
    """deg P > 2 deg_z P or deg P > 2 deg_zbar P guarantees a zero."""
    _nonzero(P)
    d = degrees(P)
    return d.deg > 2 * d.deg_z or d.deg > 2 * d.deg_zbar


def dominant_existence(P: PolyPoly) -> int | None:
    """The l with |alpha[l, n-l]| > sum of the other top-degree magnitudes
    and 2l != n, if there is one; such a P has winding 2l - n on large
    circles and hence a zero."""
    _nonzero(P)
    n = P.n
    if n < 1:
        return None
    top = np.abs(P.top_form())
    ell = int(np.argmax(top))
    surplus = top[ell] - (np.sum(top) - top[ell])
    if surplus <= GUARD_REL * np.sum(top) or 2 * ell == n:
        return None
    return ell


def existence(P: PolyPoly) -> ExistenceVerdict:
    return ExistenceVerdict(balk_existence(P), dominant_existence(P))


def finiteness_certificate(P: PolyPoly, irreducible_hint: bool = False, tol: float = 1e-12) -> FinitenessCertificate:
    """Classify P by the first applicable criterion.

    A single top-degree term z**n (or zbar**n) forces finitely many zeros.
    A self-conjugate P has infinitely many zeros when irreducible.  With
    ``irreducible_hint`` any pair |alpha[j, k]| != |alpha[k, j]| also
    certifies finiteness.
    """
    _nonzero(P)
    n = P.n
    top = P.top_form()
    nz = np.nonzero(top)[0]
    if len(nz) == 1 and nz[0] == n:
        return FinitenessCertificate(CertificateKind.MONIC_IN_Z, (n, 0))
    if len(nz) == 1 and nz[0] == 0:
        return FinitenessCertificate(CertificateKind.MONIC_IN_ZBAR, (0, n))
    lam = self_conjugate_lambda(P, tol)
    if lam is not None:
        return FinitenessCertificate(CertificateKind.SELF_CONJUGATE, lam)
    if irreducible_hint:
        mag = np.abs(P.coeffs)
        gap = np.abs(mag - mag.T)
        j, k = np.unravel_index(np.argmax(gap), gap.shape)
        if gap[j, k] > tol * P.max_abs_coeff():
            return FinitenessCertificate(CertificateKind.ASYMMETRIC_COEFFICIENT, (int(j), int(k)))
    return FinitenessCertificate(CertificateKind.INCONCLUSIVE)


def max_zero_bound(P: PolyPoly, certificate: FinitenessCertificate | None = None) -> int:
    """n**2, valid once finiteness is certified."""
    cert = certificate or finiteness_certificate(P)
    if not cert.finite:
        raise FinitenessError(f"finiteness not established ({cert.kind.value})")
    return int(degrees(P).deg) ** 2


def irreducibility_certificate(n: int, verified_zero_count: int) -> bool:
    """At least n**2 - 2n + 3 zeros rules out any factorization."""
    if n < 2:
        raise ValueError("need n >= 2")
    return verified_zero_count >= n * n - 2 * n + 3


def poly_with_k_zeros(n: int, k: int | float) -> PolyPoly:
    """A degree-n polynomial with exactly k zeros, k in {0..n, n**2, inf}."""
    if n < 1:
        raise ValueError("need n >= 1")
    z, zb = PolyPoly.z(), PolyPoly.zbar()
    if k == math.inf:
        return z**n - zb**n
    if k != int(k) or k < 0:
        raise ValueError(f"invalid zero count {k!r}")
    k = int(k)
    if k == 0:
        return (z - zb - 1) ** n
    if k <= n:
        # z - zbar - 1 = 2i Im z - 1 never vanishes
        return (z**k - 1) * (z - zb - 1) ** (n - k)
    if k == n * n:
        from .extremal import extremal_coefficients, extremal_poly

        return extremal_poly(extremal_coefficients(n))
    raise ValueError(f"unsupported mid-range count {k} (n < k < n**2)")
