"""Zeros of polyanalytic polynomials P(z) = sum alpha[j, k] z**j zbar**k."""

from .bounds import BoundsReport, bounds_report, radius_r0
from .extremal import ExtremalSchedule, extremal_coefficients, extremal_poly, truncation_seeds, verify_extremal
from .polycore import (
    DegreeTriple,
    PolyFormatError,
    PolyPoly,
    add,
    conjugate,
    degrees,
    evaluate,
    jacobian,
    multiply,
    parse_poly,
    read_poly,
    self_conjugate_lambda,
    wirtinger,
    write_poly,
)
from .render import PhaseImage, phase_color, render_phase, write_ppm
from .rootfind import NewtonOptions, RootResult, ZeroCensus, newton, zero_atlas
from .winding import Circle, ClosedPolyline, WindingError, index, winding, winding_annulus
from .zerotheory import (
    CertificateKind,
    FinitenessError,
    existence,
    finiteness_certificate,
    irreducibility_certificate,
    max_zero_bound,
    poly_with_k_zeros,
)

__version__ = "0.1.0"
