import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P3, Z, ZB
from oracles import fd_jacobian, naive_eval, naive_product, terms_of
from polyzero import PolyFormatError, PolyPoly, add, conjugate, degrees, evaluate, jacobian, multiply, wirtinger
from polyzero.polycore import format_poly, parse_poly, read_poly, self_conjugate_lambda, write_poly

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


@st.composite
def polys(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    terms = {}
    for j in range(n + 1):
        for k in range(n + 1 - j):
            if draw(st.booleans()):
                terms[(j, k)] = draw(cplx)
    return PolyPoly.from_terms(terms, n=n)


points = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0, 2), st.floats(0, 2 * math.pi))


def test_eval_vanishes_on_unit_circle():
    P = Z * ZB - 1
    assert evaluate(P, 1j) == 0
    assert abs(evaluate(P, cmath.exp(0.3j))) < 1e-15


def test_zero_polynomial_evaluates_to_zero():
    assert evaluate(PolyPoly.zero(), 2 + 3j) == 0
    assert degrees(PolyPoly.zero()).is_zero


def test_eval_matches_naive_sum():
    P = Z**3 + Z**2 * ZB**2
    want = naive_eval({(3, 0): 1, (2, 2): 1}, 1 + 1j)
    assert evaluate(P, 1 + 1j) == pytest.approx(want, rel=1e-15)


def test_eval_rejects_nonfinite():
    with pytest.raises(ValueError):
        evaluate(P3, complex(math.nan, 0))


def test_eval_vectorized_shape():
    z = np.array([[0, 1j], [1, -1]])
    assert evaluate(P3, z).shape == (2, 2)


@pytest.mark.parametrize(
    "P, want",
    [(Z**3 + Z**2 * ZB**2, (4, 3, 2)), (PolyPoly.const(5), (0, 0, 0)), (ZB**7, (7, 0, 7))],
)
def test_degrees(P, want):
    d = degrees(P)
    assert (d.deg, d.deg_z, d.deg_zbar) == want


def test_wirtinger_power_rule():
    assert wirtinger(Z**4, "dzbar").is_zero()
    assert wirtinger(Z**2 * ZB, "dz") == 2 * Z * ZB


def test_wirtinger_rejects_unknown():
    with pytest.raises(ValueError):
        wirtinger(P3, "dx")


@given(polys())
@settings(max_examples=60, deadline=None)
def test_dzbar_annihilates_after_degree_plus_one(P):
    Q = P
    steps = 0 if P.is_zero() else degrees(P).deg_zbar + 1
    for _ in range(steps):
        Q = wirtinger(Q, "dzbar")
    assert Q.is_zero()


def test_jacobian_examples():
    a1, a2 = 0.7 - 0.2j, 1.3j
    P1 = a1 * ZB
    assert jacobian(P1, 0.4 + 2j) == pytest.approx(-abs(a1) ** 2)
    P2 = a2 * Z**2 + a1 * ZB
    z = 0.3 - 0.8j
    assert jacobian(P2, z) == pytest.approx(abs(2 * a2 * z) ** 2 - abs(a1) ** 2)
    assert jacobian(Z**3 - Z, 0.5) >= 0


@given(polys(max_n=5), points)
@settings(max_examples=60, deadline=None)
def test_jacobian_matches_finite_differences(P, z):
    J = jacobian(P, z)
    fd = fd_jacobian(lambda w: evaluate(P, w), z)
    scale = max(1.0, float(P.abs_eval(z)) ** 2, abs(J))
    assert abs(J - fd) <= 1e-5 * scale


def test_difference_of_squares_and_identity():
    assert multiply(Z - ZB, Z + ZB) == Z**2 - ZB**2
    assert multiply(P3, PolyPoly.const(1)) == P3


def test_product_matches_convolution_oracle():
    n, k = 3, 2
    A = (Z + ZB + 1j) ** (2 * k - n)
    B = (Z * ZB + 1) ** (n - k)
    got = terms_of(A * B)
    want = naive_product(terms_of(A), terms_of(B))
    assert got.keys() == want.keys()
    for key in want:
        assert got[key] == pytest.approx(want[key], abs=1e-15)


@given(polys(), polys(), points)
@settings(max_examples=100, deadline=None)
def test_eval_is_a_ring_homomorphism(P, Q, z):
    p, q = evaluate(P, z), evaluate(Q, z)
    scale = max(1.0, float(P.abs_eval(z)) + float(Q.abs_eval(z)))
    assert abs(evaluate(add(P, Q), z) - (p + q)) <= 1e-12 * scale
    pscale = max(1.0, float(P.abs_eval(z)) * float(Q.abs_eval(z)))
    assert abs(evaluate(multiply(P, Q), z) - p * q) <= 1e-12 * pscale


@given(polys(max_n=5), polys(max_n=5))
@settings(max_examples=60, deadline=None)
def test_degree_is_additive(P, Q):
    if P.is_zero() or Q.is_zero():
        return
    assert degrees(P * Q).deg == degrees(P).deg + degrees(Q).deg
    # the oracle convolution agrees on the top degree
    top = max(j + k for j, k in naive_product(terms_of(P), terms_of(Q)))
    assert top == degrees(P).deg + degrees(Q).deg


def test_conjugate_examples():
    assert conjugate(Z * ZB - 1) == Z * ZB - 1
    assert conjugate(Z - ZB) == ZB - Z


@given(polys(), points)
@settings(max_examples=60, deadline=None)
def test_conjugate_involution_and_eval(P, z):
    assert conjugate(conjugate(P)) == P
    assert np.array_equal(np.sort(np.abs(conjugate(P).coeffs).ravel()), np.sort(np.abs(P.coeffs).ravel()))
    assert evaluate(conjugate(P), z) == pytest.approx(np.conj(evaluate(P, z)), rel=1e-12, abs=1e-12)


def test_self_conjugate_lambda():
    assert self_conjugate_lambda(Z * ZB - 1) == 1
    assert self_conjugate_lambda(Z - ZB) == -1
    assert self_conjugate_lambda(P3) is None
    lam = self_conjugate_lambda(1j * (Z * ZB - 1))
    assert lam == pytest.approx(-1)
    with pytest.raises(ValueError):
        self_conjugate_lambda(P3, tol=0)


def test_equality_is_exact_and_trimmed():
    assert PolyPoly.from_terms({(1, 0): 1}, n=4) == Z
    assert PolyPoly.from_terms({(1, 0): 1}, n=4).n == 1
    assert Z + 1e-300 != Z
    assert hash(Z + ZB) == hash(ZB + Z)


def test_from_terms_rejects_bad_input():
    with pytest.raises(ValueError):
        PolyPoly.from_terms({(-1, 0): 1})
    with pytest.raises(ValueError):
        PolyPoly.from_terms({(2, 1): 1}, n=2)
    with pytest.raises(ValueError):
        PolyPoly.from_terms({(0, 0): math.inf})


def test_text_format_round_trip(tmp_path):
    P = (Z - 1) ** 3 + 0.25j * ZB**2
    path = tmp_path / "p.poly"
    write_poly(P, path)
    assert read_poly(path) == P
    assert parse_poly(format_poly(P)) == P


def test_parse_accepts_comments_and_real_terms():
    P = parse_poly("# P3\nn 2\n2 0 1   # z^2\n1 0 1\n0 1 1 0\n\n0 0 1\n")
    assert P == P3


@pytest.mark.parametrize(
    "text, line",
    [
        ("n 2\n3 0 1\n", 2),
        ("1 0 1\n1 0 2\n", 2),
        ("n 2\n1 0\n", 2),
        ("1 0 x 0\n", 1),
        ("1 0 1\nn 3\n", 2),
        ("n -1\n", 1),
        ("0 0 nan\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(PolyFormatError) as err:
        parse_poly(text)
    assert err.value.lineno == line
    assert f"line {line}" in str(err.value)
