import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from polyzero import PolyPoly  # noqa: E402

Z, ZB = PolyPoly.z(), PolyPoly.zbar()


def p1(n=5, a=1, b=2):
    return PolyPoly.from_terms({(n, 0): a, (0, 1): b})


def p2(n=5, a=1, b=2):
    return PolyPoly.from_terms({(n, 0): a, (0, n - 1): b})


def wilmshurst(n):
    return (Z - 1) ** n + Z**n + (-1j) * (ZB - 1) ** n + 1j * ZB**n


P3 = Z**2 + Z + ZB + 1
P4 = Z**2 + Z + ZB + 2


@pytest.fixture
def fixtures():
    return {"P1": p1(), "P2": p2(), "P3": P3, "P4": P4}
