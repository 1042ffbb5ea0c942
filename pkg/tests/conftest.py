from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cadlab.polys import Poly

# Shared 2-variable builders (x = var 0, y = var 1).
X2 = Poly.var(2, 0)
Y2 = Poly.var(2, 1)
ONE2 = Poly.one(2)


def p2(expr_terms: dict[tuple[int, int], int | Fraction]) -> Poly:
    return Poly(2, expr_terms)


@pytest.fixture
def circle() -> Poly:
    """x^2 + y^2 - 1"""
    return p2({(2, 0): 1, (0, 2): 1, (0, 0): -1})


@pytest.fixture
def circle2() -> Poly:
    """(x-1)^2 + y^2 - 1 = x^2 - 2x + y^2"""
    return p2({(2, 0): 1, (1, 0): -2, (0, 2): 1})


@pytest.fixture
def blowup() -> Poly:
    """(x-1)(y^2+1) - 1 = xy^2 + x - y^2 - 2"""
    return p2({(1, 2): 1, (1, 0): 1, (0, 2): -1, (0, 0): -2})
