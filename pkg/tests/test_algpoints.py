from __future__ import annotations

from fractions import Fraction

import pytest

from cadlab.algpoints import Nullified, roots_above, sign_at_point
from cadlab.polys import Poly
from cadlab.realroots import AlgebraicNumber, compare

SQRT2 = AlgebraicNumber((-2, 0, 1), Fraction(1), Fraction(2))
SQRT3 = AlgebraicNumber((-3, 0, 1), Fraction(1), Fraction(2))


def rat(x):
    return AlgebraicNumber.from_rational(Fraction(x))


class TestSignAtPoint:
    def test_rational_point(self):
        p = Poly(2, {(2, 0): 1, (0, 2): 1, (0, 0): -1})
        assert sign_at_point(p, (rat(0), rat(0))) == -1
        assert sign_at_point(p, (rat(1), rat(0))) == 0
        assert sign_at_point(p, (rat(2), rat(0))) == 1

    def test_single_algebraic_coordinate(self):
        p = Poly(2, {(2, 0): 1, (0, 1): -1})  # x^2 - y
        assert sign_at_point(p, (SQRT2, rat(2))) == 0
        assert sign_at_point(p, (SQRT2, rat(3))) == -1

    def test_two_algebraic_coordinates_zero_certificate(self):
        # x^2 y^2 - 6 vanishes exactly at (sqrt2, sqrt3): the interval loop
        # cannot decide this, so the resultant-elimination fallback must
        pt = (SQRT2, SQRT3)
        assert sign_at_point(Poly(2, {(2, 2): 1, (0, 0): -6}), pt) == 0
        assert sign_at_point(Poly(2, {(2, 2): 1, (0, 0): -5}), pt) == 1
        assert sign_at_point(Poly(2, {(2, 2): 1, (0, 0): -7}), pt) == -1

    def test_mixed_rational_algebraic(self):
        p = Poly(3, {(1, 1, 1): 1, (0, 0, 0): -6})  # x*y*z - 6
        assert sign_at_point(p, (SQRT2, rat(3), SQRT2)) == 0


class TestRootsAbove:
    def test_rational_base(self):
        p = Poly(2, {(2, 0): 1, (0, 2): 1, (0, 0): -1})
        roots = roots_above(p, (rat(0),), 1)
        assert [r.rational_value for r, _ in roots] == [Fraction(-1), Fraction(1)]
        assert all(simple for _, simple in roots)

    def test_algebraic_base(self):
        p = Poly(2, {(0, 2): 1, (1, 0): -1})  # y^2 - x over x = sqrt2
        roots = roots_above(p, (SQRT2,), 1)
        assert len(roots) == 2
        fourth_root = roots[1][0]
        # (2^(1/4))^4 == 2
        from cadlab.realroots import sign_at

        assert sign_at((-2, 0, 0, 0, 1), fourth_root) == 0

    def test_no_real_roots_above(self):
        p = Poly(2, {(0, 2): 1, (1, 0): 1})  # y^2 + x over x = sqrt2
        assert roots_above(p, (SQRT2,), 1) == []

    def test_nullification_detected(self):
        p = Poly(2, {(1, 1): 1, (0, 1): -1})  # (x-1) * y
        with pytest.raises(Nullified):
            roots_above(p, (rat(1),), 1)

    def test_double_root_over_zero_dim_base(self):
        # y^2 - 2x + 2 sqrt2-ish: construct q with a double root above sqrt2:
        # (y^2 - x)^2 has the same roots as y^2 - x; the square-free pass
        # inside roots_above must collapse it
        base = Poly(2, {(0, 2): 1, (1, 0): -1})
        squared = base * base
        roots_sq = roots_above(squared, (SQRT2,), 1)
        roots_plain = roots_above(base, (SQRT2,), 1)
        assert len(roots_sq) == len(roots_plain) == 2
        for (a, _), (b, _) in zip(roots_sq, roots_plain):
            assert compare(a, b) == 0


class TestThreeVarBuild:
    def test_two_algebraic_base_coordinates(self):
        from cadlab.cadbuild import build_cad
        from cadlab.ordering import VarOrdering

        A = [
            Poly(3, {(2, 0, 0): 1, (0, 0, 0): -2}),  # x^2 - 2
            Poly(3, {(0, 2, 0): 1, (0, 0, 0): -3}),  # y^2 - 3
            Poly(3, {(0, 0, 2): 1, (1, 1, 0): -1}),  # z^2 - x*y
        ]
        tree = build_cad(A, VarOrdering((0, 1, 2)))
        # level-1 set {x^2-2, x}: 7 cells; level 2 adds roots of y^2-3 and x*y
        # (x*y nullifies over the 0-dimensional base x=0): 7*6+5 = 47
        assert tree.counts == (7, 47, 141)
        tree.ensure_signs()
        zeros = [
            sum(1 for leaf in tree.leaves() if leaf.signs[i] == 0) for i in range(3)
        ]
        # x^2-2 vanishes on every leaf above x = +-sqrt2; z^2 = xy has two
        # sections wherever xy > 0 and one at xy = 0
        assert zeros[0] == 42
        assert zeros[1] == 42
        assert zeros[2] == 47
