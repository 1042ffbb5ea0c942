from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cadlab.cadbuild import (
    Cell,
    build_cad,
    build_stack,
    evaluate_formula_on_cells,
    open_cad_fulldim,
    sector_points,
)
from cadlab.errors import NotWellOrientedError
from cadlab.formulas import Atom, BoolOp, Const
from cadlab.ordering import VarOrdering
from cadlab.polys import Poly
from cadlab.problem import Problem
from cadlab.randgen import RandomProfile, random_problems
from cadlab.realroots import AlgebraicNumber, compare, count_distinct_real_roots

XY = VarOrdering((0, 1))
YX = VarOrdering((1, 0))


def P(terms):
    return Poly(2, terms)


CIRCLE = P({(2, 0): 1, (0, 2): 1, (0, 0): -1})
CIRCLE2 = P({(2, 0): 1, (1, 0): -2, (0, 2): 1})
BLOWUP = P({(1, 2): 1, (1, 0): 1, (0, 2): -1, (0, 0): -2})


def rat(x) -> AlgebraicNumber:
    return AlgebraicNumber.from_rational(Fraction(x))


class TestBuildStack:
    def test_circle_over_origin(self):
        base = Cell((3,), (rat(0),))
        stack = build_stack(base, [CIRCLE])
        assert len(stack.cells) == 5
        samples = [c.sample[1] for c in stack.cells]
        expected = [rat(-2), rat(-1), rat(0), rat(1), rat(2)]
        assert all(compare(a, b) == 0 for a, b in zip(samples, expected))

    def test_circle_over_left_tangent(self):
        base = Cell((2,), (rat(-1),))
        stack = build_stack(base, [CIRCLE])
        assert len(stack.cells) == 3
        assert compare(stack.cells[1].sample[1], rat(0)) == 0

    def test_no_real_roots_single_sector(self):
        base = Cell((1,), (rat(-2),))
        stack = build_stack(base, [CIRCLE])
        assert len(stack.cells) == 1
        assert stack.cells[0].index == (1, 1)

    def test_nullification_over_positive_dim_base(self):
        # y*(x-1) vanishes identically over any sector sample... only over x=1;
        # fabricate a positive-dimensional base whose sample sits at x=1
        p = P({(1, 1): 1, (0, 1): -1})  # (x-1)*y
        base = Cell((1,), (rat(1),))  # odd index: sector, dimension 1
        with pytest.raises(NotWellOrientedError):
            build_stack(base, [p])

    def test_nullification_over_section_base_skips(self):
        p = P({(1, 1): 1, (0, 1): -1})
        base = Cell((2,), (rat(1),))  # section: dimension 0
        stack = build_stack(base, [p])
        assert len(stack.cells) == 1
        assert stack.cells[0].zero_polys == {0}


class TestSectorPoints:
    def test_no_roots(self):
        assert sector_points([]) == [Fraction(0)]

    def test_integer_beyond_and_midpoints(self):
        roots = [rat(-1), rat(1)]
        # degenerate rational intervals touch at 0: samples -2, 0, 2
        assert sector_points(roots) == [Fraction(-2), Fraction(0), Fraction(2)]


class TestBuildCad:
    def test_circle_13(self, circle):
        prob = Problem("circle", ("x", "y"), formula=Atom(circle, "="))
        tree = build_cad(prob, XY)
        assert tree.cell_count == 13
        assert tree.stack_sizes() == [1, 3, 5, 3, 1]
        tree.ensure_signs()
        # sign table of the printed tree: zero exactly on the four sections
        signs = {leaf.index: leaf.signs[0] for leaf in tree.leaves()}
        assert signs[(3, 3)] == -1
        for idx in [(2, 2), (3, 2), (3, 4), (4, 2)]:
            assert signs[idx] == 0
        assert sum(1 for s in signs.values() if s == 1) == 8

    def test_two_circles_55(self):
        tree = build_cad([CIRCLE, CIRCLE2], XY)
        assert tree.cell_count == 55
        assert tree.stack_sizes() == [1, 3, 5, 7, 9, 5, 9, 7, 5, 3, 1]

    def test_blowup_3_vs_11(self):
        assert build_cad([BLOWUP], YX).cell_count == 3
        assert build_cad([BLOWUP], XY).cell_count == 11

    def test_univariate_problem(self):
        p = Poly(1, {(2,): 1, (0,): -2})
        tree = build_cad([p], VarOrdering((0,)))
        assert tree.cell_count == 5

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            build_cad([CIRCLE], XY, mode="open")

    def test_irrational_base_coordinates(self):
        # {x^2-2, y^2-x}: R^1 splits at -sqrt2, 0, sqrt2; the parabola only
        # exists for x >= 0, so stacks are 1,1,1,3,5,5,5 (hand count)
        a = P({(2, 0): 1, (0, 0): -2})
        b = P({(0, 2): 1, (1, 0): -1})
        tree = build_cad([a, b], XY)
        assert tree.cell_count == 21
        assert tree.stack_sizes() == [1, 1, 1, 3, 5, 5, 5]
        tree.ensure_signs()
        ia = tree.input_polys.index(a)
        ib = tree.input_polys.index(b)
        for leaf in tree.leaves():
            # x^2-2 vanishes exactly on the two algebraic section columns
            assert (leaf.signs[ia] == 0) == (leaf.index[0] in (2, 6))
        zeros_b = sum(1 for leaf in tree.leaves() if leaf.signs[ib] == 0)
        # (0,0) plus two parabola sections over each positive-x column
        assert zeros_b == 7


class TestInvariants:
    def test_cylindricity_and_interleaving_seeded(self):
        # acceptance criterion: 100 seeded random 2-3 variable problems
        built = 0
        rng_problems = []
        rng_problems += random_problems(1101, 70, RandomProfile(
            nvars=2, npolys=2, max_degree=3, max_terms=3, coeff_range=4))
        rng_problems += random_problems(1102, 30, RandomProfile(
            nvars=3, npolys=2, max_degree=2, max_terms=2, coeff_range=3))
        for prob in rng_problems:
            ordering = VarOrdering(tuple(range(prob.nvars)))
            try:
                tree = build_cad(prob, ordering)
            except NotWellOrientedError:
                continue
            built += 1
            _check_cylindricity(tree)
            _check_interleaving(tree)
        assert built >= 75, f"only {built} problems built cleanly"

    def test_sign_invariance_spot_check(self):
        tree = build_cad([CIRCLE, CIRCLE2], XY)
        tree.ensure_signs()
        from cadlab.algpoints import sign_at_point

        for leaf in tree.leaves():
            for j, p in enumerate(tree._relabeled_inputs):
                assert leaf.signs[j] == sign_at_point(p, leaf.sample)

    def test_univariate_oracle_seeded(self):
        # acceptance criterion: cells = 2*roots + 1 on 200 random univariate problems
        rng = random.Random(2210)
        done = 0
        while done < 200:
            deg = rng.randint(1, 6)
            terms = {(i,): rng.randint(-9, 9) for i in range(deg + 1)}
            p = Poly(1, terms)
            if p.is_zero() or p.is_constant():
                continue
            tree = build_cad([p], VarOrdering((0,)))
            expected = 2 * count_distinct_real_roots([p]) + 1
            assert tree.cell_count == expected
            done += 1


def _check_cylindricity(tree):
    for level_cells, parent_cells in zip(tree.levels[1:], tree.levels[:-1]):
        parents = {c.index for c in parent_cells}
        for cell in level_cells:
            assert cell.index[:-1] in parents


def _check_interleaving(tree):
    for level_cells in tree.levels:
        by_base: dict = {}
        for cell in level_cells:
            by_base.setdefault(cell.index[:-1], []).append(cell)
        for cells in by_base.values():
            assert len(cells) % 2 == 1
            for i, cell in enumerate(cells, start=1):
                assert cell.index[-1] == i
            coords = [c.sample[-1] for c in cells]
            for a, b in zip(coords, coords[1:]):
                assert compare(a, b) < 0


class TestSignVectorAgreement:
    def test_orderings_realize_identical_sign_vectors(self):
        # both orderings decompose the same plane sign-invariantly, so the
        # sets of realized sign vectors must coincide exactly
        problems = random_problems(5150, 20, RandomProfile(
            nvars=2, npolys=2, max_degree=3, max_terms=3, coeff_range=4,
            equality_fraction=0.4))
        checked = 0
        for prob in problems:
            polys = prob.input_polys()
            try:
                ta = build_cad(polys, XY)
                tb = build_cad(polys, YX)
                ta.ensure_signs()
                tb.ensure_signs()
            except NotWellOrientedError:
                continue
            assert ta.input_polys == tb.input_polys
            assert {l.signs for l in ta.leaves()} == {l.signs for l in tb.leaves()}
            checked += 1
        assert checked >= 15


class TestOpenCad:
    def test_circle_five(self):
        assert open_cad_fulldim([CIRCLE], XY) == 5

    def test_constants_only(self):
        assert open_cad_fulldim([Poly.const(2, 3)], XY) == 1

    def test_two_circles_matches_odd_leaves(self):
        tree = build_cad([CIRCLE, CIRCLE2], XY)
        n = open_cad_fulldim([CIRCLE, CIRCLE2], XY)
        assert n == tree.fulldim_leaf_count()
        assert n < 55

    def test_blowup_counts(self):
        assert open_cad_fulldim([BLOWUP], YX) == 2
        assert open_cad_fulldim([BLOWUP], XY) == 5


class TestEvaluate:
    def test_circle_equality_true_on_four(self, circle):
        prob = Problem("circle", ("x", "y"), formula=Atom(circle, "="))
        tree = build_cad(prob, XY)
        truths, n = evaluate_formula_on_cells(tree, prob.formula)
        assert n == 4

    def test_tautology(self, circle):
        prob = Problem("circle", ("x", "y"), formula=Atom(circle, "="))
        tree = build_cad(prob, XY)
        _, n = evaluate_formula_on_cells(tree, Const(True))
        assert n == tree.cell_count

    def test_two_circles_conjunction_two_leaves(self):
        formula = BoolOp("and", (Atom(CIRCLE, "="), Atom(CIRCLE2, "=")))
        prob = Problem("two", ("x", "y"), formula=formula)
        tree = build_cad(prob, XY)
        _, n = evaluate_formula_on_cells(tree, formula)
        assert n == 2

    def test_foreign_polynomial_rejected(self):
        tree = build_cad([CIRCLE], XY)
        with pytest.raises(ValueError):
            evaluate_formula_on_cells(tree, Atom(BLOWUP, "="))

    def test_truth_found_under_both_orderings(self):
        formula = BoolOp("and", (Atom(CIRCLE, "="), Atom(CIRCLE2, "=")))
        prob = Problem("two", ("x", "y"), formula=formula)
        for ordering in (XY, YX):
            tree = build_cad(prob, ordering)
            _, n = evaluate_formula_on_cells(tree, formula)
            assert n > 0


class TestEcReduced:
    def test_fewer_cells_same_truth(self):
        formula = BoolOp("and", (Atom(CIRCLE, "="), Atom(CIRCLE2, "=")))
        prob = Problem("two", ("x", "y"), formula=formula)
        sign_tree = build_cad(prob, XY, mode="sign")
        ec_tree = build_cad(prob, XY, mode="ec")
        assert ec_tree.cell_count < sign_tree.cell_count == 55
        _, n = evaluate_formula_on_cells(ec_tree, formula)
        assert n == 2

    def test_no_ecs_degenerates_to_sign(self):
        formula = Atom(CIRCLE, "<")
        prob = Problem("disk", ("x", "y"), formula=formula)
        a = build_cad(prob, XY, mode="ec")
        b = build_cad(prob, XY, mode="sign")
        assert a.cell_count == b.cell_count

    def test_explicit_designation(self):
        formula = BoolOp("and", (Atom(CIRCLE, "="), Atom(CIRCLE2, "=")))
        prob = Problem("two", ("x", "y"), formula=formula)
        t0 = build_cad(prob, XY, mode="ec", designation=0)
        t1 = build_cad(prob, XY, mode="ec", designation=1)
        assert t0.cell_count < 55 and t1.cell_count < 55
        for t in (t0, t1):
            _, n = evaluate_formula_on_cells(t, formula)
            assert n == 2
