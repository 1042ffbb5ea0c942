"""The lifting phase: stacks, the leveled cell tree, open CADs, formula truth.

Lifting works in a relabeled coordinate space where variable i is the level
i+1 variable of the chosen ordering, so sample points are plain prefixes.
Cell indices follow the odd/even convention: odd entries are sectors, even
entries sections; a stack over a base with r sections has 2r+1 cells.

Sector samples stay rational: midpoints of the gap between refined section
intervals, and the nearest integer beyond the outermost bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algpoints import Nullified, roots_above, sign_at_point
from .errors import Deadline, NotWellOrientedError, scoped_deadline
from .formulas import Formula, atom_polys, evaluate_signs
from .ordering import VarOrdering
from .polys import Poly
from .projection import ProjectionLevels, projection_levels
from .realroots import AlgebraicNumber, compare, isolate_real_roots, merge_distinct

__all__ = ["Cell", "Stack", "CADTree", "build_stack", "build_cad", "open_cad_fulldim",
           "evaluate_formula_on_cells"]


@dataclass
class Cell:
    """One CAD cell: positional index, exact sample point, and leaf signs.

    ``signs`` aligns with the tree's input polynomial list and is populated
    lazily (leaf cells only); ``zero_polys`` records which stack polynomials
    vanish on a section cell, discovered during stack construction.
    """

    index: tuple[int, ...]
    sample: tuple[AlgebraicNumber, ...]
    signs: tuple[int, ...] | None = None
    zero_polys: frozenset[int] = frozenset()

    @property
    def level(self) -> int:
        return len(self.index)

    @property
    def dimension(self) -> int:
        return sum(1 for i in self.index if i % 2 == 1)

    def is_section(self) -> bool:
        return bool(self.index) and self.index[-1] % 2 == 0


@dataclass
class Stack:
    """Cells over one base cell, alternating sector/section, sectors outermost."""

    base: Cell
    cells: list[Cell]


def sector_points(roots: Sequence[AlgebraicNumber]) -> list[Fraction]:
    """Rational sector samples around already-disjoint section intervals."""
    if not roots:
        return [Fraction(0)]
    out = [Fraction(math.floor(roots[0].lo))]
    for a, b in zip(roots, roots[1:]):
        out.append((a.hi + b.lo) / 2)
    out.append(Fraction(math.ceil(roots[-1].hi)))
    return out


def build_stack(
    base: Cell,
    polys: Sequence[Poly],
    deadline: Deadline | None = None,
) -> Stack:
    """Split the line above ``base`` on the real roots of ``polys``.

    The lift variable is the next coordinate after the base sample.  Raises
    :class:`NotWellOrientedError` when a polynomial vanishes identically over
    a positive-dimensional base; over a zero-dimensional base such polynomials
    simply contribute no sections (their sign is 0 across the stack).
    """
    v = len(base.sample)
    sections: list[tuple[AlgebraicNumber, set[int]]] = []
    nullified: set[int] = set()
    for idx, p in enumerate(polys):
        if deadline:
            deadline.check()
        if p.is_zero():
            raise ValueError("zero polynomial in lifting set")
        if not p.contains_var(v):
            # handled at the level where its own main variable is lifted
            continue
        try:
            for root, _simple in roots_above(p, base.sample, v):
                _insert_root(sections, root, idx)
        except Nullified:
            if base.dimension > 0:
                raise NotWellOrientedError(
                    f"projection polynomial vanishes identically over the "
                    f"positive-dimensional cell {base.index}"
                )
            nullified.add(idx)
    sections.sort(key=_RootKey)
    roots = _disjoint([r for r, _ in sections])
    samples = sector_points(roots)
    cells: list[Cell] = []
    for i, root in enumerate(roots):
        sector_sample = AlgebraicNumber.from_rational(samples[i])
        cells.append(
            Cell(base.index + (2 * i + 1,), base.sample + (sector_sample,),
                 zero_polys=frozenset(nullified))
        )
        cells.append(
            Cell(base.index + (2 * i + 2,), base.sample + (root,),
                 zero_polys=frozenset(sections[i][1] | nullified))
        )
    last = AlgebraicNumber.from_rational(samples[-1])
    cells.append(
        Cell(base.index + (2 * len(roots) + 1,), base.sample + (last,),
             zero_polys=frozenset(nullified))
    )
    return Stack(base, cells)


class _RootKey:
    __slots__ = ("r",)

    def __init__(self, item):
        self.r = item[0]

    def __lt__(self, other) -> bool:
        return compare(self.r, other.r) < 0


def _insert_root(sections: list[tuple[AlgebraicNumber, set[int]]], root, idx) -> None:
    for i, (r, owners) in enumerate(sections):
        if compare(r, root) == 0:
            owners.add(idx)
            if root.is_rational and not r.is_rational:
                sections[i] = (root, owners)
            return
    sections.append((root, {idx}))


def _disjoint(roots: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    out = list(roots)
    for i in range(len(out) - 1):
        while out[i].hi > out[i + 1].lo:
            out[i] = out[i].refine_step()
            out[i + 1] = out[i + 1].refine_step()
    return out


@dataclass
class CADTree:
    """Leveled cell tree for one ordering; counts per level, leaves last.

    ``input_polys`` are the problem polynomials (original variable labels,
    normalized); leaf signs align with them.  ``cell_count`` follows the
    convention that a CAD of R^n has the leaf cells as its cells.
    """

    ordering: VarOrdering
    input_polys: tuple[Poly, ...]
    levels: list[list[Cell]]
    projection: ProjectionLevels
    mode: str
    designation_label: str = "-"
    _relabeled_inputs: tuple[Poly, ...] = ()

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.levels)

    @property
    def cell_count(self) -> int:
        return len(self.levels[-1])

    def leaves(self) -> list[Cell]:
        return self.levels[-1]

    def stack_sizes(self) -> list[int]:
        """Leaf-stack sizes in base-cell order (the printed tree's row widths)."""
        if len(self.levels) == 1:
            return [len(self.levels[0])]
        sizes: dict[tuple[int, ...], int] = {}
        for cell in self.levels[-1]:
            sizes[cell.index[:-1]] = sizes.get(cell.index[:-1], 0) + 1
        return [sizes[c.index] for c in self.levels[-2]]

    def ensure_signs(self, deadline: Deadline | None = None) -> None:
        """Populate leaf signs for every input polynomial at the leaf samples."""
        with scoped_deadline(deadline):
            self._ensure_signs(deadline)

    def _ensure_signs(self, deadline: Deadline | None = None) -> None:
        for leaf in self.levels[-1]:
            if leaf.signs is not None:
                continue
            signs = []
            for j, p in enumerate(self._relabeled_inputs):
                if deadline:
                    deadline.check()
                if j in leaf.zero_polys:
                    signs.append(0)
                else:
                    signs.append(sign_at_point(p, leaf.sample))
            leaf.signs = tuple(signs)

    def fulldim_leaf_count(self) -> int:
        return sum(1 for c in self.levels[-1] if c.dimension == len(c.index))


def _input_list(source) -> tuple[list[Poly], Formula | None]:
    """Accept a Problem-like object (input_polys()/formula) or an iterable of Poly."""
    if hasattr(source, "input_polys"):
        return list(source.input_polys()), getattr(source, "formula", None)
    return list(source), None


def build_cad(
    source,
    ordering: VarOrdering,
    mode: str = "sign",
    designation=None,
    deadline: Deadline | None = None,
) -> CADTree:
    """Full CAD of R^n for the input polynomials under one ordering.

    mode "sign": sign-invariant CAD of the input set.  mode "ec": reduced
    projection and lifting along a designated equational constraint; the
    designation is auto-selected by sotd score unless supplied.
    """
    if mode not in ("sign", "ec"):
        raise ValueError(f"unknown CAD mode {mode!r}")
    with scoped_deadline(deadline):
        return _build_cad(source, ordering, mode, designation, deadline)


def _build_cad(source, ordering, mode, designation, deadline):
    polys, formula = _input_list(source)
    seen: dict = {}
    for p in polys:
        if p.is_zero() or p.is_constant():
            continue
        q = p.normalized()
        seen.setdefault(tuple(sorted(q.terms.items())), q)
    inputs = list(seen.values())
    if not inputs:
        raise ValueError("no nonconstant input polynomials")
    n = ordering.nvars
    perm = ordering.order
    relabeled = [p.permute_vars(perm) for p in inputs]
    identity = VarOrdering(tuple(range(n)))
    designations: dict[int, Poly] = {}
    label = "-"
    if mode == "ec":
        designations, label = _choose_designation(
            relabeled, formula, perm, identity, designation
        )
    levels = projection_levels(relabeled, identity, designations=designations,
                               deadline=deadline)
    root = Cell((), ())
    current = [root]
    tree_levels: list[list[Cell]] = []
    for k in range(1, n + 1):
        if k == n:
            if mode == "ec" and n in designations:
                stack_polys = [designations[n]]
            else:
                stack_polys = list(relabeled)
        else:
            stack_polys = [p for p in levels.level(k)]
            if mode == "ec" and k in designations and k >= 2:
                stack_polys = [designations[k]]
        next_cells: list[Cell] = []
        for base in current:
            if deadline:
                deadline.check()
            stack = build_stack(base, stack_polys, deadline=deadline)
            next_cells.extend(stack.cells)
        if k == n:
            # zero_polys indices refer to stack_polys; leaf signs index inputs
            translation = _stack_to_input_indices(stack_polys, relabeled)
            for cell in next_cells:
                cell.zero_polys = frozenset(
                    translation[j] for j in cell.zero_polys if j in translation
                )
        tree_levels.append(next_cells)
        current = next_cells
    tree = CADTree(
        ordering,
        tuple(inputs),
        tree_levels,
        levels,
        mode,
        designation_label=label,
        _relabeled_inputs=tuple(p.permute_vars(perm) for p in inputs),
    )
    return tree


def _stack_to_input_indices(stack_polys: Sequence[Poly], inputs: Sequence[Poly]) -> dict[int, int]:
    input_keys = {
        tuple(sorted(p.normalized().terms.items())): i for i, p in enumerate(inputs)
    }
    out: dict[int, int] = {}
    for j, sp in enumerate(stack_polys):
        key = tuple(sorted(sp.normalized().terms.items()))
        if key in input_keys:
            out[j] = input_keys[key]
    return out


def _choose_designation(
    relabeled: list[Poly],
    formula: Formula | None,
    perm: tuple[int, ...],
    identity: VarOrdering,
    requested,
) -> tuple[dict[int, Poly], str]:
    """Designations for EC mode, auto-scored by sotd unless one is requested.

    Returns a level->poly mapping in the relabeled space plus a display label.
    With no equational constraints the mapping is empty (degenerates to the
    sign-invariant build).
    """
    from .formulas import enumerate_designations, identify_ecs, propagate_ecs, score_designation

    if formula is None:
        ecs = list(relabeled)  # a bare polynomial set is read as a conjunction of = 0
    else:
        ecs = [p.permute_vars(perm) for p in identify_ecs(formula)]
    ecs = [p.normalized() for p in ecs]
    if not ecs:
        return {}, "none"
    candidates = propagate_ecs(ecs, identity)
    if requested is not None:
        top = [p for p in candidates[-1]]
        if isinstance(requested, int):
            if not 0 <= requested < len(top):
                raise ValueError(f"designation index {requested} out of range")
            chosen_top = top[requested]
        else:
            chosen_top = requested.permute_vars(perm).normalized()
            if chosen_top not in top:
                raise ValueError("designated EC missing")
        per_level: list[Poly | None] = []
        for k, level in enumerate(candidates, start=1):
            if k == identity.nvars:
                per_level.append(chosen_top)
            else:
                per_level.append(level[0] if level else None)
        mapping = {k + 1: p for k, p in enumerate(per_level) if p is not None}
        return mapping, _label(mapping, identity.nvars)
    designs = enumerate_designations(candidates)
    best = None
    for d in designs:
        try:
            score = score_designation(relabeled, d, identity, measure="sotd")
        except ValueError:
            continue
        if best is None or score < best[0]:
            best = (score, d)
    if best is None:
        return {}, "none"
    mapping = best[1].as_mapping()
    return mapping, _label(mapping, identity.nvars)


def _label(mapping: dict[int, Poly], n: int) -> str:
    if not mapping:
        return "none"
    return ";".join(f"L{k}" for k in sorted(mapping))


def open_cad_fulldim(
    A: Iterable[Poly],
    ordering: VarOrdering,
    deadline: Deadline | None = None,
) -> int:
    """Number of full-dimensional cells: sectors-only recursion, rational samples."""
    with scoped_deadline(deadline):
        return _open_cad_fulldim(A, ordering, deadline)


def _open_cad_fulldim(A, ordering, deadline):
    inputs = [p for p in A if not p.is_zero() and not p.is_constant()]
    if not inputs:
        return 1
    n = ordering.nvars
    perm = ordering.order
    relabeled = [p.permute_vars(perm).normalized() for p in inputs]
    identity = VarOrdering(tuple(range(n)))
    levels = projection_levels(relabeled, identity, deadline=deadline)
    samples: list[tuple[Fraction, ...]] = [()]
    for k in range(1, n + 1):
        polys_k = levels.level(k)
        v = k - 1
        next_samples: list[tuple[Fraction, ...]] = []
        for s in samples:
            if deadline:
                deadline.check()
            assign = dict(enumerate(s))
            roots = []
            for p in polys_k:
                q = p.substitute(assign) if assign else p
                if q.is_zero() or not q.contains_var(v):
                    continue
                roots.extend(isolate_real_roots(q, v))
            merged = merge_distinct(roots)
            for point in sector_points(list(merged)):
                next_samples.append(s + (point,))
        samples = next_samples
    return len(samples)


def evaluate_formula_on_cells(
    tree: CADTree, formula: Formula, deadline: Deadline | None = None
) -> tuple[list[bool], int]:
    """Truth of the formula's matrix at every leaf sample, plus the true count.

    The formula's polynomials must be among the tree's input set.
    """
    polys = atom_polys(formula)
    keys = {tuple(sorted(p.terms.items())) for p in tree.input_polys}
    for p in polys:
        if tuple(sorted(p.terms.items())) not in keys:
            raise ValueError("formula polynomial not in the tree's input set")
    tree.ensure_signs(deadline=deadline)
    index_of = {
        tuple(sorted(p.terms.items())): i for i, p in enumerate(tree.input_polys)
    }
    truths: list[bool] = []
    for leaf in tree.leaves():
        sign_of = {k: leaf.signs[i] for k, i in index_of.items()}
        truths.append(evaluate_signs(formula, sign_of))
    return truths, sum(truths)
