"""McCallum-style projection: full operator, EC-reduced operator, level sequences.

The operator works over a square-free primitive basis of its input: it emits
the basis contents, the coefficients of each basis element (stopping once a
nonzero constant coefficient certifies non-vanishing), discriminants of the
degree >= 2 elements, and pairwise resultants.  Every emitted polynomial is
made square-free in its own main variable, normalized to an integer-primitive
positive-lead representative, deduplicated up to rational multiples, and
constants are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import Deadline
from .ordering import VarOrdering
from .polys import (
    Poly,
    discriminant,
    resultant,
    squarefree_part,
    squarefree_primitive_basis,
)

__all__ = ["ProjectionLevels", "mccallum_project", "reduced_ec_project", "projection_levels"]


def _emit(collected: dict, p: Poly) -> None:
    if p.is_zero() or p.is_constant():
        return
    vs = p.variables()
    main = vs[-1]
    q = squarefree_part(p, main).normalized()
    if q.is_constant():
        return
    key = tuple(sorted(q.terms.items()))
    collected.setdefault(key, q)


def _coefficients_until_constant(collected: dict, b: Poly, v: int) -> None:
    # leading coefficient downwards; a nonzero constant coefficient certifies
    # the polynomial cannot vanish identically, so the rest may be dropped
    for k in range(b.degree(v), -1, -1):
        c = b.coeff_of_power(v, k)
        if c.is_zero():
            continue
        if c.is_constant():
            break
        _emit(collected, c)


def mccallum_project(A: Iterable[Poly], v: int) -> list[Poly]:
    """Full projection of A eliminating v; elements free of v pass through."""
    collected: dict = {}
    basis, contents = squarefree_primitive_basis(A, v)
    for c in contents:
        _emit(collected, c)
    for b in basis:
        _coefficients_until_constant(collected, b, v)
        if b.degree(v) >= 2:
            _emit(collected, discriminant(b, v))
    for i, b in enumerate(basis):
        for c in basis[i + 1 :]:
            _emit(collected, resultant(b, c, v))
    return sorted(collected.values(), key=_sort_key)


def reduced_ec_project(A: Iterable[Poly], e: Poly, v: int) -> list[Poly]:
    """Reduced operator for a designated equational constraint e in A.

    Projects e alone in full, plus the resultants of e against the other
    elements containing v, plus the contents of the others.
    """
    A = list(A)
    if e not in A:
        raise ValueError("designated EC missing")
    if not e.contains_var(v):
        raise ValueError("designated EC does not involve the projection variable")
    collected: dict = {}
    for p in mccallum_project([e], v):
        _emit(collected, p)
    others = [g for g in A if g != e]
    _, other_contents = squarefree_primitive_basis(others, v)
    for c in other_contents:
        _emit(collected, c)
    # polynomials free of v are exactly their own contents and pass through above
    for g in others:
        if g.contains_var(v):
            _emit(collected, resultant(e, g, v))
    return sorted(collected.values(), key=_sort_key)


def _sort_key(p: Poly):
    return (
        p.total_degree(),
        len(p.terms),
        tuple((e, c.numerator, c.denominator) for e, c in p.sorted_terms()),
    )


@dataclass(frozen=True)
class ProjectionLevels:
    """Projection polynomials per level for one ordering.

    ``levels[k]`` (1-based via :meth:`level`) holds the polynomials of level k;
    level ``n`` is the (normalized, deduplicated) input and level 1 is
    univariate in the ordering's base variable.
    """

    ordering: VarOrdering
    levels: tuple[tuple[Poly, ...], ...]

    def level(self, k: int) -> tuple[Poly, ...]:
        return self.levels[k - 1]

    @property
    def nlevels(self) -> int:
        return len(self.levels)

    def univariate_level(self) -> tuple[Poly, ...]:
        return self.levels[0]


def projection_levels(
    A: Iterable[Poly],
    ordering: VarOrdering,
    designations: Mapping[int, Poly] | None = None,
    deadline: Deadline | None = None,
) -> ProjectionLevels:
    """Apply the projection operator from level n down to level 1.

    ``designations`` maps a level number to its designated EC; those levels
    project with the reduced operator.  Level sets only ever mention the first
    k ordering variables (checked structurally by the tests).
    """
    designations = designations or {}
    inputs: dict = {}
    for p in A:
        _emit_input(inputs, p)
    current = sorted(inputs.values(), key=_sort_key)
    n = ordering.nvars
    out = [tuple(current)]
    for k in range(n, 1, -1):
        if deadline:
            deadline.check()
        v = ordering.var_at_level(k)
        if not any(p.contains_var(v) for p in current):
            # nothing mentions the level variable: the set passes through
            out.append(tuple(current))
            continue
        e = designations.get(k)
        if e is not None:
            current = reduced_ec_project(current, e, v)
        else:
            current = mccallum_project(current, v)
        out.append(tuple(current))
    out.reverse()
    return ProjectionLevels(ordering, tuple(out))


def _emit_input(collected: dict, p: Poly) -> None:
    if p.is_zero() or p.is_constant():
        return
    q = p.normalized()
    collected.setdefault(tuple(sorted(q.terms.items())), q)
