"""Boolean formulas over polynomial sign conditions and equational constraints.

Formulas are trees of atoms (polynomial, relation) under and/or/not plus the
0-ary constants.  Normalization pushes negations onto atoms (flipping the
relation) and flattens nested conjunctions/disjunctions.  The equational
constraint machinery identifies equations implied by the conjunction
structure, propagates them level-by-level through resultants, enumerates
designations, and scores a designation by running the reduced projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DesignationCapError
from .ordering import VarOrdering
from .polys import Poly, resultant, squarefree_part
from .projection import projection_levels, _sort_key
from .realroots import count_distinct_real_roots

__all__ = [
    "Atom",
    "BoolOp",
    "Const",
    "Formula",
    "ECDesignation",
    "normalize",
    "identify_ecs",
    "propagate_ecs",
    "enumerate_designations",
    "score_designation",
    "atom_polys",
]

RELATIONS = ("=", "!=", "<", "<=", ">", ">=")
_NEGATED = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
_FLIPPED = {"=": "=", "!=": "!=", "<": ">", ">": "<", "<=": ">=", ">=": "<="}

DESIGNATION_CAP = 64


class Formula:
    """Base class; concrete nodes are Atom, BoolOp, and Const."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    poly: Poly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def canonical(self) -> Atom:
        """Normalize the polynomial; a negative scale flips order relations."""
        norm, sign = self.poly.normalized_with_sign()
        rel = self.rel if sign > 0 else _FLIPPED[self.rel]
        return Atom(norm, rel)

    def holds_for_sign(self, s: int) -> bool:
        return {
            "=": s == 0,
            "!=": s != 0,
            "<": s < 0,
            "<=": s <= 0,
            ">": s > 0,
            ">=": s >= 0,
        }[self.rel]


@dataclass(frozen=True)
class BoolOp(Formula):
    op: str  # "and" | "or" | "not"
    args: tuple[Formula, ...]

    def __post_init__(self):
        if self.op not in ("and", "or", "not"):
            raise ValueError(f"unknown boolean operation {self.op!r}")
        if self.op == "not" and len(self.args) != 1:
            raise ValueError("not takes exactly one argument")
        if self.op in ("and", "or") and not self.args:
            raise ValueError(f"{self.op} needs at least one argument")


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


def conj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else BoolOp("and", tuple(args))


def disj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else BoolOp("or", tuple(args))


def normalize(f: Formula) -> Formula:
    """Negation normal form with canonical atoms and flattened and/or."""
    return _nnf(f, negate=False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Atom):
        atom = f.canonical()
        return Atom(atom.poly, _NEGATED[atom.rel]) if negate else atom
    assert isinstance(f, BoolOp)
    if f.op == "not":
        return _nnf(f.args[0], not negate)
    op = f.op if not negate else ("or" if f.op == "and" else "and")
    children: list[Formula] = []
    for a in f.args:
        child = _nnf(a, negate)
        if isinstance(child, BoolOp) and child.op == op:
            children.extend(child.args)
        else:
            children.append(child)
    return BoolOp(op, tuple(children))


def atom_polys(f: Formula) -> list[Poly]:
    """Normalized polynomials of the formula's atoms, deduplicated, stable order."""
    seen: dict = {}

    def walk(node: Formula) -> None:
        if isinstance(node, Atom):
            p = node.canonical().poly
            seen.setdefault(tuple(sorted(p.terms.items())), p)
        elif isinstance(node, BoolOp):
            for a in node.args:
                walk(a)

    walk(f)
    return list(seen.values())


def evaluate_signs(f: Formula, sign_of: Mapping[tuple, int]) -> bool:
    """Truth of the (quantifier-free) formula given atom polynomial signs.

    ``sign_of`` maps the canonical term key of each atom polynomial to its
    sign at the point in question.
    """
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        a = f.canonical()
        return a.holds_for_sign(sign_of[tuple(sorted(a.poly.terms.items()))])
    assert isinstance(f, BoolOp)
    if f.op == "not":
        return not evaluate_signs(f.args[0], sign_of)
    if f.op == "and":
        return all(evaluate_signs(a, sign_of) for a in f.args)
    return any(evaluate_signs(a, sign_of) for a in f.args)


def identify_ecs(f: Formula) -> list[Poly]:
    """Equations implied by the conjunction structure alone.

    An atom g = 0 is an EC when it appears on every disjunct path to the root
    of the normalized formula.  Purely syntactic; ECs hidden behind products in
    disjunctions are not inferred.
    """
    n = normalize(f)

    def walk(node: Formula) -> set[tuple]:
        if isinstance(node, Atom):
            if node.rel == "=":
                return {tuple(sorted(node.poly.terms.items()))}
            return set()
        if isinstance(node, Const):
            return set()
        assert isinstance(node, BoolOp)
        child_sets = [walk(a) for a in node.args]
        if node.op == "and":
            return set().union(*child_sets)
        out = child_sets[0]
        for s in child_sets[1:]:
            out = out & s
        return out

    keys = walk(n)
    by_key = {tuple(sorted(p.terms.items())): p for p in atom_polys(n)}
    return sorted((by_key[k] for k in keys), key=_sort_key)


def _main_var(p: Poly, ordering: VarOrdering) -> int | None:
    """Level of the ordering-highest variable present in p, or None for constants."""
    vs = p.variables()
    if not vs:
        return None
    return max(ordering.level_of(v) for v in vs)


def propagate_ecs(E: Iterable[Poly], ordering: VarOrdering) -> list[list[Poly]]:
    """Per-level EC candidates, index k-1 = level k (1-based levels).

    Level candidates start from the input ECs with that level's main variable;
    each level below adds the pairwise resultants of the level above,
    square-freed and normalized, constants dropped.
    """
    E = [p.normalized() for p in E if not p.is_zero() and not p.is_constant()]
    if not E:
        raise ValueError("no equational constraints to propagate")
    n = ordering.nvars
    levels: list[dict] = [dict() for _ in range(n)]
    for p in E:
        lvl = _main_var(p, ordering)
        if lvl is not None:
            levels[lvl - 1].setdefault(tuple(sorted(p.terms.items())), p)
    for k in range(n, 1, -1):
        v = ordering.var_at_level(k)
        above = list(levels[k - 1].values())
        for i, a in enumerate(above):
            for b in above[i + 1 :]:
                if not (a.contains_var(v) and b.contains_var(v)):
                    continue
                r = resultant(a, b, v)
                if r.is_zero() or r.is_constant():
                    continue
                vs = r.variables()
                r = squarefree_part(r, vs[-1]).normalized()
                if r.is_constant():
                    continue
                lvl = _main_var(r, ordering)
                if lvl is not None:
                    levels[lvl - 1].setdefault(tuple(sorted(r.terms.items())), r)
    return [sorted(d.values(), key=_sort_key) for d in levels]


@dataclass(frozen=True)
class ECDesignation:
    """Designated EC per level (1-based level k = entry k-1); None = no designation."""

    per_level: tuple[Poly | None, ...]

    def as_mapping(self) -> dict[int, Poly]:
        return {k + 1: p for k, p in enumerate(self.per_level) if p is not None}

    def describe(self, names: Sequence[str]) -> str:
        parts = []
        for k, p in enumerate(self.per_level):
            if p is not None:
                parts.append(f"L{k + 1}:{p.to_string(names)}")
        return ";".join(parts) if parts else "none"


def enumerate_designations(candidates: Sequence[Sequence[Poly]]) -> list[ECDesignation]:
    """Cartesian product of per-level choices; levels without candidates get None.

    Raises :class:`DesignationCapError` past 64 combinations.
    """
    total = 1
    for level in candidates:
        total *= max(1, len(level))
        if total > DESIGNATION_CAP:
            raise DesignationCapError(
                f"{total}+ designations exceed the cap of {DESIGNATION_CAP}"
            )
    out = [ECDesignation(())]
    for level in candidates:
        choices: Sequence[Poly | None] = list(level) if level else [None]
        out = [
            ECDesignation(d.per_level + (choice,)) for d in out for choice in choices
        ]
    return out


def score_designation(
    A: Iterable[Poly],
    designation: ECDesignation,
    ordering: VarOrdering,
    measure: str = "sotd",
) -> int:
    """Projection size under the designation: sotd or ndrr of the level stack.

    Designations apply the reduced operator at their levels (level 1 carries
    no projection, so its designation is inert).  Projection errors propagate.
    """
    from .heuristics import sotd_value

    mapping = {k: p for k, p in designation.as_mapping().items() if k >= 2}
    levels = projection_levels(A, ordering, designations=mapping)
    if measure == "sotd":
        return sotd_value(levels)
    if measure == "ndrr":
        base = ordering.var_at_level(1)
        return count_distinct_real_roots(levels.univariate_level(), base)
    raise ValueError(f"unknown designation measure {measure!r}")
