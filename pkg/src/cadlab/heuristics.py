"""Choice heuristics: variable orderings, TNoI, GB preconditioning, ML features.

Ordering heuristics return a :class:`HeuristicReport` with the chosen ordering
and the full per-candidate score table, so the bench harness can compare them
without re-running.  Exhaustive searches enumerate admissible orderings
lexicographically (base variable first) and keep the first argmin; per-step
heuristics (Brown, greedy sotd) break ties by eliminating the highest-indexed
variable first, which makes a full tie come out as the declared order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cadbuild import open_cad_fulldim
from .errors import Deadline
from .groebner import MonomialOrder, buchberger
from .ordering import QuantifierBlock, VarOrdering, admissible_orderings, ordering_segments
from .polys import Poly, degree_stats
from .projection import ProjectionLevels, mccallum_project, projection_levels
from .realroots import count_distinct_real_roots

__all__ = [
    "HeuristicReport",
    "brown_order",
    "sotd_value",
    "order_by_sotd",
    "order_by_ndrr",
    "order_by_fulldim",
    "tnoi",
    "gb_precondition_decision",
    "ml_features",
    "ml_feature_names",
]


@dataclass(frozen=True)
class HeuristicReport:
    """Outcome of one heuristic: winner, per-candidate scores, tie partners."""

    heuristic: str
    chosen: VarOrdering
    scores: tuple[tuple[str, object], ...]
    ties: tuple[VarOrdering, ...] = ()

    def score_table(self) -> str:
        return "\n".join(f"{label}: {score}" for label, score in self.scores)


def _clean(A: Iterable[Poly]) -> list[Poly]:
    return [p for p in A if not p.is_zero() and not p.is_constant()]


def brown_order(
    A: Iterable[Poly], nvars: int, blocks: Sequence[QuantifierBlock] = ()
) -> HeuristicReport:
    """Order variables by (overall degree, max term degree, term count).

    Variables with the smallest tuple are eliminated first; remaining ties are
    broken so that a full tie reproduces the declared order.  Works on the
    input polynomials only (no projection), so quantifier blocks are sorted
    independently.
    """
    stats = degree_stats(_clean(A), nvars)
    lift_order: list[int] = []
    for segment in ordering_segments(nvars, blocks):
        elim = sorted(segment, key=lambda v: (stats[v].as_tuple(), -v))
        lift_order.extend(reversed(elim))
    chosen = VarOrdering(tuple(lift_order))
    table = tuple(
        (f"x{v}", stats[v].as_tuple()) for v in range(nvars)
    )
    return HeuristicReport("brown", chosen, table)


def sotd_value(levels: ProjectionLevels) -> int:
    """Sum of total degrees of every monomial at every level, input included."""
    total = 0
    for level in levels.levels:
        for p in level:
            for exps in p.terms:
                total += sum(exps)
    return total


def _argmin_report(
    name: str, scored: list[tuple[VarOrdering, int]], names: Sequence[str] | None = None
) -> HeuristicReport:
    best = min(s for _, s in scored)
    winners = [o for o, s in scored if s == best]
    labels = names or [f"x{i}" for i in range(scored[0][0].nvars)]
    table = tuple((o.to_names(labels), s) for o, s in scored)
    return HeuristicReport(name, winners[0], table, ties=tuple(winners[1:]))


def order_by_sotd(
    A: Iterable[Poly],
    nvars: int,
    blocks: Sequence[QuantifierBlock] = (),
    strategy: str = "exhaustive",
    deadline: Deadline | None = None,
) -> HeuristicReport:
    """Smallest projection, by sum of total degrees.

    exhaustive: evaluate every admissible ordering and take the argmin.
    greedy: commit one elimination at a time, choosing the variable whose
    projection adds the least sotd.
    """
    polys = _clean(A)
    if strategy == "exhaustive":
        scored = []
        for ordering in admissible_orderings(nvars, blocks):
            if deadline:
                deadline.check()
            scored.append((ordering, sotd_value(projection_levels(polys, ordering))))
        return _argmin_report("sotd", scored)
    if strategy != "greedy":
        raise ValueError(f"unknown sotd strategy {strategy!r}")
    segments = ordering_segments(nvars, blocks)
    current = [p.normalized() for p in polys]
    elim: list[int] = []
    steps: list[tuple[str, object]] = []
    for segment in reversed(segments):  # innermost quantifier block first
        remaining = list(segment)
        while remaining:
            if deadline:
                deadline.check()
            best_v = None
            best_add = None
            best_proj = None
            for v in sorted(remaining, reverse=True):
                proj = mccallum_project(current, v)
                add = sum(sum(e) for p in proj for e in p.terms)
                if best_add is None or add < best_add:
                    best_v, best_add, best_proj = v, add, proj
            steps.append((f"eliminate x{best_v}", best_add))
            elim.append(best_v)
            remaining.remove(best_v)
            current = best_proj
    chosen = VarOrdering(tuple(reversed(elim)))
    return HeuristicReport("greedy-sotd", chosen, tuple(steps))


def order_by_ndrr(
    A: Iterable[Poly],
    nvars: int,
    blocks: Sequence[QuantifierBlock] = (),
    deadline: Deadline | None = None,
) -> HeuristicReport:
    """Fewest distinct real roots among the univariate projection polynomials."""
    polys = _clean(A)
    scored = []
    for ordering in admissible_orderings(nvars, blocks):
        if deadline:
            deadline.check()
        levels = projection_levels(polys, ordering)
        base = ordering.var_at_level(1)
        count = count_distinct_real_roots(
            [p for p in levels.univariate_level() if p.contains_var(base)], base
        )
        scored.append((ordering, count))
    return _argmin_report("ndrr", scored)


def order_by_fulldim(
    A: Iterable[Poly],
    nvars: int,
    blocks: Sequence[QuantifierBlock] = (),
    deadline: Deadline | None = None,
) -> HeuristicReport:
    """Fewest full-dimensional cells; candidates are evaluated independently."""
    polys = _clean(A)
    scored = []
    for ordering in admissible_orderings(nvars, blocks):
        if deadline:
            deadline.check()
        scored.append((ordering, open_cad_fulldim(polys, ordering, deadline=deadline)))
    return _argmin_report("fulldim", scored)


def tnoi(A: Iterable[Poly]) -> int:
    """Total number of indeterminates: sum over the set of per-polynomial counts."""
    return sum(len(p.variables()) for p in A)


@dataclass(frozen=True)
class GBDecision:
    use_gb: bool
    before: int
    after: int
    basis: tuple[Poly, ...]


def gb_precondition_decision(
    E: Iterable[Poly], order: MonomialOrder | None = None
) -> GBDecision:
    """Replace conjoined equations by their Groebner basis iff TNoI decreases.

    The default monomial order is lex ranking the first declared variable
    highest, mirroring a CAD ordering whose base variable is declared first.
    """
    E = list(E)
    if not E:
        raise ValueError("no equational constraints")
    if order is None:
        order = MonomialOrder.lex(tuple(range(E[0].nvars)))
    basis = buchberger(E, order)
    before = tnoi(E)
    after = tnoi(basis)
    return GBDecision(use_gb=after < before, before=before, after=after, basis=tuple(basis))


def ml_feature_names(nvars: int) -> list[str]:
    names = ["n_polys", "n_vars", "max_total_degree"]
    for v in range(nvars):
        names.extend([f"x{v}_max_degree", f"x{v}_monomial_prop", f"x{v}_poly_prop"])
    return names


def ml_features(A: Iterable[Poly], nvars: int) -> list[float]:
    """Deterministic numeric problem features for ordering-selection models.

    Layout: [#polys, #vars, max total degree] then per variable
    [max degree, proportion of monomials containing it, proportion of
    polynomials containing it].
    """
    polys = _clean(A)
    n_monomials = sum(len(p.terms) for p in polys)
    max_td = max((p.total_degree() for p in polys), default=0)
    out: list[float] = [float(len(polys)), float(nvars), float(max_td)]
    for v in range(nvars):
        max_deg = max((p.degree(v) for p in polys), default=0)
        mono = sum(1 for p in polys for e in p.terms if e[v] > 0)
        poly_count = sum(1 for p in polys if p.contains_var(v))
        out.append(float(max_deg))
        out.append(mono / n_monomials if n_monomials else 0.0)
        out.append(poly_count / len(polys) if polys else 0.0)
    return out
