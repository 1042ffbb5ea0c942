"""Buchberger's algorithm for reduced Groebner bases over Q.

Plain Buchberger with the first-pair normal strategy and the two classic pair
discards (coprime leading monomials, chain criterion); no F4/F5.  Output bases
are reduced: monic, no term of any element divisible by another element's
leading term, deterministically ordered.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .polys import Poly

__all__ = ["MonomialOrder", "buchberger", "normal_form"]


@dataclass(frozen=True)
class MonomialOrder:
    """Total monomial order: lex or grlex over a variable priority sequence.

    priority[0] is the highest-ranked variable.
    """

    kind: str
    priority: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValueError(f"unknown monomial order kind {self.kind!r}")

    @classmethod
    def lex(cls, priority: Sequence[int]) -> MonomialOrder:
        return cls("lex", tuple(priority))

    @classmethod
    def grlex(cls, priority: Sequence[int]) -> MonomialOrder:
        return cls("grlex", tuple(priority))

    def key(self, exps: tuple[int, ...]):
        projected = tuple(exps[i] for i in self.priority)
        if self.kind == "lex":
            return projected
        return (sum(exps), projected)


def _leading(p: Poly, order: MonomialOrder) -> tuple[tuple[int, ...], Fraction]:
    exps = max(p.terms, key=order.key)
    return exps, p.terms[exps]


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))


def normal_form(p: Poly, G: Iterable[Poly], order: MonomialOrder) -> Poly:
    """Remainder of multivariate division of p by G.

    Zero iff p lies in the ideal generated by G whenever G is a Groebner basis.
    """
    divisors = [(g, *_leading(g, order)) for g in G if not g.is_zero()]
    rem = p
    while not rem.is_zero():
        reducible = None
        for exps in sorted(rem.terms, key=order.key, reverse=True):
            for g, g_lead, g_lc in divisors:
                if _divides(g_lead, exps):
                    reducible = (exps, rem.terms[exps], g, g_lead, g_lc)
                    break
            if reducible:
                break
        if not reducible:
            return rem
        exps, coeff, g, g_lead, g_lc = reducible
        factor = Poly(p.nvars, {_mono_sub(exps, g_lead): Fraction(coeff) / g_lc})
        rem = rem - factor * g
    return rem


def _spoly(f: Poly, g: Poly, order: MonomialOrder) -> Poly:
    f_lead, f_lc = _leading(f, order)
    g_lead, g_lc = _leading(g, order)
    lcm = _mono_lcm(f_lead, g_lead)
    tf = Poly(f.nvars, {_mono_sub(lcm, f_lead): Fraction(1) / f_lc})
    tg = Poly(g.nvars, {_mono_sub(lcm, g_lead): Fraction(1) / g_lc})
    return tf * f - tg * g


def buchberger(E: Iterable[Poly], order: MonomialOrder) -> list[Poly]:
    """Reduced Groebner basis of the ideal generated by E.

    Raises ValueError on an empty or all-zero generating set.
    """
    basis = [p for p in E if not p.is_zero()]
    if not basis:
        raise ValueError("empty generating set")
    pairs: list[tuple[int, int]] = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    done: set[tuple[int, int]] = set()
    while pairs:
        i, j = pairs.pop(0)
        done.add((i, j))
        li, _ = _leading(basis[i], order)
        lj, _ = _leading(basis[j], order)
        # product criterion: coprime leading monomials reduce to zero
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if _chain_criterion(i, j, basis, order, done):
            continue
        rem = normal_form(_spoly(basis[i], basis[j], order), basis, order)
        if rem.is_zero():
            continue
        basis.append(rem)
        k = len(basis) - 1
        pairs.extend((m, k) for m in range(k))
    return _reduce_basis(basis, order)


def _chain_criterion(i, j, basis, order, done) -> bool:
    li, _ = _leading(basis[i], order)
    lj, _ = _leading(basis[j], order)
    lcm = _mono_lcm(li, lj)
    for k in range(len(basis)):
        if k in (i, j):
            continue
        lk, _ = _leading(basis[k], order)
        if not _divides(lk, lcm):
            continue
        p1 = (min(i, k), max(i, k))
        p2 = (min(j, k), max(j, k))
        if p1 in done and p2 in done:
            return True
    return False


def _reduce_basis(basis: list[Poly], order: MonomialOrder) -> list[Poly]:
    # minimalize: drop elements whose leading monomial another one divides
    minimal: list[Poly] = []
    leads = [_leading(g, order)[0] for g in basis]
    for i, g in enumerate(basis):
        keep = True
        for j, other in enumerate(basis):
            if i == j:
                continue
            if _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                keep = False
                break
        if keep:
            minimal.append(g)
    # tail-reduce each against the rest, make monic
    reduced: list[Poly] = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = normal_form(g, others, order) if others else g
        if r.is_zero():
            continue
        _, lc = _leading(r, order)
        reduced.append(r * (Fraction(1) / lc))
    reduced.sort(key=lambda g: order.key(_leading(g, order)[0]), reverse=True)
    return reduced
