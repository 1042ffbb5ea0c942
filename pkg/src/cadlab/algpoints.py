"""Exact polynomial evaluation and root isolation over algebraic sample points.

A sample point is a tuple of :class:`AlgebraicNumber` coordinates for the
variables 0..k-1 (callers relabel variables into lifting order first).  Two
primitives drive the lifting phase:

* :func:`sign_at_point`: exact sign of a polynomial at a sample.  Rational
  coordinates are substituted outright; a single algebraic coordinate reduces
  to a univariate sign (gcd certificate for zero, interval refinement
  otherwise); several algebraic coordinates use adaptive interval refinement
  with an exact fallback that eliminates coordinates by resultants against a
  carrier z - p and locates p(sample) among the eliminant's real roots.

* :func:`roots_above`: the real roots of p(sample, v) as algebraic numbers.
  Candidates come from iterated resultants against the coordinates' defining
  polynomials; genuine section roots are selected by endpoint sign changes
  when the substituted polynomial is provably square-free (leading-coefficient
  and discriminant signs at the sample), falling back to exact zero tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import checkpoint
from .polys import Poly, _resultant_any, discriminant, divexact, poly_gcd, squarefree_part
from .realroots import AlgebraicNumber, _eval, compare, isolate_real_roots, sign_at

__all__ = ["sign_at_point", "roots_above", "Nullified"]

_REFINE_ROUNDS_BEFORE_EXACT = 24


class Nullified(Exception):
    """p(sample, v) is identically zero: no constraint above this point."""


def _split_coords(
    point: Sequence[AlgebraicNumber],
) -> tuple[dict[int, Fraction], dict[int, AlgebraicNumber]]:
    rational: dict[int, Fraction] = {}
    algebraic: dict[int, AlgebraicNumber] = {}
    for i, a in enumerate(point):
        if a.is_rational:
            rational[i] = a.rational_value
        else:
            algebraic[i] = a
    return rational, algebraic


def sign_at_point(p: Poly, point: Sequence[AlgebraicNumber]) -> int:
    """Exact sign of p at the sample point (coordinates are variables 0..k-1)."""
    rational, algebraic = _split_coords(point)
    q = p.substitute(rational) if rational else p
    live = [i for i in algebraic if q.contains_var(i)]
    if not live:
        val = q.constant_value()
        return (val > 0) - (val < 0)
    if len(live) == 1:
        v = live[0]
        return sign_at(_dense_in(q, v), algebraic[v])
    return _sign_multi(q, {i: algebraic[i] for i in live})


def _dense_in(q: Poly, v: int) -> list[Fraction]:
    out = [Fraction(0)] * (q.degree(v) + 1)
    for exps, c in q.terms.items():
        out[exps[v]] = out[exps[v]] + c if exps[v] < len(out) else c
    return out


def _sign_multi(q: Poly, coords: dict[int, AlgebraicNumber]) -> int:
    # adaptive interval refinement first; exact elimination only when the
    # enclosure keeps straddling zero
    boxes = dict(coords)
    for _ in range(_REFINE_ROUNDS_BEFORE_EXACT):
        checkpoint()
        box = {i: (a.lo, a.hi) for i, a in boxes.items()}
        lo, hi = q.interval_eval(box)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        boxes = {i: a.refine_step() for i, a in boxes.items()}
        newly_rational = {i: a.rational_value for i, a in boxes.items() if a.is_rational}
        if newly_rational:
            q2 = q.substitute(newly_rational)
            rest = {i: a for i, a in boxes.items() if not a.is_rational and q2.contains_var(i)}
            if not rest:
                val = q2.constant_value()
                return (val > 0) - (val < 0)
            if len(rest) == 1:
                ((v, a),) = rest.items()
                return sign_at(_dense_in(q2, v), a)
            return _sign_multi(q2, rest)
    return _sign_exact(q, boxes)


def _sign_exact(q: Poly, coords: dict[int, AlgebraicNumber]) -> int:
    """Exact sign via a z - q carrier: eliminate the coordinates, then decide.

    q(coords) is a real root of the eliminant, so a lower bound on the
    magnitude of the eliminant's nonzero roots turns interval refinement into
    a decision procedure: an enclosure inside the root gap certifies zero, an
    enclosure excluding zero certifies the sign.  No root isolation needed.
    """
    nv = q.nvars + 1
    z = q.nvars
    carrier = Poly.var(nv, z) - Poly(nv, {e + (0,): c for e, c in q.terms.items()})
    g = carrier
    for v, alpha in sorted(coords.items()):
        g, _split = _eliminate_coordinate(g, v, alpha)
    return _sign_from_eliminant(q, coords, _dense_in(g, z))


def _nonzero_root_gap(eliminant: list[Fraction]) -> Fraction | None:
    """Magnitude bound: every nonzero root r has |r| >= the returned gap.

    Returns None when the eliminant has no root at zero (value cannot be 0).
    """
    from .realroots import _clear_denoms

    ints = _clear_denoms(eliminant)
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k == 0:
        return None
    h = ints[k:]
    lead = abs(h[0])
    peak = max(abs(x) for x in h)
    return Fraction(lead, lead + peak)


def _sign_from_eliminant(
    q: Poly, coords: dict[int, AlgebraicNumber], eliminant: list[Fraction]
) -> int:
    gap = _nonzero_root_gap(eliminant)
    boxes = dict(coords)
    for _ in range(4096):
        checkpoint()
        box = {i: (a.lo, a.hi) for i, a in boxes.items()}
        lo, hi = q.interval_eval(box)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if gap is not None and -gap < lo and hi < gap:
            return 0
        boxes = {i: a.refine_step() for i, a in boxes.items()}
        rational = {i: a.rational_value for i, a in boxes.items() if a.is_rational}
        if rational:
            q = q.substitute(rational)
            boxes = {i: a for i, a in boxes.items() if not a.is_rational and q.contains_var(i)}
            if not boxes:
                val = q.constant_value()
                return (val > 0) - (val < 0)
    # the sample value is a root of the eliminant, so one of the exits above
    # fires; running out of rounds means that invariant was violated
    raise AssertionError("eliminant lost the sample value")


def _eliminate_coordinate(
    g: Poly, v: int, alpha: AlgebraicNumber
) -> tuple[Poly, bool]:
    """res_v(defining(alpha), g) with gcd splitting against shared factors.

    Factors of g that vanish on conjugate roots of the defining polynomial are
    removed from the defining polynomial; a factor vanishing at alpha itself
    is divided out of g (possible only through conjugate-contaminated
    carriers) and reported through the second return value so callers can
    verify completeness downstream.
    """
    if not g.contains_var(v):
        return g, False
    nv = g.nvars
    d = Poly(nv, {_unit_exps(nv, v, i): c for i, c in enumerate(alpha.coeffs)})
    split_carrier = False
    while True:
        w = poly_gcd(d, g)
        if w.is_constant():
            break
        w_dense = _dense_in(w, v)
        lo_val = _eval(w_dense, alpha.lo)
        hi_val = _eval(w_dense, alpha.hi)
        if (lo_val > 0) != (hi_val > 0):
            # alpha is a root of the shared factor: g vanishes identically at
            # alpha in the remaining variables; strip the factor and continue
            g = divexact(g, w)
            split_carrier = True
            if g.is_constant() or not g.contains_var(v):
                break
            continue
        d = divexact(d, w)
        if d.degree(v) == 0:
            # all of d's roots were shared except none containing alpha: cannot
            # happen for a valid algebraic number
            raise AssertionError("defining polynomial exhausted")
    if not g.contains_var(v):
        return g, split_carrier
    return _resultant_any(d, g, v), split_carrier


def _unit_exps(nvars: int, v: int, e: int) -> tuple[int, ...]:
    out = [0] * nvars
    out[v] = e
    return tuple(out)


def roots_above(
    p: Poly, point: Sequence[AlgebraicNumber], v: int
) -> list[tuple[AlgebraicNumber, bool]]:
    """Real roots of p(point, v) sorted ascending, each flagged certainly-simple.

    Raises :class:`Nullified` when the substituted polynomial vanishes
    identically.  The flag is True when p(point, v) is provably square-free.
    """
    rational, algebraic = _split_coords(point)
    q = p.substitute(rational) if rational else p
    if q.contains_var(v):
        q = squarefree_part(q, v)
    live = [i for i in algebraic if q.contains_var(i)]
    if not live:
        if q.is_zero():
            raise Nullified()
        if not q.contains_var(v):
            return []
        return [(r, True) for r in isolate_real_roots(_dense_in(q, v))]
    coords = {i: algebraic[i] for i in live}
    # exact coefficient signs decide nullification and the true degree
    coeffs = q.coeffs_in(v)
    signs = [0 if c.is_zero() else sign_at_point(c, point) for c in coeffs]
    if all(s == 0 for s in signs):
        raise Nullified()
    true_deg = max(i for i, s in enumerate(signs) if s != 0)
    if true_deg == 0:
        return []
    trunc = Poly(q.nvars, {e: c for e, c in q.terms.items() if e[v] <= true_deg})
    eliminant = trunc
    contaminated = False
    for i, alpha in sorted(coords.items()):
        eliminant, split = _eliminate_coordinate(eliminant, i, alpha)
        contaminated = contaminated or split
    if not eliminant.contains_var(v):
        # a constant eliminant certifies p(point, v) has no real roots
        return []
    candidates = list(isolate_real_roots(_dense_in(eliminant, v)))
    if not candidates:
        return []
    known_simple = _substitution_squarefree(trunc, point, v, true_deg)
    out: list[tuple[AlgebraicNumber, bool]] = []
    gap_signs: list[int] = []
    if not known_simple:
        # exact zero tests against a z - p carrier; the base-coordinate
        # elimination prefix and per-defining eliminants are shared across
        # the candidates
        nv2 = trunc.nvars + 1
        z = trunc.nvars
        carrier = Poly.var(nv2, z) - Poly(nv2, {e + (0,): c for e, c in trunc.terms.items()})
        prefix = carrier
        for i, alpha in sorted(coords.items()):
            prefix, _ = _eliminate_coordinate(prefix, i, alpha)
        cache: dict = {}
        for beta in candidates:
            checkpoint()
            g = cache.get(beta.coeffs)
            if g is None:
                g, split = _eliminate_coordinate(prefix, v, beta)
                if not split:
                    cache[beta.coeffs] = g
            full = dict(coords)
            full[v] = beta
            if _sign_from_eliminant(trunc, full, _dense_in(g, z)) == 0:
                out.append((beta, False))
        return out
    for beta in candidates:
        checkpoint()
        lo_sign = sign_at_point(trunc.substitute({v: beta.lo}), point)
        hi_sign = sign_at_point(trunc.substitute({v: beta.hi}), point)
        if lo_sign == 0 or hi_sign == 0:  # pragma: no cover
            raise AssertionError("candidate endpoints must not be section roots")
        gap_signs.append(lo_sign)
        gap_signs.append(hi_sign)
        if lo_sign != hi_sign:
            out.append((beta, True))
    if contaminated and known_simple:
        # conjugate contamination can in principle drop candidates; for the
        # square-free case sign changes across the candidate gaps are a
        # complete detector of missed roots
        for s1, s2 in zip(gap_signs[1::2], gap_signs[2::2]):
            if s1 != s2:  # pragma: no cover - pathological, abort loudly
                raise AssertionError("section root missed between candidates")
    return out


def _substitution_squarefree(
    trunc: Poly, point: Sequence[AlgebraicNumber], v: int, true_deg: int
) -> bool:
    """Whether trunc(point, v) is certainly square-free as a univariate in v."""
    if true_deg == 1:
        return True
    disc = discriminant(trunc, v)
    if disc.is_zero():
        return False
    return sign_at_point(disc, point) != 0
