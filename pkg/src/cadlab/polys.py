"""Exact sparse multivariate polynomial arithmetic and elimination-theory kernels.

Polynomials live in Q[x_0, ..., x_{n-1}] with arbitrary-precision rational
coefficients (``fractions.Fraction``); there is no floating point anywhere in
this module.  Variables are plain integer indices into the problem's declared
variable sequence, monomials are exponent tuples of length ``nvars``, and the
canonical term order is graded lexicographic on the exponent tuple.

Besides ring arithmetic this module provides the kernels the projection and
preconditioning layers consume: pseudo-division, multivariate gcd (primitive
PRS), resultants via the subresultant PRS, discriminants with a fixed sign
normalization, square-free primitive bases, and per-variable degree statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Poly",
    "DegreeStats",
    "arith",
    "poly_gcd",
    "divexact",
    "prem",
    "resultant",
    "discriminant",
    "squarefree_part",
    "content_in",
    "primitive_part_in",
    "squarefree_primitive_basis",
    "degree_stats",
]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def _as_coeff(c):
    """Coefficients stay plain ints whenever integral: ints share the Rational
    protocol (.numerator/.denominator) but multiply without gcd normalization,
    which dominates the cost of the big resultant chains otherwise."""
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def _grlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class Poly:
    """Sparse multivariate polynomial over Q.

    Immutable once constructed; the zero polynomial is the empty term map.
    Term iteration (``sorted_terms``) is graded-lexicographic descending, so
    every derived computation is deterministic.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction | int] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_coeff(coeff)
                if c == 0:
                    continue
                e = tuple(exps)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent tuple {e!r} for {nvars} variables")
                clean[e] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Poly is immutable")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: _as_fraction(c)})

    @classmethod
    def one(cls, nvars: int) -> Poly:
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, index: int) -> Poly:
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return _as_fraction(next(iter(self.terms.values())))

    def variables(self) -> tuple[int, ...]:
        """Indices of variables actually occurring, ascending."""
        present = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    present.add(i)
        return tuple(sorted(present))

    def contains_var(self, v: int) -> bool:
        return any(e[v] for e in self.terms)

    def degree(self, v: int) -> int:
        """Degree in variable v (0 for the zero polynomial or absent v)."""
        return max((e[v] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> Poly:
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return Poly.zero(self.nvars)
            return Poly(self.nvars, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _check(self, other: Poly) -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError("polynomials over different variable sequences")

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- structure in a chosen main variable ---------------------------------

    def coeffs_in(self, v: int) -> list[Poly]:
        """Coefficients of powers of v, index k = coefficient of v**k."""
        d = self.degree(v)
        buckets: list[dict[tuple[int, ...], Fraction]] = [{} for _ in range(d + 1)]
        for exps, c in self.terms.items():
            k = exps[v]
            rest = list(exps)
            rest[v] = 0
            buckets[k][tuple(rest)] = c
        return [Poly(self.nvars, b) for b in buckets]

    def coeff_of_power(self, v: int, k: int) -> Poly:
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            if exps[v] == k:
                rest = list(exps)
                rest[v] = 0
                out[tuple(rest)] = c
        return Poly(self.nvars, out)

    def leading_coeff(self, v: int) -> Poly:
        return self.coeff_of_power(v, self.degree(v))

    def derivative(self, v: int) -> Poly:
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            k = exps[v]
            if k == 0:
                continue
            e = list(exps)
            e[v] = k - 1
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + c * k
        return Poly(self.nvars, out)

    # -- evaluation / substitution -------------------------------------------

    def evaluate(self, assign: Mapping[int, Fraction | int]) -> Fraction:
        """Full evaluation; every occurring variable must be assigned."""
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    term *= _as_fraction(assign[i]) ** e
            total += term
        return total

    def substitute(self, assign: Mapping[int, Fraction | int]) -> Poly:
        """Partial substitution of rational values; keeps the variable indexing."""
        out: dict[tuple[int, ...], Fraction] = {}
        for exps, c in self.terms.items():
            coeff = c
            rest = list(exps)
            for i, val in assign.items():
                e = exps[i]
                if e:
                    coeff *= _as_fraction(val) ** e
                rest[i] = 0
            key = tuple(rest)
            s = out.get(key, Fraction(0)) + coeff
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly(self.nvars, out)

    def subst_poly(self, v: int, value: Poly) -> Poly:
        """Substitute a polynomial for variable v (used by the test oracles)."""
        self._check(value)
        result = Poly.zero(self.nvars)
        for k, coeff_poly in enumerate(self.coeffs_in(v)):
            if coeff_poly.is_zero():
                continue
            result = result + coeff_poly * value**k
        return result

    def interval_eval(
        self, box: Mapping[int, tuple[Fraction, Fraction]]
    ) -> tuple[Fraction, Fraction]:
        """Enclosure of the range over a box, exact rational interval arithmetic."""
        lo = Fraction(0)
        hi = Fraction(0)
        for exps, c in self.terms.items():
            tlo, thi = Fraction(1), Fraction(1)
            for i, e in enumerate(exps):
                if not e:
                    continue
                a, b = box[i]
                plo, phi = _interval_pow(a, b, e)
                tlo, thi = _interval_mul(tlo, thi, plo, phi)
            if c >= 0:
                tlo, thi = tlo * c, thi * c
            else:
                tlo, thi = thi * c, tlo * c
            lo += tlo
            hi += thi
        return lo, hi

    def permute_vars(self, perm: Sequence[int]) -> Poly:
        """Relabel variables: new variable j holds what perm[j] held before."""
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError("perm must be a permutation of all variables")
        return Poly(
            self.nvars,
            {tuple(exps[perm[j]] for j in range(self.nvars)): c for exps, c in self.terms.items()},
        )

    # -- canonical representative --------------------------------------------

    def normalized_with_sign(self) -> tuple[Poly, int]:
        """Canonical rational-multiple representative plus the sign of the scale.

        The representative has integer coefficients with gcd 1 and a positive
        graded-lex leading coefficient.  Returns (canonical, s) with
        self = (positive rational) * s * canonical, s in {+1, -1}.
        """
        if self.is_zero():
            return self, 1
        denom_lcm = 1
        for c in self.terms.values():
            denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator * (denom_lcm // c.denominator)))
        scale = Fraction(denom_lcm, num_gcd)
        lead = max(self.terms, key=_grlex_key)
        sign = 1 if self.terms[lead] > 0 else -1
        return self * (scale * sign), sign

    def normalized(self) -> Poly:
        return self.normalized_with_sign()[0]

    # -- display ---------------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero():
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts: list[str] = []
        for exps, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({self.to_string()})"


def _interval_mul(alo, ahi, blo, bhi):
    products = (alo * blo, alo * bhi, ahi * blo, ahi * bhi)
    return min(products), max(products)


def _interval_pow(lo, hi, e):
    if e % 2 == 1 or lo >= 0:
        return lo**e, hi**e
    if hi <= 0:
        return hi**e, lo**e
    return Fraction(0), max(lo**e, hi**e)


# -- arithmetic dispatch --------------------------------------------------------


def arith(p: Poly, q: Poly, kind: str) -> Poly:
    """Dispatch basic ring arithmetic: kind in {add, sub, mul, neg}."""
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "neg":
        return -p
    raise ValueError(f"unknown arithmetic kind {kind!r}")


# -- exact division and pseudo-division ---------------------------------------


def divexact(p: Poly, d: Poly) -> Poly:
    """Exact division p / d; raises ArithmeticError when d does not divide p."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if d.is_constant():
        return p * (Fraction(1) / d.constant_value())
    quotient: dict[tuple[int, ...], Fraction] = {}
    rem = p
    d_lead = max(d.terms, key=_grlex_key)
    d_lc = d.terms[d_lead]
    while not rem.is_zero():
        r_lead = max(rem.terms, key=_grlex_key)
        q_exps = tuple(a - b for a, b in zip(r_lead, d_lead))
        if any(e < 0 for e in q_exps):
            raise ArithmeticError("inexact polynomial division")
        q_c = _as_fraction(rem.terms[r_lead]) / d_lc
        quotient[q_exps] = q_c
        rem = rem - Poly(p.nvars, {q_exps: q_c}) * d
    return Poly(p.nvars, quotient)


def prem(p: Poly, q: Poly, v: int) -> Poly:
    """Pseudo-remainder of p by q in v: lc(q)^(dp-dq+1) * p = Q*q + prem."""
    if q.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    dq = q.degree(v)
    if dq == 0:
        raise ValueError("pseudo-division requires positive degree divisor")
    if p.is_zero():
        return p
    lc_q = q.leading_coeff(v)
    rem = p
    steps = p.degree(v) - dq + 1
    while not rem.is_zero() and rem.degree(v) >= dq:
        dr = rem.degree(v)
        lead = rem.coeff_of_power(v, dr)
        shift = Poly.var(p.nvars, v) ** (dr - dq)
        rem = rem * lc_q - lead * shift * q
        steps -= 1
    if steps > 0:
        rem = rem * lc_q**steps
    return rem


# -- multivariate gcd (primitive PRS) ------------------------------------------


def content_in(p: Poly, v: int) -> Poly:
    """Content of p w.r.t. v: gcd of the coefficients of powers of v.

    For p free of v the content is p itself; content of 0 is 0.  The result
    is normalized (integer-primitive, positive lead).
    """
    if p.is_zero():
        return p
    cont = Poly.zero(p.nvars)
    for c in p.coeffs_in(v):
        if c.is_zero():
            continue
        cont = poly_gcd(cont, c)
        if cont.is_constant():
            break
    return cont


def primitive_part_in(p: Poly, v: int) -> Poly:
    if p.is_zero():
        return p
    return divexact(p, content_in(p, v))


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Multivariate gcd over Q, normalized; gcd with a nonzero constant is 1."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return Poly.one(p.nvars)
    vs = sorted(set(p.variables()) | set(q.variables()))
    v = vs[-1]
    if not p.contains_var(v):
        # q involves v, p does not: gcd divides content of q w.r.t. v
        return poly_gcd(p, content_in(q, v))
    if not q.contains_var(v):
        return poly_gcd(q, content_in(p, v))
    cp = content_in(p, v)
    cq = content_in(q, v)
    a = divexact(p, cp)
    b = divexact(q, cq)
    c = poly_gcd(cp, cq)
    # primitive PRS on the primitive parts
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while True:
        r = prem(a, b, v)
        if r.is_zero():
            g = b
            break
        if not r.contains_var(v):
            g = Poly.one(p.nvars)
            break
        a, b = b, primitive_part_in(r, v)
    if g.is_constant():
        return c.normalized()
    g = primitive_part_in(g, v)
    return (c * g).normalized()


# -- resultants and discriminants ----------------------------------------------


def _pow_div(base: Poly, num_exp: int, den: Poly, den_exp: int) -> Poly:
    """base**num_exp / den**den_exp with exact division."""
    out = base**num_exp
    if den_exp > 0:
        out = divexact(out, den**den_exp)
    return out


def resultant(p: Poly, q: Poly, v: int) -> Poly:
    """res_v(p, q) via the subresultant PRS, Sylvester-determinant sign convention.

    Both arguments must have positive degree in v.
    """
    if not (p.contains_var(v) and q.contains_var(v)):
        raise ValueError("not a polynomial in v")
    return _resultant_any(p, q, v)


def _resultant_any(p: Poly, q: Poly, v: int) -> Poly:
    """Resultant allowing degree-0 arguments (res(p, c) = c^deg(p))."""
    if p.is_zero() or q.is_zero():
        return Poly.zero(p.nvars)
    dp, dq = p.degree(v), q.degree(v)
    if dp == 0 and dq == 0:
        return Poly.one(p.nvars)
    if dq == 0:
        return q**dp
    if dp == 0:
        return p**dq
    sign = 1
    if dp < dq:
        p, q = q, p
        dp, dq = dq, dp
        if dp * dq % 2 == 1:
            sign = -sign
    a, b = p, q
    g = Poly.one(p.nvars)
    h = Poly.one(p.nvars)
    while True:
        da, db = a.degree(v), b.degree(v)
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        r = prem(a, b, v)
        a = b
        if r.is_zero():
            return Poly.zero(p.nvars)
        b = divexact(r, g * h**delta)
        g = a.leading_coeff(v)
        h = _pow_div(g, delta, h, delta - 1) if delta >= 1 else h
        if b.degree(v) == 0:
            break
    da = a.degree(v)
    res = _pow_div(b, da, h, da - 1)
    return res if sign > 0 else -res


def discriminant(p: Poly, v: int) -> Poly:
    """disc_v(p) = (-1)^(d(d-1)/2) * res_v(p, dp/dv) / lc_v(p), d = deg_v(p) >= 2."""
    d = p.degree(v)
    if d < 2:
        raise ValueError("discriminant requires degree >= 2 in v")
    res = _resultant_any(p, p.derivative(v), v)
    disc = divexact(res, p.leading_coeff(v))
    if (d * (d - 1) // 2) % 2 == 1:
        disc = -disc
    return disc


def squarefree_part(p: Poly, v: int) -> Poly:
    """Square-free-in-v part of p, preserving the content in the other variables."""
    if p.is_zero() or p.degree(v) == 0:
        return p
    cont = content_in(p, v)
    pp = divexact(p, cont) if not cont.is_constant() else p
    g = poly_gcd(pp, pp.derivative(v))
    if not g.is_constant():
        pp = divexact(pp, g)
    return pp if cont.is_constant() else cont * pp


# -- square-free primitive basis -------------------------------------------------


def _poly_sort_key(p: Poly):
    return (
        p.total_degree(),
        len(p.terms),
        tuple((e, c.numerator, c.denominator) for e, c in p.sorted_terms()),
    )


def squarefree_primitive_basis(
    A: Iterable[Poly], v: int
) -> tuple[list[Poly], list[Poly]]:
    """Pairwise-coprime square-free primitive parts of A w.r.t. v, plus contents.

    The basis elements, times the returned nonconstant contents, carry the same
    real variety as the product of A.  Constants are dropped on both sides.
    Output lists are deterministically ordered and deduped up to rational
    multiples.
    """
    parts: list[Poly] = []
    contents: dict[tuple, Poly] = {}
    for p in sorted(A, key=_poly_sort_key):
        if p.is_zero() or p.is_constant():
            continue
        cont = content_in(p, v)
        pp = divexact(p, cont)
        if not cont.is_constant():
            c = cont.normalized()
            contents.setdefault(_terms_key(c), c)
        if pp.contains_var(v):
            parts.append(squarefree_part(pp, v).normalized())
    basis: list[Poly] = []
    queue = list(dict((_terms_key(p), p) for p in parts).values())
    while queue:
        p = queue.pop(0)
        if p.is_constant():
            continue
        i = 0
        while i < len(basis) and not p.is_constant():
            b = basis[i]
            g = poly_gcd(p, b)
            if g.is_constant():
                i += 1
                continue
            if g == b:
                p = divexact(p, b).normalized()
                i += 1
                continue
            # split b into g and b/g; both stay square-free and coprime to the rest
            basis[i] = g
            rest = divexact(b, g).normalized()
            if not rest.is_constant():
                queue.append(rest)
            p = divexact(p, g).normalized()
            i += 1
        if not p.is_constant():
            basis.append(p)
    basis.sort(key=_poly_sort_key)
    return basis, sorted(contents.values(), key=_poly_sort_key)


def _terms_key(p: Poly):
    return tuple(sorted(p.terms.items()))


# -- degree statistics ------------------------------------------------------------


@dataclass(frozen=True)
class DegreeStats:
    """Per-variable statistics over a polynomial set.

    overall_degree: max degree of the variable across the set.
    max_term_degree: max total degree over all terms containing the variable.
    term_count: number of terms containing the variable, counted per polynomial.
    """

    overall_degree: int
    max_term_degree: int
    term_count: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.overall_degree, self.max_term_degree, self.term_count)


def degree_stats(A: Iterable[Poly], nvars: int) -> list[DegreeStats]:
    overall = [0] * nvars
    max_td = [0] * nvars
    count = [0] * nvars
    for p in A:
        for exps, _ in p.terms.items():
            td = sum(exps)
            for i, e in enumerate(exps):
                if e:
                    overall[i] = max(overall[i], e)
                    max_td[i] = max(max_td[i], td)
                    count[i] += 1
    return [DegreeStats(overall[i], max_td[i], count[i]) for i in range(nvars)]
