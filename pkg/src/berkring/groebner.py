"""Buchberger completion over the rationals.

Monomials are ordered by graded reverse lexicographic order on the
declared variable tuple, so normal forms never raise total degree; all
degree-truncated arguments downstream rely on exactly that.  Completion
enforces a degree cap (``BERKRING_DEGREE_CAP`` overrides the default)
and fails loudly instead of silently churning.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .polynomials import Exponent, Poly
from .rings import BaseRing, Domain

DEFAULT_DEGREE_CAP = 32
_CAP_ENV = "BERKRING_DEGREE_CAP"


class DegreeCapExceeded(RuntimeError):
    """Completion produced an element beyond the configured degree cap."""


def degree_cap() -> int:
    raw = os.environ.get(_CAP_ENV)
    if raw is None:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"{_CAP_ENV} must be positive")
    return cap


def grevlex_key(exp: Exponent) -> tuple:
    return (sum(exp), tuple(-e for e in reversed(exp)))


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _lcm_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _as_q(f: Poly) -> Poly:
    if f.ring.domain is Domain.Q:
        return f
    return Poly(BaseRing.Q_TRIV, f.variables, f.terms)


def lead_term(f: Poly) -> tuple[Exponent, Fraction]:
    if f.is_zero:
        raise ValueError("zero polynomial has no lead term")
    exp = max((e for e, _ in f.terms), key=grevlex_key)
    return exp, dict(f.terms)[exp]


def _reduce_once(work: dict[Exponent, Fraction], exp: Exponent, coeff: Fraction, g: Poly) -> None:
    lead_exp, lead_coeff = lead_term(g)
    shift = _sub_exp(exp, lead_exp)
    factor = coeff / lead_coeff
    for e, c in g.terms:
        target = _add_exp(e, shift)
        value = work.get(target, Fraction(0)) - factor * c
        if value == 0:
            work.pop(target, None)
        else:
            work[target] = value


def normal_form_raw(f: Poly, basis: Sequence[Poly]) -> Poly:
    """Full remainder of division by ``basis`` (any generating list)."""
    f = _as_q(f)
    leads = [(lead_term(g)[0], g) for g in basis if not g.is_zero]
    work = f.coeff_dict()
    remainder: dict[Exponent, Fraction] = {}
    while work:
        exp = max(work, key=grevlex_key)
        coeff = work.pop(exp)
        if coeff == 0:
            continue
        for lead_exp, g in leads:
            if _divides(lead_exp, exp):
                work[exp] = coeff
                _reduce_once(work, exp, coeff, g)
                break
        else:
            remainder[exp] = coeff
    return Poly.from_dict(f.ring, f.variables, remainder)


def _spoly(f: Poly, g: Poly) -> Poly:
    (ef, cf), (eg, cg) = lead_term(f), lead_term(g)
    lcm = _lcm_exp(ef, eg)
    mf = Poly.from_dict(f.ring, f.variables, {_sub_exp(lcm, ef): 1 / cf})
    mg = Poly.from_dict(g.ring, g.variables, {_sub_exp(lcm, eg): 1 / cg})
    return mf * f - mg * g


def buchberger(generators: Iterable[Poly], variables: Sequence[str], cap: int | None = None) -> tuple[Poly, ...]:
    """Reduced Groebner basis of the ideal; raises DegreeCapExceeded."""
    cap = degree_cap() if cap is None else cap
    basis: list[Poly] = []
    for g in generators:
        g = _as_q(g).in_variables(variables)
        if not g.is_zero:
            if g.total_degree() > cap:
                raise DegreeCapExceeded(f"generator degree {g.total_degree()} exceeds cap {cap}")
            basis.append(g)
    if not basis:
        return ()

    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2)]
    while pairs:
        pairs.sort(key=lambda p: grevlex_key(_lcm_exp(lead_term(basis[p[0]])[0], lead_term(basis[p[1]])[0])), reverse=True)
        i, j = pairs.pop()
        lead_i, lead_j = lead_term(basis[i])[0], lead_term(basis[j])[0]
        if all(min(a, b) == 0 for a, b in zip(lead_i, lead_j)):
            continue  # coprime leads reduce to zero
        remainder = normal_form_raw(_spoly(basis[i], basis[j]), basis)
        if remainder.is_zero:
            continue
        if remainder.total_degree() > cap:
            raise DegreeCapExceeded(
                f"S-polynomial remainder degree {remainder.total_degree()} exceeds cap {cap}"
            )
        basis.append(remainder)
        if len(basis) > 512:
            raise DegreeCapExceeded("basis size exceeded 512 elements")
        pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))

    return _autoreduce(basis)


def _autoreduce(basis: Sequence[Poly]) -> tuple[Poly, ...]:
    # Drop elements whose lead is divisible by another lead, then fully
    # reduce each survivor against the others and normalize to monic.
    kept = list(basis)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(kept):
            others = kept[:i] + kept[i + 1 :]
            if not others:
                continue
            reduced = normal_form_raw(g, others)
            if reduced.is_zero:
                kept = others
                changed = True
                break
            if reduced.terms != g.terms:
                kept[i] = reduced
                changed = True
                break
    monic = []
    for g in kept:
        _, c = lead_term(g)
        monic.append(g.scale(1 / c))
    monic.sort(key=lambda g: grevlex_key(lead_term(g)[0]))
    return tuple(monic)


@dataclass(frozen=True)
class IdealBasis:
    """An ideal of Q[variables] carried with its reduced Groebner basis."""

    variables: tuple[str, ...]
    generators: tuple[Poly, ...]
    groebner: tuple[Poly, ...]

    @staticmethod
    def build(generators: Iterable[Poly], variables: Sequence[str], cap: int | None = None) -> "IdealBasis":
        gens = tuple(_as_q(g).in_variables(variables) for g in generators)
        return IdealBasis(tuple(variables), gens, buchberger(gens, variables, cap=cap))

    def normal_form(self, f: Poly) -> Poly:
        return normal_form_raw(_as_q(f).in_variables(self.variables), self.groebner)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero

    def contains_one(self) -> bool:
        one = Poly.constant(BaseRing.Q_TRIV, 1, self.variables)
        return self.contains(one)

    def lead_exponents(self) -> tuple[Exponent, ...]:
        return tuple(lead_term(g)[0] for g in self.groebner)

    def monomial_basis(self, max_degree: int) -> tuple[Exponent, ...]:
        """Normal-form monomials of total degree <= max_degree."""
        leads = self.lead_exponents()
        out = [
            exp
            for exp in monomials_up_to(len(self.variables), max_degree)
            if not any(_divides(l, exp) for l in leads)
        ]
        return tuple(sorted(out, key=grevlex_key))


def normal_form(f: Poly, ideal: IdealBasis) -> Poly:
    """Canonical representative of f modulo the ideal."""
    return ideal.normal_form(f)


def monomials_up_to(nvars: int, max_degree: int) -> Iterator[Exponent]:
    if nvars == 0:
        yield ()
        return

    def rec(prefix: tuple[int, ...], remaining: int, budget: int) -> Iterator[Exponent]:
        if remaining == 1:
            for e in range(budget + 1):
                yield prefix + (e,)
            return
        for e in range(budget + 1):
            yield from rec(prefix + (e,), remaining - 1, budget - e)

    yield from rec((), nvars, max_degree)
