"""Seminorms on polynomial algebras and quotient presentations.

Weighted l1 and sup norms with per-variable radii, the uniformization
(power root) estimate with its monotone squaring subsequence, certified
upper bounds for residue seminorms and projective tensor seminorms, and
a randomized-instance axiom report.  The two bound routines only ever
report values that some explicit representative witnesses, so they carry
an ``UPPER_BOUND`` flag rather than pretending to be exact.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .graded import CoeffVector, GradedSet, l1_norm, monomial_grading
from .groebner import IdealBasis
from .polynomials import Poly, parse_poly
from .rings import BaseRing, Domain, base_norm_eval, trivial_norm
from .values import _log_fraction


def _radius_map(f: Poly, radii: Mapping[str, Fraction | int]) -> dict[str, Fraction]:
    out = {}
    for name in f.variables:
        if name not in radii:
            raise ValueError(f"no radius supplied for variable {name!r}")
        out[name] = Fraction(radii[name])
    return out


def poly_l1(f: Poly, radii: Mapping[str, Fraction | int], base: BaseRing | None = None) -> Fraction:
    """Sum over terms of |coefficient| times the monomial grading."""
    base = base if base is not None else f.ring
    rho = _radius_map(f, radii)
    total = Fraction(0)
    for exp, coeff in f.terms:
        alpha = dict(zip(f.variables, exp))
        total += base_norm_eval(base, coeff) * monomial_grading(alpha, rho)
    return total


def poly_linf(f: Poly, radii: Mapping[str, Fraction | int], base: BaseRing | None = None) -> Fraction:
    """Max over terms of |coefficient| times the monomial grading."""
    base = base if base is not None else f.ring
    rho = _radius_map(f, radii)
    best = Fraction(0)
    for exp, coeff in f.terms:
        alpha = dict(zip(f.variables, exp))
        value = base_norm_eval(base, coeff) * monomial_grading(alpha, rho)
        if value > best:
            best = value
    return best


def poly_trivial_gauss(f: Poly, radii: Mapping[str, Fraction | int]) -> Fraction:
    """Gauss norm with trivially valued coefficients: max grading over support."""
    rho = _radius_map(f, radii)
    best = Fraction(0)
    for exp, coeff in f.terms:
        if coeff == 0:
            continue
        value = monomial_grading(dict(zip(f.variables, exp)), rho)
        if value > best:
            best = value
    return best


@dataclass(frozen=True)
class QuotientPresentation:
    """A weighted polynomial algebra together with relation polynomials."""

    base: BaseRing
    radii: tuple[tuple[str, Fraction], ...]
    relations: tuple[Poly, ...] = ()

    def __post_init__(self) -> None:
        for name, r in self.radii:
            if Fraction(r) < 0:
                raise ValueError(f"negative radius for {name!r}")

    @staticmethod
    def make(
        base: BaseRing,
        radii: Mapping[str, Fraction | int] | Sequence[tuple[str, Fraction | int]],
        relations: Sequence[Poly | str] = (),
    ) -> "QuotientPresentation":
        items = list(radii.items() if isinstance(radii, Mapping) else radii)
        names = tuple(n for n, _ in items)
        polys = tuple(
            parse_poly(r, base, names) if isinstance(r, str) else r for r in relations
        )
        return QuotientPresentation(
            base, tuple((n, Fraction(r)) for n, r in items), polys
        )

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.radii)

    def radius_map(self) -> dict[str, Fraction]:
        return {n: r for n, r in self.radii}

    def l1(self, f: Poly) -> Fraction:
        return poly_l1(f, self.radius_map(), self.base)


@functools.cache
def _ideal_of(q: QuotientPresentation) -> IdealBasis:
    if q.base.domain is not Domain.Q:
        raise ValueError("exact reduction needs rational coefficients")
    return IdealBasis.build(q.relations, q.variables)


def residue_l1_norm(q: QuotientPresentation, f: Poly) -> Fraction:
    """l1 norm of the canonical representative; an upper bound for the
    residue seminorm of the class of f (exact reduction, rational base only)."""
    return q.l1(_ideal_of(q).normal_form(f))


@dataclass(frozen=True)
class QuotientClass:
    """A residue class carried by a representative, reduced after products."""

    presentation: QuotientPresentation
    rep: Poly

    def reduce(self) -> "QuotientClass":
        return QuotientClass(self.presentation, _ideal_of(self.presentation).normal_form(self.rep))

    def __mul__(self, other: "QuotientClass") -> "QuotientClass":
        if other.presentation != self.presentation:
            raise ValueError("classes live in different quotients")
        return QuotientClass(self.presentation, self.rep * other.rep).reduce()

    def __pow__(self, n: int) -> "QuotientClass":
        result = QuotientClass(self.presentation, Poly.constant(self.rep.ring, 1, self.rep.variables))
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result


# -- uniformization ---------------------------------------------------------


@dataclass(frozen=True)
class UniformizationReport:
    """n-th root norms of powers along the squaring chain."""

    value: float
    exact_limit: Fraction | None
    sequence: tuple[tuple[int, float], ...]
    exact_sequence: tuple[tuple[int, Fraction], ...]


def uniformization_estimate(
    x,
    norm: Callable,
    n_max: int = 64,
    *,
    bit_budget: int = 2_000_000,
) -> UniformizationReport:
    """Estimate lim_n |x^n|^(1/n) along n = 1, 2, 4, ..., n_max.

    For a submultiplicative norm the reported subsequence is provably
    non-increasing; a violation means the supplied oracle is not a
    seminorm and raises.  When |x^n| equals |x|^n exactly the norm is
    already power-multiplicative on x and the exact limit is reported.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    ns = [1]
    while ns[-1] * 2 <= n_max:
        ns.append(ns[-1] * 2)
    if ns[-1] != n_max:
        ns.append(n_max)

    powers = {1: x}
    square = x
    n = 1
    while n * 2 <= n_max:
        square = square * square
        n *= 2
        powers[n] = square
    if n_max not in powers:
        powers[n_max] = x**n_max

    exact_oracle = True
    exact_seq: list[tuple[int, Fraction]] = []
    for k in ns:
        v = norm(powers[k])
        if not isinstance(v, Fraction):
            exact_oracle = False
            v = Fraction(v)
        if max(v.numerator.bit_length(), v.denominator.bit_length()) > bit_budget:
            raise OverflowError("norm value exceeds the exact coefficient bit budget")
        exact_seq.append((k, v))

    roots: list[tuple[int, float]] = []
    for k, v in exact_seq:
        roots.append((k, math.exp(_log_fraction(v) / k) if v > 0 else 0.0))

    doubling = [(k, v) for k, v in exact_seq if (k & (k - 1)) == 0]
    slack = Fraction(0) if exact_oracle else Fraction(1, 10**9)
    for (k1, v1), (k2, v2) in zip(doubling, doubling[1:]):
        # v at 2n must not exceed (v at n) squared; exact oracles compare
        # exactly, float oracles get relative slack.
        bound = v1 ** (k2 // k1)
        if v2 > bound * (1 + slack):
            raise ValueError(
                f"|x^{k2}| > |x^{k1}|^{k2 // k1}: the norm oracle is not submultiplicative"
            )

    v1 = exact_seq[0][1]
    v_last = exact_seq[-1][1]
    exact_limit = v1 if v_last == v1 ** ns[-1] else None
    return UniformizationReport(
        value=roots[-1][1],
        exact_limit=exact_limit,
        sequence=tuple(roots),
        exact_sequence=tuple(exact_seq),
    )


# -- certified upper bounds -------------------------------------------------


@dataclass(frozen=True)
class CertifiedBound:
    value: Fraction
    flag: str  # always "UPPER_BOUND"
    witness: object = None


def residue_seminorm_bound(
    q: QuotientPresentation, a: Poly, search_budget: int = 1
) -> CertifiedBound:
    """Upper bound for the residue seminorm of the class of ``a``.

    Enumerates representatives a + sum(g_i * rel_i) where each multiplier
    g_i ranges over polynomials of degree <= search_budget with integer
    coefficients bounded by 4 * search_budget, and reports the smallest
    l1 norm seen.  Monotone under enlarging the budget since the zero
    multiplier is always in the box.
    """
    if search_budget < 0:
        raise ValueError("search budget must be nonnegative")
    from .groebner import monomials_up_to

    variables = q.variables
    monos = list(monomials_up_to(len(variables), search_budget))
    height = 4 * max(search_budget, 1)
    coeff_range = range(-height, height + 1)
    per_relation = len(coeff_range) ** len(monos)
    if q.relations and per_relation ** len(q.relations) > 500_000:
        raise ValueError("search box too large; reduce the budget")

    def multipliers():
        if not q.relations:
            yield ()
            return
        space = [
            [
                Poly.from_dict(a.ring, variables, dict(zip(monos, choice)))
                for choice in itertools.product(coeff_range, repeat=len(monos))
            ]
        ] * len(q.relations)
        yield from itertools.product(*space)

    rho = q.radius_map()
    a = a.in_variables(variables)
    best = poly_l1(a, rho, q.base)
    best_rep = a
    for gs in multipliers():
        rep = a
        for g, rel in zip(gs, q.relations):
            rep = rep + g * rel.in_variables(variables)
        value = poly_l1(rep, rho, q.base)
        if value < best:
            best, best_rep = value, rep
    return CertifiedBound(best, "UPPER_BOUND", witness=best_rep)


def projective_tensor_bound(
    summands: Sequence[tuple[Fraction | int, CoeffVector, CoeffVector]],
    x: GradedSet,
    y: GradedSet,
    base: BaseRing,
) -> CertifiedBound:
    """Upper bound for the projective tensor seminorm of a formal sum of
    elementary tensors: minimum of sum |a_i| |m_i| |n_i| over the supplied
    representation and its merge rewrites (collecting equal left or right
    factors)."""

    def cost(rep: Sequence[tuple[Fraction, CoeffVector, CoeffVector]]) -> Fraction:
        total = Fraction(0)
        for a, m, n in rep:
            total += base_norm_eval(base, a) * l1_norm(m, x, base) * l1_norm(n, y, base)
        return total

    start = [(Fraction(a), m, n) for a, m, n in summands]

    def merge_left(rep):
        groups: dict = {}
        for a, m, n in rep:
            groups.setdefault(m, []).append((a, n))
        out = []
        for m, parts in groups.items():
            combined = None
            for a, n in parts:
                scaled = n.scale(a)
                combined = scaled if combined is None else combined + scaled
            out.append((Fraction(1), m, combined))
        return out

    def merge_right(rep):
        groups: dict = {}
        for a, m, n in rep:
            groups.setdefault(n, []).append((a, m))
        out = []
        for n, parts in groups.items():
            combined = None
            for a, m in parts:
                scaled = m.scale(a)
                combined = scaled if combined is None else combined + scaled
            out.append((Fraction(1), combined, n))
        return out

    candidates = [start, merge_left(start), merge_right(start), merge_right(merge_left(start))]
    best = None
    best_rep = None
    for rep in candidates:
        value = cost(rep)
        if best is None or value < best:
            best, best_rep = value, rep
    return CertifiedBound(best, "UPPER_BOUND", witness=best_rep)


# -- axiom checking ----------------------------------------------------------


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    elements: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class AxiomReport:
    checked_pairs: int
    violations: tuple[AxiomViolation, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.violations


def seminorm_axiom_report(
    norm: Callable,
    samples: Sequence,
    *,
    zero,
    one,
    tol: float = 0.0,
    max_pairs: int = 5000,
) -> AxiomReport:
    """Check |0| = 0, |1| <= 1, |a - b| <= |a| + |b| and |ab| <= |a| |b|
    on all pairs from ``samples`` (capped).  Exact comparisons when the
    norm returns Fractions and tol is 0; otherwise relative float slack."""

    violations: list[AxiomViolation] = []

    def leq(lhs, rhs, axiom: str, elements: tuple) -> None:
        if tol == 0.0 and isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
            ok = lhs <= rhs
        else:
            fl, fr = float(lhs), float(rhs)
            ok = fl <= fr + tol * max(abs(fl), abs(fr), 1.0)
        if not ok:
            violations.append(AxiomViolation(axiom, elements, float(lhs), float(rhs)))

    leq(norm(zero), Fraction(0), "zero", (zero,))
    leq(norm(one), Fraction(1), "one", (one,))

    pairs = list(itertools.combinations(range(len(samples)), 2))[:max_pairs]
    norms = [norm(s) for s in samples]
    for i, j in pairs:
        a, b = samples[i], samples[j]
        leq(norm(a - b), norms[i] + norms[j], "difference", (a, b))
        leq(norm(a * b), norms[i] * norms[j], "product", (a, b))
    return AxiomReport(checked_pairs=len(pairs), violations=tuple(violations))
