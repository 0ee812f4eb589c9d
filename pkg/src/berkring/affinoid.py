"""Affinoid-style presentations and rational domains.

A presentation is a base ring, weighted variables (radius per variable),
relation polynomials and an optional dagger (overconvergence) flag.
Variables whose relation solves them as a ratio of earlier elements
(``den * v - num``) are tracked as substitutions: evaluation at a fiber
point clears them, which is how composed rational domains (a domain over
a domain algebra) are evaluated without ever sampling bound variables.

Rational domains D(f0, rho0 | f1, rho1, ...) carry the defining pairs;
membership at a point is the exact inequality rho0 |f_i| <= rho_i |f0|
per pair, with inverted pairs (|f| >= rho, used by Laurent coverings)
and ratio generators (f_i / f_j for unit coverings) handled uniformly.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .groebner import IdealBasis
from .polynomials import LaurentPoly, Poly, parse_poly
from .rings import BaseRing, Domain
from .seminorms import poly_l1
from .spectrum import (
    DensitySpec,
    FiberPoint,
    SpectrumPoint,
    eval_point,
    sample_points,
)
from .values import ExactValue, PointValue, value_le, value_mul


@dataclass(frozen=True)
class VarSpec:
    name: str
    radius: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError(f"radius of {self.name!r} must be positive")


@dataclass(frozen=True)
class Substitution:
    """An adjoined variable equal to num/den on its domain of definition."""

    var: str
    num: Poly
    den: Poly


@dataclass(frozen=True)
class AffinoidPresentation:
    base: BaseRing
    vars: tuple[VarSpec, ...]
    relations: tuple[Poly, ...] = ()
    dagger: bool = False
    substitutions: tuple[Substitution, ...] = ()

    def __post_init__(self) -> None:
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for rel in self.relations:
            if rel.ring is not self.base:
                raise ValueError("relation base ring does not match the presentation")
            for used in rel.used_variables():
                if used not in names:
                    raise ValueError(f"relation uses undeclared variable {used!r}")

    # -- construction ---------------------------------------------------

    @staticmethod
    def polydisc(
        base: BaseRing,
        radii: Mapping[str, Fraction | int] | Sequence[tuple[str, Fraction | int]],
        dagger: bool = False,
    ) -> "AffinoidPresentation":
        items = radii.items() if isinstance(radii, Mapping) else radii
        return AffinoidPresentation(
            base, tuple(VarSpec(n, Fraction(r)) for n, r in items), (), dagger
        )

    # -- variable bookkeeping --------------------------------------------

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def radius_map(self) -> dict[str, Fraction]:
        return {v.name: v.radius for v in self.vars}

    def substituted_names(self) -> tuple[str, ...]:
        return tuple(s.var for s in self.substitutions)

    def free_radius_map(self) -> dict[str, Fraction]:
        bound = set(self.substituted_names())
        return {v.name: v.radius for v in self.vars if v.name not in bound}

    def free_relations(self) -> tuple[Poly, ...]:
        """Relations other than the one defining each substituted variable."""
        defining = {s.var for s in self.substitutions}
        claimed: set[str] = set()
        out = []
        for rel in self.relations:
            solved = _solves_substitution(rel, self)
            if solved is not None and solved.var in defining and solved.var not in claimed:
                claimed.add(solved.var)
                continue
            out.append(rel)
        return tuple(out)

    def zero_poly(self) -> Poly:
        return Poly.from_dict(self.base, self.variable_names, {})

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.base, self.variable_names)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.label,
            "vars": [{"name": v.name, "rho": str(v.radius)} for v in self.vars],
            "dagger": self.dagger,
            "relations": [str(r) for r in self.relations],
        }

    @staticmethod
    def from_json_dict(data: Mapping) -> "AffinoidPresentation":
        base = BaseRing.from_label(data["base"])
        vars_ = tuple(VarSpec(v["name"], Fraction(v["rho"])) for v in data["vars"])
        names = tuple(v.name for v in vars_)
        relations = tuple(parse_poly(t, base, names) for t in data.get("relations", ()))
        pres = AffinoidPresentation(base, vars_, relations, bool(data.get("dagger", False)))
        return derive_substitutions(pres)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "AffinoidPresentation":
        return AffinoidPresentation.from_json_dict(json.loads(text))


def _solves_substitution(rel: Poly, pres: AffinoidPresentation) -> Substitution | None:
    """Recognize ``den * v - num`` with v absent from den and num.

    The rightmost declared variable that qualifies wins, so variables
    adjoined later (by rational-domain constructions) resolve first.
    """
    for name in reversed(pres.variable_names):
        if rel.degree_in(name) != 1:
            continue
        i = rel.variables.index(name) if name in rel.variables else -1
        if i < 0:
            continue
        den_terms: dict = {}
        num_terms: dict = {}
        for exp, coeff in rel.terms:
            if exp[i] == 1:
                den_terms[tuple(e for j, e in enumerate(exp) if j != i)] = coeff
            elif exp[i] == 0:
                num_terms[tuple(e for j, e in enumerate(exp) if j != i)] = -coeff
            else:
                den_terms = {}
                break
        if not den_terms:
            continue
        rest_vars = tuple(v for v in rel.variables if v != name)
        den = Poly.from_dict(rel.ring, rest_vars, den_terms)
        num = Poly.from_dict(rel.ring, rest_vars, num_terms)
        if den.is_constant() and den.constant_value() < 0:
            den = -den
            num = -num
        return Substitution(name, num, den)
    return None


def derive_substitutions(pres: AffinoidPresentation) -> AffinoidPresentation:
    """Attach substitutions for every relation of the solvable shape."""
    subs: list[Substitution] = []
    solved: set[str] = set()
    for rel in pres.relations:
        sub = _solves_substitution(rel, pres)
        if sub is not None and sub.var not in solved:
            subs.append(sub)
            solved.add(sub.var)
    return replace(pres, substitutions=tuple(subs))


def clear_substitutions(g: Poly, pres: AffinoidPresentation) -> tuple[Poly, Poly]:
    """Express g as num/den over the free variables of the presentation.

    Substitutions are eliminated last-adjoined first; each one's num and
    den only involve strictly earlier variables, so this terminates.
    """
    num = g
    den = Poly.constant(g.ring, 1, g.variables)
    for sub in reversed(pres.substitutions):
        num = _eliminate(num, sub)
        den = _eliminate(den, sub)
        # _eliminate multiplies by sub.den**degree; rebalance the pair so
        # both sides carry the same total denominator power.
        kn = num[1]
        kd = den[1]
        num, den = num[0] * _pow(sub.den, kd), den[0] * _pow(sub.den, kn)
    return num.in_variables(num.used_variables()), den.in_variables(den.used_variables())


def _pow(f: Poly, n: int) -> Poly:
    return f**n if n > 0 else Poly.constant(f.ring, 1, f.variables)


def _eliminate(g: Poly, sub: Substitution) -> tuple[Poly, int]:
    """Replace var by num/den and clear: returns (h, k) with g = h / den**k."""
    k = g.degree_in(sub.var)
    if k <= 0:
        return g, 0
    i = g.variables.index(sub.var)
    rest_vars = tuple(v for v in g.variables if v != sub.var)
    out = Poly.from_dict(g.ring, rest_vars, {})
    num = sub.num.in_variables(_union(rest_vars, sub.num.used_variables()))
    den = sub.den.in_variables(_union(rest_vars, sub.den.used_variables()))
    for exp, coeff in g.terms:
        e = exp[i]
        rest_exp = tuple(x for j, x in enumerate(exp) if j != i)
        term = Poly.from_dict(g.ring, rest_vars, {rest_exp: coeff})
        term = term * _pow(num, e) * _pow(den, k - e)
        out = out + term
    return out, k


def _union(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    out = list(a)
    for name in b:
        if name not in out:
            out.append(name)
    return tuple(out)


@lru_cache(maxsize=4096)
def _cleared_pair(g: Poly, pres: AffinoidPresentation) -> tuple[Poly, Poly]:
    # clearing is point-independent; membership sweeps hit the same
    # handful of polynomials for thousands of points
    return clear_substitutions(g.in_variables(pres.variable_names), pres)


def presentation_norm_pair(
    g: Poly, x: FiberPoint, pres: AffinoidPresentation
) -> tuple[PointValue, PointValue]:
    """(|num(x)|, |den(x)|) for g = num/den after clearing substitutions."""
    num, den = _cleared_pair(g, pres)
    return eval_point(num, x), eval_point(den, x)


# -- rational domains ---------------------------------------------------------


@dataclass(frozen=True)
class DomainCondition:
    """One inequality of a rational domain.

    sign +1:  rho0 * |num/den| <= rho * |f0|   (the standard pair)
    sign -1:  |num/den| >= rho, only with f0 = 1 (inverted Laurent pair)
    """

    num: Poly
    rho: Fraction
    den: Poly | None = None
    sign: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", Fraction(self.rho))
        if self.rho <= 0:
            raise ValueError("pair radius must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class RationalDomainSpec:
    parent: AffinoidPresentation
    f0: Poly
    rho0: Fraction
    conditions: tuple[DomainCondition, ...]
    certificate: tuple[Poly, ...] | None = None
    check_unit_ideal: bool = True

    @staticmethod
    def from_pairs(
        parent: AffinoidPresentation,
        pairs: Sequence[tuple[Poly | str, Fraction | int]],
        certificate: Sequence[Poly | str] | None = None,
    ) -> "RationalDomainSpec":
        if not pairs:
            raise ValueError("a rational domain needs at least the distinguished pair")
        polys = [
            (parent.parse(f) if isinstance(f, str) else f.in_variables(parent.variable_names), Fraction(r))
            for f, r in pairs
        ]
        f0, rho0 = polys[0]
        conditions = tuple(DomainCondition(f, r) for f, r in polys[1:])
        cert = None
        if certificate is not None:
            cert = tuple(
                parent.parse(c) if isinstance(c, str) else c.in_variables(parent.variable_names)
                for c in certificate
            )
        return RationalDomainSpec(parent, f0, rho0, conditions, cert)

    def pair_polys(self) -> tuple[Poly, ...]:
        if any(c.den is not None or c.sign != 1 for c in self.conditions):
            raise ValueError("generalized conditions do not form a plain pair list")
        return (self.f0,) + tuple(c.num for c in self.conditions)

    @property
    def strict(self) -> bool:
        return self.rho0 == 1 and all(c.rho == 1 for c in self.conditions)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        pairs = [{"f": str(self.f0), "rho": str(self.rho0)}]
        for c in self.conditions:
            entry = {"f": str(c.num), "rho": str(c.rho)}
            if c.den is not None:
                entry["den"] = str(c.den)
            if c.sign != 1:
                entry["sign"] = c.sign
            pairs.append(entry)
        out = {"parent": self.parent.to_json_dict(), "pairs": pairs}
        if self.certificate is not None:
            out["certificate"] = [str(c) for c in self.certificate]
        if not self.check_unit_ideal:
            out["check_unit_ideal"] = False
        return out

    @staticmethod
    def from_json_dict(data: Mapping) -> "RationalDomainSpec":
        parent = AffinoidPresentation.from_json_dict(data["parent"])
        pairs = data["pairs"]
        f0 = parent.parse(pairs[0]["f"])
        rho0 = Fraction(pairs[0]["rho"])
        conditions = []
        for entry in pairs[1:]:
            conditions.append(
                DomainCondition(
                    parent.parse(entry["f"]),
                    Fraction(entry["rho"]),
                    parent.parse(entry["den"]) if "den" in entry else None,
                    int(entry.get("sign", 1)),
                )
            )
        cert = None
        if "certificate" in data:
            cert = tuple(parent.parse(c) for c in data["certificate"])
        return RationalDomainSpec(
            parent,
            f0,
            rho0,
            tuple(conditions),
            cert,
            bool(data.get("check_unit_ideal", True)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "RationalDomainSpec":
        return RationalDomainSpec.from_json_dict(json.loads(text))


class UnitIdealStatus(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"


def validate_unit_ideal(
    fs: Sequence[Poly],
    parent: AffinoidPresentation | None = None,
    certificate: Sequence[Poly] | None = None,
) -> UnitIdealStatus:
    """Do the given elements generate the unit ideal?

    With a certificate (a_i with sum a_i f_i = 1 modulo the parent
    relations) the identity is verified exactly and an invalid witness
    raises.  Without one, rational coefficient rings get a Groebner
    decision; over the integers the rational test can refute, a unit
    constant among the generators suffices, anything else stays
    INDETERMINATE.
    """
    if not fs:
        raise ValueError("empty generator list")
    ring = fs[0].ring
    names = parent.variable_names if parent is not None else _union((), sum((f.used_variables() for f in fs), ()))
    relations = parent.relations if parent is not None else ()

    if certificate is not None:
        if len(certificate) != len(fs):
            raise ValueError("certificate length does not match the generators")
        combo = None
        for a, f in zip(certificate, fs):
            term = a * f
            combo = term if combo is None else combo + term
        combo = combo - Poly.constant(ring, 1, combo.variables)
        if combo.is_zero:
            return UnitIdealStatus.TRUE
        if relations:
            ideal = IdealBasis.build(relations, _union(names, combo.used_variables()))
            if ideal.contains(combo):
                return UnitIdealStatus.TRUE
        raise ValueError("invalid unit-ideal certificate")

    for f in fs:
        if f.is_constant() and f.constant_value() != 0:
            c = f.constant_value()
            if ring.domain is Domain.Q or abs(c) == 1:
                return UnitIdealStatus.TRUE

    ideal = IdealBasis.build(tuple(fs) + tuple(relations), names)
    rational_answer = ideal.contains_one()
    if ring.domain is Domain.Q:
        return UnitIdealStatus.TRUE if rational_answer else UnitIdealStatus.FALSE
    if not rational_answer:
        return UnitIdealStatus.FALSE
    return UnitIdealStatus.INDETERMINATE


def _fresh_names(taken: Sequence[str], count: int, stem: str = "T") -> list[str]:
    out: list[str] = []
    i = 1
    while len(out) < count:
        name = f"{stem}{i}"
        while name in taken or name in out:
            name = "_" + name
        out.append(name)
        i += 1
    return out


def rational_domain_algebra(
    d: RationalDomainSpec,
    var_names: Sequence[str] | None = None,
) -> AffinoidPresentation:
    """The presentation of the rational domain's algebra.

    Adjoins one variable per condition (radius rho_i / rho0, or 1/rho_i
    for inverted pairs) with the relation den * f0 * T_i - num, resp.
    num * T_i - den.  The pair polynomials must generate the unit ideal:
    a definite failure raises; over the integers without a certificate
    the status may stay indeterminate and construction proceeds.
    """
    parent = d.parent
    if d.check_unit_ideal:
        plain = all(c.den is None and c.sign == 1 for c in d.conditions)
        if plain:
            status = validate_unit_ideal(d.pair_polys(), parent, d.certificate)
            if status is UnitIdealStatus.FALSE:
                raise ValueError("pair polynomials do not generate the unit ideal")
    if not d.conditions:
        return parent

    taken = parent.variable_names
    names = list(var_names) if var_names is not None else _fresh_names(taken, len(d.conditions))
    if len(names) != len(d.conditions):
        raise ValueError("need one fresh variable per condition")
    all_names = taken + tuple(names)

    new_vars = list(parent.vars)
    new_relations = list(parent.relations)
    new_subs = list(parent.substitutions)
    f0 = d.f0.in_variables(all_names)
    for cond, name in zip(d.conditions, names):
        num = cond.num.in_variables(all_names)
        den = cond.den.in_variables(all_names) if cond.den is not None else None
        t = Poly.variable(parent.base, name, all_names)
        if cond.sign == 1:
            radius = cond.rho / d.rho0
            lhs = f0 * t if den is None else den * f0 * t
            relation = lhs - num
            sub_num, sub_den = num, (f0 if den is None else den * f0)
        else:
            if not (d.f0.is_constant() and d.f0.constant_value() == 1 and d.rho0 == 1):
                raise ValueError("inverted pairs require the distinguished pair (1, 1)")
            radius = 1 / cond.rho
            den_poly = den if den is not None else Poly.constant(parent.base, 1, all_names)
            relation = num * t - den_poly
            sub_num, sub_den = den_poly, num
        new_vars.append(VarSpec(name, radius))
        new_relations.append(relation.in_variables(all_names))
        new_subs.append(Substitution(name, sub_num, sub_den))
    return AffinoidPresentation(
        parent.base, tuple(new_vars), tuple(new_relations), parent.dagger, tuple(new_subs)
    )


@lru_cache(maxsize=65536)
def presentation_membership(x: FiberPoint, pres: AffinoidPresentation) -> bool:
    """Whether the point lies in the spectrum the presentation carves out.

    Every variable (bound ones through their substitutions) must respect
    its radius and every free relation must evaluate to zero.  Points
    produced by sample_spectrum satisfy this by construction; explicit
    points need the check, in particular when a domain is built on top of
    a rational domain algebra whose substituted variables constrain the
    base point.  A variable the point carries no coordinate for is left
    unconstrained; the caller asserts the point lives on the parent.
    """
    for v in pres.vars:
        var_poly = Poly.variable(pres.base, v.name, pres.variable_names)
        try:
            num, den = presentation_norm_pair(var_poly, x, pres)
        except KeyError:
            continue
        if _is_zero(den):
            return False
        # |v(x)| <= radius, cleared: |num| <= radius * |den|
        if not value_le(num, value_mul(ExactValue.rational(v.radius), den)):
            return False
    for rel in pres.free_relations():
        try:
            num, den = presentation_norm_pair(rel, x, pres)
        except KeyError:
            continue
        if _is_zero(den):
            return False
        if not _is_zero(num):
            return False
    return True


def domain_membership(x: FiberPoint, d: RationalDomainSpec) -> bool:
    """Exact pointwise membership in the rational domain."""
    pres = d.parent
    if not presentation_membership(x, pres):
        return False
    n0, d0 = presentation_norm_pair(d.f0, x, pres)
    if _is_zero(d0):
        return False
    one = ExactValue.rational(1)
    for cond in d.conditions:
        nn, nd = presentation_norm_pair(cond.num, x, pres)
        if _is_zero(nd):
            return False
        if cond.den is not None:
            dn, dd = presentation_norm_pair(cond.den, x, pres)
            if _is_zero(dd):
                return False
        else:
            dn, dd = one, one
        if cond.sign == 1:
            # rho0 |num/den| <= rho |f0| cross-multiplied through the
            # clearing denominators: rho0 * nn * dd * d0 <= rho * n0 * dn * nd.
            if cond.den is not None and _is_zero(dn):
                return False
            lhs = value_mul(value_mul(ExactValue.rational(d.rho0), nn), value_mul(dd, d0))
            rhs = value_mul(value_mul(ExactValue.rational(cond.rho), n0), value_mul(dn, nd))
            if not value_le(lhs, rhs):
                return False
        else:
            # |num/den| >= rho: rho * |den| <= |num| after clearing.
            lhs = value_mul(ExactValue.rational(cond.rho), value_mul(dn, nd))
            rhs = value_mul(nn, dd)
            if not value_le(lhs, rhs):
                return False
    return True


def _is_zero(v: PointValue) -> bool:
    if isinstance(v, ExactValue):
        return v.is_zero
    return v == 0.0


def sample_spectrum(
    alg: AffinoidPresentation, density: DensitySpec = DensitySpec()
) -> tuple[FiberPoint, ...]:
    """Deterministic fiber points of the presentation's spectrum.

    Bound (substituted) variables are never sampled; their values follow
    from the substitutions during evaluation.  Relations that do not
    define a substitution are outside the sampler's scope.  Grid points
    that violate a bound variable's radius (e.g. |1/T| <= 1 on a circle
    presentation) are dropped.
    """
    if alg.free_relations():
        raise ValueError("sampling needs every relation to define a substitution")
    pts = sample_points(alg.base, alg.free_radius_map(), density)
    if not alg.substitutions:
        return pts
    return tuple(x for x in pts if presentation_membership(x, alg))


def base_change(a: AffinoidPresentation, target: BaseRing) -> AffinoidPresentation:
    """Reinterpret the presentation over another base.

    Allowed along bounded maps of bases: from Z_arch to anything, from
    Z_triv to Z_triv or Q_triv, Q_triv to itself.  The identity change
    returns an equal presentation.
    """
    source = a.base
    allowed = source is BaseRing.Z_ARCH or (
        source is BaseRing.Z_TRIV and target in (BaseRing.Z_TRIV, BaseRing.Q_TRIV)
    ) or source is target
    if not allowed:
        raise ValueError(f"no bounded base map {source.label} -> {target.label}")
    if source is target:
        return a

    def retag(p: Poly) -> Poly:
        return Poly(target, p.variables, p.terms)

    return AffinoidPresentation(
        target,
        a.vars,
        tuple(retag(r) for r in a.relations),
        a.dagger,
        tuple(Substitution(s.var, retag(s.num), retag(s.den)) for s in a.substitutions),
    )


# -- dagger radius schedules ---------------------------------------------------


@dataclass(frozen=True)
class DaggerFamily:
    """Strictly decreasing overconvergent radius schedule nu_k = rho (1 + 2^-k)."""

    radii: tuple[tuple[str, Fraction], ...]
    levels: int

    def __post_init__(self) -> None:
        if self.levels < 0:
            raise ValueError("levels must be nonnegative")

    @staticmethod
    def make(radii: Mapping[str, Fraction | int], levels: int) -> "DaggerFamily":
        return DaggerFamily(tuple(sorted((n, Fraction(r)) for n, r in radii.items())), levels)

    def schedule(self) -> tuple[dict[str, Fraction], ...]:
        out = []
        for k in range(self.levels + 1):
            bump = 1 + Fraction(1, 2**k)
            out.append({n: r * bump for n, r in self.radii})
        return tuple(out)


def dagger_profile(f: Poly, family: DaggerFamily, norm: str = "l1") -> tuple[Fraction, ...]:
    """Norms of f along the dagger schedule; non-increasing in k."""
    if norm != "l1":
        raise ValueError("only the l1 profile is implemented")
    return tuple(poly_l1(f, radii) for radii in family.schedule())


# -- projective-line chart isometry --------------------------------------------


@dataclass(frozen=True)
class ChartIsometryReport:
    samples: int
    max_discrepancy: float
    worst: str


def _laurent_gauss_value(f: LaurentPoly, pt: SpectrumPoint, radius: Fraction) -> ExactValue:
    from .values import value_max

    values = []
    for e, c in f.terms:
        scalar = pt.scalar_norm(c)
        if scalar.is_zero:
            continue
        values.append(scalar * radius**e)
    if not values:
        return ExactValue.rational(0)
    best = value_max(values)
    assert isinstance(best, ExactValue)
    return best


def chart_isometry_check(f: LaurentPoly, samples: int = 16) -> ChartIsometryReport:
    """Compare |f| on the unit annulus against the opposite chart.

    The second chart carries the pullback under var -> 1/var, evaluated
    at the matched point (1/z archimedean, the same unit Gauss point
    non-archimedean).  Exact matches count as discrepancy 0; floats are
    compared after normalizing by the value size.
    """
    if f.ring is not BaseRing.Z_ARCH:
        raise ValueError("chart checks run over the archimedean integers")
    g = f.invert_variable()
    worst = 0.0
    worst_label = "-"
    count = 0

    def record(a: float, b: float, label: str) -> None:
        nonlocal worst, worst_label, count
        count += 1
        gap = abs(a - b) / max(1.0, abs(a), abs(b))
        if gap > worst:
            worst, worst_label = gap, label

    # Archimedean annulus samples at two exponents.
    for eps in (Fraction(1), Fraction(1, 2)):
        for j in range(samples):
            theta = 2.0 * math.pi * j / samples
            quarter = (4 * j) % samples == 0
            if quarter:
                k = (4 * j) // samples % 4
                z = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)),
                     (Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1))][k]
                re, im = f.eval_gaussian(z)
                v0 = ExactValue.arch(1, re * re + im * im, eps)
                wre, wim = g.eval_gaussian((z[0], -z[1]))
                v1 = ExactValue.arch(1, wre * wre + wim * wim, eps)
                if not v0.eq(v1):
                    record(float(v0), float(v1), f"arch eps={eps} angle={j}/{samples}")
                else:
                    record(float(v0), float(v0), f"arch eps={eps} angle={j}/{samples}")
            else:
                z = complex(math.cos(theta), math.sin(theta))
                v0 = abs(f.eval_complex(z)) ** float(eps)
                v1 = abs(g.eval_complex(1.0 / z)) ** float(eps)
                record(v0, v1, f"arch eps={eps} angle={j}/{samples}")

    # Non-archimedean unit Gauss points and classical points at +-1.
    gauss_points = [SpectrumPoint("trivial"), SpectrumPoint("padic", 2, Fraction(1)),
                    SpectrumPoint("padic", 3, Fraction(1, 2)), SpectrumPoint("residue", 2)]
    one = Fraction(1)
    for pt in gauss_points:
        v0 = _laurent_gauss_value(f, pt, one)
        v1 = _laurent_gauss_value(g, pt, one)
        if not v0.eq(v1):
            record(float(v0), float(v1), f"gauss {pt.label()}")
        else:
            record(float(v0), float(v0), f"gauss {pt.label()}")
    for c in (Fraction(1), Fraction(-1)):
        re0, im0 = f.eval_gaussian((c, Fraction(0)))
        re1, im1 = g.eval_gaussian((1 / c, Fraction(0)))
        for pt in (SpectrumPoint("trivial"), SpectrumPoint("padic", 2, Fraction(1))):
            v0, v1 = pt.scalar_norm(re0), pt.scalar_norm(re1)
            if not v0.eq(v1):
                record(float(v0), float(v1), f"point {c} {pt.label()}")
            else:
                record(float(v0), float(v0), f"point {c} {pt.label()}")
    return ChartIsometryReport(count, worst, worst_label)
