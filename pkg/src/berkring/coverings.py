"""Standard and Laurent coverings with constructive refinement.

A covering holds a parent presentation, the generator pairs (f_i, rho_i)
and one rational-domain spec per member.  Standard coverings take member
i to be D(f_i, rho_i | all other pairs); Laurent coverings enumerate the
2^n sign vectors, one inequality |f_i| <= rho_i or >= rho_i per pair.

The two refinement constructions are the computable halves of the
classical reduction: a standard covering refines to the Laurent covering
generated by (f_i, rho_i / c) once c^-1 sits strictly below
inf_x max_i rho_i^-1 |f_i(x)| (the constant comes from a sampled
estimate with safety factor 2, retried with c doubled when a sample
contradicts it), and a standard covering by units refines to the Laurent
covering on the pairwise ratio pairs (f_i / f_j, rho_i / rho_j).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .affinoid import (
    AffinoidPresentation,
    DomainCondition,
    RationalDomainSpec,
    UnitIdealStatus,
    domain_membership,
    presentation_norm_pair,
    sample_spectrum,
    validate_unit_ideal,
)
from .groebner import IdealBasis
from .polynomials import Poly
from .spectrum import DensitySpec, FiberPoint, inf_max
from .values import ExactValue, value_lt, value_mul


@dataclass(frozen=True)
class Covering:
    parent: AffinoidPresentation
    kind: str
    members: tuple[RationalDomainSpec, ...]
    generators: tuple[tuple[Poly, Fraction], ...]
    generator_dens: tuple[Poly | None, ...] = ()
    signs: tuple[tuple[int, ...], ...] = ()
    labels: tuple[str, ...] = ()
    unit_status: UnitIdealStatus | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("standard", "laurent", "custom"):
            raise ValueError(f"unknown covering kind {self.kind!r}")
        if not self.members:
            raise ValueError("a covering needs at least one member")
        if self.kind == "laurent" and len(self.members) != 2 ** len(self.generators):
            raise ValueError("laurent covering must have 2^n members")
        if self.labels and len(self.labels) != len(self.members):
            raise ValueError("one label per member")

    def label(self, i: int) -> str:
        if self.labels:
            return self.labels[i]
        return f"member{i}"

    def survivors(self, i: int) -> tuple[int, ...]:
        """Generator indices kept invertible on laurent member i (sign -1)."""
        if not self.signs:
            return ()
        return tuple(k for k, s in enumerate(self.signs[i]) if s < 0)

    def to_json_dict(self) -> dict:
        gens = []
        dens = self.generator_dens or (None,) * len(self.generators)
        for (f, rho), den in zip(self.generators, dens):
            entry = {"f": str(f), "rho": str(rho)}
            if den is not None:
                entry["den"] = str(den)
            gens.append(entry)
        return {
            "parent": self.parent.to_json_dict(),
            "kind": self.kind,
            "generators": gens,
            "members": [_member_json(m) for m in self.members],
            "signs": [list(s) for s in self.signs],
            "labels": list(self.labels),
            "unit_status": self.unit_status.value if self.unit_status else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json_dict(data: Mapping) -> "Covering":
        parent = AffinoidPresentation.from_json_dict(data["parent"])
        generators = []
        dens: list[Poly | None] = []
        for entry in data["generators"]:
            generators.append((parent.parse(entry["f"]), Fraction(entry["rho"])))
            dens.append(parent.parse(entry["den"]) if "den" in entry else None)
        members = tuple(_member_from_json(parent, m) for m in data["members"])
        status = data.get("unit_status")
        return Covering(
            parent,
            data["kind"],
            members,
            tuple(generators),
            tuple(dens),
            tuple(tuple(s) for s in data.get("signs", ())),
            tuple(data.get("labels", ())),
            UnitIdealStatus(status) if status else None,
        )

    @staticmethod
    def from_json(text: str) -> "Covering":
        return Covering.from_json_dict(json.loads(text))


def _member_json(m: RationalDomainSpec) -> dict:
    pairs = [{"f": str(m.f0), "rho": str(m.rho0)}]
    for c in m.conditions:
        entry = {"f": str(c.num), "rho": str(c.rho)}
        if c.den is not None:
            entry["den"] = str(c.den)
        if c.sign != 1:
            entry["sign"] = c.sign
        pairs.append(entry)
    return {"pairs": pairs, "check_unit_ideal": m.check_unit_ideal}


def _member_from_json(parent: AffinoidPresentation, data: Mapping) -> RationalDomainSpec:
    pairs = data["pairs"]
    conditions = tuple(
        DomainCondition(
            parent.parse(e["f"]),
            Fraction(e["rho"]),
            parent.parse(e["den"]) if "den" in e else None,
            int(e.get("sign", 1)),
        )
        for e in pairs[1:]
    )
    return RationalDomainSpec(
        parent,
        parent.parse(pairs[0]["f"]),
        Fraction(pairs[0]["rho"]),
        conditions,
        None,
        bool(data.get("check_unit_ideal", True)),
    )


def _one(parent: AffinoidPresentation) -> Poly:
    return Poly.constant(parent.base, 1, parent.variable_names)


def whole_space(parent: AffinoidPresentation) -> RationalDomainSpec:
    return RationalDomainSpec(parent, _one(parent), Fraction(1), (), None, False)


# -- constructions --------------------------------------------------------------


def standard_covering(
    parent: AffinoidPresentation,
    pairs: Sequence[tuple[Poly | str, Fraction | int]],
    certificate: Sequence[Poly | str] | None = None,
) -> Covering:
    """Member i is D(f_i, rho_i | every other pair).

    The generators must span the unit ideal; a definite failure raises,
    an indeterminate answer (integers without certificate) is recorded
    on the covering.
    """
    polys = [
        (parent.parse(f) if isinstance(f, str) else f.in_variables(parent.variable_names),
         Fraction(r))
        for f, r in pairs
    ]
    if not polys:
        raise ValueError("a standard covering needs at least one pair")
    cert = None
    if certificate is not None:
        cert = tuple(
            parent.parse(c) if isinstance(c, str) else c.in_variables(parent.variable_names)
            for c in certificate
        )
    status = validate_unit_ideal([f for f, _ in polys], parent, cert)
    if status is UnitIdealStatus.FALSE:
        raise ValueError("generators do not span the unit ideal")
    members = []
    for i, (f, rho) in enumerate(polys):
        conditions = tuple(
            DomainCondition(g, tau) for j, (g, tau) in enumerate(polys) if j != i
        )
        members.append(RationalDomainSpec(parent, f, rho, conditions, None, False))
    return Covering(
        parent,
        "standard",
        tuple(members),
        tuple(polys),
        (),
        (),
        tuple(f"U{i}" for i in range(len(polys))),
        status,
    )


def laurent_covering(
    parent: AffinoidPresentation,
    pairs: Sequence[tuple[Poly | str, Fraction | int]],
) -> Covering:
    """2^n members over sign vectors; no unit-ideal requirement."""
    polys = [
        (parent.parse(f) if isinstance(f, str) else f.in_variables(parent.variable_names),
         Fraction(r))
        for f, r in pairs
    ]
    one = _one(parent)
    members = []
    signs = []
    labels = []
    for sign_vector in itertools.product((1, -1), repeat=len(polys)):
        conditions = tuple(
            DomainCondition(f, rho, None, s)
            for (f, rho), s in zip(polys, sign_vector)
        )
        members.append(RationalDomainSpec(parent, one, Fraction(1), conditions, None, False))
        signs.append(sign_vector)
        labels.append("".join("+" if s > 0 else "-" for s in sign_vector) or "all")
    return Covering(
        parent, "laurent", tuple(members), tuple(polys), (), tuple(signs), tuple(labels)
    )


def ratio_laurent_covering(
    parent: AffinoidPresentation,
    pairs: Sequence[tuple[Poly, Fraction]],
) -> Covering:
    """Laurent covering on the n(n-1)/2 ratio pairs (f_i/f_j, rho_i/rho_j), i < j."""
    one = _one(parent)
    ratio_pairs = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            fi, ri = pairs[i]
            fj, rj = pairs[j]
            ratio_pairs.append((fi, fj, ri / rj))
    members = []
    signs = []
    labels = []
    for sign_vector in itertools.product((1, -1), repeat=len(ratio_pairs)):
        conditions = tuple(
            DomainCondition(num, rho, den, s)
            for (num, den, rho), s in zip(ratio_pairs, sign_vector)
        )
        members.append(RationalDomainSpec(parent, one, Fraction(1), conditions, None, False))
        signs.append(sign_vector)
        labels.append("".join("+" if s > 0 else "-" for s in sign_vector) or "all")
    return Covering(
        parent,
        "laurent",
        tuple(members),
        tuple((num, rho) for num, _, rho in ratio_pairs),
        tuple(den for _, den, _ in ratio_pairs),
        tuple(signs),
        tuple(labels),
    )


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class CoveringReport:
    ok: bool
    checked: int
    witness: str | None = None

    def to_json_dict(self) -> dict:
        out = {"ok": self.ok, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_is_covering(
    cov: Covering,
    points: Sequence[FiberPoint] | None = None,
    density: DensitySpec = DensitySpec(),
) -> CoveringReport:
    """Every sampled point must land in at least one member."""
    if points is None:
        points = sample_spectrum(cov.parent, density)
    for x in points:
        if not any(domain_membership(x, m) for m in cov.members):
            return CoveringReport(False, len(points), x.label())
    return CoveringReport(True, len(points))


@dataclass(frozen=True)
class RefinementCheck:
    ok: bool
    checked: int
    assignment: tuple[int | None, ...]
    witness: str | None = None

    def to_json_dict(self) -> dict:
        out = {
            "ok": self.ok,
            "checked": self.checked,
            "assignment": list(self.assignment),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_refinement(
    fine: Covering,
    coarse: Covering,
    points: Sequence[FiberPoint] | None = None,
    density: DensitySpec = DensitySpec(),
) -> RefinementCheck:
    """For each fine member, some single coarse member holds all its points."""
    if fine.parent.base is not coarse.parent.base:
        raise ValueError("coverings live over different bases")
    if points is None:
        points = sample_spectrum(fine.parent, density)
    assignment: list[int | None] = []
    for vi, v in enumerate(fine.members):
        inside = [x for x in points if domain_membership(x, v)]
        if not inside:
            assignment.append(None)
            continue
        target = None
        for ui, u in enumerate(coarse.members):
            if all(domain_membership(x, u) for x in inside):
                target = ui
                break
        if target is None:
            return RefinementCheck(
                False,
                len(points),
                tuple(assignment) + (None,) * (len(fine.members) - vi),
                f"{fine.label(vi)} not inside any single coarse member"
                f" ({len(inside)} samples, e.g. {inside[0].label()})",
            )
        assignment.append(target)
    return RefinementCheck(True, len(points), tuple(assignment))


# -- refinement lemma: rational to Laurent ---------------------------------------


@dataclass(frozen=True)
class LaurentRefinement:
    c: Fraction
    covering: Covering
    survivors: tuple[tuple[int, ...], ...]
    source_pairs: tuple[tuple[Poly, Fraction], ...]
    rounds: int
    verified_points: int
    ok: bool
    witness: str | None = None

    def to_json_dict(self) -> dict:
        out = {
            "c": str(self.c),
            "rounds": self.rounds,
            "verified_points": self.verified_points,
            "ok": self.ok,
            "survivors": [list(s) for s in self.survivors],
            "covering": self.covering.to_json_dict(),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def rows(self) -> list[tuple[str, str, int]]:
        """(member, surviving generators, points checked) table for reports."""
        out = []
        for i in range(len(self.covering.members)):
            surv = ",".join(str(k) for k in self.survivors[i]) or "-"
            out.append((self.covering.label(i), surv, self.verified_points))
        return out


def _alpha_exceeds(
    pairs: Sequence[tuple[Poly, Fraction]],
    x: FiberPoint,
    parent: AffinoidPresentation,
    inv_c: Fraction,
) -> bool:
    """Does max_i rho_i^-1 |f_i(x)| strictly exceed 1/c?"""
    for f, rho in pairs:
        num, den = presentation_norm_pair(f, x, parent)
        # |f(x)| > rho/c cross-multiplied through the clearing denominator.
        if value_lt(value_mul(ExactValue.rational(rho * inv_c), den), num):
            return True
    return False


def refine_rational_to_laurent(
    cov: Covering,
    points: Sequence[FiberPoint] | None = None,
    density: DensitySpec = DensitySpec(),
    max_retries: int = 8,
) -> LaurentRefinement:
    """Laurent covering generated by (f_i, rho_i / c) refining a standard one.

    c starts at the smallest power of two at or above 2 / inf_max and
    doubles (up to max_retries times) whenever a sampled point has
    max_i rho_i^-1 |f_i(x)| <= 1/c, which would leave the all-plus
    member without a surviving generator.
    """
    if cov.kind != "standard":
        raise ValueError("refinement starts from a standard covering")
    parent = cov.parent
    if points is None:
        points = sample_spectrum(parent, density)
    pairs = cov.generators

    if len(pairs) == 1:
        refined = laurent_covering(parent, ())
        return LaurentRefinement(
            Fraction(2), refined, ((),), pairs, 0, len(points), True
        )

    fs = [f for f, _ in pairs]
    rhos = [rho for _, rho in pairs]
    estimate = inf_max(fs, rhos, parent.base, parent.free_radius_map(), density)
    if estimate.exact_zero or estimate.value <= 0.0:
        raise ValueError("generators share a sampled common zero; not a covering")
    target = 2.0 / estimate.value
    c = Fraction(1)
    while float(c) < target:
        c *= 2
    while float(c / 2) >= target:
        c /= 2

    rounds = 0
    while True:
        rounds += 1
        bad = None
        for x in points:
            if not _alpha_exceeds(pairs, x, parent, 1 / c):
                bad = x
                break
        refined = laurent_covering(parent, [(f, rho / c) for f, rho in pairs])
        survivors = tuple(refined.survivors(i) for i in range(len(refined.members)))
        if bad is None:
            return LaurentRefinement(c, refined, survivors, pairs, rounds, len(points), True)
        if rounds > max_retries:
            return LaurentRefinement(
                c, refined, survivors, pairs, rounds, len(points), False,
                f"max rho_i^-1 |f_i| <= 1/c at {bad.label()} after {max_retries} retries",
            )
        c *= 2


def surviving_generator_check(
    refinement: LaurentRefinement,
    points: Sequence[FiberPoint] | None = None,
    density: DensitySpec = DensitySpec(),
) -> CoveringReport:
    """On each member, every sampled point's max is achieved past 1/c by a survivor.

    Mirrors the refinement lemma's display: eliminated indices obey
    rho_i^-1 |f_i(x)| <= c^-1 < max over surviving j.
    """
    cov = refinement.covering
    parent = cov.parent
    if points is None:
        points = sample_spectrum(parent, density)
    inv_c = 1 / refinement.c
    for i, member in enumerate(cov.members):
        surviving = [refinement.source_pairs[k] for k in refinement.survivors[i]]
        if not cov.generators:
            # zero-pair covering: nothing was eliminated, nothing to certify
            continue
        for x in points:
            if not domain_membership(x, member):
                continue
            if not surviving:
                return CoveringReport(
                    False, len(points),
                    f"{cov.label(i)} contains {x.label()} but keeps no generator",
                )
            if not _alpha_exceeds(surviving, x, parent, inv_c):
                return CoveringReport(
                    False, len(points),
                    f"no surviving generator exceeds 1/c at {x.label()} in {cov.label(i)}",
                )
    return CoveringReport(True, len(points))


# -- refinement lemma: unit covering to Laurent -----------------------------------


def _verify_inverse(parent: AffinoidPresentation, f: Poly, witness: Poly | str) -> None:
    """Check f * w = 1 modulo the parent relations (rational normal form)."""
    if isinstance(witness, str):
        for sub in parent.substitutions:
            if sub.var == witness:
                num, den = sub.num, sub.den
                if num.is_constant() and num.constant_value() == 1 and _same_poly(den, f):
                    return
        raise ValueError(f"variable {witness!r} is not a localization inverse of {f}")
    product = f * witness.in_variables(_union_names(f.variables, witness.used_variables()))
    combo = product - Poly.constant(f.ring, 1, product.variables)
    if combo.is_zero:
        return
    if parent.relations:
        ideal = IdealBasis.build(
            parent.relations, _union_names(parent.variable_names, combo.used_variables())
        )
        if ideal.contains(combo):
            return
    raise ValueError(f"supplied inverse fails: {f} * {witness} != 1 modulo relations")


def _same_poly(a: Poly, b: Poly) -> bool:
    names = _union_names(a.used_variables(), b.used_variables())
    return (a.in_variables(names) - b.in_variables(names)).is_zero


def _union_names(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    out = list(a)
    for n in b:
        if n not in out:
            out.append(n)
    return tuple(out)


def refine_units_to_laurent(
    cov: Covering,
    inverses: Sequence[Poly | str],
) -> Covering:
    """Laurent covering on ratio pairs refining a standard covering by units.

    Every generator needs an invertibility witness: either an inverse
    polynomial (f * w = 1 modulo relations) or the name of a
    localization variable of the parent presentation.
    """
    if cov.kind != "standard":
        raise ValueError("the unit refinement starts from a standard covering")
    if len(inverses) != len(cov.generators):
        raise ValueError("one invertibility witness per generator")
    for (f, _), w in zip(cov.generators, inverses):
        _verify_inverse(cov.parent, f, w)
    return ratio_laurent_covering(cov.parent, cov.generators)
