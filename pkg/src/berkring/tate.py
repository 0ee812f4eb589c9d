"""Cech complexes of finite coverings and exactness verification.

Everything here works over trivially valued rationals with unit radii,
where member algebras are honest finitely presented Q-algebras and
restriction maps are variable inclusions followed by normal forms.  The
complex of a covering U_1..U_n of Spec-like X is

    0 -> A -> prod_i O(U_i) -> prod_{i<j} O(U_ij)

with d0 the restrictions and d1 the pairwise differences.  Exactness is
checked degree-by-degree: linear algebra over the standard monomials of
each algebra up to a degree bound, with the preimage search allowed a
larger bound D' = D * max(1, max relation degree) since normal forms
can collapse high-degree parent elements onto low-degree members.

Adjoined variables are named consistently across members through a
registry keyed by the defining inequality, so intersection algebras are
presented by concatenating relation sets and sharing variables, exactly
as localizations compose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ._linalg import nullspace, solve_in_column_space
from .affinoid import (
    AffinoidPresentation,
    DomainCondition,
    RationalDomainSpec,
    domain_membership,
    rational_domain_algebra,
    sample_spectrum,
)
from .coverings import Covering
from .groebner import IdealBasis, grevlex_key, normal_form
from .polynomials import Poly
from .rings import BaseRing
from .spectrum import DensitySpec, FiberPoint, eval_point
from .values import ExactValue

__all__ = [
    "CechComplex",
    "ExactnessReport",
    "IdealBasis",
    "cech_complex",
    "check_exactness",
    "drop_member",
    "localization_isomorphism_check",
    "normal_form",
    "numeric_injectivity_check",
    "strict_localization_check",
]


def _condition_key(c: DomainCondition) -> tuple:
    return (str(c.num), str(c.rho), str(c.den) if c.den is not None else "", c.sign)


def _normalized_conditions(m: RationalDomainSpec) -> tuple[DomainCondition, ...]:
    """Rewrite D(f0,rho0 | ...) with all inequalities relative to f0 = 1."""
    if m.f0.is_constant() and m.f0.constant_value() == 1 and m.rho0 == 1:
        return m.conditions
    out = []
    for c in m.conditions:
        if c.den is not None or c.sign != 1:
            raise ValueError("cannot normalize a member mixing f0 with ratio pairs")
        out.append(DomainCondition(c.num, c.rho / m.rho0, m.f0, 1))
    return tuple(out)


@dataclass(frozen=True)
class CechComplex:
    parent: AffinoidPresentation
    covering: Covering
    level0: AffinoidPresentation
    level1: tuple[AffinoidPresentation, ...]
    level2: tuple[AffinoidPresentation, ...]
    pairs: tuple[tuple[int, int], ...]
    ideal0: IdealBasis
    ideals1: tuple[IdealBasis, ...]
    ideals2: tuple[IdealBasis, ...]

    def member_count(self) -> int:
        return len(self.level1)


def _registry_names(cov: Covering) -> dict[tuple, str]:
    """Stable adjoined-variable name per distinct inequality across members."""
    taken = set(cov.parent.variable_names)
    names: dict[tuple, str] = {}
    for m in cov.members:
        for c in _normalized_conditions(m):
            key = _condition_key(c)
            if key in names:
                continue
            stem = "X" if c.sign == 1 else "Y"
            k = sum(1 for v in names.values() if v.lstrip("_").startswith(stem)) + 1
            name = f"{stem}{k}"
            while name in taken:
                name = "_" + name
            names[key] = name
            taken.add(name)
    return names


def _member_algebra(
    cov: Covering, conditions: Sequence[DomainCondition], registry: Mapping[tuple, str]
) -> AffinoidPresentation:
    one = Poly.constant(cov.parent.base, 1, cov.parent.variable_names)
    spec = RationalDomainSpec(
        cov.parent, one, Fraction(1), tuple(conditions), None, False
    )
    names = [registry[_condition_key(c)] for c in conditions]
    return rational_domain_algebra(spec, names)


def cech_complex(parent: AffinoidPresentation, cov: Covering) -> CechComplex:
    """Assemble levels 0..2 of the covering's complex over Q_triv, radii 1.

    Level-2 algebras concatenate the two members' inequality sets, with
    duplicate inequalities merged so restrictions are plain inclusions.
    """
    if cov.parent != parent:
        raise ValueError("covering does not live over the given presentation")
    if parent.base is not BaseRing.Q_TRIV:
        raise ValueError("Cech checks need the trivially valued rational base")
    if any(v.radius != 1 for v in parent.vars):
        raise ValueError("Cech checks need unit radii on the parent")

    member_conditions = []
    for m in cov.members:
        conds = _normalized_conditions(m)
        if any(c.rho != 1 for c in conds):
            raise ValueError("Cech checks need unit radii on every member pair")
        member_conditions.append(conds)

    registry = _registry_names(cov)
    level1 = tuple(_member_algebra(cov, conds, registry) for conds in member_conditions)

    pairs = []
    level2 = []
    for i in range(len(level1)):
        for j in range(i + 1, len(level1)):
            merged: list[DomainCondition] = []
            seen = set()
            for c in member_conditions[i] + member_conditions[j]:
                key = _condition_key(c)
                if key in seen:
                    continue
                seen.add(key)
                merged.append(c)
            pairs.append((i, j))
            level2.append(_member_algebra(cov, merged, registry))

    ideal0 = IdealBasis.build(parent.relations, parent.variable_names)
    ideals1 = tuple(
        IdealBasis.build(a.relations, a.variable_names) for a in level1
    )
    ideals2 = tuple(
        IdealBasis.build(a.relations, a.variable_names) for a in level2
    )
    return CechComplex(
        parent, cov, parent, level1, tuple(level2), tuple(pairs), ideal0, ideals1, ideals2
    )


def drop_member(cx: CechComplex, index: int) -> CechComplex:
    """Deliberately broken complex: remove one level-1 member, keep level 2."""
    keep = [i for i in range(len(cx.level1)) if i != index]
    remap = {old: new for new, old in enumerate(keep)}
    pairs = tuple(
        (remap.get(i, -1), remap.get(j, -1)) for i, j in cx.pairs
    )
    return CechComplex(
        cx.parent,
        cx.covering,
        cx.level0,
        tuple(cx.level1[i] for i in keep),
        cx.level2,
        pairs,
        cx.ideal0,
        tuple(cx.ideals1[i] for i in keep),
        cx.ideals2,
    )


# -- degree-by-degree linear algebra --------------------------------------------


def _std_monomials(ideal: IdealBasis, bound: int) -> tuple[list[tuple], dict[tuple, int]]:
    mons = sorted(ideal.monomial_basis(bound), key=grevlex_key)
    return mons, {m: i for i, m in enumerate(mons)}


def _nf_vector(
    p: Poly, ideal: IdealBasis, index: dict[tuple, int], dim: int
) -> list[Fraction]:
    nf = ideal.normal_form(p)
    row = [Fraction(0)] * dim
    for exp, coeff in nf.terms:
        row[index[exp]] += coeff
    return row


def _monomial_poly(exp: tuple, variables: tuple[str, ...]) -> Poly:
    return Poly.from_dict(BaseRing.Q_TRIV, variables, {exp: Fraction(1)})


@dataclass(frozen=True)
class StageResult:
    stage: str
    status: str
    witness: str | None = None


@dataclass(frozen=True)
class ExactnessReport:
    degree_bound: int
    preimage_bound: int
    stages: tuple[StageResult, ...]

    @property
    def exact(self) -> bool:
        return all(s.status == "exact" for s in self.stages)

    def failing_stage(self) -> StageResult | None:
        for s in self.stages:
            if s.status != "exact":
                return s
        return None

    def to_json_dict(self) -> dict:
        bad = self.failing_stage()
        out: dict = {
            "stage": bad.stage if bad else "all",
            "degree_bound": self.degree_bound,
            "status": "failure" if bad else "exact",
        }
        if bad and bad.witness:
            out["witness"] = bad.witness
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _restriction_matrix(
    source_mons: list[tuple],
    source_vars: tuple[str, ...],
    targets: Sequence[tuple[IdealBasis, dict[tuple, int], int]],
) -> list[list[Fraction]]:
    """Columns: source standard monomials; rows: stacked target coordinates."""
    total_rows = sum(dim for _, _, dim in targets)
    cols = []
    for exp in source_mons:
        p = _monomial_poly(exp, source_vars)
        col: list[Fraction] = []
        for ideal, index, dim in targets:
            col.extend(_nf_vector(p.in_variables(ideal.variables), ideal, index, dim))
        cols.append(col)
    return [[cols[c][r] for c in range(len(cols))] for r in range(total_rows)]


def check_exactness(cx: CechComplex, degree_bound: int = 6) -> ExactnessReport:
    """Verify the complex is exact at levels 0 and 1 up to the degree bound.

    Stages: the composite d1 d0 vanishes, d0 is injective, every d1
    kernel vector is a d0 image (preimages searched up to the larger
    bound D'), and, when the covering has exactly one intersection, d1
    hits every intersection element (the sequence genuinely ends there).
    A failure carries a witness element.
    """
    D = degree_bound
    max_rel_deg = 1
    for alg in list(cx.level1) + list(cx.level2):
        for r in alg.relations:
            max_rel_deg = max(max_rel_deg, r.total_degree())
    Dp = D * max_rel_deg

    p_mons_D, _ = _std_monomials(cx.ideal0, D)
    p_mons_Dp, _ = _std_monomials(cx.ideal0, Dp)
    m_data_D = []
    m_data_Dp = []
    for ideal in cx.ideals1:
        mons, index = _std_monomials(ideal, D)
        m_data_D.append((ideal, mons, index))
        mons_p, index_p = _std_monomials(ideal, Dp)
        m_data_Dp.append((ideal, mons_p, index_p))
    pair_data_D = []
    for ideal in cx.ideals2:
        mons, index = _std_monomials(ideal, D)
        pair_data_D.append((ideal, mons, index))

    stages: list[StageResult] = []

    # Stage 1: d1 d0 = 0 on parent monomials up to D.  The restriction
    # of p into the intersection through member i is NF_i(p) re-read in
    # the intersection's variables; the two routes must agree there.
    witness = None
    for exp in p_mons_D:
        p = _monomial_poly(exp, cx.parent.variable_names)
        for (i, j), (ideal, _, _) in zip(cx.pairs, pair_data_D):
            zero = Poly.constant(BaseRing.Q_TRIV, 0, cx.parent.variable_names)
            via_i = (
                cx.ideals1[i].normal_form(p.in_variables(cx.ideals1[i].variables))
                if i >= 0
                else zero
            )
            via_j = (
                cx.ideals1[j].normal_form(p.in_variables(cx.ideals1[j].variables))
                if j >= 0
                else zero
            )
            diff = via_j.in_variables(ideal.variables) - via_i.in_variables(ideal.variables)
            if not ideal.normal_form(diff).is_zero:
                witness = f"{p} maps to a nonzero difference on pair ({i},{j})"
                break
        if witness:
            break
    stages.append(StageResult("composite", "failure" if witness else "exact", witness))

    # Stage 2: injectivity of d0 on degrees <= D.
    targets_D = [(ideal, index, len(mons)) for ideal, mons, index in m_data_D]
    M0 = _restriction_matrix(p_mons_D, cx.parent.variable_names, targets_D)
    kernel0 = nullspace(M0) if p_mons_D else []
    if kernel0:
        vec = kernel0[0]
        terms = {exp: c for exp, c in zip(p_mons_D, vec) if c != 0}
        poly = Poly.from_dict(BaseRing.Q_TRIV, cx.parent.variable_names, terms)
        stages.append(
            StageResult("injectivity", "failure", f"{poly} restricts to zero everywhere")
        )
    else:
        stages.append(StageResult("injectivity", "exact"))

    # Stage 3: ker d1 = im d0 up to D (preimages up to D').
    offsets_D = []
    total = 0
    for _, mons, _ in m_data_D:
        offsets_D.append(total)
        total += len(mons)
    rows2 = sum(len(mons) for _, mons, _ in pair_data_D)
    M1 = [[Fraction(0)] * total for _ in range(rows2)]
    pair_offsets = []
    acc = 0
    for _, mons, _ in pair_data_D:
        pair_offsets.append(acc)
        acc += len(mons)
    for mi, (ideal_i, mons_i, _) in enumerate(m_data_D):
        alg_vars = cx.level1[mi].variable_names
        for ci, exp in enumerate(mons_i):
            col = offsets_D[mi] + ci
            p = _monomial_poly(exp, alg_vars)
            for pi, ((a, b), (ideal_ab, _, _)) in enumerate(zip(cx.pairs, pair_data_D)):
                if mi not in (a, b):
                    continue
                sign = 1 if mi == b else -1
                vec = _nf_vector(
                    p.in_variables(ideal_ab.variables),
                    ideal_ab,
                    pair_data_D[pi][2],
                    len(pair_data_D[pi][1]),
                )
                base = pair_offsets[pi]
                for r, c in enumerate(vec):
                    if c:
                        M1[base + r][col] += sign * c

    kernel1 = nullspace(M1) if total else []
    targets_Dp = [(ideal, index, len(mons)) for ideal, mons, index in m_data_Dp]
    M0p = _restriction_matrix(p_mons_Dp, cx.parent.variable_names, targets_Dp)
    offsets_Dp = []
    total_p = 0
    for _, mons, _ in m_data_Dp:
        offsets_Dp.append(total_p)
        total_p += len(mons)

    middle_witness = None
    for vec in kernel1:
        target = [Fraction(0)] * total_p
        for mi, (_, mons_i, _) in enumerate(m_data_D):
            index_p = m_data_Dp[mi][2]
            for ci, exp in enumerate(mons_i):
                c = vec[offsets_D[mi] + ci]
                if c:
                    target[offsets_Dp[mi] + index_p[exp]] += c
        if solve_in_column_space(M0p, target) is None:
            parts = []
            for mi, (_, mons_i, _) in enumerate(m_data_D):
                terms = {
                    exp: vec[offsets_D[mi] + ci]
                    for ci, exp in enumerate(mons_i)
                    if vec[offsets_D[mi] + ci] != 0
                }
                if terms:
                    poly = Poly.from_dict(
                        BaseRing.Q_TRIV, cx.level1[mi].variable_names, terms
                    )
                    parts.append(f"member {mi}: {poly}")
            middle_witness = (
                "cocycle with no preimage up to degree "
                f"{Dp} ({'; '.join(parts) or 'zero tuple'})"
            )
            break
    stages.append(
        StageResult("middle", "failure" if middle_witness else "exact", middle_witness)
    )

    # Stage 4: with a single intersection the sequence ends there, so d1
    # must hit every element of it (preimages up to D').  The image side
    # is coordinatized at D' as well: a preimage found in a projection
    # would prove nothing.
    if len(cx.ideals2) == 1:
        ideal_ab = cx.ideals2[0]
        mons_ab_p, index_ab_p = _std_monomials(ideal_ab, Dp)
        rows = len(mons_ab_p)
        cols_total = sum(len(mons) for _, mons, _ in m_data_Dp)
        M1p = [[Fraction(0)] * cols_total for _ in range(rows)]
        a, b = cx.pairs[0]
        col = 0
        for mi, (ideal_i, mons_i, _) in enumerate(m_data_Dp):
            alg_vars = cx.level1[mi].variable_names
            sign = 1 if mi == b else -1
            for exp in mons_i:
                if mi in (a, b):
                    p = _monomial_poly(exp, alg_vars)
                    vec = _nf_vector(
                        p.in_variables(ideal_ab.variables), ideal_ab, index_ab_p, rows
                    )
                    for r, c in enumerate(vec):
                        if c:
                            M1p[r][col] += sign * c
                col += 1
        surj_witness = None
        for exp in pair_data_D[0][1]:
            target = [Fraction(0)] * rows
            target[index_ab_p[exp]] = Fraction(1)
            if solve_in_column_space(M1p, target) is None:
                mon = _monomial_poly(exp, ideal_ab.variables)
                surj_witness = (
                    f"{mon} has no preimage up to degree {Dp}"
                    " (a local section, e.g. 1/f, is not hit)"
                )
                break
        stages.append(
            StageResult(
                "surjectivity", "failure" if surj_witness else "exact", surj_witness
            )
        )

    return ExactnessReport(D, Dp, tuple(stages))


# -- localization helpers ---------------------------------------------------------


def localization_isomorphism_check(parent: AffinoidPresentation, f: Poly | str) -> bool:
    """The inverted-pair algebra D(1,1 | f^-1, 1) is the localization at f.

    Its presentation adjoins Y with the relation f Y - 1, which is the
    localization presentation on the nose; the substantive checks are
    that f Y reduces to 1 and that Y (f Y) reduces back to Y.
    """
    f = parent.parse(f) if isinstance(f, str) else f
    one_p = Poly.constant(parent.base, 1, parent.variable_names)
    spec = RationalDomainSpec(
        parent, one_p, Fraction(1),
        (DomainCondition(f, Fraction(1), None, -1),), None, False,
    )
    alg = rational_domain_algebra(spec, ["Y"])
    ideal = IdealBasis.build(alg.relations, alg.variable_names)
    y = Poly.variable(alg.base, "Y", alg.variable_names)
    fa = f.in_variables(alg.variable_names)
    one = Poly.constant(alg.base, 1, alg.variable_names)
    if not ideal.normal_form(fa * y - one).is_zero:
        return False
    return ideal.normal_form(y * fa * y - y).is_zero


def strict_localization_check(d: RationalDomainSpec) -> bool:
    """Strict rational domains over Q_triv are localizations at f0.

    With a unit-ideal certificate a_i (sum a_i f_i = 1) the mutually
    inverse maps are phi: T_i -> f_i Y into A[Y]/(f0 Y - 1) and
    psi: Y -> a_0 + sum a_i T_i back.  Verifies both maps respect the
    relations and both composites are the identity, all by normal forms.
    """
    parent = d.parent
    if parent.base is not BaseRing.Q_TRIV:
        raise ValueError("localization collapse needs the Q_triv base")
    if not d.strict:
        raise ValueError("localization collapse needs all radii 1")
    if d.certificate is None:
        raise ValueError("needs a unit-ideal certificate")
    if any(c.den is not None or c.sign != 1 for c in d.conditions):
        raise ValueError("needs a plain pair list")

    n = len(d.conditions)
    taken = set(parent.variable_names)
    t_names = []
    for i in range(n):
        name = f"T{i + 1}"
        while name in taken:
            name = "_" + name
        t_names.append(name)
        taken.add(name)
    y_name = "Yloc"
    while y_name in taken:
        y_name = "_" + y_name

    alg = rational_domain_algebra(d, t_names)
    member_names = alg.variable_names
    member_ideal = IdealBasis.build(alg.relations, member_names)

    rab_names = parent.variable_names + (y_name,)
    y = Poly.variable(parent.base, y_name, rab_names)
    f0_r = d.f0.in_variables(rab_names)
    one_r = Poly.constant(parent.base, 1, rab_names)
    rab_relations = tuple(r.in_variables(rab_names) for r in parent.relations) + (
        f0_r * y - one_r,
    )
    rab_ideal = IdealBasis.build(rab_relations, rab_names)

    fs = [d.f0] + [c.num for c in d.conditions]
    # phi sends T_i to f_i Y; it must kill each member relation f0 T_i - f_i.
    for i in range(1, n + 1):
        image = f0_r * (fs[i].in_variables(rab_names) * y) - fs[i].in_variables(rab_names)
        if not rab_ideal.normal_form(image).is_zero:
            return False

    # psi sends Y to w = a_0 + sum a_i T_i; it must kill f0 Y - 1.
    w = None
    cert_m = [a.in_variables(member_names) for a in d.certificate]
    ts_m = [Poly.constant(parent.base, 1, member_names)] + [
        Poly.variable(parent.base, name, member_names) for name in t_names
    ]
    for a, t in zip(cert_m, ts_m):
        term = a * t
        w = term if w is None else w + term
    one_m = Poly.constant(parent.base, 1, member_names)
    if not member_ideal.normal_form(d.f0.in_variables(member_names) * w - one_m).is_zero:
        return False

    # psi(phi(T_i)) = f_i w must reduce to T_i in the member algebra.
    for i in range(1, n + 1):
        back = fs[i].in_variables(member_names) * w - ts_m[i]
        if not member_ideal.normal_form(back).is_zero:
            return False

    # phi(psi(Y)) = a_0 + sum a_i f_i Y must reduce to Y in A[Y]/(f0 Y - 1).
    w_phi = None
    cert_r = [a.in_variables(rab_names) for a in d.certificate]
    fs_r = [one_r] + [fs[i].in_variables(rab_names) * y for i in range(1, n + 1)]
    for a, t in zip(cert_r, fs_r):
        term = a * t
        w_phi = term if w_phi is None else w_phi + term
    return rab_ideal.normal_form(w_phi - y).is_zero


def numeric_injectivity_check(
    cov: Covering,
    polys: Sequence[Poly],
    points: Sequence[FiberPoint] | None = None,
    density: DensitySpec = DensitySpec(),
) -> tuple[bool, str | None]:
    """Sampled stand-in for injectivity over bases without field Groebner.

    Each nonzero test element must keep a nonzero value at some sampled
    point of some member, since restriction cannot grow zeros.
    """
    if points is None:
        points = sample_spectrum(cov.parent, density)
    for f in polys:
        if f.is_zero:
            continue
        alive = False
        for x in points:
            if not any(domain_membership(x, m) for m in cov.members):
                continue
            v = eval_point(f.in_variables(cov.parent.variable_names), x)
            nonzero = (not v.is_zero) if isinstance(v, ExactValue) else v != 0.0
            if nonzero:
                alive = True
                break
        if not alive:
            return False, f"{f} vanished on every sampled member point"
    return True, None
