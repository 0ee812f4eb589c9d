"""Affinoid presentations, rational domains and their membership tables."""

import json
import math
from dataclasses import replace
from fractions import Fraction as F

import pytest

from berkring.affinoid import (
    AffinoidPresentation,
    ChartIsometryReport,
    DaggerFamily,
    DomainCondition,
    RationalDomainSpec,
    Substitution,
    UnitIdealStatus,
    VarSpec,
    base_change,
    chart_isometry_check,
    clear_substitutions,
    dagger_profile,
    derive_substitutions,
    domain_membership,
    rational_domain_algebra,
    sample_spectrum,
    validate_unit_ideal,
)
from berkring.polynomials import LaurentPoly, parse_poly
from berkring.rings import BaseRing
from berkring.spectrum import DensitySpec, FiberPoint, GaussCoord, SpectrumPoint


ZA = BaseRing.Z_ARCH
ZT = BaseRing.Z_TRIV
QT = BaseRing.Q_TRIV


def bare(base):
    return AffinoidPresentation(base, ())


def disc(base, radius=F(1), name="T"):
    return AffinoidPresentation(base, (VarSpec(name, radius),))


def nonarch_points(primes=(2, 3), eps_list=(F(1, 2), F(1), F(3, 2), F(2))):
    pts = [SpectrumPoint("trivial")]
    for p in primes:
        pts.append(SpectrumPoint("residue", p))
        for eps in eps_list:
            pts.append(SpectrumPoint("padic", p, eps=eps))
    return pts


# -- presentations ------------------------------------------------------------


def test_presentation_validation():
    with pytest.raises(ValueError):
        AffinoidPresentation(QT, (VarSpec("T", F(1)), VarSpec("T", F(2))))
    with pytest.raises(ValueError):
        VarSpec("T", F(0))
    p = disc(QT)
    with pytest.raises(ValueError):
        replace(p, relations=(parse_poly("S", QT),))  # undeclared variable


def test_substitution_derivation():
    p = AffinoidPresentation(QT, (VarSpec("T", F(1)), VarSpec("S", F(3))))
    p = derive_substitutions(replace(p, relations=(p.parse("2*S - 1"),)))
    assert len(p.substitutions) == 1
    sub = p.substitutions[0]
    assert sub.var == "S"
    assert str(sub.num) == "1" and str(sub.den) == "2"
    assert p.free_relations() == ()
    assert p.substituted_names() == ("S",)


def test_substitution_sign_normalized():
    p = AffinoidPresentation(QT, (VarSpec("T", F(1)), VarSpec("S", F(1))))
    p = derive_substitutions(replace(p, relations=(p.parse("S^2 - T"),)))
    sub = p.substitutions[0]
    assert sub.var == "T"
    assert str(sub.num) == "S^2" and str(sub.den) == "1"


def test_clear_substitutions_composed():
    # adjoin X with T*X = 1 on the unit disc: X stands for 1/T
    p = disc(QT)
    p2 = AffinoidPresentation(
        QT, p.vars + (VarSpec("X", F(1)),)
    )
    p2 = derive_substitutions(replace(p2, relations=(p2.parse("T*X - 1"),)))
    num, den = clear_substitutions(p2.parse("X^2 + 1"), p2)
    # (1 + T^2) / T^2
    assert str(num) in ("T^2 + 1", "1 + T^2")
    assert str(den) == "T^2"
    assert num.variables == ("T",) and den.variables == ("T",)


def test_presentation_json_roundtrip():
    p = AffinoidPresentation(ZA, (VarSpec("T", F(1, 2)),), dagger=True)
    q = AffinoidPresentation.from_json(p.to_json())
    assert q == p
    data = json.loads(p.to_json())
    assert data["base"] == "Z_arch"
    assert data["vars"] == [{"name": "T", "rho": "1/2"}]
    assert data["dagger"] is True


# -- unit ideal ---------------------------------------------------------------


def test_unit_ideal_rational_field():
    p = disc(QT)
    assert validate_unit_ideal([p.parse("T"), p.parse("1 - T")], p) is UnitIdealStatus.TRUE
    assert validate_unit_ideal([p.parse("T"), p.parse("T^2")], p) is UnitIdealStatus.FALSE
    assert validate_unit_ideal([p.parse("3")], p) is UnitIdealStatus.TRUE


def test_unit_ideal_integer_base_three_valued():
    p = disc(ZT)
    # (2, T) is unit over Q but not over Z; without a certificate the
    # integer answer stays INDETERMINATE
    status = validate_unit_ideal([p.parse("2"), p.parse("T")], p)
    assert status is UnitIdealStatus.INDETERMINATE
    # a rational refutation is decisive in the negative
    assert validate_unit_ideal([p.parse("T"), p.parse("T^2")], p) is UnitIdealStatus.FALSE
    # unit constants are decisive in the positive
    assert validate_unit_ideal([p.parse("1"), p.parse("T")], p) is UnitIdealStatus.TRUE


def test_unit_ideal_certificate():
    p = disc(ZT)
    fs = [p.parse("T"), p.parse("1 - T")]
    cert = [p.parse("1"), p.parse("1")]
    assert validate_unit_ideal(fs, p, certificate=cert) is UnitIdealStatus.TRUE
    with pytest.raises(ValueError):
        validate_unit_ideal(fs, p, certificate=[p.parse("1"), p.parse("0")])


# -- worked rational domains ---------------------------------------------------


def p_adic_integers(p=2):
    """D(1, 1 | p, 1/p) over the trivially normed integers."""
    parent = bare(ZT)
    return RationalDomainSpec.from_pairs(parent, [("1", 1), (str(p), F(1, p))])


def test_z2_membership_table():
    d = p_adic_integers(2)
    expected = {
        "Trivial": False,
        "Residue(2)": True,
        "Residue(3)": False,
        "Padic(2,1/2)": False,
        "Padic(2,1)": True,
        "Padic(2,3/2)": True,
        "Padic(2,2)": True,
        "Padic(3,1/2)": False,
        "Padic(3,1)": False,
        "Padic(3,3/2)": False,
        "Padic(3,2)": False,
    }
    for pt in nonarch_points():
        x = FiberPoint.make(pt)
        assert domain_membership(x, d) == expected[pt.label()], pt.label()


def test_z2_algebra_presentation():
    d = p_adic_integers(2)
    alg = rational_domain_algebra(d)
    assert alg.base is ZT
    (t,) = alg.vars
    assert t.radius == F(1, 2)
    assert len(alg.relations) == 1
    # the relation pins the new variable to the generator: T - 2 = 0
    rel = alg.relations[0]
    assert rel.degree_in(t.name) == 1
    assert alg.substitutions and alg.substitutions[0].var == t.name


def test_q2_composed_over_z2():
    # invert 2 on the 2-adic disc: radius 3 localization variable
    z2 = rational_domain_algebra(p_adic_integers(2), var_names=("T",))
    d = RationalDomainSpec.from_pairs(z2, [("2", 1), ("1", 3)])
    q2 = rational_domain_algebra(d, var_names=("S",))
    # concatenated relation sets: the old one survives verbatim
    assert q2.relations[: len(z2.relations)] == z2.relations
    assert len(q2.relations) == len(z2.relations) + 1
    expected = {
        "Trivial": False,
        "Residue(2)": False,  # 2 is not invertible there
        "Padic(2,1/2)": False,
        "Padic(2,1)": True,
        "Padic(2,3/2)": True,  # 3/2 <= log2(3)
        "Padic(2,2)": False,
        "Padic(3,1)": False,
        "Residue(3)": False,
        "Padic(3,1/2)": False,
        "Padic(3,3/2)": False,
        "Padic(3,2)": False,
    }
    for pt in nonarch_points():
        x = FiberPoint.make(pt)
        assert domain_membership(x, d) == expected[pt.label()], pt.label()


def test_real_numbers_membership():
    # D(2, 1 | 1, 1/2) over the archimedean integers picks out |2| >= 2,
    # which holds exactly at the Ostrowski endpoint eps = 1
    parent = bare(ZA)
    d = RationalDomainSpec.from_pairs(parent, [("2", 1), ("1", F(1, 2))])
    assert domain_membership(FiberPoint.make(SpectrumPoint("arch", eps=F(1))), d)
    for eps in (F(1, 4), F(1, 2), F(3, 4), F(9, 10)):
        assert not domain_membership(
            FiberPoint.make(SpectrumPoint("arch", eps=eps)), d
        ), eps
    assert not domain_membership(FiberPoint.make(SpectrumPoint("trivial")), d)
    assert not domain_membership(FiberPoint.make(SpectrumPoint("padic", 2, eps=1)), d)


def test_domain_with_fiber_conditions():
    # |T| <= 1/2 inside the unit disc over Q_triv
    parent = disc(QT)
    d = RationalDomainSpec.from_pairs(parent, [("1", 1), ("T", F(1, 2))])
    inside = FiberPoint.make(SpectrumPoint("trivial"), {"T": GaussCoord(F(0), F(1, 4))})
    border = FiberPoint.make(SpectrumPoint("trivial"), {"T": GaussCoord(F(0), F(1, 2))})
    outside = FiberPoint.make(SpectrumPoint("trivial"), {"T": GaussCoord(F(0), F(1))})
    assert domain_membership(inside, d)
    assert domain_membership(border, d)  # non-strict inequalities
    assert not domain_membership(outside, d)


def test_strictness():
    parent = disc(QT)
    assert RationalDomainSpec.from_pairs(parent, [("1", 1), ("T", 1)]).strict
    assert not RationalDomainSpec.from_pairs(parent, [("1", 1), ("T", F(1, 2))]).strict


def test_domain_spec_json_roundtrip():
    d = p_adic_integers(3)
    d2 = RationalDomainSpec.from_json(d.to_json())
    assert d2.parent == d.parent
    assert d2.f0 == d.f0
    assert d2.conditions == d.conditions


# -- algebra handling of inverted pairs -----------------------------------------


def test_inverted_pair_algebra():
    parent = disc(QT)
    t = parent.parse("T")
    d = RationalDomainSpec(
        parent,
        parent.parse("1"),
        F(1),
        (DomainCondition(t, F(1), None, -1),),
        None,
        False,
    )
    alg = rational_domain_algebra(d, var_names=("Y",))
    y = [v for v in alg.vars if v.name == "Y"][0]
    assert y.radius == F(1)
    rel = alg.relations[-1]
    # T*Y - 1
    assert rel == alg.parse("T*Y - 1")


# -- sampling over presentations -------------------------------------------------


def test_sample_spectrum_uses_free_radii():
    z2 = rational_domain_algebra(p_adic_integers(2), var_names=("T",))
    pts = sample_spectrum(z2, DensitySpec())
    assert pts
    # the adjoined variable is bound by its substitution: no coordinates needed
    assert all(len(x.coords) == 0 for x in pts)


def test_sample_spectrum_rejects_free_relations():
    p = AffinoidPresentation(QT, (VarSpec("T", F(1)), VarSpec("S", F(1))))
    p = replace(p, relations=(p.parse("T^2 + S^2 - 1"),))
    with pytest.raises(ValueError):
        sample_spectrum(p, DensitySpec())


# -- base change ------------------------------------------------------------------


def test_base_change_directions():
    p = disc(ZA, F(1, 2))
    q = base_change(p, ZT)
    assert q.base is ZT and q.vars == p.vars
    r = base_change(q, QT)
    assert r.base is QT
    assert base_change(p, ZA) == p  # identity
    with pytest.raises(ValueError):
        base_change(r, ZA)  # no way back up


def test_base_change_moves_spectral_norm():
    from berkring.spectrum import spectral_norm

    p = disc(ZA)
    f = p.parse("1 + T")
    assert math.isclose(spectral_norm(f, {"T": 1}), 2.0, rel_tol=1e-9)
    q = base_change(p, ZT)
    fz = q.parse("1 + T")
    assert math.isclose(spectral_norm(fz, {"T": 1}), 1.0, rel_tol=1e-12)


# -- dagger families ---------------------------------------------------------------


def test_dagger_schedule():
    fam = DaggerFamily.make({"T": F(1, 2)}, levels=4)
    sched = fam.schedule()
    assert len(sched) == 5  # level 0 is the outermost radius, then 4 shrink steps
    for nu in sched:
        assert nu["T"] > F(1, 2)
    values = [nu["T"] for nu in sched]
    assert values == sorted(values, reverse=True)


def test_dagger_profile_monotone():
    f = parse_poly("1 + 3*T^2", ZA)
    fam = DaggerFamily.make({"T": F(1)}, levels=5)
    profile = dagger_profile(f, fam)
    assert list(profile) == sorted(profile, reverse=True)
    assert profile[-1] >= 4  # l1 at radius 1 is the floor


# -- chart isometry -----------------------------------------------------------------


def test_chart_isometry_small():
    h = LaurentPoly.from_dict(ZA, "T", {-1: 1, 0: 2, 1: 1})
    rep = chart_isometry_check(h, samples=16)
    assert isinstance(rep, ChartIsometryReport)
    assert rep.samples >= 16
    assert rep.max_discrepancy < 1e-9


def test_chart_isometry_pure_power():
    h = LaurentPoly.from_dict(ZA, "T", {3: 5})
    rep = chart_isometry_check(h, samples=8)
    assert rep.max_discrepancy < 1e-12
