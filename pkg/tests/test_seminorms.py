"""Weighted norms, uniformization, residue and tensor bounds."""

import math
from fractions import Fraction as F

import pytest

from berkring.graded import CoeffVector, GradedSet
from berkring.polynomials import Poly, parse_poly
from berkring.rings import BaseRing, Domain, base_norm_eval
from berkring.seminorms import (
    QuotientClass,
    QuotientPresentation,
    poly_l1,
    poly_linf,
    poly_trivial_gauss,
    projective_tensor_bound,
    residue_l1_norm,
    residue_seminorm_bound,
    seminorm_axiom_report,
    uniformization_estimate,
)


Q = BaseRing.Q_TRIV
ZA = BaseRing.Z_ARCH


def test_poly_norms_concrete():
    f = parse_poly("1 + 2*T + 2*T^2", ZA)
    assert poly_l1(f, {"T": 1}) == 5
    assert poly_linf(f, {"T": 1}) == 2
    assert poly_l1(f, {"T": F(1, 2)}) == F(5, 2)
    assert poly_trivial_gauss(f, {"T": F(1, 2)}) == 1
    assert poly_trivial_gauss(f, {"T": F(1, 3)}) == F(1)
    g = parse_poly("T^2", ZA)
    assert poly_trivial_gauss(g, {"T": F(1, 2)}) == F(1, 4)


def test_poly_norm_requires_radius():
    f = parse_poly("T + S", Q)
    with pytest.raises(ValueError):
        poly_l1(f, {"T": 1})


def test_gauss_multiplicativity_trivial_base():
    # over a trivially valued base the sup norm is multiplicative
    f = parse_poly("1 + T", Q)
    g = parse_poly("1 - T + T^2", Q)
    r = {"T": F(2, 3)}
    assert poly_trivial_gauss(f * g, r) == poly_trivial_gauss(f, r) * poly_trivial_gauss(g, r)


def test_l1_submultiplicative_arch():
    f = parse_poly("3 - T", ZA)
    g = parse_poly("2*T^2 + 1", ZA)
    for rho in (F(1, 2), F(1), F(2)):
        r = {"T": rho}
        assert poly_l1(f * g, r) <= poly_l1(f, r) * poly_l1(g, r)


# -- uniformization -----------------------------------------------------------


def test_uniformization_power_multiplicative_base_is_identity():
    for ring in (ZA, BaseRing.Z_TRIV):
        for a in (-3, -1, 2, 7):
            rep = uniformization_estimate(a, lambda v: base_norm_eval(ring, v), n_max=16)
            assert rep.exact_limit == base_norm_eval(ring, a)
            assert all(v == base_norm_eval(ring, a) ** n for n, v in rep.exact_sequence)


def test_uniformization_monotone_and_limit():
    # || (1+T)^n ||_1^(1/n) decreases to the spectral value 2
    f = parse_poly("1 + T", ZA)
    rep = uniformization_estimate(f, lambda g: poly_l1(g, {"T": 1}), n_max=64)
    seq = [v for n, v in rep.sequence]
    doubling = [v for (n, v) in rep.sequence if n in (1, 2, 4, 8, 16, 32, 64)]
    assert all(x >= y - 1e-12 for x, y in zip(doubling, doubling[1:]))
    assert math.isclose(float(rep.value), 2.0, rel_tol=0.05)
    # and the estimate is sandwiched: spectral <= estimate <= l1
    assert 2.0 - 1e-9 <= float(rep.value) <= 2.0 + 1e-9 or float(rep.value) >= 2.0


def test_uniformization_on_quotient_class():
    # T in Q[T]/(T^3 - T) at radius 3: T^n reduces to T or T^2 for n >= 2,
    # so |T^n| stays bounded by 9 and the root sequence decays to 1 (the
    # class is power-bounded even though |T| = 3).
    q = QuotientPresentation.make(Q, {"T": 3}, ["T^3 - T"])
    x = QuotientClass(q, parse_poly("T", Q))
    rep = uniformization_estimate(x, lambda c: residue_l1_norm(q, c.rep), n_max=32)
    assert rep.exact_sequence[0] == (1, F(3))
    assert math.isclose(float(rep.value), 9 ** (1 / 32), rel_tol=1e-9)
    roots = [v for _, v in rep.sequence]
    assert all(x1 >= x2 - 1e-12 for x1, x2 in zip(roots, roots[1:]))


# -- residue bounds -----------------------------------------------------------


def test_residue_l1_norm_examples():
    q = QuotientPresentation.make(Q, {"T": 2}, ["T^2"])
    # representatives of T differ by multiples of T^2; the normal form is
    # already the shortest one
    assert residue_l1_norm(q, parse_poly("T", Q)) == 2
    assert residue_l1_norm(q, parse_poly("T^2 + T", Q)) == 2
    assert residue_l1_norm(q, parse_poly("T^3", Q)) == 0


def test_residue_bound_flags_and_monotonicity():
    q = QuotientPresentation.make(Q, {"T": 2}, ["T^2"])
    a = parse_poly("1 + T", Q)
    bounds = [residue_seminorm_bound(q, a, search_budget=k) for k in (0, 1, 2)]
    for b in bounds:
        assert b.flag == "UPPER_BOUND"
    values = [b.value for b in bounds]
    assert all(x >= y for x, y in zip(values, values[1:]))
    # the bound is a true bound: some representative witnesses it
    assert values[-1] >= 1


def test_residue_bound_witness_is_representative():
    q = QuotientPresentation.make(Q, {"T": 1}, ["T^2 - 1"])
    a = parse_poly("T^2", Q)
    b = residue_seminorm_bound(q, a, search_budget=2)
    # T^2 is congruent to 1, whose l1 norm is 1
    assert b.value <= 1


# -- projective tensor bound --------------------------------------------------


def test_projective_tensor_bound():
    x = GradedSet.from_dict({"a": F(1), "b": F(1)})
    y = GradedSet.from_dict({"u": F(1), "v": F(1)})
    ea = CoeffVector.from_dict(Domain.Z, {"a": 1})
    eb = CoeffVector.from_dict(Domain.Z, {"b": 1})
    eu = CoeffVector.from_dict(Domain.Z, {"u": 1})
    ev = CoeffVector.from_dict(Domain.Z, {"v": 1})
    # a(x)u + a(x)v = a(x)(u+v): merging summands shrinks the bound
    bound = projective_tensor_bound(
        [(1, ea, eu), (1, ea, ev)], x, y, BaseRing.Z_ARCH
    )
    assert bound.flag == "UPPER_BOUND"
    assert bound.value <= 2
    single = projective_tensor_bound([(1, eb, ev)], x, y, BaseRing.Z_ARCH)
    assert single.value <= 1


# -- axiom report -------------------------------------------------------------


def test_axiom_report_passes_for_l1():
    import random

    rng = random.Random(7)
    samples = [
        Poly.from_dict(ZA, ("T",), {(k,): F(rng.randint(-5, 5)) for k in range(4)})
        for _ in range(60)
    ]
    rep = seminorm_axiom_report(
        lambda f: poly_l1(f, {"T": F(1, 2)}),
        samples,
        zero=Poly.constant(ZA, 0, ("T",)),
        one=Poly.constant(ZA, 1, ("T",)),
    )
    assert rep.passed
    assert rep.checked_pairs > 0


def test_axiom_report_catches_violations():
    # the sup norm over an archimedean base is not submultiplicative
    samples = [parse_poly("1 + T", ZA), parse_poly("1 - T", ZA), parse_poly("1 + T", ZA) * 1]
    rep = seminorm_axiom_report(
        lambda f: poly_linf(f, {"T": 1}),
        samples,
        zero=Poly.constant(ZA, 0, ("T",)),
        one=Poly.constant(ZA, 1, ("T",)),
    )
    assert not rep.passed
    assert any(v.axiom == "product" for v in rep.violations)
