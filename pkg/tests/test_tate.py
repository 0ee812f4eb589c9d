"""Acyclicity of covering complexes, checked degree by degree.

The oracle at the top rebuilds the two-member inversion complex for a
monomial in plain Laurent coordinates and decides exactness by matrix
ranks alone, with none of the normal-form machinery under test.
"""

from fractions import Fraction as F

import pytest

from berkring.affinoid import AffinoidPresentation, RationalDomainSpec, VarSpec
from berkring.coverings import laurent_covering, standard_covering
from berkring.rings import BaseRing
from berkring.spectrum import FiberPoint, GaussCoord, SpectrumPoint
from berkring.tate import (
    CechComplex,
    cech_complex,
    check_exactness,
    drop_member,
    localization_isomorphism_check,
    numeric_injectivity_check,
    strict_localization_check,
)

QT = BaseRing.Q_TRIV


def disc(base=QT, radius=F(1)):
    return AffinoidPresentation(base, (VarSpec("T", radius),))


# -- oracle --------------------------------------------------------------------


def _rank(rows):
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = F(1) / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def laurent_monomial_complex_oracle(cap: int, keep_inverted: bool = True):
    """Rank bookkeeping for 0 -> Q[T] -> Q[T] (+) Q[T,1/T] -> Q[T,1/T].

    Splitting the disc by |T| <= 1 against |T| >= 1 identifies the first
    member with polynomials and the second with Laurent polynomials, both
    truncated at the cap.  Returns (injective, middle, surjective) of the
    truncated complex; dropping the inverted member models the broken one.
    """
    poly_dim = cap + 1            # T^0 .. T^cap
    laurent_dim = 2 * cap + 1     # T^-cap .. T^cap

    def embed_poly(k):            # index of T^k in the Laurent basis
        return k + cap

    # d0: a |-> (a, a), stacked coordinates
    d0_rows = poly_dim + (laurent_dim if keep_inverted else 0)
    d0 = [[F(0)] * poly_dim for _ in range(d0_rows)]
    for k in range(poly_dim):
        d0[k][k] = F(1)
        if keep_inverted:
            d0[poly_dim + embed_poly(k)][k] = F(1)

    # d1: (u, v) |-> v - u in the intersection
    cols = poly_dim + (laurent_dim if keep_inverted else 0)
    d1 = [[F(0)] * cols for _ in range(laurent_dim)]
    for k in range(poly_dim):
        d1[embed_poly(k)][k] = F(-1)
    if keep_inverted:
        for j in range(laurent_dim):
            d1[j][poly_dim + j] = F(1)

    injective = _rank(d0) == poly_dim
    nullity_d1 = cols - _rank(d1)
    middle = nullity_d1 == poly_dim if keep_inverted else nullity_d1 == 0
    surjective = _rank(d1) == laurent_dim
    return injective, middle, surjective


def test_oracle_full_complex_is_exact():
    injective, middle, surjective = laurent_monomial_complex_oracle(6)
    assert injective and middle and surjective


def test_oracle_detects_missing_member():
    injective, middle, surjective = laurent_monomial_complex_oracle(6, keep_inverted=False)
    assert injective
    assert not surjective  # 1/T is not a polynomial restriction


# -- complex assembly ----------------------------------------------------------


def test_complex_shape_for_inversion_cover():
    parent = disc()
    cx = cech_complex(parent, laurent_covering(parent, [("T", 1)]))
    assert cx.member_count() == 2
    assert cx.pairs == ((0, 1),)
    assert cx.level0 == parent
    # bounded side adjoins an X, inverted side a Y
    assert cx.level1[0].variable_names == ("T", "X1")
    assert cx.level1[1].variable_names == ("T", "Y1")
    assert [str(r) for r in cx.level1[1].relations] == ["T*Y1 - 1"]
    # the intersection merges both inequality variables
    assert set(cx.level2[0].variable_names) == {"T", "X1", "Y1"}


def test_complex_requires_trivial_rational_base():
    za = disc(BaseRing.Z_ARCH)
    with pytest.raises(ValueError, match="base"):
        cech_complex(za, laurent_covering(za, [("T", 1)]))
    small = disc(radius=F(1, 2))
    with pytest.raises(ValueError, match="unit radii"):
        cech_complex(small, laurent_covering(small, [("T", 1)]))
    other = AffinoidPresentation(QT, (VarSpec("S", F(1)),))
    with pytest.raises(ValueError, match="does not live over"):
        cech_complex(other, laurent_covering(disc(), [("T", 1)]))


def test_drop_member_reindexes_pairs():
    parent = disc()
    cx = cech_complex(parent, laurent_covering(parent, [("T", 1)]))
    broken = drop_member(cx, 1)
    assert broken.member_count() == 1
    assert broken.pairs == ((0, -1),)
    assert broken.level2 == cx.level2


# -- exactness ----------------------------------------------------------------


def test_inversion_cover_exact_for_t():
    parent = disc()
    cx = cech_complex(parent, laurent_covering(parent, [("T", 1)]))
    report = check_exactness(cx, degree_bound=6)
    assert report.exact
    assert [s.stage for s in report.stages] == [
        "composite", "injectivity", "middle", "surjectivity",
    ]
    assert report.preimage_bound == 12
    assert report.to_json_dict() == {
        "stage": "all", "degree_bound": 6, "status": "exact",
    }
    # same verdict as the rank oracle on the same split
    assert laurent_monomial_complex_oracle(6) == (True, True, True)


@pytest.mark.parametrize("fx", ["T^2", "T - 1", "T^2 - T"])
def test_inversion_cover_exact_for_other_f(fx):
    parent = disc()
    cx = cech_complex(parent, laurent_covering(parent, [(fx, 1)]))
    assert check_exactness(cx, degree_bound=6).exact


def test_standard_two_member_cover_exact():
    parent = disc()
    cov = standard_covering(parent, [("T", 1), ("1 - T", 1)], certificate=["1", "1"])
    report = check_exactness(cech_complex(parent, cov), degree_bound=6)
    assert report.exact
    assert report.failing_stage() is None


def test_standard_three_member_cover_exact():
    parent = disc()
    cov = standard_covering(
        parent,
        [("T", 1), ("1 - T", 1), ("1 + T", 1)],
        certificate=["0", "1/2", "1/2"],
    )
    report = check_exactness(cech_complex(parent, cov), degree_bound=4)
    assert report.exact
    # three intersections: the terminal surjectivity stage does not apply
    assert [s.stage for s in report.stages] == ["composite", "injectivity", "middle"]


def test_broken_complex_fails_with_witness():
    parent = disc()
    cx = cech_complex(parent, laurent_covering(parent, [("T", 1)]))
    report = check_exactness(drop_member(cx, 1), degree_bound=6)
    assert not report.exact
    assert report.failing_stage().stage == "composite"
    surj = [s for s in report.stages if s.stage == "surjectivity"]
    assert surj and surj[0].status == "failure"
    assert "is not hit" in surj[0].witness
    data = report.to_json_dict()
    assert data["status"] == "failure" and "witness" in data


# -- localization collapse ------------------------------------------------------


def test_localization_isomorphism():
    parent = disc()
    assert localization_isomorphism_check(parent, "T")
    assert localization_isomorphism_check(parent, parent.parse("1 - T"))
    assert localization_isomorphism_check(parent, "T^2 - T")


def test_strict_localization_collapse():
    parent = disc()
    d = RationalDomainSpec.from_pairs(
        parent, [("T", 1), ("1 - T", 1)], certificate=["1", "1"]
    )
    assert strict_localization_check(d)


def test_strict_localization_preconditions():
    parent = disc()
    no_cert = RationalDomainSpec.from_pairs(parent, [("T", 1), ("1 - T", 1)])
    with pytest.raises(ValueError, match="certificate"):
        strict_localization_check(no_cert)
    loose = RationalDomainSpec.from_pairs(
        parent, [("T", 1), ("1 - T", F(1, 2))], certificate=["1", "1"]
    )
    with pytest.raises(ValueError, match="radii 1"):
        strict_localization_check(loose)
    arch = AffinoidPresentation(BaseRing.Z_ARCH, (VarSpec("T", F(1)),))
    d_arch = RationalDomainSpec.from_pairs(arch, [("T", 1)], certificate=["1"])
    with pytest.raises(ValueError, match="Q_triv"):
        strict_localization_check(d_arch)


# -- sampled injectivity ---------------------------------------------------------


def test_numeric_injectivity_alive():
    parent = disc(BaseRing.Z_TRIV)
    cov = laurent_covering(parent, [("T", F(1, 2))])
    ok, witness = numeric_injectivity_check(
        cov, [parent.parse("T"), parent.parse("T - 1"), parent.parse("0")]
    )
    assert ok and witness is None


def test_numeric_injectivity_catches_vanishing():
    parent = disc(BaseRing.Z_TRIV)
    cov = laurent_covering(parent, [("T", F(1, 2))])
    center = FiberPoint.make(SpectrumPoint("trivial"), {"T": GaussCoord(F(0), F(0))})
    ok, witness = numeric_injectivity_check(cov, [parent.parse("T")], points=[center])
    assert not ok
    assert "vanished" in witness
