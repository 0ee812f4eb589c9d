"""
Seminorms on integer polynomials and where they come from
=========================================================

A quick tour: the rho-relaxed membership filter on coefficient vectors,
the stock seminorms on Z[T], and the spectral norm as the envelope of
every branch of points the ring supports.
"""

import random
from fractions import Fraction as F

from berkring.graded import CoeffVector, rho_filter_membership
from berkring.polynomials import Poly
from berkring.rings import BaseRing, Domain
from berkring.seminorms import poly_l1, poly_linf, poly_trivial_gauss, uniformization_estimate
from berkring.spectrum import branch_profile, spectral_norm_report

ZA = BaseRing.Z_ARCH


def vec(*coeffs):
    return CoeffVector.from_dict(Domain.Z, {f"x{i}": c for i, c in enumerate(coeffs)})


# the filter at rho = 2 keeps vectors whose partial sums never beat the
# whole by more than the relaxation factor
for coeffs in ((1, 1, 2), (0, 0, -1), (1, 1, 1)):
    print(f"rho=2 filter on {coeffs}: {rho_filter_membership(vec(*coeffs), 2, ZA)}")

# three textbook norms on f = 3 + 2T at radius 2
f = Poly.from_dict(ZA, ("T",), {(0,): F(3), (1,): F(2)})
rho = {"T": F(2)}
print("\nf = 3 + 2T at radius 2")
print("  l1      :", poly_l1(f, rho))
print("  linf    :", poly_linf(f, rho))
print("  gauss   :", poly_trivial_gauss(f, rho))

# the spectral norm takes the sup over all branches and reports which
# branch point achieved it
report = spectral_norm_report(f, rho)
print("  spectral:", report.value, "at", report.witness.label())

# per-branch profile of |f|: the archimedean ray interpolates between
# the trivial value at eps -> 0 and the honest absolute value at eps = 1
profile = branch_profile(f, rho, "arch:eps=1", samples=5)
for param, value in profile.rows:
    print(f"  |f| on arch ray at {param}: {value}")

# n-th roots of |f^n| squeeze down onto the spectral norm
rng = random.Random(0)
est = uniformization_estimate(f, lambda g: poly_l1(g, rho), 64)
print("\nuniformized l1 sequence:", [round(v, 4) for _, v in est.sequence])
print("limit estimate", round(est.value, 6), "vs spectral", round(report.value, 6))
