"""
Carving completions out of the integers
=======================================

Rational domain conditions over the bare integers pick out the familiar
completions: |p| <= 1/p leaves the p-adic branch, |2| >= 2 leaves the
single archimedean endpoint.  Membership is decided exactly, point by
point.
"""

from fractions import Fraction as F

from berkring.affinoid import AffinoidPresentation, RationalDomainSpec, domain_membership
from berkring.rings import BaseRing
from berkring.spectrum import FiberPoint, SpectrumPoint

ZT = BaseRing.Z_TRIV
ZA = BaseRing.Z_ARCH

# D(1, 1 | 2, 1/2): the locus |2| <= 1/2 inside the trivially normed integers
z2 = RationalDomainSpec.from_pairs(
    AffinoidPresentation(ZT, ()), [("1", 1), ("2", F(1, 2))]
)

points = [SpectrumPoint("trivial")]
for p in (2, 3):
    points.append(SpectrumPoint("residue", p))
    for eps in (F(1, 2), F(1), F(2)):
        points.append(SpectrumPoint("padic", p, eps=eps))

print("which branch points satisfy |2| <= 1/2:")
for pt in points:
    member = domain_membership(FiberPoint.make(pt), z2)
    print(f"  {pt.label():<12} {'in' if member else 'out'}")
# the 2-adic ray enters at eps = 1 and stays; the residue point at 2 is
# its limit; everything else is excluded

# D(2, 1 | 1, 1/2): the locus |2| >= 2 over the archimedean integers
reals = RationalDomainSpec.from_pairs(
    AffinoidPresentation(ZA, ()), [("2", 1), ("1", F(1, 2))]
)
print("\nwhich archimedean scalings satisfy |2| >= 2:")
for k in range(1, 5):
    eps = F(k, 4)
    pt = SpectrumPoint("arch", eps=eps)
    member = domain_membership(FiberPoint.make(pt), reals)
    print(f"  eps = {eps}:  {'in' if member else 'out'}")
# only eps = 1 survives: |2|^eps = 2 exactly at the usual absolute value
