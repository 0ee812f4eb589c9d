"""Graded sets, graded maps and coefficient vectors.

A graded set is a finite set of opaque labels together with a nonnegative
grade per label, stored exactly as ``Fraction`` whenever possible.  On top
of these live the operator norm and map classification, tensor gradings,
the weighted l1/linf norms of finitely supported coefficient vectors, the
rho-integer filtration test and monomial gradings for polynomial rings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .rings import BaseRing, Domain, base_norm_eval

Label = Hashable
Grade = Union[Fraction, float]


def _as_grade(g) -> Grade:
    if isinstance(g, float):
        return g
    if isinstance(g, str):
        return Fraction(g)
    return Fraction(g)


def _label_key(label: Label) -> str:
    return repr(label)


@dataclass(frozen=True)
class GradedSet:
    pairs: tuple[tuple[Label, Grade], ...]

    def __post_init__(self) -> None:
        seen = set()
        for label, grade in self.pairs:
            if label in seen:
                raise ValueError(f"duplicate label {label!r}")
            seen.add(label)
            if grade < 0:
                raise ValueError(f"negative grade for {label!r}")

    @staticmethod
    def from_dict(grades: Mapping[Label, Grade] | Iterable[tuple[Label, Grade]]) -> "GradedSet":
        items = grades.items() if isinstance(grades, Mapping) else grades
        pairs = tuple(sorted(((l, _as_grade(g)) for l, g in items), key=lambda p: _label_key(p[0])))
        return GradedSet(pairs)

    def labels(self) -> tuple[Label, ...]:
        return tuple(l for l, _ in self.pairs)

    def grade(self, label: Label) -> Grade:
        for l, g in self.pairs:
            if l == label:
                return g
        raise KeyError(label)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[Label, Grade]]:
        return iter(self.pairs)

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        elements = []
        for label, grade in self.pairs:
            enc: object
            if isinstance(label, tuple):
                enc = list(label)
            else:
                enc = label
            elements.append({"label": enc, "grade": str(Fraction(grade))})
        return {"elements": elements}

    @staticmethod
    def from_json_dict(data: Mapping) -> "GradedSet":
        pairs = []
        for item in data["elements"]:
            label = item["label"]
            if isinstance(label, list):
                label = tuple(label)
            pairs.append((label, Fraction(item["grade"])))
        return GradedSet.from_dict(pairs)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "GradedSet":
        return GradedSet.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class GradedMap:
    source: GradedSet
    target: GradedSet
    images: tuple[tuple[Label, Label], ...]

    def __post_init__(self) -> None:
        mapped = dict(self.images)
        source_labels = set(self.source.labels())
        target_labels = set(self.target.labels())
        if set(mapped) != source_labels:
            raise ValueError("map must be defined on exactly the source labels")
        for image in mapped.values():
            if image not in target_labels:
                raise ValueError(f"image {image!r} is not in the target")

    @staticmethod
    def from_dict(source: GradedSet, target: GradedSet, images: Mapping[Label, Label]) -> "GradedMap":
        pairs = tuple(sorted(images.items(), key=lambda p: _label_key(p[0])))
        return GradedMap(source, target, pairs)

    def image(self, label: Label) -> Label:
        for l, img in self.images:
            if l == label:
                return img
        raise KeyError(label)

    def fibers(self) -> dict[Label, list[Label]]:
        out: dict[Label, list[Label]] = {}
        for l, img in self.images:
            out.setdefault(img, []).append(l)
        return out


def operator_norm(f: GradedMap) -> Grade:
    """max over source labels of grade(f(x)) / grade(x); 0/0 counts as 0.

    The value depends only on the two gradings.  Exact whenever both
    gradings are rational; ``math.inf`` when some x has grade 0 but a
    positively graded image.
    """
    best: Grade = Fraction(0)
    for label, grade in f.source:
        image_grade = f.target.grade(f.image(label))
        if grade == 0:
            if image_grade == 0:
                continue
            return math.inf
        ratio = image_grade / grade
        if ratio > best:
            best = ratio
    return best


@dataclass(frozen=True)
class MapClassification:
    kind: str  # "graded" | "contracting" | "bounded" | "unbounded"
    norm: Grade


def classify_map(f: GradedMap) -> MapClassification:
    """Finest matching class: graded, then contracting, bounded, unbounded."""
    norm = operator_norm(f)
    graded = all(f.target.grade(f.image(l)) == g for l, g in f.source)
    if graded:
        return MapClassification("graded", norm)
    if norm <= 1:
        return MapClassification("contracting", norm)
    if norm != math.inf:
        return MapClassification("bounded", norm)
    return MapClassification("unbounded", norm)


def tensor_graded(x: GradedSet, y: GradedSet, mode: str = "mult", p: Grade | None = None) -> GradedSet:
    """Product set with grades combined multiplicatively, p-additively or by max.

    ``mode`` is one of ``"mult"``, ``"max"``, ``"p_additive"`` (the last
    requires ``p`` in (0, inf)).  p-additive grades are exact when the
    p-th root happens to be rational, floats otherwise.
    """
    if mode == "p_additive":
        if p is None or p <= 0:
            raise ValueError("p_additive mode needs p in (0, inf)")
    elif mode not in ("mult", "max"):
        raise ValueError(f"unknown tensor mode {mode!r}")
    pairs = []
    for lx, gx in x:
        for ly, gy in y:
            if mode == "mult":
                grade: Grade = gx * gy
            elif mode == "max":
                grade = max(gx, gy)
            else:
                grade = _p_sum(gx, gy, p)
            pairs.append(((lx, ly), grade))
    return GradedSet.from_dict(pairs)


def _p_sum(a: Grade, b: Grade, p: Grade) -> Grade:
    from .values import fraction_nth_root

    if isinstance(a, Fraction) and isinstance(b, Fraction) and isinstance(p, (int, Fraction)):
        p = Fraction(p)
        if p.denominator == 1 and p >= 1:
            total = a ** int(p) + b ** int(p)
            root = fraction_nth_root(total, int(p))
            if root is not None:
                return root
    fa, fb, fp = float(a), float(b), float(p)
    if fa == 0 and fb == 0:
        return Fraction(0)
    return (fa**fp + fb**fp) ** (1.0 / fp)


@dataclass(frozen=True)
class CoeffVector:
    """Finitely supported coefficients on a graded set's labels."""

    ring: Domain
    entries: tuple[tuple[Label, Fraction], ...]

    def __post_init__(self) -> None:
        for _, c in self.entries:
            if self.ring is Domain.Z and Fraction(c).denominator != 1:
                raise ValueError(f"{c} is not an integer coefficient")

    @staticmethod
    def from_dict(ring: Domain, coeffs: Mapping[Label, int | Fraction]) -> "CoeffVector":
        cleaned = {l: Fraction(c) for l, c in coeffs.items() if Fraction(c) != 0}
        pairs = tuple(sorted(cleaned.items(), key=lambda p: _label_key(p[0])))
        return CoeffVector(ring, pairs)

    def coeff(self, label: Label) -> Fraction:
        for l, c in self.entries:
            if l == label:
                return c
        return Fraction(0)

    def support(self) -> tuple[Label, ...]:
        return tuple(l for l, _ in self.entries)

    def __add__(self, other: "CoeffVector") -> "CoeffVector":
        if self.ring is not other.ring:
            raise ValueError("mixed coefficient domains")
        out = {l: c for l, c in self.entries}
        for l, c in other.entries:
            out[l] = out.get(l, Fraction(0)) + c
        return CoeffVector.from_dict(self.ring, out)

    def scale(self, c: int | Fraction) -> "CoeffVector":
        return CoeffVector.from_dict(self.ring, {l: v * Fraction(c) for l, v in self.entries})


def l1_norm(a: CoeffVector, x: GradedSet, base: BaseRing) -> Grade:
    """Weighted l1 norm: sum of |coefficient| * grade over the support."""
    if base.domain is not a.ring:
        raise ValueError(f"coefficients over {a.ring.value} do not live in {base.label}")
    total: Grade = Fraction(0)
    for label, coeff in a.entries:
        total += base_norm_eval(base, coeff) * x.grade(label)
    return total


def linf_norm(a: CoeffVector, x: GradedSet, base: BaseRing) -> Grade:
    """Weighted sup grading: max of |coefficient| * grade over the support."""
    if base.domain is not a.ring:
        raise ValueError(f"coefficients over {a.ring.value} do not live in {base.label}")
    best: Grade = Fraction(0)
    for label, coeff in a.entries:
        value = base_norm_eval(base, coeff) * x.grade(label)
        if value > best:
            best = value
    return best


def pushforward(f: GradedMap, a: CoeffVector) -> CoeffVector:
    """Sum coefficients along fibers of f; l1-contracting when f is."""
    out: dict[Label, Fraction] = {}
    for label, coeff in a.entries:
        image = f.image(label)
        out[image] = out.get(image, Fraction(0)) + coeff
    return CoeffVector.from_dict(a.ring, out)


#: Largest support size accepted by the filtration test; the decision
#: procedure walks all 3^n (part, rest) splittings below this cap.
RHO_FILTER_CAP = 12


def rho_filter_membership(
    a: CoeffVector,
    rho: Fraction | int,
    base: BaseRing,
    *,
    cap: int = RHO_FILTER_CAP,
    norm_power: int = 1,
) -> bool:
    """Whether the vector satisfies the rho-relaxed partition inequalities.

    The condition quantifies over every subset Z of the support and every
    set partition of Z: the norm of the total sum over Z must be at most
    rho times the largest part-sum norm.  Equivalently, for every subset
    the partition minimizing the maximal part-sum norm must still come
    within a factor rho of the total.  That minimum is computed by dynamic
    programming over submasks, which visits each (part, rest) splitting
    once instead of walking all Bell-many partitions.

    ``norm_power`` applies |.|**t to the base seminorm; membership under
    the powered norm with parameter rho**t agrees with the plain test.
    """
    if norm_power < 1:
        raise ValueError("norm_power must be a positive integer")
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    support = [coeff for _, coeff in a.entries]
    n = len(support)
    if n > cap:
        raise ValueError(f"support size {n} exceeds the filtration cap {cap}")
    if n == 0:
        return True

    def norm(value: Fraction) -> Fraction:
        return base_norm_eval(base, value) ** norm_power

    size = 1 << n
    sums = [Fraction(0)] * size
    for mask in range(1, size):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + support[low.bit_length() - 1]
    norms = [norm(s) for s in sums]

    minimax = [Fraction(0)] * size
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        best = None
        sub = rest
        while True:
            part = sub | low
            candidate = max(norms[part], minimax[mask ^ part])
            if best is None or candidate < best:
                best = candidate
            if sub == 0:
                break
            sub = (sub - 1) & rest
        minimax[mask] = best
        if norms[mask] > rho * best:
            return False
    return True


def monomial_grading(
    alpha: Mapping[str, int], radii: Mapping[str, Fraction | int]
) -> Fraction:
    """Grade of a monomial: product of radius**exponent; empty product is 1."""
    out = Fraction(1)
    for name, e in alpha.items():
        if e == 0:
            continue
        r = Fraction(radii[name])
        if r < 0:
            raise ValueError(f"negative radius for {name!r}")
        if e < 0 and r == 0:
            raise ValueError(f"negative exponent at zero radius for {name!r}")
        out *= r**e
    return out
