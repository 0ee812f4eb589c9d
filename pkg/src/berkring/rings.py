"""Base seminormed rings.

Three concrete bases are supported: the integers with the usual absolute
value ``Z_arch`` (the initial object: every seminormed ring receives a
bounded map from it), the integers with the trivial seminorm ``Z_triv``
and the rationals with the trivial seminorm ``Q_triv``.  Each base pins
down both the coefficient domain and the seminorm used on coefficients.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


class Domain(enum.Enum):
    """Coefficient domain of a base ring."""

    Z = "Z"
    Q = "Q"


class BaseRing(enum.Enum):
    Z_ARCH = "Z_arch"
    Z_TRIV = "Z_triv"
    Q_TRIV = "Q_triv"

    @property
    def domain(self) -> Domain:
        return Domain.Q if self is BaseRing.Q_TRIV else Domain.Z

    @property
    def archimedean(self) -> bool:
        return self is BaseRing.Z_ARCH

    @property
    def trivially_valued(self) -> bool:
        return self is not BaseRing.Z_ARCH

    @property
    def label(self) -> str:
        return self.value

    @staticmethod
    def from_label(label: str) -> "BaseRing":
        for ring in BaseRing:
            if ring.value == label:
                return ring
        raise ValueError(f"unknown base ring {label!r}")


def check_scalar(ring: BaseRing, a: Scalar) -> Fraction:
    """Validate that ``a`` lies in the coefficient domain of ``ring``."""
    value = Fraction(a)
    if ring.domain is Domain.Z and value.denominator != 1:
        raise ValueError(f"{a} is not an integer, required over {ring.label}")
    return value


def base_norm_eval(ring: BaseRing, a: Scalar) -> Fraction:
    """Seminorm of a scalar in the base ring; exact rational output."""
    value = check_scalar(ring, a)
    if ring is BaseRing.Z_ARCH:
        return abs(value)
    return Fraction(1) if value != 0 else Fraction(0)


def trivial_norm(a: Scalar) -> Fraction:
    return Fraction(1) if a != 0 else Fraction(0)
