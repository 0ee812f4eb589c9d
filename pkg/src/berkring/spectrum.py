"""Multiplicative seminorm points and spectral suprema.

Points come in four branch families: the trivial seminorm, archimedean
points |.|**eps with eps in (0,1] (only over the archimedean integers),
p-adic points |.|_p**eps with eps in (0,inf) normalized by |p|_p = 1/p,
and residue points (the eps -> inf limit: multiples of p go to 0, the
rest to 1).  A fiber point adds per-variable coordinates: a complex
number within the eps-adjusted polydisc on the archimedean branch, a
(center, radius) Gauss datum elsewhere.  Suprema reported by
``spectral_norm`` and ``inf_max`` range over exactly these families.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .polynomials import Poly
from .rings import BaseRing, Domain
from .seminorms import poly_trivial_gauss
from .values import ExactValue, PointValue, fraction_nth_root, value_max

_KINDS = ("trivial", "arch", "padic", "residue")


@dataclass(frozen=True)
class SpectrumPoint:
    kind: str
    prime: int | None = None
    eps: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown branch {self.kind!r}")
        if self.kind == "trivial":
            if self.prime is not None or self.eps is not None:
                raise ValueError("the trivial point takes no parameters")
        elif self.kind == "arch":
            if self.prime is not None:
                raise ValueError("archimedean points take no prime")
            if self.eps is None:
                raise ValueError("archimedean points need an exponent eps")
            eps = Fraction(self.eps)
            if not 0 < eps <= 1:
                raise ValueError("archimedean exponent must lie in (0, 1]")
            object.__setattr__(self, "eps", eps)
        elif self.kind == "padic":
            self._check_prime()
            if self.eps is None:
                raise ValueError("p-adic points need an exponent eps")
            eps = Fraction(self.eps)
            if eps <= 0:
                raise ValueError("p-adic exponent must be positive")
            object.__setattr__(self, "eps", eps)
        else:  # residue
            self._check_prime()
            if self.eps is not None:
                raise ValueError("residue points take no exponent")

    def _check_prime(self) -> None:
        p = self.prime
        if p is None or p < 2 or any(p % d == 0 for d in range(2, int(math.isqrt(p)) + 1)):
            raise ValueError(f"{p} is not prime")

    def label(self) -> str:
        if self.kind == "trivial":
            return "Trivial"
        if self.kind == "arch":
            return f"Arch({self.eps})"
        if self.kind == "padic":
            return f"Padic({self.prime},{self.eps})"
        return f"Residue({self.prime})"

    @staticmethod
    def parse(text: str) -> "SpectrumPoint":
        text = text.strip()
        if text == "Trivial":
            return SpectrumPoint("trivial")
        for name, kind in (("Arch", "arch"), ("Padic", "padic"), ("Residue", "residue")):
            if text.startswith(name + "(") and text.endswith(")"):
                args = [a.strip() for a in text[len(name) + 1 : -1].split(",")]
                if kind == "arch" and len(args) == 1:
                    return SpectrumPoint("arch", eps=Fraction(args[0]))
                if kind == "padic" and len(args) == 2:
                    return SpectrumPoint("padic", prime=int(args[0]), eps=Fraction(args[1]))
                if kind == "residue" and len(args) == 1:
                    return SpectrumPoint("residue", prime=int(args[0]))
        raise ValueError(f"cannot parse spectrum point {text!r}")

    def scalar_norm(self, a: Fraction) -> ExactValue:
        """Seminorm of a base scalar at this point."""
        a = Fraction(a)
        if a == 0:
            return ExactValue.rational(0)
        if self.kind == "trivial":
            return ExactValue.rational(1)
        if self.kind == "arch":
            return ExactValue.arch(1, a * a, self.eps)
        if self.kind == "padic":
            v = _p_valuation(a, self.prime)
            return ExactValue.p_power(1, self.prime, -self.eps * v)
        v = _p_valuation(a, self.prime)
        if v < 0:
            raise ValueError(f"{a} is not {self.prime}-integral at a residue point")
        return ExactValue.rational(1 if v == 0 else 0)


def _p_valuation(a: Fraction, p: int) -> int:
    if a == 0:
        raise ValueError("valuation of zero")
    v = 0
    num = a.numerator
    while num % p == 0:
        num //= p
        v += 1
    den = a.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def point_allowed(base: BaseRing, pt: SpectrumPoint) -> bool:
    """Whether the branch point is bounded over the base ring."""
    if pt.kind == "trivial":
        return True
    if pt.kind == "arch":
        return base is BaseRing.Z_ARCH
    return base.domain is Domain.Z


@dataclass(frozen=True)
class ArchCoord:
    """A complex coordinate; exact when both parts are Fractions."""

    re: Fraction | float
    im: Fraction | float = 0

    @property
    def exact(self) -> bool:
        return isinstance(self.re, (Fraction, int)) and isinstance(self.im, (Fraction, int))

    def gaussian(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.re), Fraction(self.im)

    def as_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


@dataclass(frozen=True)
class GaussCoord:
    """Center and radius of a one-variable Gauss point; radius 0 is a
    classical point at the center."""

    center: Fraction
    radius: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius < 0:
            raise ValueError("negative Gauss radius")


Coord = ArchCoord | GaussCoord


@dataclass(frozen=True)
class FiberPoint:
    base: SpectrumPoint
    coords: tuple[tuple[str, Coord], ...] = ()

    def __post_init__(self) -> None:
        for name, coord in self.coords:
            if self.base.kind == "arch" and not isinstance(coord, ArchCoord):
                raise ValueError(f"archimedean point needs a complex coordinate for {name!r}")
            if self.base.kind != "arch" and not isinstance(coord, GaussCoord):
                raise ValueError(f"non-archimedean point needs a Gauss coordinate for {name!r}")

    @staticmethod
    def make(base: SpectrumPoint, coords: Mapping[str, Coord] | None = None) -> "FiberPoint":
        items = tuple(sorted((coords or {}).items()))
        return FiberPoint(base, items)

    def coord(self, name: str) -> Coord:
        for n, c in self.coords:
            if n == name:
                return c
        raise KeyError(name)

    def coord_map(self) -> dict[str, Coord]:
        return dict(self.coords)

    def label(self) -> str:
        parts = [self.base.label()]
        for name, coord in self.coords:
            if isinstance(coord, GaussCoord):
                parts.append(f"{name}=Gauss({coord.center},{coord.radius})")
            else:
                sign = "-" if coord.im < 0 else "+"
                parts.append(f"{name}={coord.re}{sign}{abs(coord.im)}i")
        return "; ".join(parts)


@lru_cache(maxsize=65536)
def eval_point(f: Poly, x: FiberPoint) -> PointValue:
    """Seminorm of f at the fiber point.

    Non-archimedean branches evaluate the Gauss norm of the Taylor
    re-centering exactly; the archimedean branch is exact for
    Gaussian-rational coordinates and falls back to floats otherwise.
    Multiplicative on every branch (exactly so on the exact tracks).
    Memoized: membership sweeps evaluate the same handful of cleared
    polynomials across every sampled point and domain member.
    """
    if not point_allowed(f.ring, x.base):
        raise ValueError(f"{x.base.label()} is not a point over {f.ring.label}")
    for name in f.used_variables():
        x.coord(name)  # raises KeyError when a coordinate is missing

    if x.base.kind == "arch":
        coords = {n: c for n, c in x.coords}
        if all(c.exact for c in coords.values()):
            re, im = f.eval_gaussian({n: c.gaussian() for n, c in coords.items()})
            return ExactValue.arch(1, re * re + im * im, x.base.eps)
        z = abs(f.eval_complex({n: c.as_complex() for n, c in coords.items()}))
        return float(z) ** float(x.base.eps)

    coords = {n: c for n, c in x.coords if n in f.variables}
    centers = {n: c.center for n, c in coords.items()}
    shifted = f.shift(centers)
    values: list[ExactValue] = []
    for exp, coeff in shifted.terms:
        scalar = x.base.scalar_norm(coeff)
        if scalar.is_zero:
            continue
        grading = Fraction(1)
        for name, e in zip(shifted.variables, exp):
            if e == 0 or name not in coords:
                continue
            grading *= coords[name].radius ** e
        values.append(scalar * grading)
    if not values:
        return ExactValue.rational(0)
    result = value_max(values)
    assert isinstance(result, ExactValue)
    return result


# -- deterministic sampling --------------------------------------------------


def _primes_up_to(n: int) -> tuple[int, ...]:
    sieve = [True] * (n + 1)
    out = []
    for p in range(2, n + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, n + 1, p):
                sieve[q] = False
    return tuple(out)


@dataclass(frozen=True)
class DensitySpec:
    """Grid sizes controlling deterministic spectrum sampling."""

    eps_grid: int = 4
    prime_cutoff: int = 5
    torus_grid: int = 8
    radius_grid: int = 2
    centers: tuple[Fraction, ...] = (Fraction(0),)
    kinds: tuple[str, ...] | None = None
    primes: tuple[int, ...] | None = None
    extra_random: int = 0
    seed: int = 0
    max_points: int = 200_000

    def wanted(self, kind: str) -> bool:
        return self.kinds is None or kind in self.kinds

    def prime_list(self) -> tuple[int, ...]:
        return self.primes if self.primes is not None else _primes_up_to(self.prime_cutoff)


def base_points(base: BaseRing, density: DensitySpec) -> list[SpectrumPoint]:
    """All branch base points of the sampling grid, endpoints included."""
    points: list[SpectrumPoint] = []
    if density.wanted("trivial"):
        points.append(SpectrumPoint("trivial"))
    if density.wanted("arch") and point_allowed(base, SpectrumPoint("arch", eps=Fraction(1))):
        for k in range(1, density.eps_grid + 1):
            points.append(SpectrumPoint("arch", eps=Fraction(k, density.eps_grid)))
    if base.domain is Domain.Z:
        for p in density.prime_list():
            if density.wanted("padic"):
                for k in range(1, 2 * density.eps_grid + 1):
                    points.append(SpectrumPoint("padic", prime=p, eps=Fraction(k, density.eps_grid)))
            if density.wanted("residue"):
                points.append(SpectrumPoint("residue", prime=p))
    return points


def _arch_radius(rho: Fraction, eps: Fraction) -> tuple[Fraction | None, float]:
    """rho**(1/eps): exact Fraction when that root is rational."""
    exact = fraction_nth_root(rho**eps.denominator, eps.numerator)
    return exact, float(rho) ** (1.0 / float(eps))


def _arch_coords(rho: Fraction, eps: Fraction, density: DensitySpec, rng: random.Random | None) -> list[ArchCoord]:
    exact_radius, float_radius = _arch_radius(rho, eps)
    coords: list[ArchCoord] = [ArchCoord(Fraction(0), Fraction(0))]
    n = density.torus_grid
    for j in range(n):
        if exact_radius is not None and (4 * j) % n == 0:
            quarter = (4 * j) // n
            re, im = [
                (exact_radius, Fraction(0)),
                (Fraction(0), exact_radius),
                (-exact_radius, Fraction(0)),
                (Fraction(0), -exact_radius),
            ][quarter % 4]
            coords.append(ArchCoord(re, im))
        else:
            theta = 2.0 * math.pi * j / n
            coords.append(ArchCoord(float_radius * math.cos(theta), float_radius * math.sin(theta)))
    if rng is not None:
        for _ in range(density.extra_random):
            theta = rng.uniform(0.0, 2.0 * math.pi)
            scale = rng.uniform(0.0, 1.0)
            coords.append(
                ArchCoord(scale * float_radius * math.cos(theta), scale * float_radius * math.sin(theta))
            )
    return coords


def _gauss_coords(
    rho: Fraction, point: SpectrumPoint, density: DensitySpec, rng: random.Random | None
) -> list[GaussCoord]:
    radii = [rho * Fraction(k, density.radius_grid) for k in range(density.radius_grid + 1)]
    coords = []
    for center in density.centers:
        center = Fraction(center)
        if point.kind == "residue" and _is_p_fractional(center, point.prime):
            continue
        for r in radii:
            coords.append(GaussCoord(center, r))
    if rng is not None:
        for _ in range(density.extra_random):
            center = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
            if point.kind == "residue" and _is_p_fractional(center, point.prime):
                continue
            coords.append(GaussCoord(center, rho * Fraction(rng.randint(0, 16), 16)))
    return coords


def _is_p_fractional(c: Fraction, p: int) -> bool:
    return c != 0 and _p_valuation(c, p) < 0


def sample_points(
    base: BaseRing, radii: Mapping[str, Fraction], density: DensitySpec = DensitySpec()
) -> tuple[FiberPoint, ...]:
    """Deterministic fiber-point sample over the weighted polydisc."""
    rng = random.Random(density.seed) if density.extra_random else None
    names = sorted(radii)
    out: list[FiberPoint] = []
    for pt in base_points(base, density):
        per_variable: list[list[Coord]] = []
        for name in names:
            rho = Fraction(radii[name])
            if pt.kind == "arch":
                per_variable.append(_arch_coords(rho, pt.eps, density, rng))
            else:
                per_variable.append(_gauss_coords(rho, pt, density, rng))
        for combo in itertools.product(*per_variable):
            out.append(FiberPoint(pt, tuple(zip(names, combo))))
            if len(out) > density.max_points:
                raise ValueError("sampling grid exceeds max_points; lower the density")
    return tuple(out)


# -- spectral norm ------------------------------------------------------------


def _golden_max(func: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; returns (argmax, value)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = func(c), func(d)
    while abs(b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = func(d)
    x = (a + b) / 2.0
    return x, func(x)


def _torus_value_grid(f: Poly, names: Sequence[str], radius: Mapping[str, float]) -> tuple[float, tuple[float, ...]]:
    """Max of |f| over the product torus grid; returns (max, best angles in turns)."""
    if not names:
        return abs(f.eval_complex({})), ()
    angle_counts = {1: 256, 2: 64, 3: 16}.get(len(names), 8)
    grid = np.linspace(0.0, 1.0, angle_counts, endpoint=False)
    meshes = np.meshgrid(*([grid] * len(names)), indexing="ij")
    total = np.zeros(meshes[0].shape, dtype=complex)
    for exp, coeff in f.terms:
        term = complex(coeff) * np.ones(meshes[0].shape, dtype=complex)
        for i, name in enumerate(f.variables):
            e = exp[i]
            if e:
                j = names.index(name)
                z = radius[name] * np.exp(2j * math.pi * meshes[j])
                term = term * z**e
        total = total + term
    magnitudes = np.abs(total)
    flat_index = int(np.argmax(magnitudes))
    best_angles = tuple(float(m.flat[flat_index]) for m in meshes)
    best = float(magnitudes.flat[flat_index])

    # Local per-coordinate refinement around the best grid node.
    step = 1.0 / angle_counts
    angles = list(best_angles)

    def value_at(theta: Sequence[float]) -> float:
        point = {
            name: radius[name] * complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))
            for name, t in zip(names, theta)
        }
        return abs(f.eval_complex(point))

    for _ in range(2):
        for i in range(len(names)):
            def along(t: float, i=i) -> float:
                probe = list(angles)
                probe[i] = t
                return value_at(probe)

            angles[i], best = _golden_max(along, angles[i] - step, angles[i] + step, 1e-9)
    return best, tuple(a % 1.0 for a in angles)


@dataclass(frozen=True)
class SpectralNormResult:
    value: float
    nonarch_value: Fraction
    arch_value: float | None
    witness: FiberPoint
    tolerance: float = 1e-6


def spectral_norm_report(f: Poly, radii: Mapping[str, Fraction | int]) -> SpectralNormResult:
    """Supremum of |f| over all supported branch points of the polydisc.

    The non-archimedean side has the exact closed form: the supremum over
    trivial, p-adic and residue Gauss points is the trivial Gauss norm
    (the per-term p-adic factors increase to 1 as eps -> 0).  Over the
    archimedean integers the supremum of (max |f| on the eps-torus)**eps
    is located numerically: 64-point log grid over eps then golden
    refinement, 256-point torus grids with local refinement inside.
    """
    rho = {name: Fraction(radii[name]) for name in f.variables}
    names = sorted(rho)
    nonarch = poly_trivial_gauss(f, rho)
    trivial_witness = FiberPoint.make(
        SpectrumPoint("trivial"), {n: GaussCoord(Fraction(0), rho[n]) for n in names}
    )
    if f.is_zero:
        return SpectralNormResult(0.0, Fraction(0), None, trivial_witness)
    if f.ring is not BaseRing.Z_ARCH:
        return SpectralNormResult(float(nonarch), nonarch, None, trivial_witness)

    degrees = {n: f.degree_in(n) for n in names}

    def torus_max(eps: float) -> tuple[float, float, tuple[float, ...]]:
        # Classical radii rho**(1/eps) overflow floats for small eps, so
        # the top-degree growth is factored out per variable: evaluate a
        # rescaled polynomial on the unit-ish torus and return the log of
        # the true maximum together with eps * log (the objective value).
        log_r = {n: math.log(float(rho[n])) / eps for n in names}
        shift = {n: degrees[n] if log_r[n] > 0 else 0 for n in names}
        scaled_terms = {}
        for exp, coeff in f.terms:
            alpha = dict(zip(f.variables, exp))
            factor = math.exp(
                sum((alpha.get(n, 0) - shift[n]) * log_r[n] for n in names)
            )
            if factor != 0.0:
                scaled_terms[exp] = Fraction(float(coeff) * factor)
        scaled = Poly.from_dict(f.ring if f.ring.domain is Domain.Q else BaseRing.Q_TRIV,
                                f.variables, scaled_terms)
        m, angles = _torus_value_grid(scaled, names, {n: 1.0 for n in names})
        if m <= 0.0:
            return float("-inf"), float("-inf"), angles
        log_m = sum(shift[n] * log_r[n] for n in names) + math.log(m)
        return log_m, eps * log_m, angles

    def objective(log_eps: float) -> float:
        return torus_max(math.exp(log_eps))[1]

    lo, hi = math.log(1e-4), 0.0
    grid = [lo + (hi - lo) * k / 63 for k in range(64)]
    scores = [objective(x) for x in grid]
    best_i = max(range(64), key=lambda i: scores[i])
    a = grid[max(best_i - 1, 0)]
    b = grid[min(best_i + 1, 63)]
    best_log_eps, best_score = _golden_max(objective, a, b, 1e-9)
    if scores[best_i] > best_score:
        best_log_eps, best_score = grid[best_i], scores[best_i]
    arch_value = math.exp(best_score)
    eps_star = math.exp(best_log_eps)

    if float(nonarch) >= arch_value:
        return SpectralNormResult(float(nonarch), nonarch, arch_value, trivial_witness)

    _, _, best_angles = torus_max(eps_star)
    eps_frac = min(Fraction(eps_star).limit_denominator(10**9), Fraction(1))
    coords = {}
    for n, t in zip(names, best_angles):
        log_r = math.log(float(rho[n])) / eps_star
        if abs(log_r) > 300:
            # the maximizer sits at an astronomically scaled classical
            # point; report the dominating branch via the trivial witness
            return SpectralNormResult(arch_value, nonarch, arch_value, trivial_witness)
        r = math.exp(log_r)
        coords[n] = ArchCoord(r * math.cos(2 * math.pi * t), r * math.sin(2 * math.pi * t))
    witness = FiberPoint.make(SpectrumPoint("arch", eps=eps_frac), coords)
    return SpectralNormResult(arch_value, nonarch, arch_value, witness)


def spectral_norm(f: Poly, radii: Mapping[str, Fraction | int]) -> float:
    return spectral_norm_report(f, radii).value


# -- pointwise minimum of maxima ----------------------------------------------


@dataclass(frozen=True)
class InfMaxEstimate:
    value: float
    point: FiberPoint | None
    flag: str = "SAMPLED_ESTIMATE"
    exact_zero: bool = False


def inf_max(
    fs: Sequence[Poly],
    rhos: Sequence[Fraction | int],
    base: BaseRing,
    radii: Mapping[str, Fraction],
    density: DensitySpec = DensitySpec(),
) -> InfMaxEstimate:
    """Sampled estimate of inf over points of max_i |f_i(x)| / rho_i.

    Always an upper bound of the true infimum.  After the grid pass the
    best point gets one local refinement round (eps, Gauss radius or
    torus angle).  A sampled exact zero short-circuits.
    """
    if not fs:
        raise ValueError("need at least one generator")
    weights = [Fraction(r) for r in rhos]
    if len(weights) != len(fs):
        raise ValueError("one rho per generator required")
    points = sample_points(base, radii, density)

    def alpha(x: FiberPoint) -> float:
        worst = 0.0
        for f, w in zip(fs, weights):
            worst = max(worst, float(eval_point(f, x)) / float(w))
        return worst

    best_point = None
    best = math.inf
    for x in points:
        value = alpha(x)
        if value < best:
            best, best_point = value, x
        if value == 0.0:
            return InfMaxEstimate(0.0, x, exact_zero=True)

    refined_point = best_point
    if best_point is not None:
        refined = _refine_inf_point(alpha, best_point, radii)
        if refined is not None:
            refined_value = alpha(refined)
            if refined_value < best:
                best, refined_point = refined_value, refined
    return InfMaxEstimate(best, refined_point)


def _refine_inf_point(
    alpha: Callable[[FiberPoint], float], x: FiberPoint, radii: Mapping[str, Fraction]
) -> FiberPoint | None:
    base = x.base
    if base.kind == "padic":

        def at_eps(log_eps: float) -> float:
            eps = Fraction(math.exp(log_eps)).limit_denominator(10**6)
            if eps <= 0:
                return math.inf
            return alpha(FiberPoint(SpectrumPoint("padic", base.prime, eps), x.coords))

        best_log, _ = _golden_max(lambda t: -at_eps(t), math.log(1e-3), math.log(16.0), 1e-6)
        eps = Fraction(math.exp(best_log)).limit_denominator(10**6)
        return FiberPoint(SpectrumPoint("padic", base.prime, eps), x.coords)
    if base.kind in ("trivial", "residue"):
        names = [n for n, _ in x.coords]
        coords = x.coord_map()
        for name in names:
            rho = float(radii[name])

            def at_radius(r: float, name=name) -> float:
                if r < 0:
                    return math.inf
                probe = dict(coords)
                probe[name] = GaussCoord(coords[name].center, Fraction(r).limit_denominator(10**6))
                return alpha(FiberPoint.make(base, probe))

            best_r, _ = _golden_max(lambda r: -at_radius(r), 0.0, rho, 1e-6)
            coords[name] = GaussCoord(coords[name].center, Fraction(best_r).limit_denominator(10**6))
        return FiberPoint.make(base, coords)
    if base.kind == "arch":
        names = [n for n, _ in x.coords]
        coords = x.coord_map()
        for name in names:
            z = coords[name].as_complex()
            r0 = abs(z)
            theta0 = math.atan2(z.imag, z.real) / (2 * math.pi)

            def at(theta: float, scale: float, name=name) -> float:
                probe = dict(coords)
                probe[name] = ArchCoord(
                    scale * r0 * math.cos(2 * math.pi * theta),
                    scale * r0 * math.sin(2 * math.pi * theta),
                )
                return alpha(FiberPoint.make(x.base, probe))

            theta, _ = _golden_max(lambda t: -at(t, 1.0), theta0 - 0.25, theta0 + 0.25, 1e-6)
            scale, _ = _golden_max(lambda s: -at(theta, s), 0.0, 1.0, 1e-6)
            coords[name] = ArchCoord(
                scale * r0 * math.cos(2 * math.pi * theta),
                scale * r0 * math.sin(2 * math.pi * theta),
            )
        return FiberPoint.make(x.base, coords)
    return None


# -- branch profiles -----------------------------------------------------------


@dataclass(frozen=True)
class BranchProfile:
    branch: str
    rows: tuple[tuple[str, float], ...]

    def to_csv(self) -> str:
        lines = ["branch,param,value"]
        for param, value in self.rows:
            lines.append(f"{self.branch},{param},{value:.12g}")
        return "\n".join(lines) + "\n"


def branch_profile(
    f: Poly,
    radii: Mapping[str, Fraction],
    branch: str,
    grid: int,
) -> BranchProfile:
    """Evaluate |f| along one branch family on a deterministic grid.

    Branch strings: ``trivial``, ``residue:p``, ``padic:p`` (parameter is
    the exponent eps on a grid of k/grid), ``arch:eps=E`` (parameter is
    the torus angle in turns, j/grid).
    """
    rho = {name: Fraction(radii[name]) for name in f.variables}
    names = sorted(rho)
    rows: list[tuple[str, float]] = []
    if branch == "trivial":
        x = FiberPoint.make(SpectrumPoint("trivial"), {n: GaussCoord(Fraction(0), rho[n]) for n in names})
        rows.append(("-", float(eval_point(f, x))))
        return BranchProfile("trivial", tuple(rows))
    if branch.startswith("residue:"):
        p = int(branch.split(":", 1)[1])
        x = FiberPoint.make(SpectrumPoint("residue", p), {n: GaussCoord(Fraction(0), rho[n]) for n in names})
        rows.append(("-", float(eval_point(f, x))))
        return BranchProfile(branch, tuple(rows))
    if branch.startswith("padic:"):
        p = int(branch.split(":", 1)[1])
        for k in range(1, grid + 1):
            eps = Fraction(k, grid)
            x = FiberPoint.make(
                SpectrumPoint("padic", p, eps), {n: GaussCoord(Fraction(0), rho[n]) for n in names}
            )
            rows.append((str(eps), float(eval_point(f, x))))
        return BranchProfile(branch, tuple(rows))
    if branch.startswith("arch:eps="):
        eps = Fraction(branch.split("=", 1)[1])
        point = SpectrumPoint("arch", eps=eps)
        if not point_allowed(f.ring, point):
            raise ValueError(f"archimedean branch undefined over {f.ring.label}")
        for j in range(grid):
            theta = Fraction(j, grid)
            coords = {}
            for n in names:
                exact_radius, float_radius = _arch_radius(rho[n], eps)
                if exact_radius is not None and (4 * theta).denominator == 1:
                    quarter = int(4 * theta) % 4
                    re, im = [
                        (exact_radius, Fraction(0)),
                        (Fraction(0), exact_radius),
                        (-exact_radius, Fraction(0)),
                        (Fraction(0), -exact_radius),
                    ][quarter]
                    coords[n] = ArchCoord(re, im)
                else:
                    angle = 2 * math.pi * float(theta)
                    coords[n] = ArchCoord(float_radius * math.cos(angle), float_radius * math.sin(angle))
            x = FiberPoint.make(point, coords)
            rows.append((str(theta), float(eval_point(f, x))))
        return BranchProfile(branch, tuple(rows))
    raise ValueError(f"unknown branch spec {branch!r}")


def emit_profile(profile: BranchProfile) -> str:
    """CSV text with header ``branch,param,value``; grid order preserved."""
    return profile.to_csv()
