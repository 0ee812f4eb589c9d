"""Exact multivariate polynomials over the supported coefficient domains.

Polynomials are immutable: a base-ring tag, an ordered variable tuple and
a sorted term list with nonzero ``Fraction`` coefficients.  Arithmetic
between polynomials with different variable tuples unifies the contexts
by name (left operand's order first).  A small expression grammar with
integer and rational literals, ``+ - * ^`` and parentheses round-trips
exactly through :func:`parse_poly` / ``str``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .rings import BaseRing, Domain, Scalar, check_scalar

Exponent = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed polynomial text; carries the character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def _unify_variables(a: Sequence[str], b: Sequence[str]) -> tuple[str, ...]:
    merged = list(a)
    for name in b:
        if name not in merged:
            merged.append(name)
    return tuple(merged)


def _reindex(
    terms: Mapping[Exponent, Fraction], old: Sequence[str], new: Sequence[str]
) -> dict[Exponent, Fraction]:
    position = {name: i for i, name in enumerate(new)}
    out: dict[Exponent, Fraction] = {}
    for exp, coeff in terms.items():
        new_exp = [0] * len(new)
        for name, e in zip(old, exp):
            new_exp[position[name]] = e
        out[tuple(new_exp)] = coeff
    return out


@dataclass(frozen=True)
class Poly:
    ring: BaseRing
    variables: tuple[str, ...]
    terms: tuple[tuple[Exponent, Fraction], ...] = field(default=())

    def __post_init__(self) -> None:
        for exp, coeff in self.terms:
            if len(exp) != len(self.variables):
                raise ValueError("exponent arity does not match variable count")
            if any(e < 0 for e in exp):
                raise ValueError("negative exponent in polynomial term")
            check_scalar(self.ring, coeff)

    # -- constructors --------------------------------------------------

    @staticmethod
    def from_dict(
        ring: BaseRing,
        variables: Sequence[str],
        coeffs: Mapping[Exponent, Scalar],
    ) -> "Poly":
        cleaned = {
            exp: Fraction(c) for exp, c in coeffs.items() if Fraction(c) != 0
        }
        terms = tuple(sorted(cleaned.items()))
        return Poly(ring, tuple(variables), terms)

    @staticmethod
    def constant(ring: BaseRing, c: Scalar, variables: Sequence[str] = ()) -> "Poly":
        zero = (0,) * len(variables)
        return Poly.from_dict(ring, variables, {zero: Fraction(c)})

    @staticmethod
    def variable(ring: BaseRing, name: str, variables: Sequence[str] | None = None) -> "Poly":
        names = tuple(variables) if variables is not None else (name,)
        if name not in names:
            raise ValueError(f"variable {name!r} not among {names}")
        exp = tuple(1 if v == name else 0 for v in names)
        return Poly.from_dict(ring, names, {exp: Fraction(1)})

    # -- structure -----------------------------------------------------

    def coeff_dict(self) -> dict[Exponent, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp, _ in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms[0][1] if self.terms else Fraction(0)

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(exp) for exp, _ in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        if self.is_zero:
            return -1
        return max(exp[i] for exp, _ in self.terms)

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for exp, _ in self.terms:
            for name, e in zip(self.variables, exp):
                if e:
                    used.add(name)
        return tuple(v for v in self.variables if v in used)

    def in_variables(self, variables: Sequence[str]) -> "Poly":
        """The same polynomial presented over another variable tuple.

        Variables the polynomial does not use may be dropped; used ones
        must appear in the new tuple.
        """
        new = tuple(variables)
        for name in self.used_variables():
            if name not in new:
                raise ValueError(f"variable {name!r} missing from {new}")
        coeffs: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            by_name = {name: e for name, e in zip(self.variables, exp) if e}
            coeffs[tuple(by_name.get(name, 0) for name in new)] = coeff
        return Poly.from_dict(self.ring, new, coeffs)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.constant(self.ring, other, self.variables)

    def _aligned(self, other: "Poly") -> tuple[tuple[str, ...], dict, dict]:
        if self.ring is not other.ring:
            raise ValueError(f"mixed base rings {self.ring.label}/{other.ring.label}")
        if self.variables == other.variables:
            return self.variables, self.coeff_dict(), other.coeff_dict()
        names = _unify_variables(self.variables, other.variables)
        return (
            names,
            _reindex(self.coeff_dict(), self.variables, names),
            _reindex(other.coeff_dict(), other.variables, names),
        )

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        other = self._coerce(other)
        names, a, b = self._aligned(other)
        for exp, coeff in b.items():
            a[exp] = a.get(exp, Fraction(0)) + coeff
        return Poly.from_dict(self.ring, names, a)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Poly | Scalar") -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        other = self._coerce(other)
        names, a, b = self._aligned(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, Fraction(0)) + ca * cb
        return Poly.from_dict(self.ring, names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.ring, 1, self.variables)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly.from_dict(self.ring, self.variables, {})
        return Poly(self.ring, self.variables, tuple((e, coeff * c) for e, coeff in self.terms))

    # -- evaluation and substitution -------------------------------------

    def substitute(self, assignment: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Composition: replace each named variable by a polynomial."""
        result = Poly.from_dict(self.ring, self.variables, {})
        images: dict[str, Poly] = {}
        for name in self.variables:
            if name in assignment:
                images[name] = self._coerce(assignment[name])
            else:
                images[name] = Poly.variable(self.ring, name)
        for exp, coeff in self.terms:
            term = Poly.constant(self.ring, coeff)
            for name, e in zip(self.variables, exp):
                if e:
                    term = term * images[name] ** e
            result = result + term
        return result

    def shift(self, centers: Mapping[str, Scalar]) -> "Poly":
        """Taylor re-centering: the polynomial ``f(X + a)`` in the same variables."""
        assignment = {
            name: Poly.variable(self.ring, name) + Fraction(centers[name])
            for name in self.variables
            if name in centers and Fraction(centers[name]) != 0
        }
        return self.substitute(assignment) if assignment else self

    def eval_fraction(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for exp, coeff in self.terms:
            value = coeff
            for name, e in zip(self.variables, exp):
                if e:
                    value *= Fraction(point[name]) ** e
            total += value
        return total

    def eval_complex(self, point: Mapping[str, complex]) -> complex:
        total = 0j
        for exp, coeff in self.terms:
            value = complex(coeff)
            for name, e in zip(self.variables, exp):
                if e:
                    value *= complex(point[name]) ** e
            total += value
        return total

    def eval_gaussian(self, point: Mapping[str, tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
        """Exact evaluation at Gaussian-rational coordinates; returns (re, im)."""
        total = (Fraction(0), Fraction(0))
        for exp, coeff in self.terms:
            value = (Fraction(coeff), Fraction(0))
            for name, e in zip(self.variables, exp):
                re, im = point[name]
                for _ in range(e):
                    value = (value[0] * re - value[1] * im, value[0] * im + value[1] * re)
            total = (total[0] + value[0], total[1] + value[1])
        return total

    # -- printing --------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        ordered = sorted(
            self.terms,
            key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])),
        )
        pieces: list[str] = []
        for position, (exp, coeff) in enumerate(ordered):
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.variables, exp)
                if e
            )
            mag = abs(coeff)
            if monomial and mag == 1:
                body = monomial
            elif monomial:
                body = f"{mag}*{monomial}"
            else:
                body = str(mag)
            if position == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self.ring.label}, {str(self)!r})"


# -- parsing -------------------------------------------------------------

_OPERATORS = {"+", "-", "*", "^", "(", ")"}
_ALIASES = {"·": "*", "−": "-", "⋅": "*"}


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    i, n = 0, len(text)
    while i < n:
        ch = _ALIASES.get(text[i], text[i])
        if ch.isspace():
            i += 1
            continue
        if ch in _OPERATORS:
            yield ("op", ch, i)
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == "/" and i + 1 < n and text[i + 1].isdigit():
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            yield ("number", text[start:i], start)
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            yield ("name", text[start:i], start)
            continue
        raise ParseError(f"unexpected character {text[i]!r}", i)
    yield ("end", "", n)


class _Parser:
    def __init__(self, text: str, ring: BaseRing, variables: Sequence[str] | None):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.ring = ring
        self.declared = tuple(variables) if variables is not None else None
        self.seen: list[str] = []

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_op(self, op: str) -> None:
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        self.advance()

    def variable_names(self) -> tuple[str, ...]:
        return self.declared if self.declared is not None else tuple(self.seen)

    def parse(self) -> Poly:
        result = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ParseError("trailing input", offset)
        return result.in_variables(self.variable_names())

    def expr(self) -> Poly:
        kind, value, _ = self.peek()
        negate = False
        if kind == "op" and value in "+-":
            self.advance()
            negate = value == "-"
        result = self.term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result - rhs if value == "-" else result + rhs
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Poly:
        kind, value, offset = self.peek()
        if kind == "op" and value in "+-":
            self.advance()
            inner = self.factor()
            return -inner if value == "-" else inner
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, offset = self.peek()
            if kind != "number" or "/" in value:
                raise ParseError("exponent must be a nonnegative integer", offset)
            self.advance()
            return base ** int(value)
        return base

    def atom(self) -> Poly:
        kind, value, offset = self.advance()
        if kind == "number":
            if "/" in value:
                num, den = value.split("/")
                coeff = Fraction(int(num), int(den))
            else:
                coeff = Fraction(int(value))
            try:
                return Poly.constant(self.ring, coeff)
            except ValueError as exc:
                raise ParseError(str(exc), offset) from None
        if kind == "name":
            if self.declared is not None and value not in self.declared:
                raise ParseError(f"unknown variable {value!r}", offset)
            if self.declared is None and value not in self.seen:
                self.seen.append(value)
            return Poly.variable(self.ring, value)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("expected a literal, variable or parenthesis", offset)


def parse_poly(
    text: str, ring: BaseRing = BaseRing.Z_ARCH, variables: Sequence[str] | None = None
) -> Poly:
    """Parse polynomial text; with ``variables`` fixed, unknown names are errors."""
    return _Parser(text, ring, variables).parse()


# -- one-variable Laurent polynomials -------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """A one-variable Laurent polynomial, used for annulus chart checks."""

    ring: BaseRing
    var: str
    terms: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_dict(ring: BaseRing, var: str, coeffs: Mapping[int, Scalar]) -> "LaurentPoly":
        cleaned = {e: Fraction(c) for e, c in coeffs.items() if Fraction(c) != 0}
        for c in cleaned.values():
            check_scalar(ring, c)
        return LaurentPoly(ring, var, tuple(sorted(cleaned.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def invert_variable(self, new_var: str | None = None) -> "LaurentPoly":
        """The pullback under ``var -> 1/var``: exponents negate."""
        name = new_var if new_var is not None else self.var
        return LaurentPoly.from_dict(self.ring, name, {-e: c for e, c in self.terms})

    def eval_complex(self, z: complex) -> complex:
        if any(e < 0 for e, _ in self.terms) and z == 0:
            raise ZeroDivisionError("Laurent polynomial at 0")
        return sum((complex(c) * z**e for e, c in self.terms), 0j)

    def eval_gaussian(self, z: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        re, im = z
        norm_sq = re * re + im * im
        if norm_sq == 0 and any(e < 0 for e, _ in self.terms):
            raise ZeroDivisionError("Laurent polynomial at 0")
        total = (Fraction(0), Fraction(0))
        for e, c in self.terms:
            if e >= 0:
                base, k = (re, im), e
            else:
                base, k = (re / norm_sq, -im / norm_sq), -e
            value = (Fraction(c), Fraction(0))
            for _ in range(k):
                value = (value[0] * base[0] - value[1] * base[1], value[0] * base[1] + value[1] * base[0])
            total = (total[0] + value[0], total[1] + value[1])
        return total

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for position, (e, c) in enumerate(sorted(self.terms, key=lambda t: -t[0])):
            if e == 0:
                body = str(abs(c))
            else:
                mono = self.var if e == 1 else f"{self.var}^{e}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            if position == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)
