"""
Exact polynomial algebra over the rationals.

Coefficients are ``fractions.Fraction`` values stored densely by degree
(index 0 is the constant term). Degrees in this project stay small, so no
sparse form is needed; the integers inside the fractions grow without bound.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Self, Sequence

from .errors import MalformedSamplesError, ParameterError

logger = logging.getLogger(__name__)

RationalLike = int | Fraction | str


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def format_rational(value: Fraction | int) -> str:
    """Render ``p/q`` (or ``p`` for integers); never a decimal point."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Polynomial:
    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [as_rational(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if __debug__:
            for c in coeffs:
                assert c.denominator > 0
                assert math.gcd(c.numerator, c.denominator) == 1
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[RationalLike]) -> Self:
        """Build from ascending coefficients (ints, Fractions or "p/q" strings)."""
        return cls(tuple(as_rational(c) for c in coefficients))

    @classmethod
    def constant(cls, value: RationalLike) -> Self:
        return cls((as_rational(value),))

    @classmethod
    def linear(cls, slope: RationalLike, intercept: RationalLike) -> Self:
        """``slope * t + intercept``."""
        return cls((as_rational(intercept), as_rational(slope)))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError("negative degree")
        if k >= len(self.coefficients):
            return Fraction(0)
        return self.coefficients[k]

    def __add__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        other = _coerce(other)
        size = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(tuple(self[i] + other[i] for i in range(size)))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other: RationalLike) -> "Polynomial":
        return _coerce(other) - self

    def __mul__(self, other: "Polynomial | RationalLike") -> "Polynomial":
        if not isinstance(other, Polynomial):
            scalar = as_rational(other)
            return Polynomial(tuple(c * scalar for c in self.coefficients))
        return poly_multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ParameterError("negative exponent")
        result = Polynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __call__(self, t: RationalLike) -> Fraction:
        return poly_eval(self, t)

    def scale_argument(self, factor: RationalLike) -> "Polynomial":
        """Return ``p(factor * t)``."""
        factor = as_rational(factor)
        return Polynomial(
            tuple(c * factor**i for i, c in enumerate(self.coefficients))
        )

    def as_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]

    def is_positive(self) -> bool:
        """All coefficients strictly positive."""
        return bool(self.coefficients) and all(c > 0 for c in self.coefficients)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if k == 0:
                body = format_rational(magnitude)
            else:
                power = "t" if k == 1 else f"t^{k}"
                if magnitude == 1:
                    body = power
                elif magnitude.denominator == 1:
                    body = f"{magnitude.numerator}{power}"
                else:
                    body = f"({format_rational(magnitude)}){power}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _coerce(value: "Polynomial | RationalLike") -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def poly_binomial(b: int, c: int, n: int) -> Polynomial:
    """Expand binom(b*t + c, n) = (bt+c)(bt+c-1)...(bt+c-n+1)/n! in t."""
    if n < 0 or b < 1:
        raise ParameterError(f"binomial polynomial needs n >= 0 and b >= 1, got b={b}, n={n}")
    result = Polynomial.constant(Fraction(1, math.factorial(n)))
    for j in range(n):
        result = result * Polynomial.linear(b, c - j)
    return result


def poly_multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero() or q.is_zero():
        return Polynomial()
    out = [Fraction(0)] * (len(p.coefficients) + len(q.coefficients) - 1)
    for i, a in enumerate(p.coefficients):
        if a == 0:
            continue
        for j, b in enumerate(q.coefficients):
            out[i + j] += a * b
    return Polynomial(tuple(out))


def poly_eval(p: Polynomial, t: RationalLike) -> Fraction:
    t = as_rational(t)
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * t + c
    return acc


def poly_interpolate(samples: Sequence[tuple[int, RationalLike]]) -> Polynomial:
    """Newton divided differences through ``(t, value)`` samples."""
    if not samples:
        raise MalformedSamplesError("interpolation needs at least one sample")
    xs = [as_rational(t) for t, _ in samples]
    if len(set(xs)) != len(xs):
        raise MalformedSamplesError(f"duplicate abscissae in samples: {sorted(xs)}")
    table = [as_rational(v) for _, v in samples]
    newton = [table[0]]
    for level in range(1, len(xs)):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(len(table) - 1)
        ]
        newton.append(table[0])

    result = Polynomial.constant(newton[-1])
    for i in range(len(newton) - 2, -1, -1):
        result = result * Polynomial.linear(1, -xs[i]) + newton[i]
    return result


@dataclass(frozen=True)
class HStarVector:
    coefficients: tuple[Fraction, ...]
    dimension: int

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def as_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]


def hstar_transform(p: Polynomial) -> HStarVector:
    """Coordinates of p in the basis binom(t+n-j, n), j = 0..n, n = deg p.

    The system p(j) = sum_{i<=j} h_i binom(n+j-i, n) is triangular in the
    values p(0..n); its inverse is the alternating sum used below.
    """
    n = p.degree
    if n < 0:
        raise ParameterError("h*-transform of the zero polynomial")
    values = [poly_eval(p, j) for j in range(n + 1)]
    h = []
    for j in range(n + 1):
        h.append(
            sum(
                ((-1) ** i * math.comb(n + 1, i) * values[j - i] for i in range(j + 1)),
                Fraction(0),
            )
        )
    result = HStarVector(tuple(h), n)
    if not result.is_integral:
        logger.warning(
            "h*-vector has non-integral entries; input is not an Ehrhart polynomial "
            "of a lattice polytope"
        )
    return result


def hstar_to_polynomial(h: Sequence[RationalLike], n: int | None = None) -> Polynomial:
    """Inverse of :func:`hstar_transform`."""
    if n is None:
        n = len(h) - 1
    result = Polynomial()
    for j, coefficient in enumerate(h):
        result = result + poly_binomial(1, n - j, n) * as_rational(coefficient)
    return result


def lattice_point_total(p: Polynomial) -> Fraction:
    return poly_eval(p, 1)


def interior_point_total(p: Polynomial) -> Fraction:
    """Ehrhart-Macdonald reciprocity at t = 1."""
    return (-1) ** p.degree * poly_eval(p, -1)


def boundary_point_count(p: Polynomial) -> Fraction:
    return lattice_point_total(p) - interior_point_total(p)


def normalized_volume(p: Polynomial) -> Fraction:
    return math.factorial(p.degree) * p[p.degree]
