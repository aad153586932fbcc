"""
Closed-form Ehrhart polynomials of the chiseled families.

Everything here is formula manipulation on :class:`Polynomial` values; no
geometry is built. Chiseling all ``f`` vertices of a smooth n-polytope at
depth ``b`` removes ``f`` unimodular corners, each contributing
``binom(bt + n - 1, n)`` lattice points to the t-th dilate.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from pydantic import BaseModel

from .errors import ParameterError, PlanStageError
from .exactpoly import Polynomial, format_rational, poly_binomial

logger = logging.getLogger(__name__)

BASIC_FAMILIES = ("cube", "stdSimplex", "unimodSimplex")
HEXAGON_PRISM = Polynomial.from_coefficients([1, 4, 6, 3])


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _require(condition: bool, message: str):
    if not condition:
        raise ParameterError(message)


def _depth_ladder(k: int) -> list[int]:
    return [3**j for j in range(k - 1, -1, -1)]


def ehrhart_basic(family: str, n: int) -> Polynomial:
    """Unit cube C_n, standard simplex with n vertices, unimodular simplex S_n."""
    _require(n >= 1, f"dimension must be at least 1, got {n}")
    if family == "cube":
        return Polynomial.linear(1, 1) ** n
    if family == "stdSimplex":
        return poly_binomial(1, n - 1, n - 1)
    if family == "unimodSimplex":
        return poly_binomial(1, n, n)
    raise ParameterError(f"unknown basic family {family!r}, expected one of {BASIC_FAMILIES}")


def ehrhart_chisel_series(
    base: Polynomial,
    f0: int,
    dim: int,
    scale: int,
    depths: Sequence[int],
    base_min_edge: int = 1,
) -> Polynomial:
    """i(chisel(scale * base, depths), t) from the base polynomial.

    The minimum edge length is tracked without geometry: scaling multiplies
    it, and a stage at depth b leaves min(b, previous - 2b).
    """
    _require(f0 >= 1 and dim >= 1 and scale >= 1, "f0, dim and scale must be positive")
    result = base.scale_argument(scale)
    min_edge = scale * base_min_edge
    vertices = f0
    for stage, b in enumerate(depths, start=1):
        if b < 1:
            raise PlanStageError(stage, f"depth must be positive, got {b}")
        if min_edge < 2 * b + 1:
            raise PlanStageError(
                stage, f"minimum edge length {min_edge} is too short for depth {b}"
            )
        result = result - poly_binomial(b, dim - 1, dim) * vertices
        min_edge = min(b, min_edge - 2 * b) if dim >= 2 else min_edge - 2 * b
        vertices *= dim
        logger.debug(f"stage {stage}: depth {b}, {vertices} vertices, min edge {min_edge}")
    return result


def ehrhart_q(n: int, a: int, b: int) -> Polynomial:
    """Q_n(a, b): the cube a*C_n with every vertex chiseled at depth b."""
    _require(n >= 1, f"dimension must be at least 1, got {n}")
    _require(b >= 1 and a >= 2 * b + 1, f"need a > 2b >= 2, got a={a}, b={b}")
    return Polynomial.linear(a, 1) ** n - poly_binomial(b, n - 1, n) * 2**n


def ehrhart_p_corner(n: int, a: int, b: int) -> Polynomial:
    """P_n(a, b): the cube a*C_n with only the origin chiseled at depth b."""
    _require(n >= 1, f"dimension must be at least 1, got {n}")
    _require(a > b >= 1, f"need a > b >= 1, got a={a}, b={b}")
    return Polynomial.linear(a, 1) ** n - poly_binomial(b, n - 1, n)


def ehrhart_box_corner(sides: Sequence[int], b: int) -> Polynomial:
    sides = list(sides)
    _require(len(sides) >= 1, "box needs at least one side")
    _require(b >= 1 and all(a > b for a in sides), f"need every side > b >= 1, got {sides}, b={b}")
    n = len(sides)
    box = Polynomial.constant(1)
    for a in sides:
        box = box * Polynomial.linear(a, 1)
    return box - poly_binomial(b, n, n) + poly_binomial(b, n - 1, n - 1)


def b_coeffs(k: int) -> tuple[Fraction, Fraction, Fraction]:
    """(q1, q2, q3) with i(B_k, t) = q3 t^3 + q2 t^2 - q1 t + 1."""
    _require(k >= 1, f"k must be at least 1, got {k}")
    p = Fraction(3) ** (k - 2)
    q1 = p * (8 * k - 27)
    q2 = Fraction(3) ** (k - 1) * (7 * 3**k + 2)
    q3 = p * (17 * 3 ** (2 * k) + 1) / 2
    return q1, q2, q3


def b_polynomial(k: int) -> Polynomial:
    q1, q2, q3 = b_coeffs(k)
    return Polynomial((Fraction(1), -q1, q2, q3))


def ehrhart_b(k: int) -> Polynomial:
    """B_k via the chisel recurrence (compare :func:`b_polynomial`)."""
    _require(k >= 1, f"k must be at least 1, got {k}")
    return ehrhart_chisel_series(ehrhart_basic("cube", 3), 8, 3, 3**k, _depth_ladder(k))


def ehrhart_hex_chisel(k: int) -> Polynomial:
    """H_k: the hexagonal prism scaled by 3^k and chiseled like B_k."""
    _require(k >= 1, f"k must be at least 1, got {k}")
    return ehrhart_chisel_series(HEXAGON_PRISM, 12, 3, 3**k, _depth_ladder(k))


def ehrhart_p_prod(n: int, k: int, a: int) -> Polynomial:
    """P^n(k, a) = B_k x a*C_n."""
    _require(n >= 0 and a >= 1, f"need n >= 0 and a >= 1, got n={n}, a={a}")
    return b_polynomial(k) * Polynomial.linear(a, 1) ** n


def ehrhart_q_prod(n: int, k: int, a: int) -> Polynomial:
    """Q^n(k, a) = H_k x a*C_n."""
    _require(n >= 0 and a >= 1, f"need n >= 0 and a >= 1, got n={n}, a={a}")
    return ehrhart_hex_chisel(k) * Polynomial.linear(a, 1) ** n


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    n: int | None = None
    k: int | None = None
    a: int | None = None
    b: int | None = None
    sides: tuple[int, ...] = ()
    depths: tuple[int, ...] = ()
    base: Polynomial | None = None
    f0: int | None = None
    scale: int | None = None

    def need(self, *names: str) -> list:
        values = [getattr(self, name) for name in names]
        missing = [name for name, value in zip(names, values) if value is None]
        if missing:
            raise ParameterError(f"family {self.tag} needs parameters: {', '.join(missing)}")
        return values


FAMILY_TAGS = (
    *BASIC_FAMILIES,
    "Q",
    "P_corner",
    "B",
    "P_prod",
    "hexChisel",
    "Q_prod",
    "boxCorner",
    "chiselSeries",
)


def ehrhart_family(spec: FamilySpec) -> Polynomial:
    tag = spec.tag
    if tag in BASIC_FAMILIES:
        return ehrhart_basic(tag, *spec.need("n"))
    if tag == "Q":
        return ehrhart_q(*spec.need("n", "a", "b"))
    if tag == "P_corner":
        return ehrhart_p_corner(*spec.need("n", "a", "b"))
    if tag == "B":
        return ehrhart_b(*spec.need("k"))
    if tag == "P_prod":
        return ehrhart_p_prod(*spec.need("n", "k", "a"))
    if tag == "hexChisel":
        return ehrhart_hex_chisel(*spec.need("k"))
    if tag == "Q_prod":
        return ehrhart_q_prod(*spec.need("n", "k", "a"))
    if tag == "boxCorner":
        (b,) = spec.need("b")
        return ehrhart_box_corner(spec.sides, b)
    if tag == "chiselSeries":
        base, f0, dim, scale = spec.need("base", "f0", "n", "scale")
        return ehrhart_chisel_series(base, f0, dim, scale, spec.depths)
    raise ParameterError(f"unknown family {tag!r}, expected one of {FAMILY_TAGS}")


@dataclass(frozen=True)
class MuVector:
    """Coefficients mu_0..mu_{n+3} of i(P^n(k, a), t)."""

    values: tuple[Fraction, ...]

    def __getitem__(self, j: int) -> Fraction:
        return self.values[j]

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.values)


def mu_coeffs(n: int, k: int, a: int) -> MuVector:
    _require(n >= 0 and k >= 1 and a >= 1, f"need n >= 0, k >= 1, a >= 1, got {n}, {k}, {a}")
    q1, q2, q3 = b_coeffs(k)
    a = Fraction(a)
    mu = [Fraction(1), n * a - q1]
    for j in range(2, n + 2):
        term = _binom(n, j) * a**j - _binom(n, j - 1) * a ** (j - 1) * q1
        term += _binom(n, j - 2) * a ** (j - 2) * q2
        if j >= 3:
            term += _binom(n, j - 3) * a ** (j - 3) * q3
        mu.append(term)
    mu.append(a ** (n - 1) * (a * q2 + n * q3))
    mu.append(a**n * q3)
    return MuVector(tuple(mu))


def choose_a(n: int, k: int) -> int:
    """floor(7 k 3^(k-2) / n)."""
    _require(n >= 1 and k >= 1, f"need n >= 1 and k >= 1, got n={n}, k={k}")
    return math.floor(Fraction(7 * k * 3**k, 9 * n))


class ChoiceKReport(BaseModel):
    n: int
    k: int
    a: int
    q1: str
    q2: str
    q3: str
    q1_exceeds_na: bool
    q2_bounded: bool
    q3_bounded: bool
    a_large_enough: bool
    all_hold: bool


def check_choice_k_bounds(n: int, k: int) -> ChoiceKReport:
    q1, q2, q3 = b_coeffs(k)
    a = choose_a(n, k)
    checks = {
        "q1_exceeds_na": q1 > n * a,
        "q2_bounded": q2 < 8 * 3 ** (2 * k - 1),
        "q3_bounded": q3 < 3 ** (3 * k),
        "a_large_enough": a >= 1 and 9 * n * a >= 6 * k * 3**k,
    }
    return ChoiceKReport(
        n=n,
        k=k,
        a=a,
        q1=format_rational(q1),
        q2=format_rational(q2),
        q3=format_rational(q3),
        all_hold=all(checks.values()),
        **checks,
    )


def negative_indices(n: int, k: int, a: int) -> list[int]:
    mu = mu_coeffs(n, k, a)
    return [j for j, value in enumerate(mu.values) if value < 0]


def _is_witness(n: int, k: int, a: int) -> bool:
    mu = mu_coeffs(n, k, a)
    return all(mu[j] < 0 for j in range(1, n + 2))


class NegativeWitness(BaseModel):
    n: int
    k: int
    a: int
    negative_indices: list[int]
    coefficients: list[str]


def _witness(n: int, k: int, a: int) -> NegativeWitness:
    mu = mu_coeffs(n, k, a)
    return NegativeWitness(
        n=n,
        k=k,
        a=a,
        negative_indices=[j for j, value in enumerate(mu.values) if value < 0],
        coefficients=[format_rational(c) for c in mu.values],
    )


def _smallest_witness(n: int, k: int, limit: int) -> int | None:
    """Doubling grid over a <= limit, then bisection inside the first witness bracket."""
    previous = 0
    a = 1
    while True:
        a = min(a, limit)
        if _is_witness(n, k, a):
            break
        if a == limit:
            return None
        previous = a
        a *= 2
    lo, hi = previous, a
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _is_witness(n, k, mid):
            hi = mid
        else:
            lo = mid
    return hi


def search_negative(
    n: int,
    k_max: int,
    a_max: int = 10**6,
    a_rule: Literal["grid", "formula"] = "grid",
    k_min: int = 1,
) -> list[NegativeWitness]:
    """
    Pairs (k, a) for which mu_1..mu_{n+1} are all negative, by ascending k.

    For n = 0 the polynomial is i(B_k, t) itself and a is reported as 1.

    Args:
        n: Dimension of the cube factor aC_n
        k_max: Last chiseling length to try
        a_max: Largest cube scale considered by the grid rule
        a_rule: "grid" for the smallest witness by grid and bisection,
            "formula" to test only choose_a(n, k)
        k_min: First chiseling length to try

    Returns:
        One NegativeWitness per k that has a witness
    """
    _require(n >= 0 and k_min >= 1, f"need n >= 0 and k_min >= 1, got n={n}, k_min={k_min}")
    _require(a_max >= 1, f"a_max must be positive, got {a_max}")
    if a_rule not in ("grid", "formula"):
        raise ParameterError(f"unknown a_rule {a_rule!r}")
    witnesses = []
    for k in range(k_min, k_max + 1):
        q1 = b_coeffs(k)[0]
        if n == 0:
            if q1 > 0:
                witnesses.append(_witness(0, k, 1))
            continue
        if a_rule == "formula":
            a = choose_a(n, k)
            if a >= 1 and _is_witness(n, k, a):
                witnesses.append(_witness(n, k, a))
            continue
        if q1 <= 0:
            continue
        limit = min(a_max, math.ceil(q1 / n) - 1)
        if limit < 1:
            continue
        a = _smallest_witness(n, k, limit)
        if a is not None:
            witnesses.append(_witness(n, k, a))
    logger.debug(f"search n={n} k<={k_max}: {len(witnesses)} witnesses")
    return witnesses


class FaceCounts(BaseModel):
    dim: int
    vertices: int
    edges: int
    facets: int


def chisel_face_counts(
    dim: int, vertices: int, facets: int, stages: int, cube_dim: int = 0
) -> FaceCounts:
    """Face numbers of a simple polytope after full chiselings and a product with a cube."""
    _require(dim >= 1 and vertices >= 1 and stages >= 0 and cube_dim >= 0, "invalid face data")
    for _ in range(stages):
        facets += vertices
        vertices *= dim
    vertices *= 2**cube_dim
    facets += 2 * cube_dim
    total_dim = dim + cube_dim
    return FaceCounts(
        dim=total_dim, vertices=vertices, edges=total_dim * vertices // 2, facets=facets
    )
