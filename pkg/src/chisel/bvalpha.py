"""
Closed-form BV-alpha values for cubes, simplices and the corner-chiseled cube.

An alpha value belongs to a face of a polytope; values are constant on
lattice-symmetry orbits, so faces are named by (family, n, k, class) labels
instead of explicit cones. The t^k coefficient of i(P, t) is the sum over
k-faces F of alpha(F) * nvol(F).
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Sequence

from pydantic import BaseModel, ConfigDict, field_serializer

from .errors import ParameterError
from .exactpoly import Polynomial, format_rational, poly_binomial
from .ehrhart import ehrhart_box_corner, ehrhart_p_corner

logger = logging.getLogger(__name__)


class AlphaFamily(StrEnum):
    CUBE_FACE = "cubeFace"
    STD_SIMPLEX_FACE = "stdSimplexFace"
    UNIMOD_SIMPLEX_FACE = "unimodSimplexFace"
    CORNER_CUT_FACE = "cornerCutFace"


@dataclass(frozen=True)
class AlphaEntry:
    family: AlphaFamily
    n: int
    k: int
    value: Fraction
    contains_origin: bool = False
    on_cut: bool = False


def _half_power(k: int, n: int) -> Fraction:
    return Fraction(2) ** (k - n)


def alpha_value(
    family: AlphaFamily | str,
    n: int,
    k: int,
    contains_origin: bool = False,
    on_cut: bool = False,
) -> Fraction:
    """Alpha value of a k-face in dimension n.

    ``contains_origin`` selects the unimodular-simplex face class, ``on_cut``
    the corner-cut class (faces of the simplex created by the cut).
    """
    family = AlphaFamily(family)
    if n < 1:
        raise ParameterError(f"dimension must be at least 1, got {n}")
    top = n - 1 if family is AlphaFamily.STD_SIMPLEX_FACE else n
    if not 0 <= k <= top:
        raise ParameterError(f"face dimension {k} out of range 0..{top} for {family} in dimension {n}")

    if family is AlphaFamily.CUBE_FACE:
        return _half_power(k, n)
    if family is AlphaFamily.STD_SIMPLEX_FACE:
        return math.factorial(k) * poly_binomial(1, n - 1, n - 1)[k] / math.comb(n, k + 1)
    if family is AlphaFamily.UNIMOD_SIMPLEX_FACE:
        if contains_origin or k == n:
            return _half_power(k, n)
        numerator = math.factorial(k) * poly_binomial(1, n, n)[k] - math.comb(n, k) * _half_power(k, n)
        return numerator / math.comb(n, k + 1)
    # the whole polytope is not a face of the cut simplex
    if not on_cut or k == n:
        return _half_power(k, n)
    numerator = math.comb(n, k) * _half_power(k, n) - math.factorial(k) * poly_binomial(1, n - 1, n)[k]
    return numerator / math.comb(n, k + 1)


def alpha_entry(family: AlphaFamily | str, n: int, k: int, **flags) -> AlphaEntry:
    return AlphaEntry(AlphaFamily(family), n, k, alpha_value(family, n, k, **flags), **flags)


def alpha_table(n_max: int) -> list[list[Fraction]]:
    """Rows n = 1..n_max of cut-simplex face values, columns k = 0..n."""
    if n_max < 1:
        raise ParameterError(f"n_max must be at least 1, got {n_max}")
    return [
        [alpha_value(AlphaFamily.CORNER_CUT_FACE, n, k, on_cut=True) for k in range(n + 1)]
        for n in range(1, n_max + 1)
    ]


class AlphaScanReport(BaseModel):
    n: int
    all_positive: bool
    negative_entries: list[tuple[int, str]]


def scan_alpha_positivity(n: int) -> AlphaScanReport:
    row = alpha_table(n)[-1]
    negatives = [(k, format_rational(v)) for k, v in enumerate(row) if v <= 0]
    return AlphaScanReport(n=n, all_positive=not negatives, negative_entries=negatives)


class FaceClassSummary(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    k: int
    face_count: int
    normalized_volume: Fraction
    alpha: Fraction

    @field_serializer("normalized_volume", "alpha")
    def _exact(self, value: Fraction) -> str:
        return format_rational(value)

    @property
    def contribution(self) -> Fraction:
        return self.face_count * self.normalized_volume * self.alpha


def face_class_summaries(n: int, a: int, b: int, k: int) -> list[FaceClassSummary]:
    """The three classes of k-faces of P_n(a, b), the cube a*C_n cut at the origin.

    (i) faces of the cut simplex; (ii) cube faces through the removed corner,
    which lose a copy of b*S_k; (iii) cube faces away from the corner.
    """
    if not a > b >= 1:
        raise ParameterError(f"need a > b >= 1, got a={a}, b={b}")
    if not 0 <= k <= n:
        raise ParameterError(f"face dimension {k} out of range 0..{n}")
    corner = Fraction(b**k, math.factorial(k))
    half = _half_power(k, n)
    return [
        FaceClassSummary(
            label="cut simplex",
            k=k,
            face_count=math.comb(n, k + 1),
            normalized_volume=corner,
            alpha=alpha_value(AlphaFamily.CORNER_CUT_FACE, n, k, on_cut=True),
        ),
        FaceClassSummary(
            label="truncated cube face",
            k=k,
            face_count=math.comb(n, k),
            normalized_volume=Fraction(a**k) - corner,
            alpha=half,
        ),
        FaceClassSummary(
            label="untouched cube face",
            k=k,
            face_count=math.comb(n, k) * (2 ** (n - k) - 1),
            normalized_volume=Fraction(a**k),
            alpha=half,
        ),
    ]


def reconstruct_ehrhart_from_alpha(n: int, a: int, b: int) -> Polynomial:
    if n < 1:
        raise ParameterError(f"dimension must be at least 1, got {n}")
    coefficients = [
        sum((s.contribution for s in face_class_summaries(n, a, b, k)), Fraction(0))
        for k in range(n + 1)
    ]
    return Polynomial(tuple(coefficients))


class LocalFormulaReport(BaseModel):
    n: int
    cube: bool
    std_simplex: bool
    unimod_simplex: bool


def verify_local_formula(n: int) -> LocalFormulaReport:
    """Sum alpha * nvol over faces of C_n, the standard simplex and S_n, compare with i(P, t)."""
    if n < 1:
        raise ParameterError(f"dimension must be at least 1, got {n}")
    cube = Polynomial.linear(1, 1) ** n
    cube_ok = all(
        math.comb(n, k) * 2 ** (n - k) * alpha_value("cubeFace", n, k) == cube[k]
        for k in range(n + 1)
    )

    std = poly_binomial(1, n - 1, n - 1)
    std_ok = all(
        math.comb(n, k + 1) * Fraction(1, math.factorial(k)) * alpha_value("stdSimplexFace", n, k)
        == std[k]
        for k in range(n)
    )

    unimod = poly_binomial(1, n, n)
    unimod_ok = True
    for k in range(n + 1):
        nvol = Fraction(1, math.factorial(k))
        total = math.comb(n, k) * nvol * alpha_value("unimodSimplexFace", n, k, contains_origin=True)
        if k < n:
            total += math.comb(n, k + 1) * nvol * alpha_value("unimodSimplexFace", n, k)
        unimod_ok = unimod_ok and total == unimod[k]
    return LocalFormulaReport(n=n, cube=cube_ok, std_simplex=std_ok, unimod_simplex=unimod_ok)


class BoxCornerReport(BaseModel):
    sides: list[int]
    b: int
    polynomial: list[str]
    all_positive: bool
    dominates_corner_bound: bool
    expansion_matches: bool
    dominates_final_bound: bool
    final_bound_positive: bool
    holds: bool


def _dominates(f: Polynomial, g: Polynomial) -> bool:
    top = max(f.degree, g.degree)
    return all(f[k] >= g[k] for k in range(top + 1))


def _reciprocal_elementary(n: int) -> Polynomial:
    """Coefficient j is e_j(1/1, 1/2, ..., 1/(n-1))."""
    result = Polynomial.constant(1)
    for s in range(1, n):
        result = result * Polynomial.linear(Fraction(1, s), 1)
    return result


def check_box_corner_positivity(sides: Sequence[int], b: int) -> BoxCornerReport:
    """Positivity of a box with one corner chiseled, with each step of the lower bound."""
    sides = list(sides)
    f = ehrhart_box_corner(sides, b)
    n = len(sides)
    a = min(sides)
    g = ehrhart_p_corner(n, a, b)

    e = _reciprocal_elementary(n)
    expanded = Polynomial(
        tuple(
            a**k * math.comb(n, k) - (b**k * e[k - 1] / n if k >= 1 else 0)
            for k in range(n + 1)
        )
    )
    final = Polynomial(
        tuple(
            a**k * math.comb(n, k)
            - Fraction(b**k * k * k * math.comb(n, k), n * n * math.factorial(k))
            for k in range(n + 1)
        )
    )

    checks = {
        "all_positive": f.is_positive() and f.degree == n,
        "dominates_corner_bound": _dominates(f, g),
        "expansion_matches": g == expanded,
        "dominates_final_bound": _dominates(expanded, final),
        "final_bound_positive": final.is_positive() and final.degree == n,
    }
    if not all(checks.values()):
        logger.warning(f"box corner bound chain fails for sides={sides}, b={b}: {checks}")
    return BoxCornerReport(
        sides=sides, b=b, polynomial=f.as_strings(), holds=all(checks.values()), **checks
    )
