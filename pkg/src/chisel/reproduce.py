"""
Reproduction harness: recompute every published polynomial, table and sign
claim and compare it with the catalog.
"""

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from pydantic import BaseModel

from . import catalog
from .bvalpha import (
    alpha_table,
    check_box_corner_positivity,
    reconstruct_ehrhart_from_alpha,
    scan_alpha_positivity,
    verify_local_formula,
)
from .counting import count_points, ehrhart_via_counting
from .ehrhart import (
    b_coeffs,
    b_polynomial,
    check_choice_k_bounds,
    chisel_face_counts,
    choose_a,
    ehrhart_b,
    ehrhart_basic,
    ehrhart_box_corner,
    ehrhart_chisel_series,
    ehrhart_hex_chisel,
    ehrhart_p_corner,
    ehrhart_p_prod,
    ehrhart_q,
    ehrhart_q_prod,
    negative_indices,
    search_negative,
)
from .errors import EhrhartError, ParameterError
from .exactpoly import (
    Polynomial,
    boundary_point_count,
    format_rational,
    hstar_transform,
    lattice_point_total,
)
from .polyfile import read_polytope_file
from .polytope import (
    ChiselPlan,
    SmoothPolytope,
    apply_chisel_plan,
    chisel_all,
    chisel_vertex,
    make_box,
    validate,
)

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    group: str
    item: str
    passed: bool
    expected: str
    actual: str
    detail: str = ""


class ReproductionReport(BaseModel):
    passed: bool
    checks: list[CheckResult]


def _render(value: Any) -> str:
    if isinstance(value, Polynomial):
        return "[" + ", ".join(value.as_strings()) + "]"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    if isinstance(value, bool):
        return str(value).lower()
    try:
        return format_rational(value)
    except (TypeError, ValueError):
        return str(value)


def _first_difference(actual: Any, expected: Any) -> str:
    if isinstance(actual, Polynomial):
        actual = actual.as_strings()
    if isinstance(expected, Polynomial):
        expected = expected.as_strings()
    if isinstance(actual, (list, tuple)) and isinstance(expected, (list, tuple)):
        for index in range(max(len(actual), len(expected))):
            a = _render(actual[index]) if index < len(actual) else "<missing>"
            e = _render(expected[index]) if index < len(expected) else "<missing>"
            if a != e:
                return f"first difference at index {index}: expected {e}, got {a}"
    return f"expected {_render(expected)}, got {_render(actual)}"


@dataclass
class Harness:
    overrides: dict[str, Any] = field(default_factory=dict)
    threads: int | None = None
    budget: int | None = None
    results: list[CheckResult] = field(default_factory=list)
    group: str = ""

    def expect(self, item: str, actual: Any, expected: Any):
        expected = self.overrides.get(f"{self.group}:{item}", expected)
        passed = _render(actual) == _render(expected)
        result = CheckResult(
            group=self.group,
            item=item,
            passed=passed,
            expected=_render(expected),
            actual=_render(actual),
            detail="" if passed else _first_difference(actual, expected),
        )
        self.results.append(result)
        if passed:
            logger.info(f"✓ {self.group} {item}")
        else:
            logger.error(f"✗ {self.group} {item}: {result.detail}")

    def expect_known(self, item: str, actual: Polynomial, known: catalog.KnownPolynomial):
        self.expect(item, actual, list(known.coefficients))

    def expect_hstar(self, item: str, p: Polynomial, known: catalog.KnownPolynomial):
        self.expect(item, list(hstar_transform(p).coefficients), list(known.hstar))

    def fail(self, item: str, exc: Exception):
        self.results.append(
            CheckResult(
                group=self.group, item=item, passed=False, expected="", actual="", detail=str(exc)
            )
        )
        logger.error(f"✗ {self.group} {item}: {exc}")


def _b_family(k: int) -> SmoothPolytope:
    return apply_chisel_plan(ChiselPlan.b_family(k))


def _group_b3(h: Harness, heavy: bool):
    h.expect_known("ehrhart", ehrhart_b(3), catalog.B3)
    h.expect("q-coefficients", list(b_coeffs(3)), ["-9", "1719", "18591"])


def _group_b4(h: Harness, heavy: bool):
    h.expect_known("ehrhart", ehrhart_b(4), catalog.B4)
    h.expect("q-coefficients", list(b_coeffs(4)), ["45", "15363", "501921"])
    counts = chisel_face_counts(3, 8, 6, 4)
    h.expect("face-counts", [counts.vertices, counts.edges, counts.facets], [648, 972, 326])
    if heavy:
        P = _b_family(4)
        h.expect("counted-faces", list(P.f_vector_summary), [648, 972, 326])
        h.expect_known(
            "counting-oracle",
            ehrhart_via_counting(P, threads=h.threads, budget=h.budget),
            catalog.B4,
        )


def _group_q7(h: Harness, heavy: bool):
    p = ehrhart_q(7, 5, 2)
    h.expect_known("ehrhart", p, catalog.Q7_5_2)
    h.expect("linear-law", p[1], 5 * 7 - Fraction(2 * 2**7, 7))
    signs = [ehrhart_q(n, 5, 2)[1] < 0 for n in range(1, 11)]
    h.expect("negative-from-n=7", signs, [n >= 7 for n in range(1, 11)])


def _group_p1_28(h: Harness, heavy: bool):
    a = choose_a(1, 28)
    h.expect("choose-a", a, catalog.P1_28_A)
    h.expect_known("ehrhart", ehrhart_p_prod(1, 28, a), catalog.P1_28)


def _group_p1_6(h: Harness, heavy: bool):
    p = ehrhart_p_prod(1, 6, 730)
    h.expect_known("ehrhart", p, catalog.P1_6_730)
    h.expect_hstar("hstar", p, catalog.P1_6_730)
    counts = chisel_face_counts(3, 8, 6, 6, cube_dim=1)
    h.expect("face-counts", [counts.vertices, counts.facets], [11664, 2920])


def _group_p2_8(h: Harness, heavy: bool):
    p = ehrhart_p_prod(2, 8, 8599)
    h.expect_known("ehrhart", p, catalog.P2_8_8599)
    h.expect_hstar("hstar", p, catalog.P2_8_8599)
    h.expect("lattice-points", lattice_point_total(p), catalog.P2_8_8599_POINTS)
    h.expect("boundary-points", boundary_point_count(p), catalog.P2_8_8599_BOUNDARY)


def _group_hex(h: Harness, heavy: bool):
    p = ehrhart_q_prod(1, 5, 457)
    h.expect_known("Q1-ehrhart", p, catalog.Q1_5_457)
    h.expect_hstar("Q1-hstar", p, catalog.Q1_5_457)
    h.expect_known("Q3-ehrhart", ehrhart_q_prod(3, 9, 46099), catalog.Q3_9_46099)
    counts = chisel_face_counts(3, 12, 8, 5, cube_dim=1)
    h.expect("face-counts", counts.vertices, 5832)


def _group_alpha(h: Harness, heavy: bool):
    h.expect("alpha-table", alpha_table(7), [list(row) for row in catalog.ALPHA_TABLE])
    scans = [scan_alpha_positivity(n).all_positive for n in range(1, 8)]
    h.expect("positivity-boundary", scans, [True] * 6 + [False])
    h.expect("n=7-negatives", scan_alpha_positivity(7).negative_entries, [(1, "-5/3136"), (2, "-1/800")])


def _group_local(h: Harness, heavy: bool):
    mismatches = [
        (n, a, b)
        for n in range(1, 9)
        for a, b in ((2, 1), (3, 1), (3, 2), (5, 2))
        if reconstruct_ehrhart_from_alpha(n, a, b) != ehrhart_p_corner(n, a, b)
    ]
    h.expect("reconstruction", mismatches, [])
    local = [verify_local_formula(n) for n in range(1, 9)]
    h.expect(
        "local-formula",
        [r.cube and r.std_simplex and r.unimod_simplex for r in local],
        [True] * 8,
    )


def _group_box_corner(h: Harness, heavy: bool):
    rng = random.Random(2027)
    failures = []
    for _ in range(200):
        n = rng.randint(1, 8)
        b = rng.randint(1, 19)
        sides = [rng.randint(b + 1, 20) for _ in range(n)]
        if not check_box_corner_positivity(sides, b).holds:
            failures.append((sides, b))
    h.expect("random-boxes", failures, [])
    h.expect(
        "strictly-stronger",
        [check_box_corner_positivity([2] * 7, 1).holds, scan_alpha_positivity(7).all_positive],
        [True, False],
    )


def _group_reflexive9(h: Harness, heavy: bool):
    P = read_polytope_file(catalog.SMOOTH_REFLEXIVE_9D_FILE)
    report = validate(P)
    h.expect("smooth-reflexive", [report.is_smooth, report.is_reflexive], [True, True])
    known = catalog.SMOOTH_REFLEXIVE_9D.polynomial
    h.expect("linear-coefficient", known[1], "-6673/630")
    h.expect("integral-total", lattice_point_total(known).denominator, 1)
    if heavy:
        sample = count_points(P, 1, threads=h.threads, budget=h.budget)
        h.expect("lattice-points", sample.count, lattice_point_total(known))


def _oracle_instances() -> Iterable[tuple[str, Callable[[], SmoothPolytope], Callable[[], Polynomial]]]:
    yield "B_1", lambda: _b_family(1), lambda: ehrhart_b(1)
    yield "B_2", lambda: _b_family(2), lambda: ehrhart_b(2)
    for n, a, b in ((2, 3, 1), (3, 3, 1), (3, 5, 2)):
        yield (
            f"Q_{n}({a},{b})",
            lambda n=n, a=a, b=b: chisel_all(make_box([a] * n), b),
            lambda n=n, a=a, b=b: ehrhart_q(n, a, b),
        )
    for n, a, b in ((2, 3, 1), (3, 2, 1)):
        yield (
            f"P_{n}({a},{b})",
            lambda n=n, a=a, b=b: chisel_vertex(make_box([a] * n), 0, b),
            lambda n=n, a=a, b=b: ehrhart_p_corner(n, a, b),
        )
    yield (
        "box(2,3)-corner",
        lambda: chisel_vertex(make_box([2, 3]), 0, 1),
        lambda: ehrhart_box_corner([2, 3], 1),
    )
    yield (
        "H_1",
        lambda: apply_chisel_plan(ChiselPlan.hex_family(1)),
        lambda: ehrhart_hex_chisel(1),
    )


def _group_oracle(h: Harness, heavy: bool):
    for name, build, symbolic in _oracle_instances():
        counted = ehrhart_via_counting(build(), threads=h.threads, budget=h.budget)
        h.expect(name, counted, symbolic())


def _group_geometry(h: Harness, heavy: bool):
    for k in (1, 2, 3):
        P = _b_family(k)
        h.expect(f"B_{k}-faces", [len(P.vertices), len(P.halfspaces)], [8 * 3**k, 4 * 3**k + 2])
    smooth = {
        "B_1": _b_family(1),
        "B_2": _b_family(2),
        "Q_2(3,1)": chisel_all(make_box([3, 3]), 1),
        "Q_3(3,1)": chisel_all(make_box([3, 3, 3]), 1),
        "H_1": apply_chisel_plan(ChiselPlan.hex_family(1)),
    }
    for name, P in smooth.items():
        report = validate(P)
        h.expect(f"{name}-smooth", [report.is_smooth, report.facets_tight], [True, True])
    cube = make_box([5] * 4)
    h.expect("vertex-law", len(chisel_all(cube, 2).vertices), 4 * len(cube.vertices))
    h.expect(
        "B-consistency",
        [ehrhart_b(k) == b_polynomial(k) for k in range(1, 9)],
        [True] * 8,
    )
    h.expect(
        "empty-plan",
        ehrhart_chisel_series(ehrhart_basic("cube", 3), 8, 3, 9, []),
        ehrhart_basic("cube", 3).scale_argument(9),
    )


def _group_choice(h: Harness, heavy: bool):
    h.expect("bounds-(1,28)", check_choice_k_bounds(1, 28).all_hold, True)
    h.expect("q1-fails-(1,6)", check_choice_k_bounds(1, 6).q1_exceeds_na, False)
    h.expect("choose-a-(7,19)", choose_a(7, 19), 2453663097)


def _group_search(h: Harness, heavy: bool):
    found = [(w.k, w.a) for w in search_negative(1, 6)]
    h.expect("n=1-witnesses", found, [(6, 730)])
    first = search_negative(0, 8)[0]
    h.expect("n=0-first-k", first.k, 4)
    h.expect("P2(8,8599)-signs", negative_indices(2, 8, 8599), [1, 2, 3])
    h.expect("P1(28)-signs", negative_indices(1, 28, catalog.P1_28_A), [1, 2])


GROUPS: dict[str, Callable[[Harness, bool], None]] = {
    "B3": _group_b3,
    "B4": _group_b4,
    "Q7": _group_q7,
    "P1_28": _group_p1_28,
    "P1_6": _group_p1_6,
    "P2_8": _group_p2_8,
    "HEX": _group_hex,
    "ALPHA": _group_alpha,
    "LOCAL": _group_local,
    "BOXCORNER": _group_box_corner,
    "REFLEXIVE9": _group_reflexive9,
    "ORACLE": _group_oracle,
    "GEOMETRY": _group_geometry,
    "CHOICE": _group_choice,
    "SEARCH": _group_search,
}


def reproduce(
    only: Sequence[str] | None = None,
    heavy: bool = False,
    overrides: dict[str, Any] | None = None,
    threads: int | None = None,
    budget: int | None = None,
) -> ReproductionReport:
    """
    Run the selected groups (all by default) and collect one result per check.

    Args:
        only: Group names, matched case-insensitively
        heavy: Also run the brute-force counts
        overrides: Maps "GROUP:item" to a replacement expected value
        threads: Counting processes for the oracle groups
        budget: Candidate-point budget for the oracle groups

    Returns:
        ReproductionReport, passed only when every check passed

    Raises:
        ParameterError: An unknown group name was given
    """
    selected = list(GROUPS) if not only else [g.upper() for g in only]
    unknown = [g for g in selected if g not in GROUPS]
    if unknown:
        raise ParameterError(f"unknown reproduction groups: {', '.join(unknown)}")

    harness = Harness(overrides=dict(overrides or {}), threads=threads, budget=budget)
    start = time.time()
    for name in selected:
        harness.group = name
        try:
            GROUPS[name](harness, heavy)
        except EhrhartError as exc:
            harness.fail("error", exc)
    elapsed = time.time() - start
    passed = all(r.passed for r in harness.results)
    logger.info("=" * 70)
    logger.info(
        f"{sum(r.passed for r in harness.results)}/{len(harness.results)} checks passed "
        f"in {elapsed:.2f}s"
    )
    return ReproductionReport(passed=passed, checks=harness.results)
