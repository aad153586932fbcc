"""
Brute-force lattice-point counting in dilates ``tP`` of halfspace systems.

Coordinates are fixed in input order. At each depth the admissible range of
the next coordinate comes from every inequality, with the unfixed tail
replaced by its minimum over the bounding box of ``tP``. The last two
coordinates are handled together: for each value of the first, the second
ranges over an interval whose length is added directly.

The outermost coordinate range is split into slabs that run in separate
processes; slab counts are summed in slab order. Each slab gets an equal
share of the candidate budget.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from tqdm import tqdm

from .config import Settings
from .errors import BudgetExceededError, ParameterError, PolytopeError
from .exactpoly import Polynomial, poly_interpolate
from .polytope import Halfspace, IntVector, SmoothPolytope, rational_vertices

logger = logging.getLogger(__name__)

# leaves with fewer than this many (column, row) pairs skip numpy
SMALL_LEAF = 4096
INT64_SAFE = 2**62


@dataclass(frozen=True)
class CountSample:
    t: int
    count: int
    strict: bool = False


@dataclass(frozen=True)
class LatticeSystem:
    """Inequalities ``<normal_i, x> <= rhs_i`` with a rational bounding box of P."""

    dim: int
    normals: tuple[IntVector, ...]
    rhs: tuple[int, ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    @classmethod
    def from_polytope(cls, P: SmoothPolytope) -> "LatticeSystem":
        lower, upper = P.bounding_box()
        return cls(
            P.dim,
            tuple(h.normal for h in P.halfspaces),
            tuple(h.rhs for h in P.halfspaces),
            tuple(Fraction(x) for x in lower),
            tuple(Fraction(x) for x in upper),
        )

    @classmethod
    def from_halfspaces(cls, halfspaces: Sequence[Halfspace], dim: int) -> "LatticeSystem":
        """Box from the rational vertices; raises UnboundedSystemError if unbounded."""
        points = rational_vertices(halfspaces, dim)
        if not points:
            raise PolytopeError("halfspace system is empty")
        return cls(
            dim,
            tuple(h.normal for h in halfspaces),
            tuple(h.rhs for h in halfspaces),
            tuple(min(p[i] for p in points) for i in range(dim)),
            tuple(max(p[i] for p in points) for i in range(dim)),
        )


def as_system(target: "SmoothPolytope | LatticeSystem") -> LatticeSystem:
    if isinstance(target, LatticeSystem):
        return target
    return LatticeSystem.from_polytope(target)


class SlabCounter:
    """Counts the points of one dilate whose first coordinate lies in a given range."""

    def __init__(self, system: LatticeSystem, t: int, strict: bool, budget: int):
        self.dim = system.dim
        self.columns = [tuple(row[j] for row in system.normals) for j in range(system.dim)]
        self.bounds = [t * r - (1 if strict else 0) for r in system.rhs]
        self.lo = [math.ceil(t * x) for x in system.lower]
        self.hi = [math.floor(t * x) for x in system.upper]
        self.budget = budget
        self.evaluated = 0
        # tails[i][j]: minimum of sum_{l > j} a_il x_l over the box
        self.tails = []
        for row in system.normals:
            acc = 0
            suffix = [0] * self.dim
            for j in range(self.dim - 1, -1, -1):
                suffix[j] = acc
                acc += min(row[j] * self.lo[j], row[j] * self.hi[j])
            self.tails.append(suffix)

    def coordinate_range(self, j: int, residual: Sequence[int]) -> tuple[int, int] | None:
        lo, hi = self.lo[j], self.hi[j]
        for i, a in enumerate(self.columns[j]):
            slack = residual[i] - self.tails[i][j]
            if a > 0:
                hi = min(hi, slack // a)
            elif a < 0:
                lo = max(lo, -(slack // -a))
            elif slack < 0:
                return None
        if lo > hi:
            return None
        return lo, hi

    def count(self, first_lo: int, first_hi: int) -> int:
        return self._descend(0, list(self.bounds), (first_lo, first_hi))

    def first_range(self) -> tuple[int, int] | None:
        return self.coordinate_range(0, self.bounds)

    def _descend(self, j: int, residual: list[int], restrict=None) -> int:
        span = self.coordinate_range(j, residual)
        if span is None:
            return 0
        lo, hi = span
        if restrict is not None:
            lo, hi = max(lo, restrict[0]), min(hi, restrict[1])
        if lo > hi:
            return 0
        if j == self.dim - 1:
            self._charge(hi - lo + 1)
            return hi - lo + 1
        if j == self.dim - 2:
            return self._leaf(residual, lo, hi)
        total = 0
        column = self.columns[j]
        for x in range(lo, hi + 1):
            total += self._descend(j + 1, [r - a * x for r, a in zip(residual, column)])
        return total

    def _charge(self, width: int):
        self.evaluated += width
        if self.evaluated > self.budget:
            raise BudgetExceededError(
                f"point budget of {self.budget} candidate evaluations exceeded"
            )

    def _leaf(self, residual: list[int], lo: int, hi: int) -> int:
        width = hi - lo + 1
        self._charge(width)
        if width * len(residual) < SMALL_LEAF:
            return self._leaf_python(residual, lo, hi)
        return self._leaf_numpy(residual, lo, hi)

    def _leaf_python(self, residual: list[int], lo: int, hi: int) -> int:
        xcol, ycol = self.columns[-2], self.columns[-1]
        total = 0
        for x in range(lo, hi + 1):
            ylo, yhi = self.lo[-1], self.hi[-1]
            for a, c, r in zip(xcol, ycol, residual):
                s = r - a * x
                if c > 0:
                    yhi = min(yhi, s // c)
                elif c < 0:
                    ylo = max(ylo, -(s // -c))
                elif s < 0:
                    yhi = ylo - 1
                    break
            if yhi >= ylo:
                total += yhi - ylo + 1
        return total

    def _leaf_numpy(self, residual: list[int], lo: int, hi: int) -> int:
        xcol, ycol = self.columns[-2], self.columns[-1]
        reach = max(abs(r) for r in residual)
        reach += max(abs(a) for a in xcol) * max(abs(lo), abs(hi))
        reach = max(reach, abs(self.lo[-1]), abs(self.hi[-1]))
        if reach < INT64_SAFE:
            xs = np.arange(lo, hi + 1, dtype=np.int64)
            dtype = np.int64
        else:
            xs = np.array(range(lo, hi + 1), dtype=object)
            dtype = object
        ylo = np.full(xs.shape, self.lo[-1], dtype=dtype)
        yhi = np.full(xs.shape, self.hi[-1], dtype=dtype)
        feasible = np.ones(xs.shape, dtype=bool)
        for a, c, r in zip(xcol, ycol, residual):
            s = r - a * xs
            if c > 0:
                yhi = np.minimum(yhi, s // c)
            elif c < 0:
                ylo = np.maximum(ylo, -(s // -c))
            else:
                feasible &= np.asarray(s >= 0, dtype=bool)
        widths = yhi - ylo + 1
        keep = feasible & np.asarray(widths > 0, dtype=bool)
        return int(widths[keep].sum())


def _count_slab(
    system: LatticeSystem, t: int, strict: bool, budget: int, first_lo: int, first_hi: int
) -> tuple[int, int]:
    counter = SlabCounter(system, t, strict, budget)
    return counter.count(first_lo, first_hi), counter.evaluated


def _slab_ranges(counter: SlabCounter, parts: int) -> list[tuple[int, int]]:
    span = counter.first_range()
    if span is None:
        return []
    lo, hi = span
    parts = max(1, min(parts, hi - lo + 1))
    chunks = np.array_split(np.arange(hi - lo + 1, dtype=np.int64), parts)
    return [(lo + int(c[0]), lo + int(c[-1])) for c in chunks if len(c)]


def _slab_budgets(budget: int, slabs: int) -> list[int]:
    """Split ``budget`` into ``slabs`` shares differing by at most one."""
    share, extra = divmod(budget, slabs)
    return [share + (1 if i < extra else 0) for i in range(slabs)]


def count_slabs(
    target: "SmoothPolytope | LatticeSystem",
    t: int,
    slabs: int,
    strict: bool = False,
    budget: int | None = None,
) -> list[int]:
    """Per-slab counts, in slab order, computed in this process."""
    system = as_system(target)
    budget = Settings().budget if budget is None else budget
    counter = SlabCounter(system, t, strict, budget)
    return [
        _count_slab(system, t, strict, budget, lo, hi)[0]
        for lo, hi in _slab_ranges(counter, slabs)
    ]


def count_points(
    target: "SmoothPolytope | LatticeSystem",
    t: int,
    strict: bool = False,
    threads: int | None = None,
    budget: int | None = None,
    progress: bool = False,
) -> CountSample:
    """
    Number of lattice points in ``tP`` (in its interior when ``strict``).

    With more than one thread the first coordinate is split into ``4 * threads``
    slabs and each slab may spend only its share of the budget, so the whole
    run never evaluates more than ``budget`` candidates.

    Args:
        target: Polytope or halfspace system to count in
        t: Dilation factor, nonnegative
        strict: Count interior points only
        threads: Worker processes (default: CHISEL_THREADS or the CPU count)
        budget: Candidate evaluations allowed (default: CHISEL_BUDGET)
        progress: Show a tqdm bar over the slabs

    Returns:
        CountSample with the exact count

    Raises:
        BudgetExceededError: Some slab ran past its share of the budget
    """
    if t < 0:
        raise ParameterError(f"dilation factor must be nonnegative, got {t}")
    system = as_system(target)
    if threads is None or budget is None:
        settings = Settings()
        threads = settings.threads if threads is None else threads
        budget = settings.budget if budget is None else budget
    if threads < 1:
        raise ParameterError(f"thread count must be positive, got {threads}")

    counter = SlabCounter(system, t, strict, budget)
    ranges = _slab_ranges(counter, 1 if threads == 1 else 4 * threads)
    logger.debug(f"counting t={t} strict={strict} over {len(ranges)} slabs")

    if threads == 1 or len(ranges) < 2:
        results = [
            _count_slab(system, t, strict, budget, lo, hi)
            for lo, hi in tqdm(ranges, desc=f"t={t}", disable=not progress)
        ]
    else:
        shares = _slab_budgets(budget, len(ranges))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_count_slab, system, t, strict, share, lo, hi)
                for (lo, hi), share in zip(ranges, shares)
            ]
            try:
                for future in tqdm(
                    as_completed(futures), total=len(futures), desc=f"t={t}", disable=not progress
                ):
                    future.result()
            except BudgetExceededError:
                pool.shutdown(cancel_futures=True)
                raise BudgetExceededError(
                    f"point budget of {budget} candidate evaluations exceeded "
                    f"(shared across {len(ranges)} slabs)"
                ) from None
        results = [f.result() for f in futures]

    evaluated = sum(e for _, e in results)
    logger.debug(f"t={t}: {evaluated} candidates evaluated")
    return CountSample(t, sum(c for c, _ in results), strict)


def count_interior(
    target: "SmoothPolytope | LatticeSystem",
    t: int,
    threads: int | None = None,
    budget: int | None = None,
) -> CountSample:
    return count_points(target, t, strict=True, threads=threads, budget=budget)


def ehrhart_via_counting(
    target: "SmoothPolytope | LatticeSystem",
    threads: int | None = None,
    budget: int | None = None,
    progress: bool = False,
) -> Polynomial:
    """Interpolate the counts at t = 0..dim."""
    system = as_system(target)
    samples = []
    for t in range(system.dim + 1):
        try:
            sample = count_points(system, t, threads=threads, budget=budget, progress=progress)
        except BudgetExceededError as exc:
            raise BudgetExceededError(
                f"{exc}; use the symbolic 'ehrhart' command for this family instead"
            ) from exc
        samples.append((sample.t, sample.count))
    logger.debug(f"counts for interpolation: {samples}")
    return poly_interpolate(samples)
