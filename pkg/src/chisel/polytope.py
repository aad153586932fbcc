"""
Smooth lattice polytopes with explicit vertices, edges and facet inequalities.

Every constructor here returns a frozen :class:`SmoothPolytope`; chiseling,
products and dilation build new values rather than mutating. Edge lengths are
integer lengths: an edge whose endpoints differ by ``m * u`` with ``u``
primitive has length ``m``.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from pydantic import BaseModel
from sympy import Matrix, ones

from .errors import (
    ChiselPreconditionError,
    NonIntegralVertexError,
    ParameterError,
    PlanStageError,
    PolytopeError,
    UnboundedSystemError,
)

logger = logging.getLogger(__name__)

IntVector = tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _add(a: IntVector, b: IntVector) -> IntVector:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: IntVector, b: IntVector) -> IntVector:
    return tuple(x - y for x, y in zip(a, b))


def _scale(c: int, a: IntVector) -> IntVector:
    return tuple(c * x for x in a)


def primitive(vector: IntVector) -> tuple[IntVector, int]:
    """Split an integer vector into (primitive direction, integer length)."""
    g = reduce(math.gcd, vector, 0)
    if g == 0:
        raise PolytopeError("zero vector has no primitive direction")
    return tuple(x // g for x in vector), g


@dataclass(frozen=True)
class Halfspace:
    """The inequality ``<normal, x> <= rhs``."""

    normal: IntVector
    rhs: int

    def __post_init__(self):
        if not any(self.normal):
            raise PolytopeError("halfspace normal must be nonzero")

    @classmethod
    def normalized(cls, normal: Iterable[int], rhs: int) -> "Halfspace":
        normal = tuple(int(x) for x in normal)
        g = reduce(math.gcd, normal, 0)
        if g == 0:
            raise PolytopeError("halfspace normal must be nonzero")
        if rhs % g:
            raise PolytopeError(
                f"halfspace {normal} <= {rhs} has no primitive integral form"
            )
        return cls(tuple(x // g for x in normal), rhs // g)

    def value(self, point: Sequence[int | Fraction]):
        return _dot(self.normal, point)

    def contains(self, point: Sequence[int | Fraction]) -> bool:
        return self.value(point) <= self.rhs

    def is_tight(self, point: Sequence[int | Fraction]) -> bool:
        return self.value(point) == self.rhs

    @property
    def is_primitive(self) -> bool:
        return reduce(math.gcd, self.normal, 0) == 1

    def dilate(self, c: int) -> "Halfspace":
        return Halfspace(self.normal, self.rhs * c)


@dataclass(frozen=True)
class Edge:
    endpoints: tuple[int, int]
    direction: IntVector
    length: int

    @classmethod
    def between(cls, vertices: Sequence[IntVector], i: int, j: int) -> "Edge":
        """Edge from the lower to the higher vertex index."""
        if i > j:
            i, j = j, i
        direction, length = primitive(_sub(vertices[j], vertices[i]))
        return cls((i, j), direction, length)

    def direction_from(self, vertex: int) -> IntVector:
        """Primitive direction pointing away from ``vertex``."""
        if vertex == self.endpoints[0]:
            return self.direction
        if vertex == self.endpoints[1]:
            return _scale(-1, self.direction)
        raise PolytopeError(f"vertex {vertex} is not an endpoint of edge {self.endpoints}")

    def other(self, vertex: int) -> int:
        i, j = self.endpoints
        return j if vertex == i else i


@dataclass(frozen=True)
class SmoothPolytope:
    dim: int
    vertices: tuple[IntVector, ...]
    edges: tuple[Edge, ...]
    halfspaces: tuple[Halfspace, ...]

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each vertex, in edge order."""
        table: list[list[int]] = [[] for _ in self.vertices]
        for index, edge in enumerate(self.edges):
            for v in edge.endpoints:
                if not 0 <= v < len(self.vertices):
                    raise PolytopeError(f"edge {edge.endpoints} has an endpoint out of range")
                table[v].append(index)
        return tuple(tuple(row) for row in table)

    def edge_directions(self, vertex: int) -> list[IntVector]:
        return [self.edges[e].direction_from(vertex) for e in self.incidence[vertex]]

    @property
    def min_edge_length(self) -> int:
        return min(edge.length for edge in self.edges)

    @property
    def f_vector_summary(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.halfspaces)

    def bounding_box(self) -> tuple[IntVector, IntVector]:
        lower = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        upper = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lower, upper


@dataclass(frozen=True)
class ChiselPlan:
    """A base polytope, a scale factor, and the depths of successive full chiselings."""

    base: SmoothPolytope
    depths: tuple[int, ...] = ()
    label: str = "explicit"

    @classmethod
    def cube(cls, n: int, scale: int, depths: Sequence[int] = ()) -> "ChiselPlan":
        return cls(make_box([scale] * n), tuple(depths), f"cube({n}, {scale})")

    @classmethod
    def hexagon_prism(cls, scale: int, depths: Sequence[int] = ()) -> "ChiselPlan":
        return cls(make_hexagon_prism(scale), tuple(depths), f"hexagonPrism({scale})")

    @classmethod
    def b_family(cls, k: int) -> "ChiselPlan":
        """B_k: the 3-cube scaled by 3^k, chiseled at depths 3^(k-1), ..., 3, 1."""
        return cls.cube(3, 3**k, [3**j for j in range(k - 1, -1, -1)])

    @classmethod
    def hex_family(cls, k: int) -> "ChiselPlan":
        """H_k: the hexagonal prism scaled by 3^k, chiseled like B_k."""
        return cls.hexagon_prism(3**k, [3**j for j in range(k - 1, -1, -1)])


class ValidationReport(BaseModel):
    is_smooth: bool
    is_reflexive: bool
    min_edge_length: int
    vertex_count: int
    edge_count: int
    facet_count: int
    facets_tight: bool


def make_box(sides: Sequence[int]) -> SmoothPolytope:
    """The box [0, a_1] x ... x [0, a_n]."""
    sides = tuple(int(a) for a in sides)
    if not sides:
        raise ParameterError("a box needs at least one side")
    if any(a < 1 for a in sides):
        raise ParameterError(f"box sides must be positive, got {sides}")
    n = len(sides)
    vertices = tuple(
        tuple(a * bit for a, bit in zip(sides, bits))
        for bits in itertools.product((0, 1), repeat=n)
    )
    edges = []
    for i, j in itertools.combinations(range(len(vertices)), 2):
        if sum(1 for x, y in zip(vertices[i], vertices[j]) if x != y) == 1:
            edges.append(Edge.between(vertices, i, j))
    halfspaces = []
    for axis, a in enumerate(sides):
        unit = tuple(1 if k == axis else 0 for k in range(n))
        halfspaces.append(Halfspace(unit, a))
        halfspaces.append(Halfspace(_scale(-1, unit), 0))
    return SmoothPolytope(n, vertices, tuple(edges), tuple(halfspaces))


_HEXAGON = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
_HEXAGON_FACETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def make_hexagon_prism(scale: int = 1) -> SmoothPolytope:
    """scale * (H x [0, 1]) for the smooth hexagon H = conv(+-(1,1), +-(1,0), +-(0,1))."""
    if scale < 1:
        raise ParameterError(f"scale must be positive, got {scale}")
    vertices = tuple((x, y, z) for z in (0, 1) for x, y in _HEXAGON)
    edges = []
    for z in range(2):
        for i in range(6):
            edges.append(Edge.between(vertices, 6 * z + i, 6 * z + (i + 1) % 6))
    for i in range(6):
        edges.append(Edge.between(vertices, i, 6 + i))
    halfspaces = [Halfspace((a, b, 0), 1) for a, b in _HEXAGON_FACETS]
    halfspaces += [Halfspace((0, 0, 1), 1), Halfspace((0, 0, -1), 0)]
    prism = SmoothPolytope(3, vertices, tuple(edges), tuple(halfspaces))
    return dilate(prism, scale)


def dilate(P: SmoothPolytope, c: int) -> SmoothPolytope:
    if c < 1:
        raise ParameterError(f"dilation factor must be positive, got {c}")
    if c == 1:
        return P
    return SmoothPolytope(
        P.dim,
        tuple(_scale(c, v) for v in P.vertices),
        tuple(Edge(e.endpoints, e.direction, e.length * c) for e in P.edges),
        tuple(h.dilate(c) for h in P.halfspaces),
    )


def product(P: SmoothPolytope, Q: SmoothPolytope) -> SmoothPolytope:
    """Cartesian product; vertex (i, j) gets index i * |V(Q)| + j."""
    nq = len(Q.vertices)
    zeros_p = (0,) * P.dim
    zeros_q = (0,) * Q.dim
    vertices = tuple(p + q for p in P.vertices for q in Q.vertices)
    edges = []
    for e in P.edges:
        i, j = e.endpoints
        for k in range(nq):
            edges.append(Edge((i * nq + k, j * nq + k), e.direction + zeros_q, e.length))
    for i in range(len(P.vertices)):
        for e in Q.edges:
            k, l = e.endpoints
            edges.append(Edge((i * nq + k, i * nq + l), zeros_p + e.direction, e.length))
    halfspaces = tuple(Halfspace(h.normal + zeros_q, h.rhs) for h in P.halfspaces)
    halfspaces += tuple(Halfspace(zeros_p + h.normal, h.rhs) for h in Q.halfspaces)
    return SmoothPolytope(P.dim + Q.dim, vertices, tuple(edges), halfspaces)


def _as_int_vector(column) -> IntVector:
    entries = []
    for value in column:
        if not value.is_integer:
            raise PolytopeError(f"expected an integral vector, got {list(column)}")
        entries.append(int(value))
    return tuple(entries)


def cut_normal(directions: Sequence[IntVector]) -> IntVector:
    """The integer vector w with <w, u_i> = 1 for every edge direction u_i."""
    n = len(directions)
    system = Matrix([list(u) for u in directions])
    if system.det() == 0:
        raise PolytopeError("edge directions at a vertex are linearly dependent")
    return _as_int_vector(system.LUsolve(ones(n, 1)))


def _cut_halfspace(vertex: IntVector, directions: Sequence[IntVector], b: int) -> Halfspace:
    # retained side: <w, x - v> >= b
    w = cut_normal(directions)
    return Halfspace(_scale(-1, w), -(_dot(w, vertex) + b))


def chisel_vertex(P: SmoothPolytope, v: int, b: int) -> SmoothPolytope:
    """
    Cut vertex ``v`` at lattice distance ``b`` along its edges.

    The new facet passes through the points at distance ``b`` on each incident
    edge, so the n new vertices keep the edge directions of ``v``.

    Args:
        P: Smooth polytope to chisel
        v: Index into ``P.vertices``
        b: Chisel depth, at least 1

    Returns:
        The chiseled polytope with vertices, edges and facets rebuilt

    Raises:
        ChiselPreconditionError: An incident edge is shorter than ``b + 1``
    """
    if b < 1:
        raise ParameterError(f"chisel depth must be positive, got {b}")
    if not 0 <= v < len(P.vertices):
        raise PolytopeError(f"vertex index {v} out of range")
    incident = P.incidence[v]
    for e in incident:
        edge = P.edges[e]
        if edge.length < b + 1:
            raise ChiselPreconditionError(
                f"edge {edge.endpoints} at vertex {v} has length {edge.length}, "
                f"chiseling at depth {b} needs at least {b + 1}"
            )

    apex = P.vertices[v]
    directions = P.edge_directions(v)
    remap = {old: (old if old < v else old - 1) for old in range(len(P.vertices)) if old != v}
    vertices = [P.vertices[old] for old in range(len(P.vertices)) if old != v]
    first_new = len(vertices)
    vertices += [_add(apex, _scale(b, u)) for u in directions]
    vertices = tuple(vertices)

    edges = []
    cut_at = {e: first_new + k for k, e in enumerate(incident)}
    for index, edge in enumerate(P.edges):
        if index in cut_at:
            edges.append(Edge.between(vertices, remap[edge.other(v)], cut_at[index]))
        else:
            i, j = edge.endpoints
            edges.append(Edge((remap[i], remap[j]), edge.direction, edge.length))
    for p, q in itertools.combinations(range(first_new, len(vertices)), 2):
        edges.append(Edge.between(vertices, p, q))

    halfspaces = P.halfspaces + (_cut_halfspace(apex, directions, b),)
    return SmoothPolytope(P.dim, vertices, tuple(edges), halfspaces)


def chisel_all(P: SmoothPolytope, b: int) -> SmoothPolytope:
    """Cut every vertex at distance ``b`` simultaneously."""
    if b < 1:
        raise ParameterError(f"chisel depth must be positive, got {b}")
    for edge in P.edges:
        if edge.length < 2 * b + 1:
            raise ChiselPreconditionError(
                f"edge {edge.endpoints} has length {edge.length}, "
                f"full chiseling at depth {b} needs at least {2 * b + 1}"
            )

    vertices = []
    new_index: dict[tuple[int, int], int] = {}
    cuts = []
    for v, apex in enumerate(P.vertices):
        directions = P.edge_directions(v)
        for e, u in zip(P.incidence[v], directions):
            new_index[(v, e)] = len(vertices)
            vertices.append(_add(apex, _scale(b, u)))
        cuts.append(_cut_halfspace(apex, directions, b))
    vertices = tuple(vertices)

    edges = []
    for e, edge in enumerate(P.edges):
        i, j = edge.endpoints
        edges.append(Edge((new_index[(i, e)], new_index[(j, e)]), edge.direction, edge.length - 2 * b))
    for v in range(len(P.vertices)):
        corner = [new_index[(v, e)] for e in P.incidence[v]]
        for p, q in itertools.combinations(corner, 2):
            edges.append(Edge.between(vertices, p, q))

    logger.debug(
        f"chiseled {len(P.vertices)} vertices at depth {b}: "
        f"{len(vertices)} vertices, {len(P.halfspaces) + len(cuts)} facets"
    )
    return SmoothPolytope(P.dim, vertices, tuple(edges), P.halfspaces + tuple(cuts))


def apply_chisel_plan(plan: ChiselPlan) -> SmoothPolytope:
    P = plan.base
    for stage, b in enumerate(plan.depths, start=1):
        try:
            P = chisel_all(P, b)
        except (ChiselPreconditionError, ParameterError) as exc:
            raise PlanStageError(stage, str(exc)) from exc
    return P


def _determinant(rows: Sequence[IntVector]) -> int:
    return int(Matrix([list(r) for r in rows]).det())


def validate(P: SmoothPolytope) -> ValidationReport:
    """Check smoothness, reflexivity and the agreement of vertices with facets."""
    n = P.dim
    for v in P.vertices:
        if len(v) != n:
            raise PolytopeError(f"vertex {v} does not live in dimension {n}")
    incidence = P.incidence

    for index, edge in enumerate(P.edges):
        i, j = edge.endpoints
        if _add(P.vertices[i], _scale(edge.length, edge.direction)) != P.vertices[j]:
            raise PolytopeError(f"edge {index} {edge.endpoints} does not match its endpoints")

    tight_counts = [0] * len(P.halfspaces)
    for v in P.vertices:
        tight = 0
        for k, h in enumerate(P.halfspaces):
            value = h.value(v)
            if value > h.rhs:
                raise PolytopeError(f"vertex {v} violates halfspace {h.normal} <= {h.rhs}")
            if value == h.rhs:
                tight += 1
                tight_counts[k] += 1
        if tight < n:
            raise PolytopeError(f"vertex {v} lies on only {tight} facets")
    for edge in P.edges:
        i, j = edge.endpoints
        doubled = _add(P.vertices[i], P.vertices[j])
        if any(h.value(doubled) > 2 * h.rhs for h in P.halfspaces):
            raise PolytopeError(f"edge {edge.endpoints} leaves the polytope")

    is_smooth = all(
        len(incidence[v]) == n and abs(_determinant(P.edge_directions(v))) == 1
        for v in range(len(P.vertices))
    )
    is_reflexive = all(h.rhs == 1 and h.is_primitive for h in P.halfspaces)
    return ValidationReport(
        is_smooth=is_smooth,
        is_reflexive=is_reflexive,
        min_edge_length=P.min_edge_length,
        vertex_count=len(P.vertices),
        edge_count=len(P.edges),
        facet_count=len(P.halfspaces),
        facets_tight=all(count >= n for count in tight_counts),
    )


def _rational_vector(column) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(x.p), int(x.q)) for x in column)


def find_recession_direction(halfspaces: Sequence[Halfspace], dim: int) -> IntVector | None:
    """A nonzero d with <normal, d> <= 0 for all halfspaces, if one exists."""
    normals = [list(h.normal) for h in halfspaces]
    if not normals:
        return tuple(1 if i == 0 else 0 for i in range(dim))
    full = Matrix(normals)
    if full.rank() < dim:
        kernel = full.nullspace()[0]
        return _integral_ray(kernel)
    for subset in itertools.combinations(range(len(normals)), dim - 1):
        kernel = Matrix([normals[i] for i in subset]).nullspace()
        if len(kernel) != 1:
            continue
        ray = _integral_ray(kernel[0])
        for candidate in (ray, _scale(-1, ray)):
            if all(_dot(h.normal, candidate) <= 0 for h in halfspaces):
                return candidate
    return None


def _integral_ray(column) -> IntVector:
    entries = _rational_vector(column)
    common = reduce(math.lcm, (x.denominator for x in entries), 1)
    return primitive(tuple(int(x * common) for x in entries))[0]


def rational_vertices(halfspaces: Sequence[Halfspace], dim: int) -> list[tuple[Fraction, ...]]:
    """All vertices of a bounded system, by solving every dim-subset of facets."""
    ray = find_recession_direction(halfspaces, dim)
    if ray is not None:
        raise UnboundedSystemError(f"system is unbounded along direction {ray}")
    found = set()
    for subset in itertools.combinations(halfspaces, dim):
        system = Matrix([list(h.normal) for h in subset])
        if system.det() == 0:
            continue
        point = _rational_vector(system.LUsolve(Matrix([h.rhs for h in subset])))
        if all(h.contains(point) for h in halfspaces):
            found.add(point)
    return sorted(found)


def enumerate_vertices(halfspaces: Sequence[Halfspace], dim: int) -> list[IntVector]:
    vertices = []
    for point in rational_vertices(halfspaces, dim):
        if any(x.denominator != 1 for x in point):
            raise NonIntegralVertexError(
                f"vertex {tuple(str(x) for x in point)} is not a lattice point"
            )
        vertices.append(tuple(int(x) for x in point))
    if not vertices:
        raise PolytopeError("system has no vertices")
    return vertices


def polytope_from_halfspaces(
    halfspaces: Sequence[Halfspace], dim: int, vertices: Sequence[IntVector] | None = None
) -> SmoothPolytope:
    """Assemble vertices, edges and facets from an inequality description.

    Two vertices are joined when they share at least dim-1 tight facets and no
    third vertex lies on all of those facets.
    """
    halfspaces = tuple(halfspaces)
    if vertices is None:
        vertices = enumerate_vertices(halfspaces, dim)
    vertices = tuple(tuple(v) for v in vertices)
    tight = [
        frozenset(k for k, h in enumerate(halfspaces) if h.is_tight(v)) for v in vertices
    ]
    edges = []
    for i, j in itertools.combinations(range(len(vertices)), 2):
        common = tight[i] & tight[j]
        if len(common) < dim - 1:
            continue
        if any(common <= tight[k] for k in range(len(vertices)) if k not in (i, j)):
            continue
        edges.append(Edge.between(vertices, i, j))
    return SmoothPolytope(dim, vertices, tuple(edges), halfspaces)
