import pytest

from src.chisel.catalog import SMOOTH_REFLEXIVE_9D_FILE
from src.chisel.errors import (
    ChiselPreconditionError,
    NonIntegralVertexError,
    ParameterError,
    PlanStageError,
    PolytopeError,
    PolytopeFileError,
    UnboundedSystemError,
)
from src.chisel.polyfile import (
    format_polytope,
    parse_polytope_text,
    read_polytope_file,
    write_polytope_file,
)
from src.chisel.polytope import (
    ChiselPlan,
    Edge,
    Halfspace,
    SmoothPolytope,
    apply_chisel_plan,
    chisel_all,
    chisel_vertex,
    cut_normal,
    dilate,
    enumerate_vertices,
    make_box,
    make_hexagon_prism,
    polytope_from_halfspaces,
    primitive,
    product,
    validate,
)


def _halfspaces(rows):
    return [Halfspace(tuple(row[:-1]), row[-1]) for row in rows]


class TestPrimitives:
    """Integer vectors, halfspaces and edges."""

    def test_primitive_split(self):
        """(6, -9) is 3 steps of (2, -3)."""
        assert primitive((6, -9)) == ((2, -3), 3)

    def test_zero_vector(self):
        """The zero vector has no direction."""
        with pytest.raises(PolytopeError):
            primitive((0, 0))

    def test_halfspace_normalization(self):
        """Normals are divided by their gcd together with the right-hand side."""
        h = Halfspace.normalized((2, 4), 6)
        assert h == Halfspace((1, 2), 3)
        assert h.is_primitive

    def test_halfspace_without_integral_form(self):
        """2x <= 3 has no primitive integral form."""
        with pytest.raises(PolytopeError):
            Halfspace.normalized((2, 0), 3)

    def test_zero_normal(self):
        """A zero normal is rejected."""
        with pytest.raises(PolytopeError):
            Halfspace((0, 0), 1)

    def test_edge_orientation(self):
        """Edges point from the lower to the higher vertex index."""
        vertices = [(0, 0), (0, 5)]
        edge = Edge.between(vertices, 1, 0)
        assert edge.endpoints == (0, 1)
        assert edge.direction == (0, 1)
        assert edge.length == 5
        assert edge.direction_from(1) == (0, -1)


class TestConstructors:
    """Boxes, the hexagonal prism, dilation and products."""

    def test_unit_cube(self):
        """8 vertices, 12 edges, 6 facets."""
        cube = make_box([1, 1, 1])
        assert cube.f_vector_summary == (8, 12, 6)

    def test_scaled_seven_cube(self):
        """Every edge of 5 C_7 has length 5."""
        cube = make_box([5] * 7)
        assert len(cube.vertices) == 2**7
        assert len(cube.edges) == 7 * 2**6
        assert {e.length for e in cube.edges} == {5}

    def test_rectangle(self):
        """Edge lengths of [0,2] x [0,3]."""
        assert sorted(e.length for e in make_box([2, 3]).edges) == [2, 2, 3, 3]

    @pytest.mark.parametrize("sides", [[], [0, 2]])
    def test_invalid_box(self, sides):
        """Empty or non-positive sides are rejected."""
        with pytest.raises(ParameterError):
            make_box(sides)

    def test_hexagon_prism(self):
        """12 vertices, 18 edges, 8 facets, smooth."""
        prism = make_hexagon_prism(1)
        assert prism.f_vector_summary == (12, 18, 8)
        assert (1, 1, 0) in prism.vertices
        assert (-1, -1, 1) in prism.vertices
        assert validate(prism).is_smooth

    def test_hexagon_prism_scale(self):
        """Scaling by 3 gives edge length 3 everywhere."""
        assert make_hexagon_prism(3).min_edge_length == 3
        assert dilate(make_hexagon_prism(1), 3) == make_hexagon_prism(3)

    def test_dilate(self):
        """Vertices, right-hand sides and edge lengths scale."""
        B1 = apply_chisel_plan(ChiselPlan.b_family(1))
        doubled = dilate(B1, 2)
        assert sorted(e.length for e in doubled.edges) == sorted(2 * e.length for e in B1.edges)
        assert dilate(make_box([1, 1, 1]), 3) == make_box([3, 3, 3])

    def test_product(self):
        """Segment times segment is the square; counts multiply and add."""
        segment = make_box([1])
        square = product(segment, segment)
        assert square.f_vector_summary == (4, 4, 4)
        assert validate(square).is_smooth

    def test_product_with_chiseled_cube(self):
        """B_1 x [0, 730] has 48 vertices and 16 facets."""
        B1 = apply_chisel_plan(ChiselPlan.b_family(1))
        P = product(B1, make_box([730]))
        assert P.dim == 4
        assert len(P.vertices) == 48
        assert len(P.halfspaces) == 16
        assert validate(P).is_smooth


class TestChiselVertex:
    """Cutting a single vertex."""

    def test_pentagon(self):
        """Cutting the origin of [0,3]^2 at depth 1 leaves a pentagon."""
        P = chisel_vertex(make_box([3, 3]), 0, 1)
        assert len(P.vertices) == 5
        assert (1, 0) in P.vertices and (0, 1) in P.vertices
        assert P.halfspaces[-1] == Halfspace((-1, -1), -1)
        assert validate(P).is_smooth

    def test_corner_of_two_cube(self):
        """P_3(2, 1): 10 vertices, one new triangle facet."""
        P = chisel_vertex(make_box([2, 2, 2]), 0, 1)
        assert len(P.vertices) == 10
        assert len(P.halfspaces) == 7
        report = validate(P)
        assert report.is_smooth
        assert report.min_edge_length == 1

    def test_unit_cube_rejected(self):
        """Edges of length 1 are too short for depth 1."""
        with pytest.raises(ChiselPreconditionError, match="length 1"):
            chisel_vertex(make_box([1, 1, 1]), 3, 1)

    def test_cut_normal(self):
        """<w, u_i> = 1 for every edge direction at a vertex."""
        directions = [(1, 0, 0), (1, 1, 0), (0, 1, 1)]
        w = cut_normal(directions)
        assert all(sum(a * b for a, b in zip(w, u)) == 1 for u in directions)


class TestChiselAll:
    """Full chiseling and chisel plans."""

    def test_octagon(self):
        """chisel([0,3]^2, 1) is an octagon."""
        P = chisel_all(make_box([3, 3]), 1)
        assert len(P.vertices) == 8
        assert validate(P).is_smooth

    def test_b1(self):
        """B_1 has 24 vertices and 14 facets."""
        P = chisel_all(make_box([3, 3, 3]), 1)
        assert len(P.vertices) == 24
        assert len(P.halfspaces) == 14
        assert validate(P).is_smooth

    def test_unit_cube_rejected(self):
        """Full chiseling at depth 1 needs edges of length 3."""
        with pytest.raises(ChiselPreconditionError):
            chisel_all(make_box([1, 1, 1]), 1)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_b_family_face_counts(self, k):
        """B_k has 8 * 3^k vertices and 4 * 3^k + 2 facets."""
        P = apply_chisel_plan(ChiselPlan.b_family(k))
        assert len(P.vertices) == 8 * 3**k
        assert len(P.halfspaces) == 4 * 3**k + 2
        assert P.min_edge_length == 1

    def test_b4(self):
        """B_4 has 648 vertices, 972 edges and 326 facets."""
        P = apply_chisel_plan(ChiselPlan.cube(3, 81, [27, 9, 3, 1]))
        assert P.f_vector_summary == (648, 972, 326)

    def test_vertex_count_law(self):
        """Full chiseling multiplies the vertex count by the dimension."""
        cube = make_box([5] * 4)
        assert len(chisel_all(cube, 2).vertices) == 4 * len(cube.vertices)

    def test_failing_stage_is_reported(self):
        """Depth 2 needs edges of length 5, [0,3]^3 has 3."""
        with pytest.raises(PlanStageError) as exc_info:
            apply_chisel_plan(ChiselPlan.cube(3, 3, [2]))
        assert exc_info.value.stage == 1

    def test_second_stage_failure(self):
        """After depth 3 on 9 C_3 the cut edges have length 3, too short for depth 3 again."""
        with pytest.raises(PlanStageError) as exc_info:
            apply_chisel_plan(ChiselPlan.cube(3, 9, [3, 3]))
        assert exc_info.value.stage == 2

    @pytest.mark.parametrize(
        "build",
        [
            lambda: apply_chisel_plan(ChiselPlan.b_family(2)),
            lambda: chisel_all(make_box([3, 3]), 1),
            lambda: chisel_all(make_box([3, 3, 3]), 1),
            lambda: apply_chisel_plan(ChiselPlan.hex_family(1)),
        ],
    )
    def test_smoothness_is_preserved(self, build):
        """Every chiseled instance stays smooth with facet-defining halfspaces."""
        report = validate(build())
        assert report.is_smooth
        assert report.facets_tight


class TestValidate:
    """Smoothness and reflexivity reports."""

    def test_unit_cube(self):
        """Smooth but not reflexive."""
        report = validate(make_box([1, 1, 1]))
        assert report.is_smooth
        assert not report.is_reflexive
        assert report.vertex_count == 8

    def test_centered_square_is_reflexive(self):
        """[-1, 1]^2 is reflexive."""
        square = polytope_from_halfspaces(
            _halfspaces([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]]), 2
        )
        assert validate(square).is_reflexive

    def test_non_smooth_triangle(self):
        """conv(0, (1,0), (1,2)) has a vertex cone of determinant 2."""
        triangle = polytope_from_halfspaces(
            _halfspaces([[0, -1, 0], [-2, 1, 0], [1, 0, 1]]), 2
        )
        assert not validate(triangle).is_smooth

    def test_vertex_outside_halfspace(self):
        """Vertices must satisfy every inequality."""
        cube = make_box([1, 1])
        broken = SmoothPolytope(2, cube.vertices, cube.edges, cube.halfspaces + (Halfspace((1, 1), 1),))
        with pytest.raises(PolytopeError):
            validate(broken)

    def test_edge_endpoint_out_of_range(self):
        """Edge endpoints must index existing vertices."""
        cube = make_box([1, 1])
        broken = SmoothPolytope(2, cube.vertices, cube.edges + (Edge((0, 9), (1, 0), 1),), cube.halfspaces)
        with pytest.raises(PolytopeError):
            validate(broken)


class TestEnumerateVertices:
    """Vertices from inequality descriptions."""

    def test_unit_square(self):
        """Four vertices, sorted."""
        rows = [[1, 0, 1], [-1, 0, 0], [0, 1, 1], [0, -1, 0]]
        assert enumerate_vertices(_halfspaces(rows), 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_triangle(self):
        """x + y <= 1, x >= 0, y >= 0."""
        rows = [[1, 1, 1], [-1, 0, 0], [0, -1, 0]]
        assert enumerate_vertices(_halfspaces(rows), 2) == [(0, 0), (0, 1), (1, 0)]

    def test_unbounded(self):
        """A quadrant is unbounded."""
        rows = [[-1, 0, 0], [0, -1, 0]]
        with pytest.raises(UnboundedSystemError):
            enumerate_vertices(_halfspaces(rows), 2)

    def test_strip_is_unbounded(self):
        """A strip has a lineality direction."""
        rows = [[1, 0, 1], [-1, 0, 0]]
        with pytest.raises(UnboundedSystemError):
            enumerate_vertices(_halfspaces(rows), 2)

    def test_non_integral_vertex(self):
        """2x + 2y <= 1 has the vertex (1/2, 0)."""
        rows = [[2, 2, 1], [-1, 0, 0], [0, -1, 0]]
        with pytest.raises(NonIntegralVertexError):
            enumerate_vertices(_halfspaces(rows), 2)

    def test_edges_are_reconstructed(self):
        """The square gets its four edges back."""
        rows = [[1, 0, 1], [-1, 0, 0], [0, 1, 1], [0, -1, 0]]
        P = polytope_from_halfspaces(_halfspaces(rows), 2)
        assert len(P.edges) == 4
        assert validate(P).is_smooth


class TestPolytopeFile:
    """Reading and writing the DIM / INEQ / VERT format."""

    def test_parse(self):
        """Comments and blank lines are ignored."""
        text = "# square\nDIM 2\n\nINEQ 4\n1 0 1\n-1 0 0\n0 1 1  # top\n0 -1 0\n"
        dim, halfspaces, vertices = parse_polytope_text(text)
        assert dim == 2
        assert len(halfspaces) == 4
        assert vertices is None

    def test_round_trip(self, tmp_path):
        """A written polytope reads back with the same vertices and facets."""
        P = chisel_all(make_box([3, 3, 3]), 1)
        path = tmp_path / "b1.poly"
        write_polytope_file(P, path)
        Q = read_polytope_file(path)
        assert sorted(Q.vertices) == sorted(P.vertices)
        assert set(Q.halfspaces) == set(P.halfspaces)
        assert validate(Q).is_smooth

    def test_format_without_vertices(self):
        """Vertex block can be omitted."""
        text = format_polytope(make_box([1, 1]), include_vertices=False)
        assert text.splitlines()[:2] == ["DIM 2", "INEQ 4"]
        assert "VERT" not in text

    @pytest.mark.parametrize(
        "text",
        [
            "INEQ 1\n1 1\n",
            "DIM 2\nINEQ 2\n1 0 1\n",
            "DIM 2\nINEQ 1\n1 x 1\n",
            "DIM 2\nINEQ 1\n1 0\n",
            "DIM 1\nINEQ 2\n1 1\n-1 0\nVERT 2\n0\n",
        ],
    )
    def test_malformed(self, text):
        """Bad headers, short blocks and non-integers are rejected."""
        with pytest.raises(PolytopeFileError):
            parse_polytope_text(text)

    def test_missing_file(self, tmp_path):
        """Unreadable paths raise a file error."""
        with pytest.raises(PolytopeFileError):
            read_polytope_file(tmp_path / "absent.poly")

    def test_smooth_reflexive_nine_polytope(self):
        """The bundled 12-facet 9-polytope is a smooth reflexive lattice polytope."""
        P = read_polytope_file(SMOOTH_REFLEXIVE_9D_FILE)
        assert P.dim == 9
        assert len(P.halfspaces) == 12
        assert len(P.vertices) == 50
        report = validate(P)
        assert report.is_smooth
        assert report.is_reflexive
        assert report.facets_tight
