"""
Plain-text polytope files.

    DIM n
    INEQ f
    a_1 ... a_n rhs        (f lines, meaning a . x <= rhs)
    VERT v                 (optional)
    x_1 ... x_n            (v lines)

Tokens are whitespace separated decimal integers of any size. Blank lines and
text after ``#`` are ignored.
"""

import logging
from pathlib import Path

from .errors import PolytopeError, PolytopeFileError
from .polytope import Halfspace, IntVector, SmoothPolytope, polytope_from_halfspaces

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            lines.append((number, tokens))
    return lines


def _integers(number: int, tokens: list[str], expected: int) -> list[int]:
    if len(tokens) != expected:
        raise PolytopeFileError(f"line {number}: expected {expected} integers, got {len(tokens)}")
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise PolytopeFileError(f"line {number}: not an integer row: {' '.join(tokens)}") from None


def _header(lines, position: int, keyword: str) -> int:
    if position >= len(lines):
        raise PolytopeFileError(f"missing {keyword} header")
    number, tokens = lines[position]
    if len(tokens) != 2 or tokens[0].upper() != keyword:
        raise PolytopeFileError(f"line {number}: expected '{keyword} <count>'")
    try:
        value = int(tokens[1])
    except ValueError:
        raise PolytopeFileError(f"line {number}: {keyword} count must be an integer") from None
    if value < 1:
        raise PolytopeFileError(f"line {number}: {keyword} count must be positive")
    return value


def parse_polytope_text(text: str) -> tuple[int, list[Halfspace], list[IntVector] | None]:
    lines = _content_lines(text)
    dim = _header(lines, 0, "DIM")
    facet_count = _header(lines, 1, "INEQ")
    position = 2
    if len(lines) < position + facet_count:
        raise PolytopeFileError(f"INEQ announces {facet_count} rows, file ends early")

    halfspaces = []
    for number, tokens in lines[position : position + facet_count]:
        row = _integers(number, tokens, dim + 1)
        try:
            halfspaces.append(Halfspace.normalized(row[:dim], row[dim]))
        except PolytopeError as exc:
            raise PolytopeFileError(f"line {number}: {exc}") from exc
    position += facet_count

    vertices = None
    if position < len(lines):
        vertex_count = _header(lines, position, "VERT")
        position += 1
        rows = lines[position : position + vertex_count]
        if len(rows) != vertex_count:
            raise PolytopeFileError(f"VERT announces {vertex_count} rows, file ends early")
        vertices = [tuple(_integers(number, tokens, dim)) for number, tokens in rows]
        position += vertex_count
        if position < len(lines):
            raise PolytopeFileError(f"line {lines[position][0]}: unexpected trailing content")
    return dim, halfspaces, vertices


def read_polytope_file(path: str | Path) -> SmoothPolytope:
    """Load a polytope file, enumerating vertices when no VERT block is given."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise PolytopeFileError(f"cannot read {path}: {exc}") from exc
    dim, halfspaces, vertices = parse_polytope_text(text)
    logger.debug(f"read {len(halfspaces)} halfspaces in dimension {dim} from {path}")
    return polytope_from_halfspaces(halfspaces, dim, vertices)


def format_polytope(P: SmoothPolytope, include_vertices: bool = True) -> str:
    lines = [f"DIM {P.dim}", f"INEQ {len(P.halfspaces)}"]
    lines += [" ".join(str(x) for x in (*h.normal, h.rhs)) for h in P.halfspaces]
    if include_vertices:
        lines.append(f"VERT {len(P.vertices)}")
        lines += [" ".join(str(x) for x in v) for v in P.vertices]
    return "\n".join(lines) + "\n"


def write_polytope_file(P: SmoothPolytope, path: str | Path, include_vertices: bool = True):
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_polytope(P, include_vertices))
    logger.info(f"wrote {len(P.halfspaces)} halfspaces to {path}")
