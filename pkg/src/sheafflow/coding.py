"""Network coding sheaves: stalks from capacities, restrictions from codes.

Edge stalks are k^cap(e). A non-source vertex stores everything it receives:
its stalk is the direct sum of incoming edge stalks, and each incoming
incidence restricts by the canonical projection onto that summand. What a
vertex emits is the essence of the code, so outgoing incidences carry
user-supplied coding matrices, with a deterministic all-incoming-sum default.

Sources have no incoming edges to store, so their stalk is the direct sum of
their *outgoing* edge stalks (the messages they choose to emit) and outgoing
incidences are again canonical projections. A source with an inbound edge has
no summand for it; that incidence restricts by the zero map.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .errors import CodingIncompleteError, ValidationError
from .field import FFMatrix, FieldSpec
from .graph import DiGraphComplex
from .sheaf import CellularSheaf

CodingSpec = Mapping[tuple[str, str], FFMatrix]


def vertex_stalk_blocks(g: DiGraphComplex, v: str) -> list[tuple[str, int, int]]:
    """Block layout of v's stalk as (edge id, offset, width) triples.

    Sources are laid out over Out(v), every other vertex over In(v), both in
    graph edge order.
    """
    edges = g.out_edges(v) if v in set(g.sources) else g.in_edges(v)
    blocks = []
    offset = 0
    for e in edges:
        blocks.append((e.id, offset, g.cap[e.id]))
        offset += g.cap[e.id]
    return blocks


def nc_stalk_dimensions(g: DiGraphComplex) -> tuple[dict[str, int], dict[str, int]]:
    """Vertex and edge stalk dimensions of the network coding sheaf."""
    vdims = {v: sum(w for _, _, w in vertex_stalk_blocks(g, v)) for v in g.vertices}
    edims = {e.id: g.cap[e.id] for e in g.edges}
    return vdims, edims


def structure_warnings(g: DiGraphComplex) -> list[str]:
    """Human-readable notes about degenerate stalk assignments."""
    notes = []
    sources = set(g.sources)
    for v in g.vertices:
        if v not in sources and not g.in_edges(v) and g.out_edges(v):
            notes.append(f"vertex {v!r} has outgoing edges but no inputs and is not a source; its stalk is zero")
        if v in sources and g.in_edges(v):
            notes.append(f"source {v!r} has incoming edges; it ignores them (zero restriction)")
    return notes


def _block_projection(field: FieldSpec, blocks, edge_id: str) -> FFMatrix:
    total = sum(w for _, _, w in blocks)
    for eid, offset, width in blocks:
        if eid == edge_id:
            proj = np.zeros((width, total), dtype=np.int64)
            proj[:, offset : offset + width] = np.eye(width, dtype=np.int64)
            return FFMatrix(field, proj)
    raise KeyError(edge_id)


def default_routing_codings(g: DiGraphComplex, field: FieldSpec) -> dict[tuple[str, str], FFMatrix]:
    """The deterministic fallback code: forward the sum of everything heard.

    For a non-source vertex v and outgoing edge e, row r of the coding matrix
    adds up coordinate r of every incoming block wide enough to have one. With
    unit capacities this is the plain XOR (sum) of all incoming symbols.
    """
    sources = set(g.sources)
    codings: dict[tuple[str, str], FFMatrix] = {}
    for v in g.vertices:
        if v in sources:
            continue
        blocks = vertex_stalk_blocks(g, v)
        vdim = sum(w for _, _, w in blocks)
        for e in g.out_edges(v):
            m = np.zeros((g.cap[e.id], vdim), dtype=np.int64)
            for r in range(g.cap[e.id]):
                for _, offset, width in blocks:
                    if r < width:
                        m[r, offset + r] = 1
            codings[(v, e.id)] = FFMatrix(field, m)
    return codings


def build_nc_sheaf(
    g: DiGraphComplex, field: FieldSpec, codings: CodingSpec | None = None
) -> CellularSheaf:
    """Assemble the network coding sheaf for a validated graph.

    ``codings`` maps (vertex, outgoing edge) to its coding matrix; None means
    use ``default_routing_codings``. When supplied, the map must cover every
    outgoing edge of every non-source vertex.

    Raises:
        CodingIncompleteError: a required (vertex, edge) matrix is missing.
        ValidationError: a coding entry is misplaced or has the wrong shape.
    """
    if codings is None:
        codings = default_routing_codings(g, field)
    vdims, edims = nc_stalk_dimensions(g)
    sources = set(g.sources)

    required = {(v, e.id) for v in g.vertices if v not in sources for e in g.out_edges(v)}
    for key in codings:
        if key not in required:
            v, eid = key
            raise ValidationError(f"coding for ({v!r}, {eid!r}) does not match any non-source outgoing incidence")
    restriction: dict[tuple[str, str], FFMatrix] = {}
    for v in g.vertices:
        blocks = vertex_stalk_blocks(g, v)
        if v in sources:
            for e in g.in_edges(v):
                restriction[(v, e.id)] = FFMatrix.zeros(field, g.cap[e.id], vdims[v])
            for e in g.out_edges(v):
                restriction[(v, e.id)] = _block_projection(field, blocks, e.id)
        else:
            for e in g.in_edges(v):
                restriction[(v, e.id)] = _block_projection(field, blocks, e.id)
            for e in g.out_edges(v):
                m = codings.get((v, e.id))
                if m is None:
                    raise CodingIncompleteError(f"no coding matrix for ({v!r}, {e.id!r})")
                if m.field != field:
                    raise ValidationError(f"coding for ({v!r}, {e.id!r}) is over {m.field}, expected {field}")
                if (m.rows, m.cols) != (g.cap[e.id], vdims[v]):
                    raise ValidationError(
                        f"coding for ({v!r}, {e.id!r}) has shape {m.rows}x{m.cols}, "
                        f"expected {g.cap[e.id]}x{vdims[v]}"
                    )
                restriction[(v, e.id)] = m

    return CellularSheaf(
        graph=g,
        field=field,
        vertex_stalk_dim=vdims,
        edge_stalk_dim=edims,
        restriction=restriction,
    )


def parse_codings(
    g: DiGraphComplex, field: FieldSpec, entries: Sequence[Mapping]
) -> dict[tuple[str, str], FFMatrix]:
    """Parse the codings section of a network file into a CodingSpec.

    Each entry is {"vertex", "edge", "matrix"} with the matrix given as a
    row-major array of arrays of integers mod p.
    """
    vset = set(g.vertices)
    eids = {e.id for e in g.edges}
    codings: dict[tuple[str, str], FFMatrix] = {}
    for entry in entries:
        v, eid = entry.get("vertex"), entry.get("edge")
        if v not in vset:
            raise ValidationError(f"coding entry names unknown vertex {v!r}")
        if eid not in eids:
            raise ValidationError(f"coding entry names unknown edge {eid!r}")
        if (v, eid) in codings:
            raise ValidationError(f"duplicate coding entry for ({v!r}, {eid!r})")
        raw = entry.get("matrix")
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise ValidationError(f"coding matrix for ({v!r}, {eid!r}) must be an array of arrays")
        vdims, _ = nc_stalk_dimensions(g)
        codings[(v, eid)] = FFMatrix.from_rows(field, raw, cols=vdims[v] if not raw else None)
    return codings
