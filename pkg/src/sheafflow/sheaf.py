"""Cellular sheaves on digraphs: coboundaries, cohomology, inter-level maps.

A sheaf assigns a stalk dimension to every cell and a restriction matrix to
every (vertex, incident edge) pair. Stalks are level-independent: the sheaf
on a sublevel complex is the same assignment restricted to the alive cells,
so degree-0 cochain spaces coincide across levels and degree-1 spaces are
coordinate blocks of the full one.

Sign convention for the coboundary: an edge row takes +restriction at its
head and -restriction at its tail. Any consistent choice gives isomorphic
cohomology; this one is fixed so outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DegreeError, FiltrationOrderError, InvariantViolation, SheafIncompleteError, ValidationError
from .field import FFMatrix, FieldSpec, hstack, kernel_basis, rref, solve
from .graph import DiGraphComplex, FiltrationLevel


@dataclass(frozen=True)
class CellularSheaf:
    graph: DiGraphComplex
    field: FieldSpec
    vertex_stalk_dim: Mapping[str, int]
    edge_stalk_dim: Mapping[str, int]
    restriction: Mapping[tuple[str, str], FFMatrix]

    def __post_init__(self) -> None:
        for e in self.graph.edges:
            edim = self.edge_stalk_dim.get(e.id)
            if edim is None or edim < 0:
                raise ValidationError(f"edge {e.id!r} has no stalk dimension")
            for v in (e.tail, e.head):
                vdim = self.vertex_stalk_dim.get(v)
                if vdim is None or vdim < 0:
                    raise ValidationError(f"vertex {v!r} has no stalk dimension")
                r = self.restriction.get((v, e.id))
                if r is None:
                    raise SheafIncompleteError(f"missing restriction for incidence ({v!r}, {e.id!r})")
                if r.field != self.field:
                    raise ValidationError(f"restriction ({v!r}, {e.id!r}) is over {r.field}, sheaf is over {self.field}")
                if (r.rows, r.cols) != (edim, vdim):
                    raise ValidationError(
                        f"restriction ({v!r}, {e.id!r}) has shape {r.rows}x{r.cols}, expected {edim}x{vdim}"
                    )


@dataclass(frozen=True)
class CochainSpace:
    """Coordinate layout of one cochain group: which cells contribute and
    where each stalk block starts."""

    degree: int
    level_index: int
    cells: tuple[str, ...]
    offsets: tuple[int, ...]
    total_dim: int

    def offset_of(self, cell: str) -> int:
        return self.offsets[self.cells.index(cell)]


@dataclass(frozen=True)
class CohomologyBasis:
    """Chosen representatives for one cohomology space.

    Degree 0: columns are kernel vectors of the coboundary. Degree 1: columns
    are standard coordinate directions complementing the coboundary image.
    """

    degree: int
    level_index: int
    dim: int
    representatives: FFMatrix


def cochain_space(sheaf: CellularSheaf, level: FiltrationLevel, degree: int) -> CochainSpace:
    if degree == 0:
        cells = sheaf.graph.vertices
        dims = [sheaf.vertex_stalk_dim[v] for v in cells]
    elif degree == 1:
        cells = level.alive_edges
        dims = [sheaf.edge_stalk_dim[e] for e in cells]
    else:
        raise DegreeError(f"graphs have cochains only in degrees 0 and 1, got {degree}")
    offsets = []
    total = 0
    for d in dims:
        offsets.append(total)
        total += d
    return CochainSpace(degree, level.index, tuple(cells), tuple(offsets), total)


def coboundary0(sheaf: CellularSheaf, level: FiltrationLevel) -> FFMatrix:
    """The degree-0 coboundary at one level, as a block matrix.

    Row block of edge e: +restriction(head, e) in the head's vertex columns,
    -restriction(tail, e) in the tail's. A 0-cochain is a global section
    exactly when every alive edge sees the same thing from both ends.
    """
    p = sheaf.field.p
    c0 = cochain_space(sheaf, level, 0)
    c1 = cochain_space(sheaf, level, 1)
    block = np.zeros((c1.total_dim, c0.total_dim), dtype=np.int64)
    for eid in level.alive_edges:
        e = sheaf.graph.edge_by_id(eid)
        row = c1.offset_of(eid)
        edim = sheaf.edge_stalk_dim[eid]
        for v, sign in ((e.head, 1), (e.tail, -1)):
            r = sheaf.restriction.get((v, eid))
            if r is None:
                raise SheafIncompleteError(f"missing restriction for incidence ({v!r}, {eid!r})")
            col = c0.offset_of(v)
            vdim = sheaf.vertex_stalk_dim[v]
            block[row : row + edim, col : col + vdim] = (
                block[row : row + edim, col : col + vdim] + sign * r.data
            ) % p
    return FFMatrix(sheaf.field, block)


def cohomology(sheaf: CellularSheaf, level: FiltrationLevel, degree: int) -> CohomologyBasis:
    """Cohomology of the coboundary complex at one level, with deterministic
    representatives.

    Degree 0 is the kernel of the coboundary. Degree 1 is the cokernel; its
    representatives are the standard basis directions of the edge cochain
    space at non-pivot coordinates of the transposed coboundary's RREF, which
    complete the coboundary image to the whole space.
    """
    if degree not in (0, 1):
        raise DegreeError(f"degree must be 0 or 1, got {degree}")
    d0 = coboundary0(sheaf, level)
    if degree == 0:
        reps = kernel_basis(d0)
        return CohomologyBasis(0, level.index, reps.cols, reps)
    _, rk, pivots = rref(d0.transpose())
    pivot_set = set(pivots)
    c1_dim = d0.rows
    free = [j for j in range(c1_dim) if j not in pivot_set]
    reps = np.zeros((c1_dim, len(free)), dtype=np.int64)
    for col, j in enumerate(free):
        reps[j, col] = 1
    return CohomologyBasis(1, level.index, len(free), FFMatrix(sheaf.field, reps))


def _check_nested(from_level: FiltrationLevel, to_level: FiltrationLevel) -> None:
    if not set(to_level.alive_edges) <= set(from_level.alive_edges):
        raise FiltrationOrderError(
            f"level {to_level.index} is not contained in level {from_level.index}"
        )


def cochain_restriction(
    sheaf: CellularSheaf, from_level: FiltrationLevel, to_level: FiltrationLevel, degree: int
) -> FFMatrix:
    """Cochain-level map from a level to a nested sub-level.

    Degree 0 is the identity (vertices and their stalks never change);
    degree 1 is the coordinate projection that drops blocks of edges absent
    from the sub-level.
    """
    if degree not in (0, 1):
        raise DegreeError(f"degree must be 0 or 1, got {degree}")
    _check_nested(from_level, to_level)
    if degree == 0:
        return FFMatrix.identity(sheaf.field, cochain_space(sheaf, from_level, 0).total_dim)
    c_from = cochain_space(sheaf, from_level, 1)
    c_to = cochain_space(sheaf, to_level, 1)
    proj = np.zeros((c_to.total_dim, c_from.total_dim), dtype=np.int64)
    for eid in c_to.cells:
        d = sheaf.edge_stalk_dim[eid]
        r, c = c_to.offset_of(eid), c_from.offset_of(eid)
        proj[r : r + d, c : c + d] = np.eye(d, dtype=np.int64)
    return FFMatrix(sheaf.field, proj)


def induced_map(
    sheaf: CellularSheaf, from_level: FiltrationLevel, to_level: FiltrationLevel, degree: int
) -> FFMatrix:
    """Matrix of the map on cohomology induced by restriction to a sub-level,
    written in the representative bases chosen by ``cohomology``.

    Degree 0 re-expresses each kernel vector of the larger level in the
    smaller level's kernel basis (kernels only grow as edge constraints
    disappear, so this always solves). Degree 1 projects each representative
    and reads off its coordinates in the complement of the sub-level's
    coboundary image.
    """
    if degree not in (0, 1):
        raise DegreeError(f"degree must be 0 or 1, got {degree}")
    _check_nested(from_level, to_level)
    h_from = cohomology(sheaf, from_level, degree)
    h_to = cohomology(sheaf, to_level, degree)
    if degree == 0:
        x = solve(h_to.representatives, h_from.representatives)
        if x is None:
            raise InvariantViolation(
                f"kernel vector at level {from_level.index} left the kernel at level {to_level.index}"
            )
        return x
    proj = cochain_restriction(sheaf, from_level, to_level, 1)
    projected = proj @ h_from.representatives
    d0_to = coboundary0(sheaf, to_level)
    stacked = hstack([d0_to, h_to.representatives])
    x = solve(stacked, projected)
    if x is None:
        raise InvariantViolation(
            f"projected cocycle not reachable from image + complement at level {to_level.index}"
        )
    return FFMatrix(sheaf.field, x.data[d0_to.cols :, :])


def build_constant_sheaf(g: DiGraphComplex, field: FieldSpec, d: int) -> CellularSheaf:
    """The constant sheaf of stalk dimension d: identity restrictions
    everywhere. Its cohomology reproduces ordinary graph cohomology scaled
    by d."""
    if d < 1:
        raise ValidationError(f"constant sheaf dimension must be >= 1, got {d}")
    ident = FFMatrix.identity(field, d)
    restriction = {}
    for e in g.edges:
        restriction[(e.tail, e.id)] = ident
        restriction[(e.head, e.id)] = ident
    return CellularSheaf(
        graph=g,
        field=field,
        vertex_stalk_dim={v: d for v in g.vertices},
        edge_stalk_dim={e.id: d for e in g.edges},
        restriction=restriction,
    )
