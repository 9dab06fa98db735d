"""Simplicial complexes, filtrations, and lower-star constructions.

A :class:`SimplicialComplex` is a face-closed list of simplices with fixed,
construction-order ids; a :class:`Filtration` adds real values (one per
simplex, respecting the face relation) and the induced total order.  Ids are
stable across re-filtrations of the same complex, which is what lets the
optimizer track diagram points across steps; positions within the order are
exposed separately through ``order`` / ``position`` / per-dimension ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ClosureError,
    EmptyInputError,
    InvalidFieldError,
    MonotonicityError,
    NotFoundError,
)

__all__ = [
    "Simplex",
    "GridField",
    "SimplicialComplex",
    "Filtration",
    "build_filtration",
    "path_complex",
    "freudenthal_complex",
    "lower_star_filtration",
    "lower_star_1d",
    "lower_star_3d",
    "upper_star_3d",
    "read_raw_field",
    "write_raw_field",
    "read_signal",
    "write_signal",
]


@dataclass(frozen=True)
class Simplex:
    """A simplex: dense id plus its strictly increasing vertex tuple."""

    id: int
    vertices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class GridField:
    """Scalar values on the vertices of a regular 3D grid, x fastest."""

    shape: tuple[int, int, int]
    values: np.ndarray

    def __post_init__(self) -> None:
        nx, ny, nz = self.shape
        if nx < 1 or ny < 1 or nz < 1:
            raise InvalidFieldError(f"grid shape must be positive, got {self.shape}")
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if vals.size != nx * ny * nz:
            raise InvalidFieldError(
                f"expected {nx * ny * nz} values for shape {self.shape}, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidFieldError("field contains non-finite values")
        object.__setattr__(self, "values", vals)


class SimplicialComplex:
    """Face-closed collection of simplices with Hasse-diagram incidence.

    Simplices get contiguous ids 0..n-1 in the order given at construction.
    Every proper face of every simplex must be present (``ClosureError``
    otherwise); immediate faces/cofaces are precomputed for traversal.
    """

    def __init__(self, simplices: Sequence[Iterable[int]]):
        verts: list[tuple[int, ...]] = []
        for s in simplices:
            vs = tuple(sorted(int(v) for v in s))
            if len(set(vs)) != len(vs) or not vs:
                raise ValueError(f"bad vertex set {s!r}")
            verts.append(vs)
        self.vertices: list[tuple[int, ...]] = verts
        self.index: dict[tuple[int, ...], int] = {}
        for i, vs in enumerate(verts):
            if vs in self.index:
                raise ValueError(f"duplicate simplex {vs}")
            self.index[vs] = i
        self.n = len(verts)
        self.dims = np.array([len(vs) - 1 for vs in verts], dtype=np.int32)
        self.dim = int(self.dims.max(initial=0))

        self.facets: list[np.ndarray] = []
        cofacets: list[list[int]] = [[] for _ in range(self.n)]
        for i, vs in enumerate(verts):
            if len(vs) == 1:
                self.facets.append(np.empty(0, dtype=np.int32))
                continue
            ids = []
            for k in range(len(vs)):
                face = vs[:k] + vs[k + 1 :]
                j = self.index.get(face)
                if j is None:
                    raise ClosureError(f"missing face {face} of simplex {vs}")
                ids.append(j)
                cofacets[j].append(i)
            self.facets.append(np.array(ids, dtype=np.int32))
        self.cofacets: list[np.ndarray] = [
            np.array(c, dtype=np.int32) for c in cofacets
        ]

        # per-dimension bookkeeping (construction order)
        self.members_by_dim: list[np.ndarray] = [
            np.flatnonzero(self.dims == p).astype(np.int32)
            for p in range(self.dim + 1)
        ]
        self.vertex_matrix_by_dim: list[np.ndarray] = [
            np.array([verts[i] for i in ids], dtype=np.int64).reshape(len(ids), p + 1)
            for p, ids in enumerate(self.members_by_dim)
        ]
        self.facet_matrix_by_dim: list[np.ndarray] = [
            np.array([self.facets[i] for i in ids], dtype=np.int32).reshape(
                len(ids), p + 1 if p > 0 else 0
            )
            for p, ids in enumerate(self.members_by_dim)
        ]
        self.n_vertex_labels = (
            int(max(vs[-1] for vs in verts)) + 1 if verts else 0
        )


class Filtration:
    """A simplexwise filtration: complex + values + compatible total order.

    Ties are broken by dimension, then by simplex id, so faces always precede
    cofaces.  ``argmax_vertex`` attributes each simplex value to the vertex
    label that realizes it (lower-star constructions only; -1 otherwise).
    """

    def __init__(
        self,
        complex: SimplicialComplex,
        values: np.ndarray,
        argmax_vertex: np.ndarray | None = None,
        _skip_checks: bool = False,
    ):
        self.complex = complex
        self.values = np.asarray(values, dtype=np.float64)
        if self.values.shape != (complex.n,):
            raise ValueError(
                f"expected {complex.n} values, got shape {self.values.shape}"
            )
        if not _skip_checks:
            if not np.all(np.isfinite(self.values)):
                raise InvalidFieldError("filtration values must be finite")
            for p in range(1, complex.dim + 1):
                ids = complex.members_by_dim[p]
                if len(ids) == 0:
                    continue
                fm = complex.facet_matrix_by_dim[p]
                bad = np.max(self.values[fm], axis=1) > self.values[ids]
                if np.any(bad):
                    i = int(ids[np.argmax(bad)])
                    raise MonotonicityError(
                        f"simplex {complex.vertices[i]} has a face with a larger value"
                    )

        ids_all = np.arange(complex.n)
        self.order = np.lexsort((ids_all, complex.dims, self.values)).astype(np.int64)
        self.position = np.empty(complex.n, dtype=np.int64)
        self.position[self.order] = ids_all

        self.dim_ids: list[np.ndarray] = []
        self.dim_rank = np.empty(complex.n, dtype=np.int64)
        for p in range(complex.dim + 1):
            members = self.order[complex.dims[self.order] == p]
            self.dim_ids.append(members)
            self.dim_rank[members] = np.arange(len(members))

        if argmax_vertex is None:
            argmax_vertex = np.full(complex.n, -1, dtype=np.int64)
        self.argmax_vertex = argmax_vertex

    # -- basic queries ---------------------------------------------------

    @property
    def n(self) -> int:
        return self.complex.n

    @property
    def dim(self) -> int:
        return self.complex.dim

    def _check_id(self, sid: int) -> int:
        sid = int(sid)
        if not 0 <= sid < self.complex.n:
            raise NotFoundError(f"no simplex with id {sid}")
        return sid

    def simplex(self, sid: int) -> Simplex:
        sid = self._check_id(sid)
        return Simplex(sid, self.complex.vertices[sid])

    def value(self, sid: int) -> float:
        return float(self.values[self._check_id(sid)])

    def simplex_dim(self, sid: int) -> int:
        return int(self.complex.dims[self._check_id(sid)])

    def faces(self, sid: int) -> frozenset[int]:
        """All proper faces, by breadth-first traversal of the Hasse diagram."""
        sid = self._check_id(sid)
        seen: set[int] = set()
        queue = [sid]
        while queue:
            cur = queue.pop()
            for f in self.complex.facets[cur]:
                f = int(f)
                if f not in seen:
                    seen.add(f)
                    queue.append(f)
        return frozenset(seen)

    def cofaces(self, sid: int) -> frozenset[int]:
        """All proper cofaces, by breadth-first traversal of the Hasse diagram."""
        sid = self._check_id(sid)
        seen: set[int] = set()
        queue = [sid]
        while queue:
            cur = queue.pop()
            for c in self.complex.cofacets[cur]:
                c = int(c)
                if c not in seen:
                    seen.add(c)
                    queue.append(c)
        return frozenset(seen)

    def with_values(self, values: np.ndarray, argmax_vertex: np.ndarray | None = None) -> "Filtration":
        return Filtration(self.complex, values, argmax_vertex)


def build_filtration(
    simplices: Sequence[Iterable[int]], values: Sequence[float]
) -> Filtration:
    """Build a filtration from explicit simplices and per-simplex values.

    Raises ``ClosureError`` if a face is missing and ``MonotonicityError`` if a
    face has a larger value than one of its cofaces.  The order is
    deterministic: by value, ties by dimension then id.
    """
    cx = SimplicialComplex(simplices)
    vals = np.asarray(list(values), dtype=np.float64)
    return Filtration(cx, vals)


# -- lower-star constructions ---------------------------------------------


def path_complex(n: int) -> SimplicialComplex:
    """The path complex on n vertices: n 0-simplices and n-1 edges."""
    if n < 1:
        raise EmptyInputError("need at least one vertex")
    simplices: list[tuple[int, ...]] = [(i,) for i in range(n)]
    simplices += [(i, i + 1) for i in range(n - 1)]
    return SimplicialComplex(simplices)


def freudenthal_complex(shape: tuple[int, int, int]) -> SimplicialComplex:
    """Freudenthal triangulation of a regular grid.

    Each unit cube is split into 6 tetrahedra sharing the main diagonal; axes
    of extent 1 are dropped, so degenerate grids yield the 2D (two triangles
    per square) or 1D (path) analogue.  Vertex label of (x, y, z) is
    ``x + nx * (y + ny * z)`` (x fastest).
    """
    nx, ny, nz = shape
    if nx < 1 or ny < 1 or nz < 1:
        raise InvalidFieldError(f"grid shape must be positive, got {shape}")

    def vid(x: int, y: int, z: int) -> int:
        return x + nx * (y + ny * z)

    axes = [a for a, extent in enumerate(shape) if extent > 1]
    unit = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    tops: set[tuple[int, ...]] = set()
    cell_ranges = [range(extent - 1) if extent > 1 else range(1) for extent in shape]
    for cx, cy, cz in product(*cell_ranges):
        for perm in permutations(axes):
            x, y, z = cx, cy, cz
            path = [vid(x, y, z)]
            for a in perm:
                x, y, z = x + unit[a][0], y + unit[a][1], z + unit[a][2]
                path.append(vid(x, y, z))
            tops.add(tuple(path))

    simplices: set[tuple[int, ...]] = {
        (vid(x, y, z),) for z in range(nz) for y in range(ny) for x in range(nx)
    }
    for top in tops:
        for k in range(1, len(top) + 1):
            for sub in combinations(top, k):
                simplices.add(sub)
    ordered = sorted(simplices, key=lambda t: (len(t), t))
    return SimplicialComplex(ordered)


def lower_star_filtration(
    cx: SimplicialComplex, vertex_values: np.ndarray
) -> Filtration:
    """Extend vertex values to all simplices by the maximum over vertices.

    The vertex realizing the maximum (smallest label on ties) is recorded per
    simplex for backpropagation.  The result is a valid filtration by
    construction, so the face check is skipped.
    """
    vertex_values = np.asarray(vertex_values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(vertex_values)):
        raise InvalidFieldError("vertex values must be finite")
    values = np.empty(cx.n, dtype=np.float64)
    argmax = np.empty(cx.n, dtype=np.int64)
    for p in range(cx.dim + 1):
        ids = cx.members_by_dim[p]
        if len(ids) == 0:
            continue
        vm = cx.vertex_matrix_by_dim[p]
        vals = vertex_values[vm]
        k = np.argmax(vals, axis=1)
        rows = np.arange(len(ids))
        values[ids] = vals[rows, k]
        argmax[ids] = vm[rows, k]
    return Filtration(cx, values, argmax, _skip_checks=True)


def lower_star_1d(signal: Sequence[float]) -> Filtration:
    """Lower-star filtration of a 1D signal on the path complex."""
    vals = np.asarray(list(signal), dtype=np.float64).ravel()
    if vals.size == 0:
        raise EmptyInputError("empty signal")
    if not np.all(np.isfinite(vals)):
        raise InvalidFieldError("signal contains non-finite values")
    return lower_star_filtration(path_complex(vals.size), vals)


def lower_star_3d(field: GridField) -> Filtration:
    """Lower-star filtration of a 3D grid field on its Freudenthal complex."""
    return lower_star_filtration(freudenthal_complex(field.shape), field.values)


def upper_star_3d(field: GridField) -> Filtration:
    """Upper-star filtration, implemented as lower-star of the negated field."""
    return lower_star_filtration(freudenthal_complex(field.shape), -field.values)


# -- file I/O ---------------------------------------------------------------


def read_raw_field(path: str | Path, shape: tuple[int, int, int]) -> GridField:
    """Read little-endian float32 values, row-major with x fastest."""
    nx, ny, nz = shape
    data = np.fromfile(str(path), dtype="<f4")
    if data.size != nx * ny * nz:
        raise InvalidFieldError(
            f"{path}: expected {nx * ny * nz} float32 values, found {data.size}"
        )
    return GridField(shape, data.astype(np.float64))


def write_raw_field(path: str | Path, values: np.ndarray) -> None:
    np.asarray(values, dtype=np.float64).astype("<f4").tofile(str(path))


def read_signal(path: str | Path) -> np.ndarray:
    """Read a whitespace-separated 1D signal."""
    text = Path(path).read_text().split()
    if not text:
        raise EmptyInputError(f"{path}: empty signal")
    return np.array([float(t) for t in text], dtype=np.float64)


def write_signal(path: str | Path, values: np.ndarray) -> None:
    Path(path).write_text(
        " ".join(repr(float(v)) for v in np.asarray(values).ravel()) + "\n"
    )
