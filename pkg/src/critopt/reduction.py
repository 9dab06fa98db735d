"""Sparse GF(2) matrices, lazy reduction, duality, and persistence pairing.

The reduction factors a boundary matrix D as R = D*V and D = R*U with R
reduced (distinct pivots), V and U unit upper-triangular.  U is recorded as
the set of single-entry updates the schedule performs: each addition of column
i into column j sets U[i, j] = 1 exactly once, so U = I + events with no
cancellation.  Cohomology reuses the same kernel on the anti-transpose.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .complexes import Filtration
from .errors import DimensionError

__all__ = [
    "SparseBinaryMatrix",
    "Decomposition",
    "PersistencePair",
    "boundary_matrix",
    "lazy_reduce",
    "anti_transpose",
    "dual_decomposition",
    "read_pairs",
    "DecompositionCache",
    "diagram_to_csv",
    "diagram_from_csv",
    "addition_count",
]

DIAGRAM_CSV_HEADER = "dim,birth,death,birth_simplex,death_simplex"

_counters = {"column_additions": 0}


def addition_count() -> int:
    """Total column additions performed by all reductions in this process."""
    return _counters["column_additions"]


class SparseBinaryMatrix:
    """Column-major sparse matrix over GF(2).

    Each column is a strictly increasing int32 array of row indices holding a
    one.  Addition is symmetric difference; the pivot of a nonzero column is
    its last entry.
    """

    __slots__ = ("nrows", "columns")

    def __init__(self, nrows: int, columns: list[np.ndarray], *, _skip_checks=False):
        self.nrows = int(nrows)
        self.columns = [np.asarray(c, dtype=np.int32) for c in columns]
        if not _skip_checks:
            for c in self.columns:
                if c.size and (
                    np.any(np.diff(c) <= 0) or c[0] < 0 or c[-1] >= self.nrows
                ):
                    raise ValueError(f"bad column {c!r} for {self.nrows} rows")

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def col(self, j: int) -> np.ndarray:
        return self.columns[j]

    def low(self, j: int) -> int:
        c = self.columns[j]
        return int(c[-1]) if c.size else -1

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for j, c in enumerate(self.columns):
            out[c, j] = 1
        return out

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseBinaryMatrix":
        dense = np.asarray(dense) % 2
        cols = [np.flatnonzero(dense[:, j]).astype(np.int32) for j in range(dense.shape[1])]
        return cls(dense.shape[0], cols)

    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        ptr = np.zeros(self.ncols + 1, dtype=np.int64)
        for j, c in enumerate(self.columns):
            ptr[j + 1] = ptr[j] + c.size
        idx = (
            np.concatenate(self.columns).astype(np.int32)
            if self.ncols
            else np.empty(0, dtype=np.int32)
        )
        return ptr, idx

    def anti_transpose(self) -> "SparseBinaryMatrix":
        return anti_transpose(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(np.array_equal(a, b) for a, b in zip(self.columns, other.columns))
        )


def anti_transpose(m: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Transpose with both axes reversed: out[i, j] = in[nrows-1-j, ncols-1-i]."""
    out_cols: list[list[int]] = [[] for _ in range(m.nrows)]
    nc = m.ncols
    for c, rows in enumerate(m.columns):
        for r in rows:
            out_cols[m.nrows - 1 - int(r)].append(nc - 1 - c)
    cols = [np.sort(np.array(c, dtype=np.int32)) for c in out_cols]
    return SparseBinaryMatrix(nc, cols, _skip_checks=True)


@dataclass(frozen=True)
class PersistencePair:
    """A persistence pair; infinite pairs have death math.inf and no simplex."""

    birth_simplex: int
    death_simplex: int | None
    birth: float
    death: float
    dim: int

    def __post_init__(self):
        if self.death < self.birth:
            raise ValueError(f"death {self.death} before birth {self.birth}")
        if self.death_simplex is None and not math.isinf(self.death):
            raise ValueError("finite death value without a death simplex")

    @property
    def finite(self) -> bool:
        return self.death_simplex is not None

    @property
    def persistence(self) -> float:
        return self.death - self.birth


class Decomposition:
    """R = D*V / D = R*U for one boundary matrix, plus the pivot map.

    ``lows[j]`` is the pivot row of column j (-1 for zero columns).  U is kept
    both column-major and as its event list; row access goes through an index
    transposed on demand.
    """

    def __init__(
        self,
        R: SparseBinaryMatrix,
        V: SparseBinaryMatrix,
        U: SparseBinaryMatrix,
        lows: np.ndarray,
        u_events: tuple[np.ndarray, np.ndarray],
        n_additions: int,
        has_uv: bool = True,
    ):
        self.R = R
        self.V = V
        self.U = U
        self.lows = np.asarray(lows, dtype=np.int64)
        self.u_events = u_events
        self.n_additions = int(n_additions)
        self.has_uv = has_uv
        self._u_rows: list[np.ndarray] | None = None

    @property
    def ncols(self) -> int:
        return self.R.ncols

    @property
    def pairing(self) -> dict[int, int | None]:
        return {j: (int(r) if r >= 0 else None) for j, r in enumerate(self.lows)}

    def v_col(self, j: int) -> np.ndarray:
        if not self.has_uv:
            raise ValueError("decomposition was reduced without U and V")
        return self.V.columns[j]

    def u_row(self, i: int) -> np.ndarray:
        if not self.has_uv:
            raise ValueError("decomposition was reduced without U and V")
        if self._u_rows is None:
            rows: list[list[int]] = [[j] for j in range(self.ncols)]
            src, dst = self.u_events
            for s, d in zip(src, dst):
                rows[int(s)].append(int(d))
            self._u_rows = [np.array(sorted(r), dtype=np.int32) for r in rows]
        return self._u_rows[i]

    def pivot_rows(self) -> np.ndarray:
        """Boolean mask over rows: True where some column has its pivot."""
        mask = np.zeros(self.R.nrows, dtype=bool)
        pl = self.lows[self.lows >= 0]
        mask[pl] = True
        return mask


def lazy_reduce(D: SparseBinaryMatrix, compute_uv: bool = True) -> Decomposition:
    """Left-to-right column reduction producing R, V, U.

    Over GF(2) every elimination coefficient is 1, so U is exactly the
    identity plus one entry per recorded addition.
    """
    indptr, indices = D.packed()
    r_ptr, r_idx, v_ptr, v_idx, u_src, u_dst, lows, n_add = _kernel.reduce_columns(
        indptr, indices, D.nrows, compute_uv
    )
    _counters["column_additions"] += int(n_add)
    ncols = D.ncols
    r_cols = [r_idx[r_ptr[j] : r_ptr[j + 1]] for j in range(ncols)]
    R = SparseBinaryMatrix(D.nrows, r_cols, _skip_checks=True)
    if compute_uv:
        v_cols = [v_idx[v_ptr[j] : v_ptr[j + 1]] for j in range(ncols)]
        u_lists: list[list[int]] = [[j] for j in range(ncols)]
        for s, d in zip(u_src, u_dst):
            u_lists[int(d)].append(int(s))
        u_cols = [np.array(sorted(c), dtype=np.int32) for c in u_lists]
    else:
        v_cols = [np.empty(0, dtype=np.int32) for _ in range(ncols)]
        u_cols = [np.empty(0, dtype=np.int32) for _ in range(ncols)]
    V = SparseBinaryMatrix(ncols, v_cols, _skip_checks=True)
    U = SparseBinaryMatrix(ncols, u_cols, _skip_checks=True)
    return Decomposition(R, V, U, lows, (u_src, u_dst), n_add, has_uv=compute_uv)


def boundary_matrix(filt: Filtration, p: int) -> SparseBinaryMatrix:
    """D_p: columns are p-simplices, rows (p-1)-simplices, filtration order."""
    if not 1 <= p <= filt.dim:
        raise DimensionError(f"dimension {p} out of range 1..{filt.dim}")
    return _boundary_matrix_unchecked(filt, p)


def _boundary_matrix_unchecked(filt: Filtration, p: int) -> SparseBinaryMatrix:
    cx = filt.complex
    nrows = len(filt.dim_ids[p - 1]) if p >= 1 else 0
    if p > filt.dim or p < 1:
        return SparseBinaryMatrix(nrows, [], _skip_checks=True)
    ids = filt.dim_ids[p]
    if len(ids) == 0:
        return SparseBinaryMatrix(nrows, [], _skip_checks=True)
    row_of = {int(s): k for k, s in enumerate(cx.members_by_dim[p])}
    fm = cx.facet_matrix_by_dim[p]
    ranks = filt.dim_rank[fm[[row_of[int(s)] for s in ids]]]
    ranks = np.sort(ranks, axis=1).astype(np.int32)
    return SparseBinaryMatrix(nrows, list(ranks), _skip_checks=True)


def zero_boundary_matrix(filt: Filtration) -> SparseBinaryMatrix:
    """D_0 by convention: every vertex column is empty (all vertices positive)."""
    n0 = len(filt.dim_ids[0])
    return SparseBinaryMatrix(0, [np.empty(0, dtype=np.int32)] * n0, _skip_checks=True)


def dual_decomposition(filt: Filtration, p: int) -> Decomposition:
    """Reduce the anti-transpose of D_p (cohomology side)."""
    return lazy_reduce(anti_transpose(boundary_matrix(filt, p)))


class DecompositionCache:
    """Per-dimension primal/dual decompositions of a filtration, lazily built.

    Dimension 0 uses the zero matrix convention; the dual is available up to
    dim+1 so top-dimensional unpaired simplices can be moved.  ``compute_uv``
    is True/False or a set of dimensions whose primal reduction should carry
    U and V (reading the pairing alone only needs R).  Wall-clock per
    reduction is recorded for cost accounting.
    """

    def __init__(self, filt: Filtration, compute_uv=True):
        self.filt = filt
        self.compute_uv = compute_uv
        self._primal: dict[int, Decomposition] = {}
        self._dual: dict[int, Decomposition] = {}
        self.timings: list[tuple[str, int, float]] = []

    def _wants_uv(self, p: int) -> bool:
        if isinstance(self.compute_uv, bool):
            return self.compute_uv
        return p in self.compute_uv

    def primal(self, p: int) -> Decomposition:
        if p not in self._primal:
            if not 0 <= p <= self.filt.dim:
                raise DimensionError(f"dimension {p} out of range 0..{self.filt.dim}")
            D = (
                zero_boundary_matrix(self.filt)
                if p == 0
                else _boundary_matrix_unchecked(self.filt, p)
            )
            t0 = time.perf_counter()
            self._primal[p] = lazy_reduce(D, self._wants_uv(p))
            self.timings.append(("primal", p, time.perf_counter() - t0))
        return self._primal[p]

    def dual(self, p: int) -> Decomposition:
        if p not in self._dual:
            if not 1 <= p <= self.filt.dim + 1:
                raise DimensionError(
                    f"dual dimension {p} out of range 1..{self.filt.dim + 1}"
                )
            D = anti_transpose(_boundary_matrix_unchecked(self.filt, p))
            t0 = time.perf_counter()
            self._dual[p] = lazy_reduce(D, True)
            self.timings.append(("dual", p, time.perf_counter() - t0))
        return self._dual[p]

    def is_positive(self, sid: int) -> bool:
        """True when the simplex's own boundary column reduces to zero."""
        p = self.filt.simplex_dim(sid)
        return bool(self.primal(p).lows[self.filt.dim_rank[sid]] < 0)

    def is_paired_as_birth(self, sid: int) -> bool:
        """True when some (p+1)-column has this simplex's rank as pivot."""
        p = self.filt.simplex_dim(sid)
        if p >= self.filt.dim:
            return False
        return bool(self.primal(p + 1).pivot_rows()[self.filt.dim_rank[sid]])


def read_pairs(
    filt: Filtration,
    *,
    cache: DecompositionCache | None = None,
    dims: tuple[int, ...] | None = None,
) -> list[PersistencePair]:
    """Read the persistence pairing off the reduced boundary matrices.

    Finite pairs in dimension q come from pivots of D_{q+1}; positive
    q-simplices that are no column's pivot become infinite pairs.
    """
    if cache is None:
        cache = DecompositionCache(filt, compute_uv=False)
    if dims is None:
        dims = tuple(range(filt.dim + 1))
    pairs: list[PersistencePair] = []
    for q in sorted(set(dims)):
        if not 0 <= q <= filt.dim:
            raise DimensionError(f"diagram dimension {q} out of range 0..{filt.dim}")
        ids_q = filt.dim_ids[q]
        if len(ids_q) == 0:
            continue
        pivot_mask = np.zeros(len(ids_q), dtype=bool)
        if q + 1 <= filt.dim:
            up = cache.primal(q + 1)
            ids_up = filt.dim_ids[q + 1]
            for j, r in enumerate(up.lows):
                if r >= 0:
                    pivot_mask[r] = True
                    b = int(ids_q[r])
                    d = int(ids_up[j])
                    pairs.append(
                        PersistencePair(
                            b, d, float(filt.values[b]), float(filt.values[d]), q
                        )
                    )
        own = cache.primal(q)
        positive = own.lows < 0
        for r in np.flatnonzero(positive & ~pivot_mask):
            b = int(ids_q[r])
            pairs.append(
                PersistencePair(b, None, float(filt.values[b]), math.inf, q)
            )
    pairs.sort(key=lambda pr: (pr.dim, int(filt.position[pr.birth_simplex])))
    return pairs


# -- diagram CSV --------------------------------------------------------------


def diagram_to_csv(pairs: list[PersistencePair]) -> str:
    lines = [DIAGRAM_CSV_HEADER]
    for p in pairs:
        death = "inf" if not p.finite else repr(p.death)
        dsx = -1 if p.death_simplex is None else p.death_simplex
        lines.append(f"{p.dim},{p.birth!r},{death},{p.birth_simplex},{dsx}")
    return "\n".join(lines) + "\n"


def diagram_from_csv(text: str) -> list[PersistencePair]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines and lines[0] == DIAGRAM_CSV_HEADER:
        lines = lines[1:]
    out = []
    for ln in lines:
        dim, birth, death, bs, ds = ln.split(",")
        ds_i = int(ds)
        out.append(
            PersistencePair(
                int(bs),
                None if ds_i < 0 else ds_i,
                float(birth),
                math.inf if death == "inf" else float(death),
                int(dim),
            )
        )
    return out
