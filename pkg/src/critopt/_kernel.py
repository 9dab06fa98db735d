"""Column-reduction kernels over GF(2).

Columns are sorted int32 arrays of row indices packed CSC-style (indptr /
indices).  Additions are symmetric-difference merges; the pivot of a column is
its last (largest) entry.  The schedule is left-to-right with each column
reduced fully before the next one starts, which is what gives U and V their
sparsity structure downstream.

The numba kernel is the production path; ``_reduce_py`` is a pure-Python twin
with the same contract, used as a fallback and cross-checked by tests.
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised implicitly by the dispatch test
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _xor_merge(a, alen, b, out):
    """Symmetric difference of sorted a[:alen] and b into out; returns length."""
    i = 0
    j = 0
    k = 0
    lb = b.size
    while i < alen and j < lb:
        x = a[i]
        y = b[j]
        if x < y:
            out[k] = x
            i += 1
            k += 1
        elif y < x:
            out[k] = y
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < alen:
        out[k] = a[i]
        i += 1
        k += 1
    while j < lb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@njit(cache=True)
def _grow_i32(arr, need):
    cap = arr.size
    newcap = cap * 2
    if newcap < need:
        newcap = need
    out = np.empty(newcap, np.int32)
    out[:cap] = arr
    return out


@njit(cache=True)
def _reduce_nb(indptr, indices, nrows, compute_uv):
    ncols = indptr.size - 1
    r_ptr = np.zeros(ncols + 1, np.int64)
    r_idx = np.empty(max(16, indices.size * 2), np.int32)
    v_ptr = np.zeros(ncols + 1, np.int64)
    v_idx = np.empty(max(16, ncols * 2), np.int32)
    u_src = np.empty(16, np.int32)
    u_dst = np.empty(16, np.int32)
    n_u = 0
    lows = np.full(ncols, -1, np.int32)
    pivot = np.full(max(nrows, 1), -1, np.int64)
    work = np.empty(max(nrows, 1), np.int32)
    tmp = np.empty(max(nrows, 1), np.int32)
    vwork = np.empty(max(ncols, 1), np.int32)
    vtmp = np.empty(max(ncols, 1), np.int32)
    n_add = 0

    for j in range(ncols):
        s = indptr[j]
        e = indptr[j + 1]
        wlen = int(e - s)
        for t in range(wlen):
            work[t] = indices[s + t]
        vlen = 0
        if compute_uv:
            vwork[0] = j
            vlen = 1
        while wlen > 0:
            r = work[wlen - 1]
            i = pivot[r]
            if i < 0:
                pivot[r] = j
                break
            wlen = _xor_merge(work, wlen, r_idx[r_ptr[i] : r_ptr[i + 1]], tmp)
            for t in range(wlen):
                work[t] = tmp[t]
            n_add += 1
            if compute_uv:
                if n_u >= u_src.size:
                    u_src = _grow_i32(u_src, n_u + 1)
                    u_dst = _grow_i32(u_dst, n_u + 1)
                u_src[n_u] = i
                u_dst[n_u] = j
                n_u += 1
                vlen = _xor_merge(vwork, vlen, v_idx[v_ptr[i] : v_ptr[i + 1]], vtmp)
                for t in range(vlen):
                    vwork[t] = vtmp[t]
        if wlen > 0:
            lows[j] = work[wlen - 1]
        need = r_ptr[j] + wlen
        if need > r_idx.size:
            r_idx = _grow_i32(r_idx, need)
        for t in range(wlen):
            r_idx[r_ptr[j] + t] = work[t]
        r_ptr[j + 1] = need
        if compute_uv:
            vneed = v_ptr[j] + vlen
            if vneed > v_idx.size:
                v_idx = _grow_i32(v_idx, vneed)
            for t in range(vlen):
                v_idx[v_ptr[j] + t] = vwork[t]
            v_ptr[j + 1] = vneed

    return (
        r_ptr,
        r_idx[: r_ptr[ncols]].copy(),
        v_ptr,
        v_idx[: v_ptr[ncols]].copy(),
        u_src[:n_u].copy(),
        u_dst[:n_u].copy(),
        lows,
        n_add,
    )


def _reduce_py(indptr, indices, nrows, compute_uv):
    """Pure-Python twin of the numba kernel (identical outputs)."""
    ncols = len(indptr) - 1
    r_cols: list[np.ndarray] = []
    v_cols: list[np.ndarray] = []
    u_src: list[int] = []
    u_dst: list[int] = []
    lows = np.full(ncols, -1, np.int32)
    pivot: dict[int, int] = {}
    n_add = 0
    for j in range(ncols):
        col = set(int(r) for r in indices[indptr[j] : indptr[j + 1]])
        vcol = {j}
        while col:
            r = max(col)
            i = pivot.get(r, -1)
            if i < 0:
                pivot[r] = j
                break
            col ^= set(int(x) for x in r_cols[i])
            n_add += 1
            if compute_uv:
                u_src.append(i)
                u_dst.append(j)
                vcol ^= set(int(x) for x in v_cols[i])
        if col:
            lows[j] = max(col)
        r_cols.append(np.array(sorted(col), dtype=np.int32))
        v_cols.append(np.array(sorted(vcol) if compute_uv else [], dtype=np.int32))

    def pack(cols):
        ptr = np.zeros(ncols + 1, dtype=np.int64)
        for j, c in enumerate(cols):
            ptr[j + 1] = ptr[j] + len(c)
        idx = (
            np.concatenate(cols).astype(np.int32)
            if ncols
            else np.empty(0, dtype=np.int32)
        )
        return ptr, idx

    r_ptr, r_idx = pack(r_cols)
    v_ptr, v_idx = pack(v_cols)
    return (
        r_ptr,
        r_idx,
        v_ptr,
        v_idx,
        np.array(u_src, dtype=np.int32),
        np.array(u_dst, dtype=np.int32),
        lows,
        n_add,
    )


def reduce_columns(indptr, indices, nrows, compute_uv=True):
    """Reduce packed columns; dispatches to the numba kernel when available."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int32)
    if HAVE_NUMBA:
        return _reduce_nb(indptr, indices, np.int64(nrows), compute_uv)
    return _reduce_py(indptr, indices, int(nrows), compute_uv)
