"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from critopt.complexes import Filtration, build_filtration, lower_star_1d


def gf2_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) % 2


def gf2_rank(m: np.ndarray) -> int:
    m = (np.array(m) % 2).astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        rank += 1
    return rank


def is_reduced(R: np.ndarray) -> bool:
    lows = []
    for j in range(R.shape[1]):
        nz = np.flatnonzero(R[:, j])
        if nz.size:
            lows.append(int(nz[-1]))
    return len(lows) == len(set(lows))


def is_unit_upper(m: np.ndarray) -> bool:
    return bool(
        np.all(np.diag(m) == 1) and np.all(np.tril(m, -1) == 0)
    )


@pytest.fixture
def triangle_filtration() -> Filtration:
    return build_filtration(
        [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)],
        [0, 0, 0, 0, 0, 0, 0],
    )


@pytest.fixture
def path_0312() -> Filtration:
    return lower_star_1d([0.0, 3.0, 1.0, 2.0])
