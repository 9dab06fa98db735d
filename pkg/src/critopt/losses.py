"""Matchings (diagram point -> target point) and the diagram loss."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .reduction import PersistencePair

__all__ = [
    "MatchMode",
    "Matching",
    "simplification_matching",
    "quadrant_matching",
    "diagram_loss",
    "simplification_loss",
]


class MatchMode(str, enum.Enum):
    """Where a simplified point goes on the diagonal."""

    MIDPOINT = "midpoint"
    BIRTH_UP = "birth-up"
    DEATH_DOWN = "death-down"


@dataclass(frozen=True)
class Matching:
    """Partial assignment of diagram points to target points (b', d')."""

    entries: tuple[tuple[PersistencePair, tuple[float, float]], ...]

    def __len__(self) -> int:
        return len(self.entries)


def simplification_matching(
    diagram: list[PersistencePair],
    eps: float,
    mode: MatchMode = MatchMode.MIDPOINT,
) -> Matching:
    """Match every finite point with persistence <= eps to the diagonal.

    MIDPOINT sends (b, d) to ((b+d)/2, (b+d)/2); DEATH_DOWN to (b, b)
    (death-only movement); BIRTH_UP to (d, d) (birth-only movement).
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive (or inf), got {eps}")
    mode = MatchMode(mode)
    entries = []
    for p in diagram:
        if not p.finite or p.persistence > eps:
            continue
        if mode is MatchMode.MIDPOINT:
            m = (p.birth + p.death) / 2.0
            target = (m, m)
        elif mode is MatchMode.DEATH_DOWN:
            target = (p.birth, p.birth)
        else:
            target = (p.death, p.death)
        entries.append((p, target))
    return Matching(tuple(entries))


def quadrant_matching(diagram: list[PersistencePair], a: float) -> Matching:
    """Match points in the quadrant {b <= a, d >= a} to its nearest boundary.

    The candidates are (b, a) and (a, d); ties pick (b, a), which only moves
    the death value and keeps the move on the homology side.
    """
    if not math.isfinite(a):
        raise ValueError(f"threshold must be finite, got {a}")
    entries = []
    for p in diagram:
        if not p.finite or not (p.birth <= a <= p.death):
            continue
        down = p.death - a  # distance to (b, a)
        up = a - p.birth  # distance to (a, d)
        target = (p.birth, a) if down <= up else (a, p.death)
        entries.append((p, target))
    return Matching(tuple(entries))


def diagram_loss(diagram: list[PersistencePair], matching: Matching) -> float:
    """Sum of squared distances from matched points to their targets.

    Points are re-looked-up in ``diagram`` by identity (dimension and birth
    simplex) so the loss tracks current coordinates; entries whose point no
    longer exists are dropped (the matching is meant to be rebuilt from each
    fresh diagram).
    """
    current = {(p.dim, p.birth_simplex): p for p in diagram}
    total = np.float64(0.0)
    with np.errstate(over="ignore"):
        for p, (tb, td) in matching.entries:
            cur = current.get((p.dim, p.birth_simplex))
            if cur is None or not cur.finite:
                continue
            db = np.float64(cur.birth) - np.float64(tb)
            dd = np.float64(cur.death) - np.float64(td)
            total += db * db + dd * dd
    return float(total)


def simplification_loss(diagram: list[PersistencePair], eps: float) -> float:
    """Sum of squared persistences of finite points with persistence <= eps."""
    return float(
        sum(
            np.float64(p.persistence) * np.float64(p.persistence)
            for p in diagram
            if p.finite and p.persistence <= eps
        )
    )
