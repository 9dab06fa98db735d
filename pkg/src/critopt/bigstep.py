"""Critical sets: move whole sets of simplices per singleton target.

For a matched diagram point, the set of simplices that must move together with
the pair's endpoint can be read off a single row or column of the reduction
byproducts, without re-reducing anything:

==================================  ==================  =========
move                                row/column          dragged
==================================  ==================  =========
increase death (finite pair)        row of U            cofaces
decrease death (finite pair)        column of V         faces
increase birth (paired or not)      column of dual V    cofaces
decrease birth (paired)             row of dual U       faces
decrease birth (unpaired)           column of own-dim V faces
==================================  ==================  =========

Members land exactly on the target value; faces/cofaces whose value falls in
the swept interval are dragged along so the new values still define a
filtration.  Multiple targets accumulated on one simplex are merged by the
``max`` / ``avg`` / ``fca`` strategies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .complexes import Filtration
from .errors import (
    AmbiguityError,
    DirectionError,
    WrongSimplexClassError,
)
from .reduction import Decomposition, DecompositionCache, PersistencePair

__all__ = [
    "Endpoint",
    "MoveRequest",
    "CriticalSet",
    "TargetAssignment",
    "critical_set_increase_death",
    "critical_set_decrease_death",
    "critical_set_increase_birth",
    "critical_set_decrease_birth",
    "critical_set_for_request",
    "accumulate_targets",
    "resolve_max",
    "resolve_avg",
    "resolve_fca",
    "gradient_from_targets",
    "backprop_lower_star",
    "diagram_method_gradient",
]


class Endpoint(enum.Enum):
    BIRTH = "birth"
    DEATH = "death"


@dataclass(frozen=True)
class MoveRequest:
    """Move one endpoint of one diagram point to a prescribed value."""

    pair: PersistencePair
    endpoint: Endpoint
    target: float

    def __post_init__(self):
        if not math.isfinite(self.target):
            raise ValueError(f"target must be finite, got {self.target}")
        if self.endpoint is Endpoint.DEATH and not self.pair.finite:
            raise ValueError("cannot move the death value of an infinite pair")

    @property
    def mover(self) -> int:
        if self.endpoint is Endpoint.DEATH:
            assert self.pair.death_simplex is not None
            return self.pair.death_simplex
        return self.pair.birth_simplex

    @property
    def current(self) -> float:
        return self.pair.death if self.endpoint is Endpoint.DEATH else self.pair.birth


@dataclass(frozen=True)
class CriticalSet:
    """Same-dimension simplices moving as one block, plus the dragged closure."""

    mover: int
    members: frozenset[int]
    closure: frozenset[int]


@dataclass
class TargetAssignment:
    """Per-simplex target values accumulated from singleton moves."""

    targets: dict[int, list[float]] = field(default_factory=dict)
    argmax_vertex: dict[int, int] = field(default_factory=dict)

    def append(self, sid: int, value: float, filt: Filtration) -> None:
        self.targets.setdefault(sid, []).append(value)
        v = int(filt.argmax_vertex[sid])
        if v >= 0:
            self.argmax_vertex[sid] = v


# -- closure sweeps -----------------------------------------------------------


def _coface_closure(filt: Filtration, members, lo: float, hi: float) -> frozenset[int]:
    """Cofaces of the members with value in [lo, hi), breadth-first with pruning."""
    out: set[int] = set()
    seen = set(members)
    queue = list(members)
    while queue:
        cur = queue.pop()
        for c in filt.complex.cofacets[cur]:
            c = int(c)
            if c in seen:
                continue
            seen.add(c)
            v = filt.values[c]
            if v >= hi:
                continue
            if v >= lo:
                out.add(c)
            queue.append(c)
    return frozenset(out)


def _face_closure(filt: Filtration, members, lo: float, hi: float) -> frozenset[int]:
    """Faces of the members with value in (lo, hi], breadth-first with pruning."""
    out: set[int] = set()
    seen = set(members)
    queue = list(members)
    while queue:
        cur = queue.pop()
        for f in filt.complex.facets[cur]:
            f = int(f)
            if f in seen:
                continue
            seen.add(f)
            v = filt.values[f]
            if v <= lo:
                continue
            if v <= hi:
                out.add(f)
            queue.append(f)
    return frozenset(out)


# -- the four table rows ------------------------------------------------------


def _members_from_ranks(filt, p: int, ranks, lo: float, hi: float) -> list[int]:
    ids = filt.dim_ids[p][np.asarray(ranks, dtype=np.int64)]
    vals = filt.values[ids]
    keep = (vals >= lo) & (vals <= hi)
    return [int(s) for s in ids[keep]]


def critical_set_increase_death(
    dec: Decomposition, filt: Filtration, tau: int, target: float
) -> CriticalSet:
    """Members are the row of U at tau, restricted to values in [d, target]."""
    p = filt.simplex_dim(tau)
    rank = int(filt.dim_rank[tau])
    if dec.lows[rank] < 0:
        raise WrongSimplexClassError(
            f"simplex {tau} is positive; increase-death needs a negative simplex"
        )
    d = float(filt.values[tau])
    if target < d:
        raise DirectionError(f"target {target} below current value {d}")
    members = _members_from_ranks(filt, p, dec.u_row(rank), d, target)
    closure = _coface_closure(filt, members, d, target)
    return CriticalSet(tau, frozenset(members), closure)


def critical_set_decrease_death(
    dec: Decomposition,
    filt: Filtration,
    tau: int,
    target: float,
    *,
    up_dec: Decomposition | None = None,
) -> CriticalSet:
    """Members are the column of V at tau, restricted to values in [target, d].

    Valid for negative simplices and for positive unpaired ones (decreasing
    the birth of a point at infinity); positive paired simplices are outside
    the construction's coverage and are rejected.
    """
    p = filt.simplex_dim(tau)
    rank = int(filt.dim_rank[tau])
    if dec.lows[rank] < 0:
        if p < filt.dim:
            if up_dec is None:
                raise ValueError(
                    "positive simplex: need the (p+1)-decomposition to classify it"
                )
            if up_dec.pivot_rows()[rank]:
                raise WrongSimplexClassError(
                    f"simplex {tau} is positive and paired; examining the V column "
                    "is not enough for this move"
                )
    d = float(filt.values[tau])
    if target > d:
        raise DirectionError(f"target {target} above current value {d}")
    members = _members_from_ranks(filt, p, dec.v_col(rank), target, d)
    closure = _face_closure(filt, members, target, d)
    return CriticalSet(tau, frozenset(members), closure)


def _dual_index(filt: Filtration, q: int, rank: int) -> int:
    return len(filt.dim_ids[q]) - 1 - rank


def critical_set_increase_birth(
    dualdec: Decomposition,
    filt: Filtration,
    sigma: int,
    target: float,
    *,
    own_dec: Decomposition | None = None,
) -> CriticalSet:
    """Members are the dual V column of sigma, values in [b, target].

    ``dualdec`` is the reduction of the anti-transposed (q+1)-boundary, whose
    columns are the q-simplices in reverse order.  A zero dual column means
    sigma is either negative (rejected) or unpaired (allowed); ``own_dec``
    (the q-dimensional primal decomposition) settles which.
    """
    q = filt.simplex_dim(sigma)
    rank = int(filt.dim_rank[sigma])
    jd = _dual_index(filt, q, rank)
    if dualdec.lows[jd] < 0:
        if own_dec is None:
            raise ValueError(
                "zero dual column: need the own-dimension decomposition to classify"
            )
        if own_dec.lows[rank] >= 0:
            raise WrongSimplexClassError(
                f"simplex {sigma} is negative; increase-birth needs a positive simplex"
            )
    b = float(filt.values[sigma])
    if target < b:
        raise DirectionError(f"target {target} below current value {b}")
    m_q = len(filt.dim_ids[q])
    ranks = [m_q - 1 - int(i) for i in dualdec.v_col(jd)]
    members = _members_from_ranks(filt, q, ranks, b, target)
    closure = _coface_closure(filt, members, b, target)
    return CriticalSet(sigma, frozenset(members), closure)


def critical_set_decrease_birth(
    dualdec: Decomposition, filt: Filtration, sigma: int, target: float
) -> CriticalSet:
    """Members are the dual U row of sigma, values in [target, b].

    Only positive paired simplices are covered; unpaired ones go through
    :func:`critical_set_decrease_death` on their own dimension's V column.
    """
    q = filt.simplex_dim(sigma)
    rank = int(filt.dim_rank[sigma])
    jd = _dual_index(filt, q, rank)
    if dualdec.lows[jd] < 0:
        raise WrongSimplexClassError(
            f"simplex {sigma} is not the birth of a finite pair; decrease-birth "
            "via the dual U row needs a positive paired simplex"
        )
    b = float(filt.values[sigma])
    if target > b:
        raise DirectionError(f"target {target} above current value {b}")
    m_q = len(filt.dim_ids[q])
    ranks = [m_q - 1 - int(i) for i in dualdec.u_row(jd)]
    members = _members_from_ranks(filt, q, ranks, target, b)
    closure = _face_closure(filt, members, target, b)
    return CriticalSet(sigma, frozenset(members), closure)


# -- dispatch and accumulation -------------------------------------------------


def critical_set_for_request(
    req: MoveRequest, filt: Filtration, cache: DecompositionCache
) -> CriticalSet:
    """Route a move to the right matrix row/column."""
    if req.endpoint is Endpoint.DEATH:
        tau = req.mover
        p = filt.simplex_dim(tau)
        dec = cache.primal(p)
        if req.target >= req.current:
            return critical_set_increase_death(dec, filt, tau, req.target)
        up = cache.primal(p + 1) if p < filt.dim else None
        return critical_set_decrease_death(dec, filt, tau, req.target, up_dec=up)
    sigma = req.mover
    q = filt.simplex_dim(sigma)
    if req.target >= req.current:
        return critical_set_increase_birth(
            cache.dual(q + 1), filt, sigma, req.target, own_dec=cache.primal(q)
        )
    if req.pair.finite:
        return critical_set_decrease_birth(cache.dual(q + 1), filt, sigma, req.target)
    up = cache.primal(q + 1) if q < filt.dim else None
    return critical_set_decrease_death(
        cache.primal(q), filt, sigma, req.target, up_dec=up
    )


def accumulate_targets(
    requests: list[MoveRequest], filt: Filtration, cache: DecompositionCache
) -> TargetAssignment:
    """Collect every request's target onto its critical set and closure."""
    assign = TargetAssignment()
    for req in requests:
        try:
            cs = critical_set_for_request(req, filt, cache)
        except WrongSimplexClassError as e:
            raise WrongSimplexClassError(
                f"{e} (request: {req.endpoint.value} of pair "
                f"({req.pair.birth_simplex}, {req.pair.death_simplex}) "
                f"-> {req.target})"
            ) from e
        for sid in cs.members:
            assign.append(sid, req.target, filt)
        for sid in cs.closure:
            assign.append(sid, req.target, filt)
    return assign


# -- strategies ---------------------------------------------------------------


def resolve_max(assign: TargetAssignment, filt: Filtration) -> dict[int, float]:
    """Farthest target wins; ties prefer the larger value."""
    out: dict[int, float] = {}
    for sid, targets in assign.targets.items():
        if not targets:
            continue
        a = float(filt.values[sid])
        out[sid] = max(targets, key=lambda t: (abs(a - t), t))
    return out


def resolve_avg(assign: TargetAssignment, filt: Filtration) -> dict[int, float]:
    """Arithmetic mean of the accumulated targets."""
    return {
        sid: float(np.mean(ts)) for sid, ts in assign.targets.items() if ts
    }


def resolve_fca(
    assign: TargetAssignment, requests: list[MoveRequest], filt: Filtration
) -> dict[int, float]:
    """Fix critical simplices to their own target, average on the others."""
    pinned: dict[int, float] = {}
    for req in requests:
        sid = req.mover
        if sid in pinned:
            raise AmbiguityError(
                f"simplex {sid} is the moving endpoint of more than one request"
            )
        pinned[sid] = req.target
    out: dict[int, float] = {}
    for sid, ts in assign.targets.items():
        if not ts:
            continue
        out[sid] = pinned[sid] if sid in pinned else float(np.mean(ts))
    return out


def gradient_from_targets(
    resolved: dict[int, float], filt: Filtration
) -> dict[int, float]:
    """dL/df = 2 (f - f') on resolved simplices; zero elsewhere."""
    return {
        sid: 2.0 * (float(filt.values[sid]) - t) for sid, t in resolved.items()
    }


# -- backpropagation ----------------------------------------------------------


def _select_by_displacement(
    contribs: list[tuple[int, float]], filt: Filtration
) -> dict[int, float]:
    """Keep, per vertex, the single contribution of largest magnitude.

    Ties prefer the smaller simplex id, then the larger signed value.
    """
    best: dict[int, tuple[float, int, float]] = {}
    for sid, g in contribs:
        v = int(filt.argmax_vertex[sid])
        if v < 0:
            raise ValueError(
                f"simplex {sid} has no vertex attribution; backpropagation needs "
                "a lower-star filtration"
            )
        key = (abs(g), -sid, g)
        if v not in best or key > best[v]:
            best[v] = key
    return {v: key[2] for v, key in best.items()}


def backprop_lower_star(
    grad: dict[int, float], filt: Filtration
) -> dict[int, float]:
    """Push simplex gradients onto their recorded argmax vertices."""
    return _select_by_displacement(sorted(grad.items()), filt)


def diagram_method_gradient(
    requests: list[MoveRequest], filt: Filtration
) -> dict[int, float]:
    """Baseline: gradient only on the two simplices defining each pair."""
    contribs = [
        (req.mover, 2.0 * (float(filt.values[req.mover]) - req.target))
        for req in requests
    ]
    return _select_by_displacement(sorted(contribs), filt)
