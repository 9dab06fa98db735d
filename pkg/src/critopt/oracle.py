"""Reference implementations used only to validate the fast paths.

``oracle_move`` realizes a move by explicit reordering: each same-dimension
simplex in the swept value range is transposed past the accumulated block and
the pairing is recomputed from scratch; the candidate joins the block exactly
when the tracked pairing switches onto it.  ``textbook_reduce`` is an
independent dense GF(2) reduction used as the pairing-uniqueness oracle.
Everything here favors simplicity over speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bigstep
from .bigstep import CriticalSet, Endpoint, MoveRequest
from .complexes import Filtration, SimplicialComplex
from .errors import WrongSimplexClassError
from .reduction import (
    Decomposition,
    DecompositionCache,
    PersistencePair,
    SparseBinaryMatrix,
    read_pairs,
)

__all__ = [
    "textbook_reduce",
    "random_filtration",
    "random_request",
    "oracle_move",
    "check_consistency",
    "verify_random_cases",
    "Mismatch",
]


# -- dense textbook reduction ---------------------------------------------------


def _gf2_inverse_upper(V: np.ndarray) -> np.ndarray:
    """Invert a unit upper-triangular matrix over GF(2)."""
    n = V.shape[0]
    U = np.eye(n, dtype=np.uint8)
    for j in range(n):
        for i in range(j - 1, -1, -1):
            if (V[i, :] @ U[:, j]) % 2:
                U[i, j] ^= 1
    return U


def textbook_reduce(D: SparseBinaryMatrix) -> Decomposition:
    """Dense left-to-right reduction; independent of the sparse kernel."""
    dense = D.to_dense().astype(np.uint8)
    nrows, ncols = dense.shape
    R = dense.copy()
    V = np.eye(ncols, dtype=np.uint8)
    lows = np.full(ncols, -1, dtype=np.int64)
    pivot_of = {}
    events = []
    for j in range(ncols):
        while True:
            nz = np.flatnonzero(R[:, j])
            if nz.size == 0:
                lows[j] = -1
                break
            low = int(nz[-1])
            i = pivot_of.get(low)
            if i is None:
                pivot_of[low] = j
                lows[j] = low
                break
            R[:, j] ^= R[:, i]
            V[:, j] ^= V[:, i]
            events.append((i, j))
    U = _gf2_inverse_upper(V)
    src = np.array([e[0] for e in events], dtype=np.int32)
    dst = np.array([e[1] for e in events], dtype=np.int32)
    return Decomposition(
        SparseBinaryMatrix.from_dense(R),
        SparseBinaryMatrix.from_dense(V),
        SparseBinaryMatrix.from_dense(U),
        lows,
        (src, dst),
        len(events),
    )


# -- random instances -----------------------------------------------------------


def random_filtration(
    seed: int,
    n_vertices: int = 6,
    max_dim: int = 2,
    value_distribution: str = "uniform",
    max_simplices: int | None = None,
    edge_probability: float = 0.5,
) -> Filtration:
    """Random flag-like complex with distinct, face-monotone values.

    Values are drawn i.i.d. per simplex, monotonized by max over faces, then
    jittered by rank so all values are distinct while every face still
    strictly precedes its cofaces.
    """
    rng = np.random.default_rng(seed)
    verts = [(i,) for i in range(n_vertices)]
    edges = [
        (i, j)
        for i in range(n_vertices)
        for j in range(i + 1, n_vertices)
        if rng.random() < edge_probability
    ]
    adj = {i: set() for i in range(n_vertices)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    simplices: list[tuple[int, ...]] = verts + edges
    frontier = edges
    for d in range(2, max_dim + 1):
        nxt = []
        for s in frontier:
            common = set.intersection(*(adj[v] for v in s))
            for w in sorted(common):
                if w > s[-1]:
                    nxt.append(s + (w,))
        simplices += nxt
        frontier = nxt
    if max_simplices is not None and len(simplices) > max_simplices:
        # drop top-dimensional simplices first; closure stays intact
        by_dim = sorted(simplices, key=len)
        simplices = by_dim[:max_simplices]
        keep = set(simplices)
        simplices = [s for s in by_dim if s in keep]

    cx = SimplicialComplex(simplices)
    if value_distribution == "uniform":
        raw = rng.uniform(0.0, 1.0, cx.n)
    elif value_distribution == "normal":
        raw = rng.normal(0.0, 1.0, cx.n)
    else:
        raise ValueError(f"unknown distribution {value_distribution!r}")
    values = raw.copy()
    order_by_dim = np.argsort(cx.dims, kind="stable")
    for i in order_by_dim:
        f = cx.facets[i]
        if f.size:
            values[i] = max(values[i], values[f].max())
    rank = np.empty(cx.n, dtype=np.int64)
    rank[np.lexsort((np.arange(cx.n), cx.dims, values))] = np.arange(cx.n)
    values = values + rank * 1e-9
    return Filtration(cx, values)


def random_request(
    filt: Filtration, rng: np.random.Generator, case: str
) -> MoveRequest | None:
    """Sample a move of the given kind from the filtration's diagram.

    Cases: increase_death / decrease_death (finite pairs), increase_birth
    (finite or infinite), decrease_birth (finite or infinite).  Returns None
    when the diagram has no point of the needed kind.
    """
    diagram = read_pairs(filt)
    finite = [p for p in diagram if p.finite]
    infinite = [p for p in diagram if not p.finite]
    lo = float(filt.values.min()) - 0.5
    hi = float(filt.values.max()) + 0.5

    def pick(pool):
        return pool[int(rng.integers(len(pool)))] if pool else None

    if case == "increase_death":
        p = pick(finite)
        if p is None:
            return None
        return MoveRequest(p, Endpoint.DEATH, float(rng.uniform(p.death, hi)))
    if case == "decrease_death":
        p = pick(finite)
        if p is None:
            return None
        return MoveRequest(p, Endpoint.DEATH, float(rng.uniform(p.birth, p.death)))
    if case == "increase_birth":
        p = pick(finite + infinite)
        if p is None:
            return None
        upper = p.death if p.finite else hi
        return MoveRequest(p, Endpoint.BIRTH, float(rng.uniform(p.birth, upper)))
    if case == "decrease_birth":
        p = pick(finite + infinite)
        if p is None:
            return None
        return MoveRequest(p, Endpoint.BIRTH, float(rng.uniform(lo, p.birth)))
    raise ValueError(f"unknown case {case!r}")


# -- pairing from explicit per-dimension orders ----------------------------------


@dataclass
class _Pairing:
    partner: dict[int, int]  # finite pairs, both directions
    positive: set[int]  # zero own-dimension column
    unpaired: set[int]  # positive and never a pivot row


def _pairing_from_orders(
    filt: Filtration, dim_orders: list[list[int]]
) -> _Pairing:
    """Recompute the pairing for explicit per-dimension simplex orders."""
    cx = filt.complex
    rank = {}
    for order in dim_orders:
        for k, sid in enumerate(order):
            rank[sid] = k
    partner: dict[int, int] = {}
    positive: set[int] = set(dim_orders[0])
    pivot_births: set[int] = set()
    for p in range(1, cx.dim + 1):
        cols = dim_orders[p]
        rows = dim_orders[p - 1]
        dense = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, sid in enumerate(cols):
            for f in cx.facets[sid]:
                dense[rank[int(f)], j] = 1
        R = dense
        pivot_of: dict[int, int] = {}
        for j in range(len(cols)):
            while True:
                nz = np.flatnonzero(R[:, j])
                if nz.size == 0:
                    positive.add(cols[j])
                    break
                low = int(nz[-1])
                i = pivot_of.get(low)
                if i is None:
                    pivot_of[low] = j
                    b, d = rows[low], cols[j]
                    partner[b] = d
                    partner[d] = b
                    pivot_births.add(b)
                    break
                R[:, j] ^= R[:, i]
    unpaired = {s for s in positive if s not in pivot_births}
    return _Pairing(partner, positive, unpaired)


# -- the transposition oracle -----------------------------------------------------


def oracle_move(filt: Filtration, request: MoveRequest) -> CriticalSet:
    """Accumulate the move's critical set by explicit transpositions.

    Each candidate is placed on the far side of the current block, the pairing
    is recomputed from scratch, and the candidate joins when the tracked class
    switches onto it (for unpaired movers: when the candidate's column becomes
    the zero one).  Accepted candidates are returned to the near side;
    rejected transpositions stand, which keeps the block contiguous.
    """
    mover = request.mover
    p = filt.simplex_dim(mover)
    current = float(filt.values[mover])
    target = request.target
    increase = target >= current

    cache = DecompositionCache(filt)
    positive = cache.is_positive(mover)
    if request.endpoint is Endpoint.DEATH:
        if positive:
            raise WrongSimplexClassError(f"simplex {mover} is positive")
    elif not positive:
        raise WrongSimplexClassError(f"simplex {mover} is negative")

    dim_orders = [[int(s) for s in filt.dim_ids[q]] for q in range(filt.dim + 1)]
    pairing = _pairing_from_orders(filt, dim_orders)
    partner = pairing.partner.get(mover)

    order = dim_orders[p]
    pos = order.index(mover)
    if increase:
        cands = [
            s
            for s in order[pos + 1 :]
            if filt.values[s] <= target
        ]
    else:
        cands = [s for s in order[:pos] if filt.values[s] >= target]
        cands.reverse()

    block = {mover}
    bstart, bend = pos, pos + 1

    def far_order(candidate_idx: int) -> list[int]:
        new = order.copy()
        c = new.pop(candidate_idx)
        if increase:
            new.insert(bstart, c)
        else:
            new.insert(bend - 1, c)
        return new

    for cand in cands:
        ci = order.index(cand)
        if increase:
            assert ci == bend, "candidate must sit just past the block"
        else:
            assert ci == bstart - 1, "candidate must sit just before the block"
        obstructed = any(
            cand in filt.complex.facets[m] or cand in filt.complex.cofacets[m]
            for m in block
        )
        test_order = far_order(ci)
        test_orders = dim_orders.copy()
        test_orders[p] = test_order
        new_pairing = _pairing_from_orders(filt, test_orders)
        if partner is not None:
            accept = new_pairing.partner.get(partner) == cand
        elif increase:
            # unpaired mover going up is a dual-side move: the candidate joins
            # when it stops being the birth of a finite pair.
            was_birth = cand in pairing.positive and cand in pairing.partner
            now_birth = cand in new_pairing.positive and cand in new_pairing.partner
            accept = was_birth and not now_birth
        else:
            # unpaired mover going down: the candidate joins when its own
            # column becomes the zero one.
            accept = cand not in pairing.positive and cand in new_pairing.positive
        if obstructed:
            accept = True
        if accept:
            block.add(cand)
            if increase:
                bend += 1
            else:
                bstart -= 1
        else:
            order = test_order
            dim_orders[p] = order
            pairing = new_pairing
            if increase:
                bstart += 1
                bend += 1
            else:
                bstart -= 1
                bend -= 1

    if increase:
        closure = bigstep._coface_closure(filt, block, min(current, target), max(current, target))
    else:
        closure = bigstep._face_closure(filt, block, min(current, target), max(current, target))
    return CriticalSet(mover, frozenset(block), closure)


# -- consistency of the two critical sets -----------------------------------------


def _members_for_orders(
    filt: Filtration,
    dim_orders: list[list[int]],
    values: np.ndarray,
    endpoint: Endpoint,
    mover: int,
    target: float,
) -> frozenset[int]:
    """Critical-set members computed from reductions built on explicit orders."""
    from .reduction import anti_transpose, lazy_reduce

    cx = filt.complex
    p = int(cx.dims[mover])
    rank = {s: k for k, s in enumerate(dim_orders[p])}
    current = float(values[mover])
    increase = target >= current
    lo, hi = min(current, target), max(current, target)

    if endpoint is Endpoint.DEATH:
        rows_rank = {s: k for k, s in enumerate(dim_orders[p - 1])}
        cols = []
        for sid in dim_orders[p]:
            cols.append(
                np.sort(np.array([rows_rank[int(f)] for f in cx.facets[sid]], dtype=np.int32))
            )
        D = SparseBinaryMatrix(len(dim_orders[p - 1]), cols, _skip_checks=True)
        dec = lazy_reduce(D)
        j = rank[mover]
        ranks = dec.u_row(j) if increase else dec.v_col(j)
        ids = [dim_orders[p][int(r)] for r in ranks]
    else:
        rows_rank = {s: k for k, s in enumerate(dim_orders[p])}
        cols = []
        for sid in dim_orders[p + 1]:
            cols.append(
                np.sort(np.array([rows_rank[int(f)] for f in cx.facets[sid]], dtype=np.int32))
            )
        D = SparseBinaryMatrix(len(dim_orders[p]), cols, _skip_checks=True)
        dual = lazy_reduce(anti_transpose(D))
        m_q = len(dim_orders[p])
        jd = m_q - 1 - rank[mover]
        ranks = dual.v_col(jd) if increase else dual.u_row(jd)
        ids = [dim_orders[p][m_q - 1 - int(r)] for r in ranks]
    return frozenset(s for s in ids if lo <= values[s] <= hi)


def _contiguized(
    filt: Filtration, members, mover: int, lo: float, hi: float, increase: bool
) -> list[int]:
    """Per-dimension order at the end of the move: the block is contiguous.

    Rejected candidates end up past the block on the side it moved away from;
    everyone keeps their original relative order, which is exactly the state
    the transposition algorithm leaves behind.
    """
    dim = filt.simplex_dim(mover)
    order = [int(s) for s in filt.dim_ids[dim]]
    pos = order.index(mover)
    if increase:
        seg = [s for s in order[pos:] if filt.values[s] <= hi]
    else:
        seg = [s for s in order[: pos + 1] if filt.values[s] >= lo]
    start = order.index(seg[0])
    block = [s for s in seg if s in members]
    rejected = [s for s in seg if s not in members]
    new_seg = (rejected + block) if increase else (block + rejected)
    return order[:start] + new_seg + order[start + len(seg) :]


def _placed(order, block, member, last):
    """Move the member to the far end of its contiguous block."""
    if not block:
        return list(order)
    out = [s for s in order if s != member]
    idx = [i for i, s in enumerate(out) if s in block]
    at = (idx[-1] + 1) if last else idx[0]
    return out[:at] + [member] + out[at:]


def check_consistency(filt: Filtration, pair: PersistencePair) -> bool:
    """Whether every critical-set member can carry the pairing.

    On the end-of-move configuration (contiguous block, rejected candidates
    pushed past it): placing any death-side member last pairs it with the
    birth simplex, and placing any birth-side member first pairs it with the
    death simplex.  Set equality under swaps is not asserted; a swapped-in
    representative may legitimately drag extra simplices into its set, and
    the simultaneous-swap variant can lose the multiplicity-one hypothesis
    as the sets grow.
    """
    assert pair.finite and pair.death_simplex is not None
    sigma, tau = pair.birth_simplex, pair.death_simplex
    mid = (pair.birth + pair.death) / 2.0
    cache = DecompositionCache(filt)
    x_death = bigstep.critical_set_for_request(
        MoveRequest(pair, Endpoint.DEATH, mid), filt, cache
    ).members
    x_birth = bigstep.critical_set_for_request(
        MoveRequest(pair, Endpoint.BIRTH, mid), filt, cache
    ).members

    p = filt.simplex_dim(tau)
    q = filt.simplex_dim(sigma)
    base = [[int(s) for s in filt.dim_ids[d]] for d in range(filt.dim + 1)]
    death_order = _contiguized(filt, x_death, tau, mid, pair.death, increase=False)
    birth_order = _contiguized(filt, x_birth, sigma, pair.birth, mid, increase=True)

    for tau2 in sorted(x_death):
        orders = [o.copy() for o in base]
        orders[p] = _placed(death_order, x_death - {tau2}, tau2, last=True)
        if _pairing_from_orders(filt, orders).partner.get(sigma) != tau2:
            return False
    for sig2 in sorted(x_birth):
        orders = [o.copy() for o in base]
        orders[q] = _placed(birth_order, x_birth - {sig2}, sig2, last=False)
        if _pairing_from_orders(filt, orders).partner.get(tau) != sig2:
            return False
    return True


# -- randomized verification driver ------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    """Serialized reproducer for a fast-path / oracle disagreement."""

    seed: int
    case: str
    simplices: list[tuple[int, ...]]
    values: list[float]
    endpoint: str
    pair: tuple[int, int | None]
    target: float
    fast: list[int]
    oracle: list[int]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "case": self.case,
            "simplices": [list(s) for s in self.simplices],
            "values": self.values,
            "endpoint": self.endpoint,
            "pair": list(self.pair),
            "target": self.target,
            "fast_members": self.fast,
            "oracle_members": self.oracle,
        }


CASES = ("increase_death", "decrease_death", "increase_birth", "decrease_birth")


def verify_random_cases(
    cases: int,
    seed: int,
    max_simplices: int = 40,
    case_names: tuple[str, ...] = CASES,
    n_vertices: int = 6,
    max_dim: int = 3,
) -> Mismatch | None:
    """Compare fast critical sets against the transposition oracle.

    Runs ``cases`` sampled moves per case name; returns a reproducer for the
    first mismatch, or None when everything agrees.
    """
    rng = np.random.default_rng(seed)
    for case in case_names:
        case_idx = CASES.index(case)
        done = 0
        attempt = 0
        while done < cases:
            sub_seed = seed + 1_000_000 * case_idx + attempt
            attempt += 1
            filt = random_filtration(
                int(abs(sub_seed)),
                n_vertices=n_vertices,
                max_dim=max_dim,
                max_simplices=max_simplices,
            )
            req = random_request(filt, rng, case)
            if req is None:
                continue
            done += 1
            cache = DecompositionCache(filt)
            fast = bigstep.critical_set_for_request(req, filt, cache)
            slow = oracle_move(filt, req)
            if fast.members != slow.members:
                return Mismatch(
                    seed=int(abs(sub_seed)),
                    case=case,
                    simplices=list(filt.complex.vertices),
                    values=[float(v) for v in filt.values],
                    endpoint=req.endpoint.value,
                    pair=(req.pair.birth_simplex, req.pair.death_simplex),
                    target=req.target,
                    fast=sorted(fast.members),
                    oracle=sorted(slow.members),
                )
    return None
