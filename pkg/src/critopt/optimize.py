"""Outer optimization loop over vertex values.

Each step rebuilds the lower-star filtration from the current vertex values,
reduces the needed boundary matrices, reads the diagram, rebuilds the matching
and turns it into per-vertex gradients, either through critical sets or the
two-simplices-per-pair baseline.  The combination stage produces dL/df =
2 (f - f'); the update consumes the displacement form (f - f') so a unit
learning rate lands every member exactly on its target.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bigstep
from .bigstep import Endpoint, MoveRequest
from .complexes import (
    Filtration,
    GridField,
    freudenthal_complex,
    lower_star_filtration,
    path_complex,
)
from .errors import NumericalError
from .losses import (
    Matching,
    MatchMode,
    diagram_loss,
    quadrant_matching,
    simplification_matching,
)
from .reduction import DecompositionCache, PersistencePair, read_pairs

__all__ = [
    "Method",
    "Strategy",
    "OptimizerKind",
    "LossSpec",
    "OptimizerConfig",
    "OptimizerState",
    "VineyardRecord",
    "RunLog",
    "init_state",
    "step",
    "run",
    "compare",
    "matching_for",
    "matching_to_requests",
]

LOSS_CSV_HEADER = "step,loss,wall_ms"
VINEYARD_CSV_HEADER = "step,pair_id,dim,birth,death"


class Method(str, enum.Enum):
    CRITICAL = "critical"
    DIAGRAM = "diagram"


class Strategy(str, enum.Enum):
    MAX = "max"
    AVG = "avg"
    FCA = "fca"


class OptimizerKind(str, enum.Enum):
    SGD = "sgd"
    RMSPROP = "rmsprop"
    ADAM = "adam"


@dataclass(frozen=True)
class LossSpec:
    """Which matching drives the optimization."""

    kind: str = "simplify"  # "simplify" | "quadrant"
    eps: float = math.inf
    threshold: float = 0.0  # quadrant corner
    mode: MatchMode = MatchMode.MIDPOINT

    def __post_init__(self):
        if self.kind not in ("simplify", "quadrant"):
            raise ValueError(f"unknown loss kind {self.kind!r}")


@dataclass(frozen=True)
class OptimizerConfig:
    method: Method = Method.CRITICAL
    strategy: Strategy = Strategy.MAX
    optimizer: OptimizerKind = OptimizerKind.SGD
    learning_rate: float = 0.2
    momentum: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.99
    steps: int = 50
    loss: LossSpec = field(default_factory=LossSpec)
    dims: tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("beta1/beta2 must be in (0, 1)")


@dataclass
class OptimizerState:
    """Parameter vector plus the accumulators of the chosen update rule."""

    x: np.ndarray
    velocity: np.ndarray
    sq_avg: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    t: int = 0


EPS_FUZZ = 1e-8


def init_state(x0: np.ndarray) -> OptimizerState:
    x = np.array(x0, dtype=np.float64)
    z = np.zeros_like(x)
    return OptimizerState(x, z.copy(), z.copy(), z.copy(), z.copy())


def _densify(grad, n: int) -> np.ndarray:
    if isinstance(grad, np.ndarray):
        g = np.asarray(grad, dtype=np.float64)
        if g.shape != (n,):
            raise ValueError(f"gradient shape {g.shape} != ({n},)")
        return g
    g = np.zeros(n, dtype=np.float64)
    for v, val in grad.items():
        g[int(v)] = val
    return g


def step(
    state: OptimizerState, grad, cfg: OptimizerConfig
) -> OptimizerState:
    """One parameter update; accumulators decay even where the gradient is 0."""
    g = _densify(grad, state.x.size)
    if not np.all(np.isfinite(g)):
        raise NumericalError(f"non-finite gradient at step {state.t}")
    state.t += 1
    kind = cfg.optimizer
    if kind is OptimizerKind.SGD:
        if cfg.momentum > 0:
            state.velocity = cfg.momentum * state.velocity + g
            state.x = state.x - cfg.learning_rate * state.velocity
        else:
            state.x = state.x - cfg.learning_rate * g
    elif kind is OptimizerKind.RMSPROP:
        state.sq_avg = cfg.beta2 * state.sq_avg + (1 - cfg.beta2) * g * g
        scaled = g / (np.sqrt(state.sq_avg) + EPS_FUZZ)
        if cfg.momentum > 0:
            state.velocity = cfg.momentum * state.velocity + scaled
            state.x = state.x - cfg.learning_rate * state.velocity
        else:
            state.x = state.x - cfg.learning_rate * scaled
    else:  # Adam
        state.m1 = cfg.beta1 * state.m1 + (1 - cfg.beta1) * g
        state.m2 = cfg.beta2 * state.m2 + (1 - cfg.beta2) * g * g
        m_hat = state.m1 / (1 - cfg.beta1**state.t)
        v_hat = state.m2 / (1 - cfg.beta2**state.t)
        state.x = state.x - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + EPS_FUZZ)
    if not np.all(np.isfinite(state.x)):
        raise NumericalError(f"non-finite parameters after step {state.t}")
    return state


# -- matchings to requests ------------------------------------------------------


def matching_for(diagram: list[PersistencePair], spec: LossSpec) -> Matching:
    if spec.kind == "simplify":
        return simplification_matching(diagram, spec.eps, spec.mode)
    return quadrant_matching(diagram, spec.threshold)


def matching_to_requests(matching: Matching) -> list[MoveRequest]:
    """One request per endpoint that actually moves.

    Endpoints whose target equals the current value are skipped; in
    particular, death-only matchings never touch the dual (cohomology)
    matrices.
    """
    requests: list[MoveRequest] = []
    for pair, (tb, td) in matching.entries:
        if tb != pair.birth:
            requests.append(MoveRequest(pair, Endpoint.BIRTH, tb))
        if pair.finite and td != pair.death:
            requests.append(MoveRequest(pair, Endpoint.DEATH, td))
    return requests


# -- the loop -------------------------------------------------------------------


@dataclass(frozen=True)
class VineyardRecord:
    step: int
    pair_id: int
    dim: int
    birth: float
    death: float


@dataclass
class RunLog:
    """Per-step losses, diagram trajectories, and wall-clock."""

    losses: list[float] = field(default_factory=list)
    vineyard: list[VineyardRecord] = field(default_factory=list)
    wall_ms: list[float] = field(default_factory=list)
    final_values: np.ndarray | None = None

    def steps_below(self, threshold: float) -> int | None:
        """First step index whose loss is below the threshold, if any."""
        for i, loss in enumerate(self.losses):
            if loss < threshold:
                return i
        return None

    def loss_csv(self) -> str:
        lines = [LOSS_CSV_HEADER]
        lines += [
            f"{i},{loss!r},{ms:.3f}"
            for i, (loss, ms) in enumerate(zip(self.losses, self.wall_ms))
        ]
        return "\n".join(lines) + "\n"

    def vineyard_csv(self) -> str:
        lines = [VINEYARD_CSV_HEADER]
        for r in self.vineyard:
            death = "inf" if math.isinf(r.death) else repr(r.death)
            lines.append(f"{r.step},{r.pair_id},{r.dim},{r.birth!r},{death}")
        return "\n".join(lines) + "\n"


def _as_vertex_values(data) -> tuple[np.ndarray, object]:
    if isinstance(data, GridField):
        return data.values.copy(), freudenthal_complex(data.shape)
    arr = np.asarray(data, dtype=np.float64).ravel()
    return arr.copy(), path_complex(arr.size)


def _vertex_gradient(
    filt: Filtration,
    requests: list[MoveRequest],
    cache: DecompositionCache,
    cfg: OptimizerConfig,
) -> tuple[dict[int, float], dict[int, float]]:
    """Returns (per-vertex dL/df, per-simplex dL/df)."""
    if cfg.method is Method.DIAGRAM:
        return bigstep.diagram_method_gradient(requests, filt), {}
    assign = bigstep.accumulate_targets(requests, filt, cache)
    if cfg.strategy is Strategy.MAX:
        resolved = bigstep.resolve_max(assign, filt)
    elif cfg.strategy is Strategy.AVG:
        resolved = bigstep.resolve_avg(assign, filt)
    else:
        resolved = bigstep.resolve_fca(assign, requests, filt)
    grad = bigstep.gradient_from_targets(resolved, filt)
    return bigstep.backprop_lower_star(grad, filt), grad


def run(
    data,
    cfg: OptimizerConfig,
    *,
    step_hook=None,
    record_vineyard=True,
    stop_below: float | None = None,
) -> RunLog:
    """Optimize the vertex values for ``cfg.steps`` steps.

    ``data`` is a 1D signal (array) or a :class:`GridField`.  The loss logged
    at step t is evaluated on the diagram before that step's update.  An
    optional ``step_hook(t, filt, requests, simplex_grad)`` is called per step
    for instrumentation.  With ``stop_below`` set, the loop ends early right
    after logging a loss under that value (the log is then shorter than
    ``cfg.steps``).
    """
    x, cx = _as_vertex_values(data)
    state = init_state(x)
    log = RunLog()
    # only the dimensions whose rows/columns the moves read need U and V
    compute_uv = (
        {k + 1 for k in cfg.dims} if cfg.method is Method.CRITICAL else False
    )
    for t in range(cfg.steps):
        t0 = time.perf_counter()
        filt = lower_star_filtration(cx, state.x)
        cache = DecompositionCache(filt, compute_uv=compute_uv)
        diagram = read_pairs(filt, cache=cache, dims=cfg.dims)
        matching = matching_for(diagram, cfg.loss)
        loss = diagram_loss(diagram, matching)
        if not math.isfinite(loss):
            raise NumericalError(f"non-finite diagram loss at step {t}")
        log.losses.append(loss)
        if record_vineyard:
            for p in diagram:
                log.vineyard.append(
                    VineyardRecord(t, p.birth_simplex, p.dim, p.birth, p.death)
                )
        if stop_below is not None and loss < stop_below:
            log.wall_ms.append((time.perf_counter() - t0) * 1e3)
            break
        requests = matching_to_requests(matching)
        vgrad, sgrad = _vertex_gradient(filt, requests, cache, cfg)
        if step_hook is not None:
            step_hook(t, filt, requests, sgrad)
        displacement = {v: g / 2.0 for v, g in vgrad.items()}
        state = step(state, displacement, cfg)
        log.wall_ms.append((time.perf_counter() - t0) * 1e3)
    log.final_values = state.x
    return log


def compare(
    data, cfg_a: OptimizerConfig, cfg_b: OptimizerConfig, threshold: float
) -> tuple[int | None, int | None]:
    """Steps needed by each configuration to push the loss below threshold.

    Returns None in a slot when the run never got below the threshold within
    its step budget.
    """
    log_a = run(data, cfg_a, record_vineyard=False)
    log_b = run(data, cfg_b, record_vineyard=False)
    return log_a.steps_below(threshold), log_b.steps_below(threshold)
