"""Scikit-learn style front end for the topological optimizer."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .complexes import GridField
from .errors import InvalidFieldError
from .losses import MatchMode
from .optimize import (
    LossSpec,
    Method,
    OptimizerConfig,
    OptimizerKind,
    RunLog,
    Strategy,
    run,
)

__all__ = ["TopologicalSimplifier", "validate_field"]


def validate_field(X) -> np.ndarray:
    """Accept a 1D signal or a 3D grid; return a float64 array."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim not in (1, 3):
        raise InvalidFieldError(
            f"expected a 1D signal or a 3D field, got ndim={arr.ndim}"
        )
    if arr.size == 0:
        raise InvalidFieldError("empty input")
    if not np.all(np.isfinite(arr)):
        raise InvalidFieldError("input contains non-finite values")
    return arr


class TopologicalSimplifier(BaseEstimator, TransformerMixin):
    """Simplify the persistence diagram of a scalar field by optimization.

    ``transform`` runs gradient descent on the vertex values against the
    chosen matching loss and returns the optimized field with the same shape
    as the input.  All knobs are constructor parameters, so the estimator
    composes with pipelines and grid search via ``get_params``/``set_params``.

    Parameters mirror the CLI: ``loss`` is ``"simplify"`` (points with
    persistence below ``eps`` move to the diagonal, per ``mode``) or
    ``"quadrant"`` (points with birth <= threshold <= death move to the
    quadrant boundary); ``method`` selects the critical-set gradients or the
    two-simplices-per-pair baseline.
    """

    def __init__(
        self,
        loss: str = "simplify",
        eps: float = math.inf,
        threshold: float = 0.0,
        mode: str = "midpoint",
        method: str = "critical",
        strategy: str = "max",
        optimizer: str = "sgd",
        learning_rate: float = 0.2,
        momentum: float = 0.0,
        beta1: float = 0.9,
        beta2: float = 0.99,
        steps: int = 50,
        dims: tuple[int, ...] = (0,),
    ):
        self.loss = loss
        self.eps = eps
        self.threshold = threshold
        self.mode = mode
        self.method = method
        self.strategy = strategy
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.beta1 = beta1
        self.beta2 = beta2
        self.steps = steps
        self.dims = dims

    def _config(self) -> OptimizerConfig:
        return OptimizerConfig(
            method=Method(self.method),
            strategy=Strategy(self.strategy),
            optimizer=OptimizerKind(self.optimizer),
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            beta1=self.beta1,
            beta2=self.beta2,
            steps=self.steps,
            loss=LossSpec(
                kind=self.loss,
                eps=self.eps,
                threshold=self.threshold,
                mode=MatchMode(self.mode),
            ),
            dims=tuple(self.dims),
        )

    def _run(self, X) -> tuple[RunLog, tuple[int, ...]]:
        arr = validate_field(X)
        # numpy C-order ravel makes the last axis fastest, which is "x" here
        data = (
            GridField(tuple(arr.shape[::-1]), arr.ravel()) if arr.ndim == 3 else arr
        )
        return run(data, self._config()), arr.shape

    def fit(self, X, y=None):
        """Run the optimization; the log is kept on ``run_log_``."""
        log, shape = self._run(X)
        self.run_log_ = log
        self.n_features_in_ = int(np.prod(shape))
        self.simplified_ = log.final_values.reshape(shape)
        return self

    def transform(self, X) -> np.ndarray:
        """Return the optimized field for X (re-runs the optimization)."""
        log, shape = self._run(X)
        return log.final_values.reshape(shape)

    def fit_transform(self, X, y=None) -> np.ndarray:
        self.fit(X)
        return self.simplified_
