from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from src.domain.exceptions import DomainError

_NODE_NORM_TOLERANCE = 1e-12
_WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """単位球面 S^{n−1} 上の求積則エンティティ

    accuracy_budget は滑らかな偶関数を積分したときの推定相対誤差。
    """
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    accuracy_budget: float
    resolution: int = 0

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.n:
            raise DomainError(f"nodes must have shape (N, {self.n}), got {nodes.shape}")
        if weights.shape != (nodes.shape[0],):
            raise DomainError("weights must be one per node")
        if np.any(weights <= 0.0):
            raise DomainError("quadrature weights must be positive")
        norms = np.linalg.norm(nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > _NODE_NORM_TOLERANCE:
            raise DomainError("quadrature nodes must be unit vectors")
        area = self.n * math.exp(
            0.5 * self.n * math.log(math.pi) - math.lgamma(0.5 * self.n + 1.0)
        )
        if abs(weights.sum() - area) > _WEIGHT_SUM_TOLERANCE * area:
            raise DomainError(
                f"weights sum {weights.sum():.12g} differs from sphere area {area:.12g}"
            )
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    def integrate(self, values: np.ndarray) -> float:
        """節点上の値の重み付き和"""
        return float(self.weights @ np.asarray(values, dtype=float))
