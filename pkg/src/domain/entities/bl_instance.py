from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.domain.exceptions import DomainError

ADMISSIBLE_DEFECT = 1e-10


@dataclass(frozen=True, eq=False)
class BLInstance:
    """階数 n−1 の Brascamp–Lieb 分解 Σ cᵢ π_{uᵢ} = Id を満たす方向と重み"""
    directions: np.ndarray
    weights: np.ndarray
    defect: float = field(init=False)

    def __post_init__(self):
        directions = np.array(self.directions, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if directions.ndim != 2 or weights.shape != (directions.shape[0],):
            raise DomainError("directions must be (m, n) with one weight per direction")
        if directions.shape[0] < directions.shape[1]:
            raise DomainError(
                f"a decomposition needs at least n directions, got {directions.shape[0]}"
            )
        if np.any(weights <= 0.0):
            raise DomainError("BL weights must be positive")
        if np.max(np.abs(np.linalg.norm(directions, axis=1) - 1.0)) > 1e-12:
            raise DomainError("BL directions must be unit vectors")
        directions.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "directions", directions)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "defect", self._compute_defect())

    @property
    def n(self) -> int:
        return int(self.directions.shape[1])

    @property
    def size(self) -> int:
        return int(self.directions.shape[0])

    @property
    def trace(self) -> float:
        """Σ cᵢ（許容インスタンスでは n/(n−1)）"""
        return float(self.weights.sum())

    def is_admissible(self, tolerance: float = ADMISSIBLE_DEFECT) -> bool:
        return self.defect < tolerance and abs(self.trace - self.n / (self.n - 1)) < tolerance

    def projection(self, index: int) -> np.ndarray:
        """π_{uᵢ} = Id − uᵢ⊗uᵢ"""
        u = self.directions[index]
        return np.eye(self.n) - np.outer(u, u)

    def _compute_defect(self) -> float:
        moment = (self.directions * self.weights[:, None]).T @ self.directions
        operator = self.trace * np.eye(self.n) - moment
        return float(np.max(np.abs(np.linalg.eigvalsh(operator - np.eye(self.n)))))
