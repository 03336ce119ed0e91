from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.domain.exceptions import DomainError

UNIT_NORM_TOLERANCE = 1e-12
MERGE_RADIUS = 1e-10
ANTIPODAL_WEIGHT_TOLERANCE = 1e-12


def _merge_atoms(directions: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """角距離 MERGE_RADIUS 以内の原子を統合（重みは合計、向きは最初の原子）"""
    if len(directions) < 2:
        return directions, weights
    tree = cKDTree(directions)
    neighbours = tree.query_ball_point(directions, r=MERGE_RADIUS)
    owner = np.full(len(directions), -1, dtype=int)
    representatives: List[int] = []
    for index, group in enumerate(neighbours):
        if owner[index] >= 0:
            continue
        slot = len(representatives)
        representatives.append(index)
        for member in group:
            if owner[member] < 0:
                owner[member] = slot
    merged = np.zeros(len(representatives))
    np.add.at(merged, owner, weights)
    return directions[representatives], merged


@dataclass(frozen=True, eq=False)
class SphericalMeasure:
    """S^{n−1} 上の有限Borel測度（重み付き原子）エンティティ"""
    directions: np.ndarray
    weights: np.ndarray
    is_even: bool = field(init=False)

    def __post_init__(self):
        directions = np.array(self.directions, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if directions.ndim != 2 or directions.shape[0] == 0:
            raise DomainError(f"directions must be a non-empty (m, n) array, got {directions.shape}")
        if directions.shape[1] < 2:
            raise DomainError("directions must live in dimension >= 2")
        if weights.shape != (directions.shape[0],):
            raise DomainError("exactly one weight per direction is required")
        if np.any(~np.isfinite(weights)) or np.any(weights <= 0.0):
            raise DomainError("atom weights must be positive")
        norms = np.linalg.norm(directions, axis=1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > UNIT_NORM_TOLERANCE:
            raise DomainError(f"atom directions must be unit vectors (worst deviation {worst:.3e})")
        directions.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "directions", directions)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "is_even", self._detect_even())

    @classmethod
    def from_atoms(
        cls,
        directions: Iterable[Iterable[float]],
        weights: Iterable[float],
        merge: bool = True,
    ) -> "SphericalMeasure":
        """原子リストから測度を生成（近接原子は統合）"""
        directions = np.array(directions, dtype=float)
        weights = np.array(weights, dtype=float)
        if merge and directions.ndim == 2:
            directions, weights = _merge_atoms(directions, weights)
        return cls(directions=directions, weights=weights)

    @property
    def n(self) -> int:
        return int(self.directions.shape[1])

    @property
    def size(self) -> int:
        return int(self.directions.shape[0])

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def second_moment(self) -> np.ndarray:
        """Σ wᵢ uᵢ⊗uᵢ"""
        return (self.directions * self.weights[:, None]).T @ self.directions

    def rotated(self, rotation: np.ndarray) -> "SphericalMeasure":
        """回転 ρ による押し出し測度 ρμ"""
        rotated = self.directions @ np.asarray(rotation, dtype=float).T
        rotated /= np.linalg.norm(rotated, axis=1)[:, None]
        return SphericalMeasure(directions=rotated, weights=self.weights.copy())

    def is_concentrated_on_antipodal_pair(self, tolerance: float = MERGE_RADIUS) -> bool:
        """全原子が一本の直線 ±u 上にあるか"""
        axis = self.directions[0]
        distances = np.minimum(
            np.linalg.norm(self.directions - axis, axis=1),
            np.linalg.norm(self.directions + axis, axis=1),
        )
        return bool(np.all(distances <= tolerance))

    def spans_space(self, tolerance: float = 1e-10) -> bool:
        """台が R^n を張るか（大円部分球面に集中していないか）"""
        return int(np.linalg.matrix_rank(self.directions, tol=tolerance)) == self.n

    def _detect_even(self) -> bool:
        tree = cKDTree(self.directions)
        distances, partners = tree.query(-self.directions, k=1)
        if np.any(distances > MERGE_RADIUS):
            return False
        return bool(np.all(np.abs(self.weights[partners] - self.weights) <= ANTIPODAL_WEIGHT_TOLERANCE))

    def to_dict(self) -> dict:
        """辞書形式で返す（ログ・デバッグ用）"""
        return {
            "n": self.n,
            "atoms": self.size,
            "mass": self.mass,
            "even": self.is_even,
        }
