from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from src.domain.exceptions import DomainError
from src.domain.services.numerics import unit_ball_volume


class DensityKind(Enum):
    EXP_NORM = "exp_norm"
    BALL_INDICATOR = "ball_indicator"
    GAUSSIAN = "gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class HyperplaneDensity:
    """超平面 u^⊥ 上の放射状密度 f(y) = profile(|y|)

    - EXP_NORM: normalizer · exp(−rate·|y|)
    - BALL_INDICATOR: normalizer · 1{|y| ≤ radius}
    - GAUSSIAN: 中心化正規分布（分散 variance、全積分 1）
    - CUSTOM: oracle(r) と宣言積分 declared
    """
    direction: np.ndarray
    kind: DensityKind
    rate: float = 0.0
    radius: float = 0.0
    variance: float = 0.0
    normalizer: float = 1.0
    oracle: Optional[Callable[[np.ndarray], np.ndarray]] = None
    declared: Optional[float] = None

    def __post_init__(self):
        direction = np.array(self.direction, dtype=float)
        if direction.ndim != 1 or direction.size < 2:
            raise DomainError("density direction must be a vector in dimension >= 2")
        if abs(np.linalg.norm(direction) - 1.0) > 1e-12:
            raise DomainError("density direction must be a unit vector")
        object.__setattr__(self, "direction", direction)
        if self.normalizer <= 0.0:
            raise DomainError("normalizer must be positive")
        if self.kind is DensityKind.EXP_NORM and self.rate <= 0.0:
            raise DomainError("EXP_NORM densities need a positive rate")
        if self.kind is DensityKind.BALL_INDICATOR and self.radius <= 0.0:
            raise DomainError("BALL_INDICATOR densities need a positive radius")
        if self.kind is DensityKind.GAUSSIAN and self.variance <= 0.0:
            raise DomainError("GAUSSIAN densities need a positive variance")
        if self.kind is DensityKind.CUSTOM and (self.oracle is None or self.declared is None):
            raise DomainError("CUSTOM densities need an oracle and a declared integral")

    @classmethod
    def exp_norm(cls, direction, rate: float, normalizer: float = 1.0) -> "HyperplaneDensity":
        return cls(direction=direction, kind=DensityKind.EXP_NORM, rate=rate, normalizer=normalizer)

    @classmethod
    def ball_indicator(cls, direction, radius: float, normalizer: float = 1.0) -> "HyperplaneDensity":
        return cls(direction=direction, kind=DensityKind.BALL_INDICATOR, radius=radius, normalizer=normalizer)

    @classmethod
    def gaussian(cls, direction, variance: float = 1.0) -> "HyperplaneDensity":
        return cls(direction=direction, kind=DensityKind.GAUSSIAN, variance=variance)

    @classmethod
    def custom(cls, direction, oracle: Callable[[np.ndarray], np.ndarray], declared: float) -> "HyperplaneDensity":
        return cls(direction=direction, kind=DensityKind.CUSTOM, oracle=oracle, declared=declared)

    @property
    def hyperplane_dimension(self) -> int:
        return int(self.direction.size - 1)

    def log_profile(self, r: np.ndarray) -> np.ndarray:
        """log f を |y| = r の関数として評価（台の外は −inf）"""
        r = np.asarray(r, dtype=float)
        if self.kind is DensityKind.EXP_NORM:
            return math.log(self.normalizer) - self.rate * r
        if self.kind is DensityKind.BALL_INDICATOR:
            return np.where(r <= self.radius, math.log(self.normalizer), -np.inf)
        if self.kind is DensityKind.GAUSSIAN:
            d = self.hyperplane_dimension
            return -0.5 * r * r / self.variance - 0.5 * d * math.log(2.0 * math.pi * self.variance)
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.oracle(r), dtype=float))

    def profile(self, r: np.ndarray) -> np.ndarray:
        return np.exp(self.log_profile(r))

    def declared_integral(self) -> float:
        """u^⊥ 上の全積分（閉形式）"""
        d = self.hyperplane_dimension
        if self.kind is DensityKind.EXP_NORM:
            return self.normalizer * unit_ball_volume(d) * math.gamma(d + 1) / self.rate ** d
        if self.kind is DensityKind.BALL_INDICATOR:
            return self.normalizer * unit_ball_volume(d) * self.radius ** d
        if self.kind is DensityKind.GAUSSIAN:
            return 1.0
        return float(self.declared)

    def radial_integral(self) -> float:
        """(n−1)次元の放射状求積 dκ_d ∫ f(r) r^{d−1} dr による検算"""
        d = self.hyperplane_dimension
        upper = self.radius if self.kind is DensityKind.BALL_INDICATOR else np.inf
        value, _ = integrate.quad(
            lambda r: float(self.profile(np.array(r))) * r ** (d - 1), 0.0, upper, limit=200
        )
        return d * unit_ball_volume(d) * value

    def is_normalized(self, tolerance: float = 1e-6) -> bool:
        return abs(self.declared_integral() - 1.0) <= tolerance
