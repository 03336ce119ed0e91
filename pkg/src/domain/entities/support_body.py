from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np

from src.domain.exceptions import DegenerateBodyError, DomainError

SupportOracle = Callable[[np.ndarray], np.ndarray]


class BodyKind(Enum):
    SINE_BODY = "sine_body"
    COSINE_BODY = "cosine_body"
    BALL = "ball"
    PROJECTION_BODY = "projection_body"
    PSI_BODY = "psi_body"
    GENERIC = "generic"


class VolumeMethod(Enum):
    EXP_INTEGRAL = "exp-integral"
    MC_MEMBERSHIP = "mc-membership"


@dataclass(frozen=True)
class VolumeEstimate:
    """体積推定値と標準誤差"""
    value: float
    std_error: float
    method: VolumeMethod

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True, eq=False)
class SupportBody:
    """支持関数オラクルで与えられる凸体エンティティ

    support は (m, n) 配列を受け取り各行の h(K, x) を返す1次同次関数。
    gradient があれば ∇h を (m, n) で返す（ゲージ計算の局所最適化に使用）。
    payload は種別ごとの元データ（測度・多面体・半径）。
    """
    n: int
    support: SupportOracle
    kind: BodyKind
    lower_bound: float
    gradient: Optional[SupportOracle] = None
    payload: Any = None
    hint_directions: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"body dimension must be >= 2, got {self.n}")
        if not np.isfinite(self.lower_bound) or self.lower_bound <= 0.0:
            raise DegenerateBodyError(
                f"support lower bound must be positive, got {self.lower_bound}",
                hint="the origin must be an interior point of the body",
            )

    def h(self, x: np.ndarray) -> np.ndarray:
        """支持関数を評価（1次元入力ならスカラー）"""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return float(self.support(x[None, :])[0])
        return self.support(x)

    def is_ball(self) -> bool:
        return self.kind is BodyKind.BALL

    @property
    def radius(self) -> float:
        if not self.is_ball():
            raise DomainError("radius is only defined for BALL bodies")
        return float(self.payload)

    def to_dict(self) -> dict:
        return {"n": self.n, "kind": self.kind.value, "lower_bound": self.lower_bound}
