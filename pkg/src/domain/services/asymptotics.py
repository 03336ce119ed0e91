"""体積不等式の閉形式の端点と n → ∞ の比"""
from __future__ import annotations

from dataclasses import dataclass
import math
from typing import List, Optional, Tuple

from src.domain.exceptions import DomainError
from src.domain.services.numerics import constants


def polar_volume_bounds(n: int) -> Tuple[float, float]:
    """κ_n/γ_nⁿ ≤ V(S_μ*) ≤ κ_nγ_nⁿ/α_n"""
    c = constants(n)
    return (
        math.exp(c.log_kappa - n * c.log_gamma),
        math.exp(c.log_kappa + n * c.log_gamma - c.log_alpha),
    )


def volume_bounds(n: int) -> Tuple[float, float]:
    """κ_nα_n/γ_nⁿ ≤ V(S_μ) ≤ κ_nγ_nⁿ"""
    c = constants(n)
    return (
        math.exp(c.log_kappa + c.log_alpha - n * c.log_gamma),
        math.exp(c.log_kappa + n * c.log_gamma),
    )


def cross_measure_polar_interval(n: int) -> Tuple[float, float]:
    """S_ν ⊆ n√(1−1/n)·B から κ_n/(nⁿ(1−1/n)^{n/2}) ≤ V(S_ν*) ≤ κ_nγ_nⁿ/α_n"""
    c = constants(n)
    lower = math.exp(c.log_kappa - n * math.log(n) - 0.5 * n * math.log(1.0 - 1.0 / n))
    return lower, polar_volume_bounds(n)[1]


def cross_measure_volume_interval(n: int) -> Tuple[float, float]:
    """κ_nα_n/γ_nⁿ ≤ V(S_ν) ≤ κ_n nⁿ(1−1/n)^{n/2}"""
    c = constants(n)
    upper = math.exp(c.log_kappa + n * math.log(n) + 0.5 * n * math.log(1.0 - 1.0 / n))
    return volume_bounds(n)[0], upper


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    r1: float
    r2: float

    def to_dict(self) -> dict:
        return {"n": self.n, "r1": self.r1, "r2": self.r2}


@dataclass(frozen=True)
class AsymptoticTable:
    rows: List[AsymptoticRow]
    monotone_from: Optional[int]

    def row(self, n: int) -> AsymptoticRow:
        return self.rows[n - 3]

    def to_dict(self) -> dict:
        return {"rows": [row.to_dict() for row in self.rows], "monotone_from": self.monotone_from}


def asymptotic_ratios(n_max: int) -> AsymptoticTable:
    """r₁(n) = α_n/(nⁿγ_nⁿ)·(1−1/n)^{−n/2}、r₂(n) = nⁿγ_nⁿ/α_n·(1−1/n)^{n/2}（対数領域）

    monotone_from は |r₁(n) − 1| が以降単調減少となる最小の n。
    """
    if n_max < 3:
        raise DomainError(f"n_max must be >= 3, got {n_max}")
    rows = []
    for n in range(3, n_max + 1):
        c = constants(n)
        log_scale = n * math.log(n) + n * c.log_gamma - c.log_alpha
        log_correction = 0.5 * n * math.log(1.0 - 1.0 / n)
        rows.append(
            AsymptoticRow(
                n=n,
                r1=math.exp(-log_scale - log_correction),
                r2=math.exp(log_scale + log_correction),
            )
        )
    deviations = [abs(row.r1 - 1.0) for row in rows]
    monotone_from: Optional[int] = rows[-1].n
    for index in range(len(rows) - 1, 0, -1):
        if deviations[index] < deviations[index - 1]:
            monotone_from = rows[index - 1].n
        else:
            break
    return AsymptoticTable(rows=rows, monotone_from=monotone_from)
