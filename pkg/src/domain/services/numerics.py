"""次元定数・球面求積・Gegenbauer漸化式"""
from __future__ import annotations

from functools import lru_cache
import itertools
import logging
import math
from typing import Union

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.exceptions import ConfigurationError, DomainError
from src.domain.value_objects.dimension_constants import DimensionConstants

logger = logging.getLogger(__name__)

MIN_RESOLUTION = {3: 4}
MIN_RESOLUTION_HIGH_DIM = 4
# 予算 = 安全係数 × 探索カーネル（|t|、√(1−t²)、t⁴）の最大相対誤差。
# |t| の折れ目のため n=3, resolution=16 では数 % になる
BUDGET_SAFETY_FACTOR = 10.0
BUDGET_FLOOR = 1e-12
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _safe_exp(value: float) -> float:
    if value > _LOG_FLOAT_MAX:
        return math.inf
    return math.exp(value)


def log_unit_ball_volume(m: int) -> float:
    """log κ_m（log-gammaによる）"""
    if m < 0:
        raise DomainError(f"ball dimension must be >= 0, got {m}")
    return 0.5 * m * math.log(math.pi) - math.lgamma(0.5 * m + 1.0)


def unit_ball_volume(m: int) -> float:
    return _safe_exp(log_unit_ball_volume(m))


def unit_ball_volume_recurrence(m: int) -> float:
    """κ_m = 2π/m · κ_{m−2}（κ_0 = 1, κ_1 = 2）による独立な計算"""
    if m < 0:
        raise DomainError(f"ball dimension must be >= 0, got {m}")
    value = 1.0 if m % 2 == 0 else 2.0
    for k in range(2 + m % 2, m + 1, 2):
        value *= 2.0 * math.pi / k
    return value


@lru_cache(maxsize=None)
def constants(n: int) -> DimensionConstants:
    """κ_n, α_n = n(n−1)^{2n}/Γ(n)^{1/(n−1)}, γ_n = (n−1)κ_{n−1}²/(κ_{n−2}κ_n)"""
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    log_kappa = log_unit_ball_volume(n)
    log_alpha = math.log(n) + 2.0 * n * math.log(n - 1) - math.lgamma(n) / (n - 1)
    log_gamma = (
        math.log(n - 1)
        + 2.0 * log_unit_ball_volume(n - 1)
        - log_unit_ball_volume(n - 2)
        - log_kappa
    )
    return DimensionConstants(
        n=n,
        kappa=_safe_exp(log_kappa),
        alpha=_safe_exp(log_alpha),
        gamma=_safe_exp(log_gamma),
        log_kappa=log_kappa,
        log_alpha=log_alpha,
        log_gamma=log_gamma,
    )


def gegenbauer_ratio(n: int, k: int, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """C_k^{(n−2)/2}(t)/C_k^{(n−2)/2}(1) を正規化済み三項漸化式で計算"""
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    scalar = np.isscalar(t)
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("gegenbauer_ratio requires |t| <= 1")
    lam = 0.5 * (n - 2)
    previous = np.ones_like(t)
    current = t.copy()
    if k == 0:
        current = previous
    for j in range(2, k + 1):
        following = (2.0 * (j + lam - 1.0) * t * current - (j - 1.0) * previous) / (j + 2.0 * lam - 1.0)
        previous, current = current, following
    return float(current) if scalar else current


def _sphere_area(n: int) -> float:
    return n * unit_ball_volume(n)


def _gauss_product_directions(resolution: int):
    """n=3: t=cosθ に Gauss–Legendre、方位角に等間隔（上半球＋対蹠点）"""
    polar_count = resolution + resolution % 2
    t, polar_weights = np.polynomial.legendre.leggauss(polar_count)
    upper = t > 0.0
    t, polar_weights = t[upper], polar_weights[upper]
    azimuth_count = 2 * polar_count
    phi = 2.0 * np.pi * np.arange(azimuth_count) / azimuth_count
    radial = np.sqrt(1.0 - t * t)
    half = np.stack(
        [
            np.outer(radial, np.cos(phi)).ravel(),
            np.outer(radial, np.sin(phi)).ravel(),
            np.repeat(t, azimuth_count),
        ],
        axis=1,
    )
    half /= np.linalg.norm(half, axis=1)[:, None]
    half_weights = np.repeat(polar_weights, azimuth_count) * (2.0 * np.pi / azimuth_count)
    return np.concatenate([half, -half]), np.concatenate([half_weights, half_weights])


def _symmetrized_directions(n: int, log2_count: int, seed: int) -> np.ndarray:
    """Sobol点を正規分布経由で球面へ写し、符号反転と巡回置換で対称化"""
    sampler = qmc.Sobol(d=n, scramble=True, seed=seed)
    cube = np.clip(sampler.random_base2(log2_count), 1e-12, 1.0 - 1e-12)
    base = ndtri(cube)
    base /= np.linalg.norm(base, axis=1)[:, None]
    blocks = []
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    for shift in range(n):
        shifted = np.roll(base, shift, axis=1)
        blocks.append((shifted[None, :, :] * signs[:, None, :]).reshape(-1, n))
    nodes = np.concatenate(blocks)
    return nodes / np.linalg.norm(nodes, axis=1)[:, None]


def _reference_directions(n: int) -> np.ndarray:
    rng = np.random.default_rng(12345)
    fixed = rng.standard_normal(n)
    references = [np.eye(n)[0], np.eye(n)[-1], np.ones(n), fixed]
    return np.array([p / np.linalg.norm(p) for p in references])


def _reference_integrals(n: int, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    dots = _reference_directions(n) @ nodes.T
    sine = np.sqrt(np.clip(1.0 - dots * dots, 0.0, None)) @ weights
    cosine = np.abs(dots) @ weights
    quartic = dots ** 4 @ weights
    return np.concatenate([sine, cosine, quartic])


def _reference_exact(n: int) -> np.ndarray:
    c = constants(n)
    count = len(_reference_directions(n))
    sine = np.full(count, c.kappa * c.gamma)
    cosine = np.full(count, 2.0 * unit_ball_volume(n - 1))
    quartic = np.full(count, 3.0 * c.kappa / (n + 2))
    return np.concatenate([sine, cosine, quartic])


def _estimate_budget(n: int, nodes: np.ndarray, weights: np.ndarray) -> float:
    c = constants(n)
    mass_error = abs(weights.sum() - c.sphere_area) / c.sphere_area
    moment = (nodes * weights[:, None]).T @ nodes / c.kappa
    moment_error = float(np.max(np.abs(np.linalg.eigvalsh(moment - np.eye(n)))))
    exact = _reference_exact(n)
    reference_error = float(np.max(np.abs(_reference_integrals(n, nodes, weights) - exact) / exact))
    return max(mass_error, moment_error, reference_error)


def build_sphere_quadrature(n: int, resolution: int, seed: int = 0) -> QuadratureRule:
    """S^{n−1} 上の対蹠対称な求積則を構築

    n=3 は Gauss–Legendre × 等間隔方位角の積則（resolution は極角方向の節点数、
    奇数なら偶数へ切り上げ）。n≥4 は Sobol 点 2^⌈log2 resolution⌉ 個を
    符号反転・巡回置換で対称化した等重み点集合で、2次モーメントは厳密。
    """
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    minimum = MIN_RESOLUTION.get(n, MIN_RESOLUTION_HIGH_DIM)
    if resolution < minimum:
        raise ConfigurationError(f"resolution for n={n} must be >= {minimum}, got {resolution}")

    if n == 3:
        nodes, weights = _gauss_product_directions(resolution)
        error = _estimate_budget(n, nodes, weights)
    else:
        log2_count = max(2, math.ceil(math.log2(resolution)))
        nodes = _symmetrized_directions(n, log2_count, seed)
        weights = np.full(len(nodes), _sphere_area(n) / len(nodes))
        error = _estimate_budget(n, nodes, weights)
        coarse = _symmetrized_directions(n, log2_count - 1, seed)
        coarse_weights = np.full(len(coarse), _sphere_area(n) / len(coarse))
        fine_values = _reference_integrals(n, nodes, weights)
        richardson = np.max(
            np.abs(fine_values - _reference_integrals(n, coarse, coarse_weights)) / np.abs(fine_values)
        )
        error = max(error, float(richardson))

    budget = max(BUDGET_SAFETY_FACTOR * error, BUDGET_FLOOR)
    logger.debug(f"📊 求積則構築: n={n}, resolution={resolution}, nodes={len(nodes)}, budget={budget:.3e}")
    return QuadratureRule(n=n, nodes=nodes, weights=weights, accuracy_budget=budget, resolution=resolution)
