"""sine/cosine 変換と Funk–Hecke 乗数"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import logging
from typing import Union

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import lpmv, roots_jacobi

from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import MERGE_RADIUS, SphericalMeasure
from src.domain.exceptions import DomainError, UnsupportedDimensionError
from src.domain.services.numerics import gegenbauer_ratio, unit_ball_volume
from src.domain.value_objects.kernel_kind import KernelKind

logger = logging.getLogger(__name__)

MULTIPLIER_TOLERANCE = 1e-12
MULTIPLIER_MAX_NODES = 4096
_ROW_CHUNK = 512


def kernel_transform(
    directions: np.ndarray,
    weights: np.ndarray,
    x: np.ndarray,
    kernel: KernelKind,
) -> np.ndarray:
    """x の各行について Σ wᵢ‖x|uᵢ^⊥‖（SINE）または Σ wᵢ|x·uᵢ|（COSINE）"""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    result = np.empty(len(x))
    for start in range(0, len(x), _ROW_CHUNK):
        block = x[start:start + _ROW_CHUNK]
        dots = block @ directions.T
        if kernel is KernelKind.SINE:
            squared = np.einsum("ij,ij->i", block, block)[:, None]
            values = np.sqrt(np.clip(squared - dots * dots, 0.0, None))
        else:
            values = np.abs(dots)
        result[start:start + _ROW_CHUNK] = values @ weights
    return result


def _evaluate(mu: SphericalMeasure, x, kernel: KernelKind) -> Union[float, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != mu.n:
        raise DomainError(f"vector dimension {x.shape[-1]} does not match measure dimension {mu.n}")
    values = kernel_transform(mu.directions, mu.weights, x, kernel)
    return float(values[0]) if x.ndim == 1 else values


def sine_transform(mu: SphericalMeasure, x) -> Union[float, np.ndarray]:
    """S μ(x) = ∫‖x|u^⊥‖ dμ(u)（x が2次元配列なら行ごと）"""
    return _evaluate(mu, x, KernelKind.SINE)


def cosine_transform(mu: SphericalMeasure, x) -> Union[float, np.ndarray]:
    """C μ(x) = ∫|x·u| dμ(u)"""
    return _evaluate(mu, x, KernelKind.COSINE)


def _multiplier_integral(kernel: KernelKind, n: int, k: int, nodes: int) -> float:
    beta = 0.5 * (n - 3)
    if kernel is KernelKind.SINE:
        # √(1−t²)·(1−t²)^β は Jacobi 重み (1−t)^{β+½}(1+t)^{β+½} に吸収
        t, w = roots_jacobi(nodes, beta + 0.5, beta + 0.5)
        return float(w @ gegenbauer_ratio(n, k, np.clip(t, -1.0, 1.0)))
    # [0,1] へ折り返し t = (1+s)/2、(1−t)^β を Jacobi 重みに吸収
    s, w = roots_jacobi(nodes, beta, 0.0)
    t = np.clip(0.5 * (1.0 + s), 0.0, 1.0)
    even_part = gegenbauer_ratio(n, k, t) + gegenbauer_ratio(n, k, -t)
    integrand = t * even_part * (1.0 + t) ** beta
    return float(w @ integrand) * 0.5 ** (beta + 1.0)


@lru_cache(maxsize=None)
def funk_hecke_multiplier(kernel: KernelKind, n: int, k: int) -> float:
    """a_k[T_g] = (n−1)κ_{n−1} ∫₋₁¹ g(t) C_k(t)/C_k(1) (1−t²)^{(n−3)/2} dt

    a₀ = ∫_{S^{n−1}} g(u·v) du となる正規化。節点数を倍にしても
    変化が MULTIPLIER_TOLERANCE 未満になるまで Gauss–Jacobi を細かくする。
    """
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    if k < 0:
        raise DomainError(f"degree must be >= 0, got {k}")
    area = (n - 1) * unit_ball_volume(n - 1)
    nodes = max(8, k + 2)
    previous = _multiplier_integral(kernel, n, k, nodes)
    while nodes < MULTIPLIER_MAX_NODES:
        nodes *= 2
        current = _multiplier_integral(kernel, n, k, nodes)
        if abs(current - previous) < MULTIPLIER_TOLERANCE * max(1.0, abs(current)):
            return area * current
        previous = current
    logger.warning(f"⚠️ Funk–Hecke乗数が収束しません: kernel={kernel.value}, n={n}, k={k}")
    return area * previous


def real_spherical_harmonic(k: int, points: np.ndarray) -> np.ndarray:
    """S² 上の次数 k の実球面調和関数 P_k^m(cosθ)cos(mφ)（m = k//2）"""
    m = k // 2
    phi = np.arctan2(points[:, 1], points[:, 0])
    return lpmv(m, k, np.clip(points[:, 2], -1.0, 1.0)) * np.cos(m * phi)


def multiplier_action_residual(kernel: KernelKind, k: int, quad: QuadratureRule) -> float:
    """max_v |T_g Y(v) − a_k Y(v)| / (a₀·max|Y|) を求積節点上で評価"""
    if quad.n != 3:
        raise UnsupportedDimensionError(
            f"explicit spherical harmonics are implemented for n=3 only, got n={quad.n}"
        )
    harmonic = real_spherical_harmonic(k, quad.nodes)
    transformed = kernel_transform(quad.nodes, quad.weights * harmonic, quad.nodes, kernel)
    scale = funk_hecke_multiplier(kernel, 3, 0) * float(np.max(np.abs(harmonic)))
    residual = float(np.max(np.abs(transformed - funk_hecke_multiplier(kernel, 3, k) * harmonic)))
    logger.debug(f"📊 乗数作用残差: kernel={kernel.value}, k={k}, residual={residual / scale:.3e}")
    return residual / scale


def signed_atom_distance(mu1: SphericalMeasure, mu2: SphericalMeasure) -> float:
    """原子を MERGE_RADIUS で対応づけた全変動距離 Σ|μ₁({u}) − μ₂({u})|"""
    directions = np.concatenate([mu1.directions, mu2.directions])
    signed = np.concatenate([mu1.weights, -mu2.weights])
    tree = cKDTree(directions)
    owner = np.full(len(directions), -1, dtype=int)
    groups = 0
    for index, members in enumerate(tree.query_ball_point(directions, r=MERGE_RADIUS)):
        if owner[index] >= 0:
            continue
        for member in members:
            if owner[member] < 0:
                owner[member] = groups
        groups += 1
    totals = np.zeros(groups)
    np.add.at(totals, owner, signed)
    return float(np.abs(totals).sum())


@dataclass(frozen=True)
class InjectivityReport:
    transform_distance: float
    measure_distance: float
    transform_tolerance: float
    measure_tolerance: float

    @property
    def consistent_with_injectivity(self) -> bool:
        """変換が近い ⇔ 測度が近い"""
        transform_small = self.transform_distance <= self.transform_tolerance
        measure_small = self.measure_distance <= self.measure_tolerance
        return transform_small == measure_small

    def to_dict(self) -> dict:
        return {
            "transform_distance": self.transform_distance,
            "measure_distance": self.measure_distance,
            "consistent_with_injectivity": self.consistent_with_injectivity,
        }


def even_injectivity_diagnostic(
    mu1: SphericalMeasure,
    mu2: SphericalMeasure,
    quad: QuadratureRule,
) -> InjectivityReport:
    """偶測度に対する sine 変換の単射性を数値的に診断（証明ではない）"""
    if not (mu1.is_even and mu2.is_even):
        raise DomainError("injectivity diagnostic requires even measures", hint="evenize the inputs first")
    if mu1.n != mu2.n or quad.n != mu1.n:
        raise DomainError("measures and quadrature rule must share the dimension")
    difference = sine_transform(mu1, quad.nodes) - sine_transform(mu2, quad.nodes)
    scale = max(mu1.mass, mu2.mass)
    report = InjectivityReport(
        transform_distance=float(np.max(np.abs(difference))),
        measure_distance=signed_atom_distance(mu1, mu2),
        transform_tolerance=max(quad.accuracy_budget, 1e-12) * scale,
        measure_tolerance=1e-9 * scale,
    )
    logger.debug(f"📊 単射性診断: {report.to_dict()}")
    return report
