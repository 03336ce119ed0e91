"""等方測度の生成・検証"""
from __future__ import annotations

import logging
from typing import List

import numpy as np
from scipy.stats import special_ortho_group

from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.exceptions import DomainError
from src.domain.services.numerics import build_sphere_quadrature, constants

logger = logging.getLogger(__name__)


def _operator_norm(symmetric: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(symmetric))))


def isotropy_defect(mu: SphericalMeasure) -> float:
    """‖Σ wᵢ uᵢ⊗uᵢ − Id‖（作用素ノルム）"""
    return _operator_norm(mu.second_moment() - np.eye(mu.n))


def projection_decomposition_defect(mu: SphericalMeasure) -> float:
    """‖(1/(n−1)) Σ wᵢ π_{uᵢ} − Id‖、π_u = Id − u⊗u"""
    n = mu.n
    combined = (mu.mass * np.eye(n) - mu.second_moment()) / (n - 1)
    return _operator_norm(combined - np.eye(n))


def cross_measure(n: int) -> SphericalMeasure:
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    identity = np.eye(n)
    return SphericalMeasure.from_atoms(
        np.concatenate([identity, -identity]), np.full(2 * n, 0.5), merge=False
    )


def _helmert_vertices(n: int) -> np.ndarray:
    """正則単体の単位頂点 n+1 個（Helmert基底で ones^⊥ ⊂ R^{n+1} を R^n に埋め込む）"""
    helmert = np.zeros((n, n + 1))
    for k in range(1, n + 1):
        helmert[k - 1, :k] = 1.0
        helmert[k - 1, k] = -float(k)
        helmert[k - 1] /= np.sqrt(k * (k + 1.0))
    vertices = helmert.T
    return vertices / np.linalg.norm(vertices, axis=1)[:, None]


def simplex_measure(n: int) -> SphericalMeasure:
    """正則単体の頂点に重み n/(n+1) を置いた非偶な等方測度"""
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    return SphericalMeasure.from_atoms(
        _helmert_vertices(n), np.full(n + 1, n / (n + 1.0)), merge=False
    )


def lebesgue_measure(n: int, resolution: int, seed: int = 0) -> SphericalMeasure:
    """求積則の節点に重み w/κ_n を置いた正規化Lebesgue測度（質量 n）"""
    rule = build_sphere_quadrature(n, resolution, seed=seed)
    return SphericalMeasure.from_atoms(rule.nodes, rule.weights / constants(n).kappa, merge=False)


def random_isotropic_measure(n: int, blocks: int, seed: int, even: bool = True) -> SphericalMeasure:
    """cross/simplex 測度のランダム回転の凸結合（質量 n、seed に対して決定的）"""
    if blocks < 1:
        raise DomainError(f"blocks must be >= 1, got {blocks}")
    rng = np.random.default_rng(seed)
    mixture = rng.dirichlet(np.ones(blocks))
    rotations = special_ortho_group.rvs(n, size=blocks, random_state=rng).reshape(blocks, n, n)
    base = cross_measure(n) if even else simplex_measure(n)

    directions = []
    weights = []
    for share, rotation in zip(mixture, rotations):
        rotated = base.rotated(rotation)
        directions.append(rotated.directions)
        weights.append(share * rotated.weights)
    return SphericalMeasure.from_atoms(np.concatenate(directions), np.concatenate(weights))


def random_measure_suite(n: int, count: int, seed: int, even: bool = True, max_blocks: int = 4) -> List[SphericalMeasure]:
    """検証スイート用のランダム等方測度列（ブロック数は 1..max_blocks を循環）"""
    suite = [
        random_isotropic_measure(n, 1 + index % max_blocks, seed * 100_003 + index, even=even)
        for index in range(count)
    ]
    logger.debug(f"📊 ランダム等方測度 {len(suite)} 個を生成: n={n}, even={even}")
    return suite


def evenize(mu: SphericalMeasure) -> SphericalMeasure:
    """(μ + μ(−·))/2"""
    return SphericalMeasure.from_atoms(
        np.concatenate([mu.directions, -mu.directions]),
        np.concatenate([0.5 * mu.weights, 0.5 * mu.weights]),
    )
