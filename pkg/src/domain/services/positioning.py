"""最小表面積位置（表面等方位置）への正規化"""
from __future__ import annotations

from dataclasses import dataclass, field
import logging
from typing import List, Optional

import numpy as np

from src.domain.entities.polytope import Polytope
from src.domain.services.measures import isotropy_defect

logger = logging.getLogger(__name__)

MIN_STEP = 1e-8
# 収束直前は表面積の変化が丸め誤差以下になるため、この相対幅までは非増加とみなす
AREA_ROUNDOFF = 1e-12


@dataclass(frozen=True)
class PositionResult:
    """transform は法線に作用する対称正定値行列 T（det T = 1）、polytope = T^{−1}P"""
    transform: np.ndarray
    polytope: Polytope
    defect: float
    iterations: int
    objective_history: List[float] = field(default_factory=list)
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "transform": self.transform.tolist(),
            "defect": self.defect,
            "iterations": self.iterations,
            "surface_area": self.polytope.surface_area,
            "converged": self.converged,
        }


def _symmetric_exp(direction: np.ndarray, step: float) -> np.ndarray:
    """exp(step·δ)（δ はトレース 0 の対称行列なので det = 1）"""
    eigenvalues, vectors = np.linalg.eigh(direction)
    return (vectors * np.exp(step * eigenvalues)) @ vectors.T


def _symmetric_part(normal_map: np.ndarray) -> np.ndarray:
    """極分解 N = Q·S の S = (NᵀN)^{1/2}"""
    eigenvalues, vectors = np.linalg.eigh(normal_map.T @ normal_map)
    return (vectors * np.sqrt(eigenvalues)) @ vectors.T


def _symmetric_basis(n: int) -> List[np.ndarray]:
    basis = []
    for j in range(n):
        for k in range(j, n):
            element = np.zeros((n, n))
            element[j, k] = element[k, j] = 1.0
            basis.append(element)
    return basis


def _newton_direction(P: Polytope) -> Optional[np.ndarray]:
    """等方性条件 M(e^δ) = Id/n の線形化を解いた δ（トレース 0）

    法線を u → Tu/|Tu|、重みを A|Tu| と動かしたときの正規化2次モーメント M の微分は
    δM + Mδ − Σ aᵢ(uᵢᵀδuᵢ)uᵢuᵢᵀ − M·tr(Mδ)。スケール方向 δ = Id は核なので tr δ = 0 を加える。
    """
    n = P.n
    u = P.normals
    a = P.areas / P.surface_area
    moment = (u.T * a) @ u
    upper = np.triu_indices(n)

    columns = []
    trace_row = []
    basis = _symmetric_basis(n)
    for element in basis:
        quadratic = np.einsum("ij,jk,ik->i", u, element, u)
        fourth = (u.T * (a * quadratic)) @ u
        image = element @ moment + moment @ element - fourth - moment * float(np.sum(moment * element))
        columns.append(image[upper])
        trace_row.append(np.trace(element))

    system = np.vstack([np.array(columns).T, np.array(trace_row)[None, :]])
    target = np.append((np.eye(n) / n - moment)[upper], 0.0)
    coefficients, *_ = np.linalg.lstsq(system, target, rcond=None)
    if not np.all(np.isfinite(coefficients)):
        return None
    direction = sum(c * element for c, element in zip(coefficients, basis))
    return direction - np.trace(direction) / n * np.eye(n)


def _fixed_point_direction(P: Polytope) -> np.ndarray:
    """T ← (M/det(M)^{1/n})^{−1/2} に対応する δ = −½·log M（トレース 0 に正規化）"""
    eigenvalues, vectors = np.linalg.eigh(P.surface_measure().second_moment())
    logs = -0.5 * np.log(eigenvalues)
    logs -= logs.mean()
    return (vectors * logs) @ vectors.T


def _backtrack(current: Polytope, direction: np.ndarray, defect: float, best_area: float):
    """step = 1 から半減し、表面積が増えない最初のステップを返す"""
    step = 1.0
    while step >= MIN_STEP:
        update = _symmetric_exp(direction, step)
        candidate = current.transformed(np.linalg.inv(update))
        area = candidate.surface_area
        if area <= best_area:
            return update, candidate, step
        if area <= best_area * (1.0 + AREA_ROUNDOFF) and isotropy_defect(candidate.surface_measure()) < defect:
            return update, candidate, step
        step *= 0.5
    return None


def minimal_surface_position(P: Polytope, max_iters: int = 200, tol: float = 1e-9) -> PositionResult:
    """Σ Aᵢ|Tuᵢ| を det T = 1 の対称正定値 T について最小化

    各反復は等方性条件へのニュートンステップ、表面積が減らなければ
    不動点ステップ (M/det(M)^{1/n})^{−1/2} に切り替え、どちらも半減バックトラックで採否を決める。
    収束判定は等方性の欠損 < tol。
    """
    current = P
    normal_map = np.eye(P.n)
    history = [current.surface_area]
    defect = isotropy_defect(current.surface_measure())
    iterations = 0

    while defect >= tol and iterations < max_iters:
        directions = [_newton_direction(current), _fixed_point_direction(current)]
        accepted = None
        for direction in directions:
            if direction is None:
                continue
            accepted = _backtrack(current, direction, defect, history[-1])
            if accepted is not None:
                break
        if accepted is None:
            logger.debug(f"📊 位置最適化: 減少方向なし（iteration={iterations}, defect={defect:.3e}）")
            break
        update, current, step = accepted
        normal_map = update @ normal_map
        history.append(current.surface_area)
        defect = isotropy_defect(current.surface_measure())
        iterations += 1
        logger.debug(f"📊 位置最適化 {iterations}: S={history[-1]:.12g}, defect={defect:.3e}, step={step}")

    converged = defect < tol
    if not converged:
        logger.warning(f"⚠️ 表面等方位置に収束しません: defect={defect:.3e}, iterations={iterations}")

    transform = _symmetric_part(normal_map)
    positioned = P.transformed(np.linalg.inv(transform))
    return PositionResult(
        transform=transform,
        polytope=positioned,
        defect=isotropy_defect(positioned.surface_measure()),
        iterations=iterations,
        objective_history=history,
        converged=converged,
    )
