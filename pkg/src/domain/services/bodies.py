"""支持関数オラクルによる凸体・ゲージ・体積推定"""
from __future__ import annotations

from functools import lru_cache, partial
import itertools
import logging
import math
from typing import Optional

import numpy as np

from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.entities.support_body import BodyKind, SupportBody, VolumeEstimate, VolumeMethod
from src.domain.exceptions import ConfigurationError, DegenerateBodyError, DomainError
from src.domain.services.numerics import constants
from src.domain.services.transforms import kernel_transform
from src.domain.value_objects.kernel_kind import KernelKind
from src.utils.concurrency import run_chunks

logger = logging.getLogger(__name__)

MIN_MC_SAMPLES = 1000
GAUGE_ITERATIONS = 60
GAUGE_INITIAL_STEP = 0.1
GAUGE_MIN_STEP = 1e-7
GAUGE_ROW_CHUNK = 4096
ZONOTOPE_HINT_LIMIT = 20000
# n=3 の Fibonacci 格子 1024 点の被覆角の上界（ラジアン）
GRID_COVERING_ANGLE = 0.1


def _kernel_gradient(directions: np.ndarray, weights: np.ndarray, x: np.ndarray, kernel: KernelKind) -> np.ndarray:
    dots = x @ directions.T
    if kernel is KernelKind.COSINE:
        return (np.sign(dots) * weights) @ directions
    squared = np.einsum("ij,ij->i", x, x)[:, None]
    lengths = np.sqrt(np.clip(squared - dots * dots, 0.0, None))
    safe = np.where(lengths > 1e-15, lengths, 1.0)
    coefficients = np.where(lengths > 1e-15, weights / safe, 0.0)
    return x * coefficients.sum(axis=1)[:, None] - (coefficients * dots) @ directions


def zonotope_facet_normals(generators: np.ndarray, limit: Optional[int] = ZONOTOPE_HINT_LIMIT) -> np.ndarray:
    """生成元の (n−1) 部分集合に直交する単位ベクトル（ゾノトープのファセット法線）を ± で返す"""
    generators = np.asarray(generators, dtype=float)
    m, n = generators.shape
    if limit is not None and math.comb(m, n - 1) > limit:
        return np.empty((0, n))
    normals = []
    for subset in itertools.combinations(range(m), n - 1):
        _, singular, vt = np.linalg.svd(generators[list(subset)])
        if singular[-1] < 1e-12 * max(singular[0], 1e-300):
            continue
        normals.append(vt[-1])
    if not normals:
        return np.empty((0, n))
    normals = np.array(normals)
    return np.concatenate([normals, -normals])


def measure_body(
    directions: np.ndarray,
    weights: np.ndarray,
    kernel: KernelKind,
    kind: BodyKind,
    lower_bound: float,
    payload=None,
) -> SupportBody:
    """h(x) = Σ wᵢ g(x, uᵢ) 型の凸体（sine/cosine体、Π、Ψ 共通）"""
    directions = np.asarray(directions, dtype=float)
    weights = np.asarray(weights, dtype=float)
    hints = np.concatenate([directions, -directions])
    if kernel is KernelKind.COSINE:
        hints = np.concatenate([hints, zonotope_facet_normals(directions)])
    return SupportBody(
        n=int(directions.shape[1]),
        support=partial(kernel_transform, directions, weights, kernel=kernel),
        gradient=partial(_kernel_gradient, directions, weights, kernel=kernel),
        kind=kind,
        lower_bound=lower_bound,
        payload=payload,
        hint_directions=hints,
    )


def _grid_floor(mu: SphericalMeasure, kernel: KernelKind, floor: float) -> float:
    """n=3 では粗グリッドと原子方向での最小値から Lipschitz 幅 mass·被覆角 を引いた値と floor の大きい方"""
    if mu.n != 3:
        return floor
    directions = np.concatenate([coarse_directions(3), mu.directions])
    grid_minimum = float(np.min(kernel_transform(mu.directions, mu.weights, directions, kernel=kernel)))
    return max(floor, grid_minimum - mu.mass * GRID_COVERING_ANGLE)


def sine_body(mu: SphericalMeasure) -> SupportBody:
    """h = S μ の凸体 S_μ

    下界は √(1−t²) ≥ 1−t² から h(v) ≥ mass − λ_max(Σ wᵢuᵢ⊗uᵢ)。
    n=3 ではさらに粗グリッド上の最小値で引き上げる。
    """
    if mu.is_concentrated_on_antipodal_pair():
        raise DegenerateBodyError("measure is concentrated on two antipodal points")
    if not mu.is_even:
        raise DomainError("sine bodies are built from even measures", hint="evenize the measure first")
    floor = _grid_floor(mu, KernelKind.SINE, mu.mass - float(np.linalg.eigvalsh(mu.second_moment())[-1]))
    return measure_body(mu.directions, mu.weights, KernelKind.SINE, BodyKind.SINE_BODY, floor, payload=mu)


def cosine_body(mu: SphericalMeasure) -> SupportBody:
    """h = C μ の凸体 C_μ（下界は |t| ≥ t² から λ_min(Σ wᵢuᵢ⊗uᵢ)）"""
    if not mu.spans_space():
        raise DegenerateBodyError("measure is concentrated on a great subsphere")
    if not mu.is_even:
        raise DomainError("cosine bodies are built from even measures", hint="evenize the measure first")
    floor = _grid_floor(mu, KernelKind.COSINE, float(np.linalg.eigvalsh(mu.second_moment())[0]))
    return measure_body(mu.directions, mu.weights, KernelKind.COSINE, BodyKind.COSINE_BODY, floor, payload=mu)


def ball(n: int, radius: float = 1.0) -> SupportBody:
    if radius <= 0.0:
        raise DegenerateBodyError(f"ball radius must be positive, got {radius}")

    def _support(x: np.ndarray) -> np.ndarray:
        return radius * np.linalg.norm(x, axis=1)

    def _gradient(x: np.ndarray) -> np.ndarray:
        return radius * x / np.linalg.norm(x, axis=1)[:, None]

    return SupportBody(n=n, support=_support, gradient=_gradient, kind=BodyKind.BALL, lower_bound=radius, payload=radius)


@lru_cache(maxsize=None)
def coarse_directions(n: int) -> np.ndarray:
    """~10³ 方向の粗いグリッド（n=3 はFibonacci格子）"""
    axes = np.concatenate([np.eye(n), -np.eye(n)])
    if n == 3:
        count = 1024
        index = np.arange(count) + 0.5
        z = 1.0 - 2.0 * index / count
        phi = math.pi * (1.0 + math.sqrt(5.0)) * index
        radial = np.sqrt(1.0 - z * z)
        grid = np.stack([radial * np.cos(phi), radial * np.sin(phi), z], axis=1)
    else:
        grid = np.random.default_rng(0).standard_normal((2048, n))
    grid = np.concatenate([grid, axes])
    grid /= np.linalg.norm(grid, axis=1)[:, None]
    grid.setflags(write=False)
    return grid


def _numeric_gradient(body: SupportBody, v: np.ndarray) -> np.ndarray:
    step = 1e-7
    grad = np.empty_like(v)
    for axis in range(v.shape[1]):
        shift = np.zeros(v.shape[1])
        shift[axis] = step
        grad[:, axis] = (body.support(v + shift) - body.support(v - shift)) / (2.0 * step)
    return grad


def _polish(body: SupportBody, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """f(v) = x·v/h(v) の球面上射影勾配上昇（改善時のみ採用、ステップは行ごとに伸縮）"""
    h = body.support(v)
    value = np.einsum("ij,ij->i", x, v) / h
    step = np.full(len(v), GAUGE_INITIAL_STEP)
    active = np.ones(len(v), dtype=bool)
    for _ in range(GAUGE_ITERATIONS):
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break
        vr, xr, hr = v[rows], x[rows], h[rows]
        grad_h = body.gradient(vr) if body.gradient is not None else _numeric_gradient(body, vr)
        ascent = xr / hr[:, None] - (value[rows] / hr)[:, None] * grad_h
        ascent -= np.einsum("ij,ij->i", ascent, vr)[:, None] * vr
        norms = np.linalg.norm(ascent, axis=1)
        moving = norms > 1e-15
        direction = np.where(moving[:, None], ascent / np.where(moving, norms, 1.0)[:, None], 0.0)
        candidate = vr + step[rows, None] * direction
        candidate /= np.linalg.norm(candidate, axis=1)[:, None]
        candidate_h = body.support(candidate)
        candidate_value = np.einsum("ij,ij->i", xr, candidate) / candidate_h
        improved = (candidate_value > value[rows]) & moving
        accepted = rows[improved]
        v[accepted] = candidate[improved]
        h[accepted] = candidate_h[improved]
        value[accepted] = candidate_value[improved]
        step[accepted] *= 1.5
        step[rows[~improved]] *= 0.5
        active[rows[(~moving) | (step[rows] < GAUGE_MIN_STEP)]] = False
    return value


def _gauge_block(body: SupportBody, x: np.ndarray, candidates: np.ndarray, candidate_h: np.ndarray) -> np.ndarray:
    """x·v − g·h(v) は v について凹なので {x·v/h(v) ≥ g} は凸錐、極大は1つ。最良の始点1つから磨く"""
    norms = np.linalg.norm(x, axis=1)
    result = np.zeros(len(x))
    nonzero = norms > 0.0
    if not np.any(nonzero):
        return result
    xs = x[nonzero]
    own = xs / norms[nonzero][:, None]
    own_score = norms[nonzero] / body.support(own)
    scores = (xs @ candidates.T) / candidate_h
    best = np.argmax(scores, axis=1)
    best_score = scores[np.arange(len(xs)), best]
    start = np.where((own_score >= best_score)[:, None], own, candidates[best])
    polished = _polish(body, xs, start)
    result[nonzero] = np.maximum(polished, np.maximum(best_score, own_score))
    return result


def gauge_many(body: SupportBody, x: np.ndarray) -> np.ndarray:
    """各行 x の gauge = max_v (x·v)/h(v)（粗グリッド＋ヒント方向＋x̂ のうち最良の始点から局所最適化）"""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != body.n:
        raise DomainError(f"point dimension {x.shape[1]} does not match body dimension {body.n}")
    if body.is_ball():
        return np.linalg.norm(x, axis=1) / body.radius
    candidates = coarse_directions(body.n)
    if body.hint_directions.size:
        candidates = np.concatenate([candidates, body.hint_directions])
    candidate_h = body.support(candidates)
    if np.any(candidate_h <= 0.0):
        raise DegenerateBodyError("support function vanishes on the sphere")
    result = np.empty(len(x))
    for start in range(0, len(x), GAUGE_ROW_CHUNK):
        block = x[start:start + GAUGE_ROW_CHUNK]
        result[start:start + GAUGE_ROW_CHUNK] = _gauge_block(body, block, candidates, candidate_h)
    return result


def gauge(body: SupportBody, x) -> float:
    """gauge(x) ≤ 1 ⇔ x ∈ K。x = 0 なら 0"""
    return float(gauge_many(body, np.asarray(x, dtype=float)[None, :])[0])


def _check_dimensions(body: SupportBody, quad: QuadratureRule) -> None:
    if body.n != quad.n:
        raise DomainError(f"body dimension {body.n} does not match quadrature dimension {quad.n}")


def polar_volume(body: SupportBody, quad: QuadratureRule) -> float:
    """V(K*) = (1/n) ∫ h(K, u)^{−n} du"""
    _check_dimensions(body, quad)
    h = body.support(quad.nodes)
    if np.any(h <= 0.0):
        raise DegenerateBodyError("support function vanishes on the sphere")
    return float(quad.weights @ h ** (-float(body.n))) / body.n


def _radial_volume(body: SupportBody, quad: QuadratureRule) -> VolumeEstimate:
    radial = 1.0 / gauge_many(body, quad.nodes)
    value = float(quad.weights @ radial ** body.n) / body.n
    error = value * body.n * max(quad.accuracy_budget, 1e-6)
    return VolumeEstimate(value=value, std_error=error, method=VolumeMethod.EXP_INTEGRAL)


def _bounding_box(body: SupportBody) -> tuple[np.ndarray, np.ndarray]:
    identity = np.eye(body.n)
    return -body.support(-identity), body.support(identity)


def membership_volume(
    body: SupportBody,
    samples: int,
    seed: int,
    max_workers: int = 4,
    chunk_size: int = 65536,
) -> VolumeEstimate:
    """外接箱から一様サンプルし gauge ≤ 1 の割合で体積を推定（chunk ごとに seed 分割）"""
    if samples < MIN_MC_SAMPLES:
        raise ConfigurationError(f"membership volume needs at least {MIN_MC_SAMPLES} samples, got {samples}")
    lower, upper = _bounding_box(body)
    box_volume = float(np.prod(upper - lower))
    chunk_count = math.ceil(samples / chunk_size)

    def _count(chunk: int) -> int:
        size = min(chunk_size, samples - chunk * chunk_size)
        rng = np.random.default_rng([seed, chunk])
        points = lower + (upper - lower) * rng.random((size, body.n))
        return int(np.count_nonzero(gauge_many(body, points) <= 1.0))

    hits = sum(run_chunks(_count, chunk_count, max_workers=max_workers))
    fraction = hits / samples
    value = box_volume * fraction
    error = box_volume * math.sqrt(max(fraction * (1.0 - fraction), 0.0) / samples)
    logger.debug(f"📊 MC体積: hits={hits}/{samples}, value={value:.6g} ± {error:.2g}")
    return VolumeEstimate(value=value, std_error=error, method=VolumeMethod.MC_MEMBERSHIP)


def volume(
    body: SupportBody,
    method: VolumeMethod = VolumeMethod.EXP_INTEGRAL,
    quad: Optional[QuadratureRule] = None,
    samples: int = 0,
    seed: int = 0,
    max_workers: int = 4,
    chunk_size: int = 65536,
) -> VolumeEstimate:
    """V(K) = (1/n!)∫exp(−gauge) を動径形式 (1/n)∫ρⁿ で、または MC で推定"""
    if method is VolumeMethod.EXP_INTEGRAL:
        if quad is None:
            raise ConfigurationError("EXP_INTEGRAL volume needs a quadrature rule")
        _check_dimensions(body, quad)
        return _radial_volume(body, quad)
    return membership_volume(body, samples, seed, max_workers=max_workers, chunk_size=chunk_size)


def mean_width_functional(body: SupportBody, quad: QuadratureRule) -> float:
    """(1/(nκ_n)) ∫ h(K, u) du"""
    _check_dimensions(body, quad)
    return quad.integrate(body.support(quad.nodes)) / constants(body.n).sphere_area


def urysohn_gap(
    body: SupportBody,
    quad: QuadratureRule,
    samples: int = 0,
    seed: int = 0,
    method: VolumeMethod = VolumeMethod.EXP_INTEGRAL,
) -> float:
    """平均幅汎関数 − (V(K)/κ_n)^{1/n}（球で 0、それ以外は正）"""
    estimate = volume(body, method=method, quad=quad, samples=samples, seed=seed)
    return mean_width_functional(body, quad) - (estimate.value / constants(body.n).kappa) ** (1.0 / body.n)
