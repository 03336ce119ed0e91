"""階数 n−1 の Brascamp–Lieb / 逆 Brascamp–Lieb 積分と連鎖不等式の検証"""
from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from src.domain.entities.bl_instance import BLInstance
from src.domain.entities.hyperplane_density import DensityKind, HyperplaneDensity
from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.entities.support_body import BodyKind, SupportBody, VolumeMethod
from src.domain.exceptions import ConfigurationError, DomainError, UnsupportedDensityError
from src.domain.services import bodies
from src.domain.services.measures import evenize, isotropy_defect
from src.domain.services.numerics import build_sphere_quadrature, constants, unit_ball_volume
from src.domain.services.transforms import kernel_transform
from src.domain.value_objects.kernel_kind import KernelKind
from src.utils.concurrency import run_chunks

logger = logging.getLogger(__name__)

ISOTROPY_TOLERANCE = 1e-8
RELATIVE_ERROR_FLOOR = 1e-10
ORTHOGONALITY_TOLERANCE = 1e-10
DEFAULT_CHUNK = 65536


@dataclass(frozen=True)
class IntegralEstimate:
    """積分の推定値と標準誤差"""
    value: float
    std_error: float
    method: str

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error, "method": self.method}


def bl_instance_from_measure(mu: SphericalMeasure) -> BLInstance:
    """cᵢ = μ({uᵢ})/(n−1)"""
    defect = isotropy_defect(mu)
    if defect >= ISOTROPY_TOLERANCE:
        raise DomainError(f"measure is not isotropic (defect {defect:.3e})")
    instance = BLInstance(directions=mu.directions.copy(), weights=mu.weights / (mu.n - 1))
    if not instance.is_admissible(ISOTROPY_TOLERANCE):
        raise DomainError(f"decomposition defect {instance.defect:.3e} is too large (Σcᵢ = {instance.trace:.12g})")
    return instance


def exp_chain_densities(inst: BLInstance) -> List[HyperplaneDensity]:
    """fᵢ(y) = (n−1)^{n−1}/(Γ(n)κ_{n−1}) · exp(−(n−1)|y|)（∫ = 1）"""
    n = inst.n
    normalizer = (n - 1) ** (n - 1) / (math.gamma(n) * unit_ball_volume(n - 1))
    return [HyperplaneDensity.exp_norm(u, rate=n - 1.0, normalizer=normalizer) for u in inst.directions]


def ball_chain_densities(inst: BLInstance) -> List[HyperplaneDensity]:
    """gᵢ = 半径 n−1 の球の正規化指示関数（∫ = 1）"""
    n = inst.n
    normalizer = 1.0 / ((n - 1) ** (n - 1) * unit_ball_volume(n - 1))
    return [HyperplaneDensity.ball_indicator(u, radius=n - 1.0, normalizer=normalizer) for u in inst.directions]


def gaussian_densities(inst: BLInstance, variance: float = 1.0) -> List[HyperplaneDensity]:
    return [HyperplaneDensity.gaussian(u, variance=variance) for u in inst.directions]


def product_of_integrals(inst: BLInstance, densities: Sequence[HyperplaneDensity]) -> float:
    """∏ (∫ fᵢ)^{cᵢ}"""
    logs = [c * math.log(d.declared_integral()) for c, d in zip(inst.weights, densities)]
    return math.exp(sum(logs))


def _validate(inst: BLInstance, densities: Sequence[HyperplaneDensity], chain_mode: bool) -> None:
    if len(densities) != inst.size:
        raise DomainError(f"expected {inst.size} densities, got {len(densities)}")
    for u, density in zip(inst.directions, densities):
        if density.direction.size != inst.n or np.linalg.norm(density.direction - u) > 1e-12:
            raise DomainError("density directions must match the instance directions")
    if chain_mode and not all(d.is_normalized() for d in densities):
        raise DomainError("chain checks need densities with unit integral")


def _projection_lengths(directions: np.ndarray, x: np.ndarray) -> np.ndarray:
    dots = x @ directions.T
    squared = np.einsum("ij,ij->i", x, x)[:, None]
    return np.sqrt(np.clip(squared - dots * dots, 0.0, None))


def _log_integrand(inst: BLInstance, densities: Sequence[HyperplaneDensity], x: np.ndarray) -> np.ndarray:
    """log ∏ fᵢ(x|uᵢ^⊥)^{cᵢ}"""
    lengths = _projection_lengths(inst.directions, x)
    total = np.zeros(len(x))
    for index, (c, density) in enumerate(zip(inst.weights, densities)):
        total = total + c * density.log_profile(lengths[:, index])
    return total


def _exp_decay_rate(inst: BLInstance, densities: Sequence[HyperplaneDensity]) -> float:
    """min_v Σ cᵢλᵢ|v|uᵢ^⊥|（EXP_NORM 因子のみ、粗グリッド上）"""
    weights = np.array([
        c * d.rate if d.kind is DensityKind.EXP_NORM else 0.0
        for c, d in zip(inst.weights, densities)
    ])
    decay = kernel_transform(inst.directions, weights, bodies.coarse_directions(inst.n), KernelKind.SINE)
    return float(np.min(decay))


class _Envelope:
    """重点サンプリング用の提案分布"""

    def __init__(self, n: int, kind: str, scale: float):
        self.n = n
        self.kind = kind
        self.scale = scale

    def sample(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        if self.kind == "exponential":
            rate = self.scale
            radius = rng.gamma(shape=n, scale=1.0 / rate, size=size)
            direction = rng.standard_normal((size, n))
            direction /= np.linalg.norm(direction, axis=1)[:, None]
            points = radius[:, None] * direction
            log_q = n * math.log(rate) - rate * radius - math.lgamma(n) - math.log(constants(n).sphere_area)
            return points, log_q
        points = self.scale * rng.standard_normal((size, n))
        squared = np.einsum("ij,ij->i", points, points)
        log_q = -0.5 * squared / self.scale ** 2 - 0.5 * n * math.log(2.0 * math.pi * self.scale ** 2)
        return points, log_q


class _CorrelatedGaussianEnvelope(_Envelope):
    """N(0, LLᵀ) の提案分布（L は Cholesky 因子）"""

    def __init__(self, factor: np.ndarray):
        super().__init__(factor.shape[0], "gaussian", 1.0)
        self.factor = factor
        self.log_det = 2.0 * float(np.sum(np.log(np.diag(factor))))

    def sample(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        z = rng.standard_normal((size, self.n))
        points = z @ self.factor.T
        squared = np.einsum("ij,ij->i", z, z)
        log_q = -0.5 * squared - 0.5 * self.n * math.log(2.0 * math.pi) - 0.5 * self.log_det
        return points, log_q


def _choose_envelope(inst: BLInstance, densities: Sequence[HyperplaneDensity]) -> _Envelope:
    kinds = {d.kind for d in densities}
    rate = _exp_decay_rate(inst, densities) if DensityKind.EXP_NORM in kinds else 0.0
    if rate > 0.0:
        # 被積分関数は exp(−rate·|x|) 程度で減衰するので同じ率の指数提案分布を使う
        return _Envelope(inst.n, "exponential", rate)
    if DensityKind.GAUSSIAN in kinds:
        return _Envelope(inst.n, "gaussian", math.sqrt(max(d.variance for d in densities if d.kind is DensityKind.GAUSSIAN)))
    if DensityKind.BALL_INDICATOR in kinds:
        return _Envelope(inst.n, "gaussian", max(d.radius for d in densities if d.kind is DensityKind.BALL_INDICATOR))
    return _Envelope(inst.n, "gaussian", 1.0)


def _importance_sample(
    log_target,
    envelope: _Envelope,
    samples: int,
    seed: int,
    max_workers: int,
    chunk_size: int,
    label: str,
) -> IntegralEstimate:
    if samples < 1:
        raise ConfigurationError(f"samples must be positive, got {samples}")
    chunk_count = math.ceil(samples / chunk_size)

    def _moments(chunk: int) -> tuple[float, float]:
        size = min(chunk_size, samples - chunk * chunk_size)
        rng = np.random.default_rng([seed, chunk])
        points, log_q = envelope.sample(rng, size)
        ratio = np.exp(log_target(points) - log_q)
        return float(ratio.sum()), float((ratio * ratio).sum())

    totals = run_chunks(_moments, chunk_count, max_workers=max_workers)
    first = sum(t[0] for t in totals) / samples
    second = sum(t[1] for t in totals) / samples
    error = math.sqrt(max(second - first * first, 0.0) / samples)
    error = max(error, RELATIVE_ERROR_FLOOR * abs(first))
    return IntegralEstimate(value=first, std_error=error, method=label)


def _spherical_radial(
    inst: BLInstance,
    densities: Sequence[HyperplaneDensity],
    resolution: int,
) -> Optional[IntegralEstimate]:
    """∫_{S^{n−1}} ∫₀^∞ F(rv) r^{n−1} dr dv（動径積分は閉形式）"""
    kinds = {d.kind for d in densities}
    if len(kinds) != 1 or DensityKind.CUSTOM in kinds:
        return None
    kind = kinds.pop()
    n = inst.n
    rule = build_sphere_quadrature(n, resolution)
    lengths = _projection_lengths(inst.directions, rule.nodes)
    c = inst.weights
    log_scale = float(sum(ci * d.log_profile(np.zeros(1))[0] for ci, d in zip(c, densities)))
    if kind is DensityKind.EXP_NORM:
        rates = np.array([d.rate for d in densities])
        decay = lengths @ (c * rates)
        radial = math.gamma(n) / decay ** n
    elif kind is DensityKind.GAUSSIAN:
        precision = np.array([1.0 / d.variance for d in densities])
        quadratic = (lengths * lengths) @ (c * precision)
        radial = 0.5 * (2.0 / quadratic) ** (0.5 * n) * math.gamma(0.5 * n)
    else:
        radii = np.array([d.radius for d in densities])
        with np.errstate(divide="ignore"):
            reach = np.min(np.where(lengths > 0.0, radii / lengths, np.inf), axis=1)
        radial = reach ** n / n
    value = math.exp(log_scale) * rule.integrate(radial)
    return IntegralEstimate(value=value, std_error=value * n * rule.accuracy_budget, method="spherical-radial")


def bl_left_integral(
    inst: BLInstance,
    densities: Sequence[HyperplaneDensity],
    samples: int,
    seed: int,
    chain_mode: bool = False,
    method: str = "auto",
    resolution: int = 48,
    max_workers: int = 4,
    chunk_size: int = DEFAULT_CHUNK,
) -> IntegralEstimate:
    """∫ ∏ fᵢ(x|uᵢ^⊥)^{cᵢ} dx

    method="auto" は n=3 の直交配置では球面-動径求積、それ以外は重点サンプリング。
    """
    _validate(inst, densities, chain_mode)
    if method == "quadrature" or (
        method == "auto" and inst.n == 3 and gaussian_strictness_check(inst).orthogonal_configuration
    ):
        estimate = _spherical_radial(inst, densities, resolution)
        if estimate is not None:
            return estimate
        if method == "quadrature":
            raise UnsupportedDensityError("quadrature path needs densities of a single closed-form kind")
    envelope = _choose_envelope(inst, densities)
    estimate = _importance_sample(
        lambda x: _log_integrand(inst, densities, x),
        envelope,
        samples,
        seed,
        max_workers,
        chunk_size,
        label=f"importance-{envelope.kind}",
    )
    logger.debug(f"📊 BL左辺: {estimate.value:.6g} ± {estimate.std_error:.2g} ({estimate.method})")
    return estimate


def gaussian_inner_sup(inst: BLInstance, densities: Sequence[HyperplaneDensity], x: np.ndarray) -> np.ndarray:
    """sup{∏ gᵢ(yᵢ)^{cᵢ} : x = Σ cᵢyᵢ, yᵢ ∈ uᵢ^⊥} をガウス密度について閉形式で評価

    最適解は yᵢ = σᵢ² π_{uᵢ} λ、A = Σ cᵢσᵢ²π_{uᵢ} として λ = A⁻¹x。
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    variances = np.array([d.variance for d in densities])
    operator = sum(c * s * inst.projection(i) for i, (c, s) in enumerate(zip(inst.weights, variances)))
    multipliers = np.linalg.solve(operator, x.T).T
    quadratic = np.einsum("ij,ij->i", x, multipliers)
    log_scale = sum(
        -0.5 * c * (inst.n - 1) * math.log(2.0 * math.pi * s) for c, s in zip(inst.weights, variances)
    )
    return np.exp(log_scale - 0.5 * quadratic)


def _infimal_convolution_body(inst: BLInstance, densities: Sequence[HyperplaneDensity]) -> SupportBody:
    """conv ∪ (1/λᵢ)(B∩uᵢ^⊥)：ゲージは inf{Σ λᵢ|zᵢ| : Σ zᵢ = x, zᵢ ∈ uᵢ^⊥}"""
    directions = inst.directions
    scales = np.array([1.0 / d.rate for d in densities])

    def _support(x: np.ndarray) -> np.ndarray:
        return np.max(_projection_lengths(directions, x) * scales, axis=1)

    def _gradient(x: np.ndarray) -> np.ndarray:
        lengths = _projection_lengths(directions, x)
        best = np.argmax(lengths * scales, axis=1)
        u = directions[best]
        dots = np.einsum("ij,ij->i", x, u)
        length = np.maximum(lengths[np.arange(len(x)), best], 1e-15)
        return (scales[best] / length)[:, None] * (x - dots[:, None] * u)

    c = inst.weights * scales
    floor = float(c.sum() - np.linalg.eigvalsh((directions * c[:, None]).T @ directions)[-1]) / float(inst.weights.sum())
    return SupportBody(
        n=inst.n,
        support=_support,
        gradient=_gradient,
        kind=BodyKind.GENERIC,
        lower_bound=floor,
        hint_directions=np.concatenate([directions, -directions]),
    )


def rbl_left_integral(
    inst: BLInstance,
    densities: Sequence[HyperplaneDensity],
    samples: int,
    seed: int,
    chain_mode: bool = False,
    max_workers: int = 4,
    chunk_size: int = DEFAULT_CHUNK,
) -> IntegralEstimate:
    """∫ sup{∏ gᵢ(yᵢ)^{cᵢ} : x = Σ cᵢyᵢ, yᵢ ∈ uᵢ^⊥} dx

    - BALL_INDICATOR: Minkowski 和 Σ cᵢrᵢ(B∩uᵢ^⊥) の体積（sine 型凸体のゲージで所属判定）
    - GAUSSIAN: 内側 sup は閉形式、外側は N(0, A) 提案の重点サンプリング
    - EXP_NORM: 内側 inf は ∪(1/λᵢ)(B∩uᵢ^⊥) の凸包のゲージ、外側は n!·体積
    """
    _validate(inst, densities, chain_mode)
    kinds = {d.kind for d in densities}
    if DensityKind.CUSTOM in kinds:
        raise UnsupportedDensityError("the inner supremum is not available for CUSTOM densities")
    if len(kinds) != 1:
        raise UnsupportedDensityError("reverse BL needs densities of a single kind")
    kind = kinds.pop()
    n = inst.n
    log_normalizers = sum(c * math.log(d.normalizer) for c, d in zip(inst.weights, densities))

    if kind is DensityKind.GAUSSIAN:
        variances = np.array([d.variance for d in densities])
        operator = sum(c * s * inst.projection(i) for i, (c, s) in enumerate(zip(inst.weights, variances)))
        envelope = _CorrelatedGaussianEnvelope(np.linalg.cholesky(operator))

        def _log_sup(x: np.ndarray) -> np.ndarray:
            return np.log(gaussian_inner_sup(inst, densities, x))

        return _importance_sample(
            _log_sup, envelope, samples, seed, max_workers, chunk_size,
            label="importance-gaussian",
        )

    if kind is DensityKind.BALL_INDICATOR:
        radii = np.array([d.radius for d in densities])
        widths = inst.weights * radii
        floor = float(widths.sum() - np.linalg.eigvalsh((inst.directions * widths[:, None]).T @ inst.directions)[-1])
        body = bodies.measure_body(inst.directions, widths, KernelKind.SINE, BodyKind.SINE_BODY, floor)
        estimate = bodies.membership_volume(body, samples, seed, max_workers=max_workers, chunk_size=chunk_size)
        scale = math.exp(log_normalizers)
        return IntegralEstimate(scale * estimate.value, scale * estimate.std_error, "membership-sine-body")

    body = _infimal_convolution_body(inst, densities)
    estimate = bodies.membership_volume(body, samples, seed, max_workers=max_workers, chunk_size=chunk_size)
    scale = math.exp(log_normalizers) * math.factorial(n)
    return IntegralEstimate(scale * estimate.value, scale * estimate.std_error, "membership-infimal-convolution")


def chain_prefactor(n: int) -> float:
    """(Γ(n)κ_{n−1})^{n/(n−1)} / (n!(n−1)ⁿ)"""
    log_value = (
        n / (n - 1) * (math.lgamma(n) + math.log(unit_ball_volume(n - 1)))
        - math.lgamma(n + 1)
        - n * math.log(n - 1)
    )
    return math.exp(log_value)


@dataclass(frozen=True)
class ChainReport:
    """V(S_μ*)（A）、BL 表示（B）、V(S_μ)/α_n（C）の比較"""
    polar_volume: IntegralEstimate
    bl_side: IntegralEstimate
    volume_side: IntegralEstimate
    sigma_multiplier: float

    @property
    def relative_gap(self) -> float:
        return abs(self.polar_volume.value - self.bl_side.value) / self.polar_volume.value

    @property
    def combined_sigma(self) -> float:
        return math.hypot(self.polar_volume.std_error, self.bl_side.std_error)

    @property
    def equal_within_bars(self) -> bool:
        return abs(self.polar_volume.value - self.bl_side.value) <= self.sigma_multiplier * self.combined_sigma

    @property
    def ordered(self) -> bool:
        """B ≤ C（誤差幅込み）"""
        slack = self.sigma_multiplier * math.hypot(self.bl_side.std_error, self.volume_side.std_error)
        return self.bl_side.value <= self.volume_side.value + slack

    @property
    def slack_ratio(self) -> float:
        """C/A（記録のみ）"""
        return self.volume_side.value / self.polar_volume.value

    def to_dict(self) -> dict:
        return {
            "A": self.polar_volume.to_dict(),
            "B": self.bl_side.to_dict(),
            "C": self.volume_side.to_dict(),
            "relative_gap": self.relative_gap,
            "equal_within_bars": self.equal_within_bars,
            "ordered": self.ordered,
            "slack_ratio": self.slack_ratio,
        }


def kantorovich_chain_check(
    mu: SphericalMeasure,
    samples: int,
    seed: int,
    quad: Optional[QuadratureRule] = None,
    resolution: int = 48,
    sigma_multiplier: float = 3.0,
    max_workers: int = 4,
    chunk_size: int = DEFAULT_CHUNK,
) -> ChainReport:
    """A = V(S_μ*)（求積）、B = 前因子·∫∏fᵢ^{cᵢ}（MC）、C = V(S_μ)/α_n（動径求積）

    非偶な μ は S μ = S(evenize μ) なので evenize した測度で凸体を作る。
    """
    n = mu.n
    inst = bl_instance_from_measure(mu)
    quad = quad or build_sphere_quadrature(n, resolution, seed=seed)
    body = bodies.sine_body(mu if mu.is_even else evenize(mu))

    a_value = bodies.polar_volume(body, quad)
    a_side = IntegralEstimate(a_value, a_value * n * quad.accuracy_budget, "polar-quadrature")

    bl = bl_left_integral(
        inst, exp_chain_densities(inst), samples, seed,
        chain_mode=True, method="monte-carlo", max_workers=max_workers, chunk_size=chunk_size,
    )
    prefactor = chain_prefactor(n)
    b_side = IntegralEstimate(prefactor * bl.value, prefactor * bl.std_error, bl.method)

    estimate = bodies.volume(body, VolumeMethod.EXP_INTEGRAL, quad=quad)
    alpha = constants(n).alpha
    c_side = IntegralEstimate(estimate.value / alpha, estimate.std_error / alpha, "radial-volume")

    report = ChainReport(a_side, b_side, c_side, sigma_multiplier)
    logger.info(
        f"📊 連鎖検証 n={n}: A={a_side.value:.6g}, B={b_side.value:.6g}±{b_side.std_error:.2g}, "
        f"C={c_side.value:.6g}, C/A={report.slack_ratio:.4f}"
    )
    return report


@dataclass(frozen=True)
class StrictnessReport:
    orthogonal_configuration: bool
    worst_inner_product: float

    def to_dict(self) -> dict:
        return {
            "orthogonal_configuration": self.orthogonal_configuration,
            "worst_inner_product": self.worst_inner_product,
        }


def gaussian_strictness_check(inst: BLInstance) -> StrictnessReport:
    """方向が直交基底の ± 部分集合か（相互内積が 0 または ±1）を判定"""
    gram = np.abs(inst.directions @ inst.directions.T)
    distance = np.minimum(gram, np.abs(gram - 1.0))
    worst = float(np.max(distance))
    return StrictnessReport(orthogonal_configuration=worst < ORTHOGONALITY_TOLERANCE, worst_inner_product=worst)


@dataclass(frozen=True)
class ConjectureComparison:
    """cross 測度との比較（予想の数値比較、検証対象ではない）"""
    max_polar_ratio: float
    min_volume_ratio: float
    measures: int

    def to_dict(self) -> dict:
        return {
            "max_polar_ratio": self.max_polar_ratio,
            "min_volume_ratio": self.min_volume_ratio,
            "measures": self.measures,
        }


def cross_measure_conjecture_comparison(
    measures: Sequence[SphericalMeasure],
    cross: SphericalMeasure,
    quad: QuadratureRule,
) -> ConjectureComparison:
    """max V(S_μ*)/V(S_ν*) と min V(S_μ)/V(S_ν)（ν は cross 測度）"""
    if not measures:
        raise DomainError("conjecture comparison needs at least one measure")
    reference = bodies.sine_body(cross)
    reference_polar = bodies.polar_volume(reference, quad)
    reference_volume = bodies.volume(reference, VolumeMethod.EXP_INTEGRAL, quad=quad).value
    polar_ratios = []
    volume_ratios = []
    for mu in measures:
        body = bodies.sine_body(mu if mu.is_even else evenize(mu))
        polar_ratios.append(bodies.polar_volume(body, quad) / reference_polar)
        volume_ratios.append(bodies.volume(body, VolumeMethod.EXP_INTEGRAL, quad=quad).value / reference_volume)
    return ConjectureComparison(max(polar_ratios), min(volume_ratios), len(measures))
