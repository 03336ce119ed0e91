"""射影体 Π、作用素 Ψ、表面等方位置での体積不等式と恒等式"""
from __future__ import annotations

from dataclasses import dataclass
import itertools
import logging
import math
from typing import Dict, List, Optional

import numpy as np
from scipy import integrate
from scipy.spatial import ConvexHull

from src.domain.entities.polytope import Polytope
from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.entities.support_body import BodyKind, SupportBody, VolumeMethod
from src.domain.exceptions import UnsupportedDimensionError
from src.domain.services import bodies
from src.domain.services.numerics import log_unit_ball_volume, unit_ball_volume
from src.domain.services.positioning import PositionResult, minimal_surface_position
from src.domain.services.transforms import funk_hecke_multiplier
from src.domain.value_objects.bound_check import BoundCheck
from src.domain.value_objects.kernel_kind import KernelKind

logger = logging.getLogger(__name__)

ZONOTOPE_SUBSET_LIMIT = 2_000_000
ANALYTIC_RELATIVE_ERROR = 1e-12
CLOSED_FORM_RELATIVE_ERROR = 1e-10


def surface_measure(P: Polytope) -> SphericalMeasure:
    """原子 (uᵢ, n·Aᵢ/S)（質量 n、等方性は要求しない）"""
    return P.surface_measure()


def psi_constant(n: int) -> float:
    """κ_{n−2}/((n−1)κ_{n−1})"""
    return unit_ball_volume(n - 2) / ((n - 1) * unit_ball_volume(n - 1))


def projection_body(P: Polytope) -> SupportBody:
    """Cauchy の射影公式 h(ΠP, v) = ½ Σ Aᵢ|uᵢ·v|"""
    weights = 0.5 * P.areas
    floor = float(np.linalg.eigvalsh((P.normals * weights[:, None]).T @ P.normals)[0])
    return bodies.measure_body(P.normals, weights, KernelKind.COSINE, BodyKind.PROJECTION_BODY, floor, payload=P)


def psi_body(P: Polytope) -> SupportBody:
    """h(ΨP, v) = κ_{n−2}/((n−1)κ_{n−1}) · Σ Aᵢ|v|uᵢ^⊥|"""
    weights = psi_constant(P.n) * P.areas
    moment = (P.normals * weights[:, None]).T @ P.normals
    floor = float(weights.sum() - np.linalg.eigvalsh(moment)[-1])
    return bodies.measure_body(P.normals, weights, KernelKind.SINE, BodyKind.PSI_BODY, floor, payload=P)


def zonotope_volume(generators: np.ndarray) -> Optional[float]:
    """h(Z, v) = Σ ½|gᵢ·v| のゾノトープ体積 Σ_{|S|=n} |det g_S|（部分集合が多すぎれば None）"""
    generators = np.asarray(generators, dtype=float)
    m, n = generators.shape
    if math.comb(m, n) > ZONOTOPE_SUBSET_LIMIT:
        return None
    subsets = np.array(list(itertools.combinations(range(m), n)))
    return float(np.abs(np.linalg.det(generators[subsets])).sum())


def zonotope_polar_volume(body: SupportBody, generators: np.ndarray) -> Optional[float]:
    """極体の頂点 ±c/h(c)（c はファセット法線）の凸包体積"""
    normals = bodies.zonotope_facet_normals(generators, limit=ZONOTOPE_SUBSET_LIMIT)
    if normals.size == 0:
        return None
    vertices = normals / body.support(normals)[:, None]
    return float(ConvexHull(vertices).volume)


def isoperimetric_ratio(P: Polytope) -> float:
    """S(P)ⁿ/(nⁿκ_n V(P)^{n−1})（≥ 1、球でのみ 1）"""
    n = P.n
    log_value = n * math.log(P.surface_area) - n * math.log(n) - log_unit_ball_volume(n) - (n - 1) * math.log(P.volume)
    return math.exp(log_value)


def ball_polytope(n: int, count: int, seed: int) -> Polytope:
    """球面上の点 ±X の凸包による球の多面体近似"""
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((count, n))
    points /= np.linalg.norm(points, axis=1)[:, None]
    return Polytope.from_vertices(np.concatenate([points, -points]))


def random_symmetric_polytope(n: int, points: int, seed: int) -> Polytope:
    """正規乱数点 X ∪ −X の凸包（中心対称）"""
    rng = np.random.default_rng(seed)
    sample = rng.standard_normal((points, n))
    return Polytope.from_vertices(np.concatenate([sample, -sample]))


@dataclass(frozen=True)
class BodyValues:
    """∂(K)、V(K) と Π/Ψ とその極体の体積（相対誤差付き）"""
    n: int
    surface: float
    volume: float
    projection: float
    polar_projection: float
    psi: float
    polar_psi: float
    relative_errors: Dict[str, float]

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "volume": self.volume,
            "projection": self.projection,
            "polar_projection": self.polar_projection,
            "psi": self.psi,
            "polar_psi": self.polar_psi,
        }


def ball_tomography_values(n: int) -> BodyValues:
    """単位球の閉形式（ΠB、ΨB の支持値は零次 Funk–Hecke 乗数から）"""
    kappa = unit_ball_volume(n)
    projection_support = 0.5 * funk_hecke_multiplier(KernelKind.COSINE, n, 0)
    psi_support = psi_constant(n) * funk_hecke_multiplier(KernelKind.SINE, n, 0)
    return BodyValues(
        n=n,
        surface=n * kappa,
        volume=kappa,
        projection=kappa * projection_support ** n,
        polar_projection=kappa / projection_support ** n,
        psi=kappa * psi_support ** n,
        polar_psi=kappa / psi_support ** n,
        relative_errors={key: CLOSED_FORM_RELATIVE_ERROR for key in ("projection", "polar_projection", "psi", "polar_psi")},
    )


def polytope_tomography_values(P: Polytope, quad: QuadratureRule) -> BodyValues:
    """Π はゾノトープとして解析的に、Ψ は求積で評価"""
    n = P.n
    errors: Dict[str, float] = {}
    projection = projection_body(P)
    generators = P.areas[:, None] * P.normals
    analytic = zonotope_volume(generators)
    if analytic is not None:
        projection_volume = analytic
        errors["projection"] = ANALYTIC_RELATIVE_ERROR
    else:
        estimate = bodies.volume(projection, VolumeMethod.EXP_INTEGRAL, quad=quad)
        projection_volume = estimate.value
        errors["projection"] = estimate.std_error / estimate.value
    analytic_polar = zonotope_polar_volume(projection, generators)
    if analytic_polar is not None:
        polar_projection = analytic_polar
        errors["polar_projection"] = ANALYTIC_RELATIVE_ERROR
    else:
        polar_projection = bodies.polar_volume(projection, quad)
        errors["polar_projection"] = n * quad.accuracy_budget

    psi = psi_body(P)
    psi_estimate = bodies.volume(psi, VolumeMethod.EXP_INTEGRAL, quad=quad)
    errors["psi"] = psi_estimate.std_error / psi_estimate.value
    polar_psi = bodies.polar_volume(psi, quad)
    errors["polar_psi"] = n * quad.accuracy_budget
    return BodyValues(
        n=n,
        surface=P.surface_area,
        volume=P.volume,
        projection=projection_volume,
        polar_projection=polar_projection,
        psi=psi_estimate.value,
        polar_psi=polar_psi,
        relative_errors=errors,
    )


def _bound_constants(n: int) -> Dict[str, float]:
    """不等式の定数（対数領域で計算）"""
    log_k = {m: log_unit_ball_volume(m) for m in (n - 2, n - 1, n)}
    log_gamma_root = math.lgamma(n) / (n - 1)
    e = math.e
    return {
        "projection_polar_lower": math.exp(log_k[n] + n * (math.log(n) + log_k[n] - log_k[n - 1])),
        "projection_polar_upper": math.exp(n * math.log(4 * n) - math.lgamma(n + 1)),
        "projection_lower": float(n) ** (-n),
        "projection_upper": math.exp(n * (log_k[n - 1] - math.log(n) - log_k[n]) + log_k[n]),
        "psi_polar_lower": math.exp(log_k[n] + n * (math.log(n) + log_k[n] - log_k[n - 1])),
        "psi_polar_upper": math.exp(
            (n - 1) * (math.log(n) - log_k[n]) + 3 * n * log_k[n - 1] + log_gamma_root - 2 * n * log_k[n - 2]
        ),
        "psi_lower": math.exp(
            2 * n * log_k[n - 2] + 2 * log_k[n] - 3 * n * log_k[n - 1] - log_gamma_root
            + (n - 1) * (log_k[n] - math.log(n))
        ),
        "psi_upper": math.exp(n * (log_k[n - 1] - math.log(n) - log_k[n]) + log_k[n]),
        "ratio_lower": n ** -0.5,
        "ratio_upper": e ** 1.5,
        "psi_polar_ratio_lower": 1.0 / (e * n),
        "psi_polar_ratio_upper": e ** 1.5 * n ** -0.5,
        "petty_zhang_lower": math.exp(math.lgamma(2 * n + 1) - n * math.log(n) - 2 * math.lgamma(n + 1)),
        "petty_zhang_upper": math.exp(n * (log_k[n] - log_k[n - 1])),
        "reverse_isoperimetric": math.exp(
            1.5 * n * math.log(n) + 0.5 * (n + 1) * math.log(n + 1) - math.lgamma(n + 1)
        ),
    }


def tomography_checks(values: BodyValues, label: str, sigma_multiplier: float = 3.0, tol_scale: float = 1.0) -> List[BoundCheck]:
    """表面等方位置にある凸体の値から全ての両側不等式を検証"""
    n = values.n
    c = _bound_constants(n)
    s_n = values.surface ** n
    v_n1 = values.volume ** (n - 1)
    err = {key: tol_scale * rel for key, rel in values.relative_errors.items()}

    def _check(name, value, lower, upper, relative, provenance):
        return BoundCheck(
            name=f"{label}.{name}",
            value=value,
            lower=lower,
            upper=upper,
            error=abs(value) * relative,
            provenance=provenance,
            sigma_multiplier=sigma_multiplier,
        )

    projection_ratio = values.projection / v_n1
    psi_ratio = values.psi / v_n1
    return [
        _check("polar_projection_times_surface", values.polar_projection * s_n,
               c["projection_polar_lower"], c["projection_polar_upper"], err["polar_projection"],
               "κ_n(nκ_n/κ_{n−1})ⁿ ≤ V(Π*K)∂ⁿ ≤ 4ⁿnⁿ/n!"),
        _check("projection_over_surface", values.projection / s_n,
               c["projection_lower"], c["projection_upper"], err["projection"],
               "1/nⁿ ≤ V(ΠK)/∂ⁿ ≤ (κ_{n−1}/(nκ_n))ⁿκ_n"),
        _check("projection_volume_ratio", projection_ratio ** (1.0 / n),
               c["ratio_lower"], c["ratio_upper"], err["projection"] / n,
               "n^{−1/2} ≤ [V(ΠK)/V(K)^{n−1}]^{1/n} ≤ e^{3/2}"),
        _check("polar_psi_times_surface", values.polar_psi * s_n,
               c["psi_polar_lower"], c["psi_polar_upper"], err["polar_psi"],
               "Ψ* bound in surface isotropic position"),
        _check("psi_over_surface", values.psi / s_n,
               c["psi_lower"], c["psi_upper"], err["psi"],
               "Ψ bound in surface isotropic position"),
        _check("polar_psi_volume_ratio", (values.polar_psi * v_n1) ** (1.0 / n),
               c["psi_polar_ratio_lower"], c["psi_polar_ratio_upper"], err["polar_psi"] / n,
               "(en)^{−1} ≤ [V(Ψ*K)V(K)^{n−1}]^{1/n} ≤ e^{3/2}n^{−1/2}"),
        _check("psi_volume_ratio", psi_ratio ** (1.0 / n),
               c["ratio_lower"], c["ratio_upper"], err["psi"] / n,
               "n^{−1/2} ≤ [V(ΨK)/V(K)^{n−1}]^{1/n} ≤ e^{3/2}"),
        _check("petty_zhang", values.polar_projection * v_n1,
               c["petty_zhang_lower"], c["petty_zhang_upper"], err["polar_projection"],
               "(2n)!/(nⁿ(n!)²) ≤ V(Π*K)V(K)^{n−1} ≤ (κ_n/κ_{n−1})ⁿ"),
        _check("isoperimetric", s_n / (n ** n * unit_ball_volume(n) * v_n1),
               1.0, math.inf, ANALYTIC_RELATIVE_ERROR, "nⁿκ_nV(K)^{n−1} ≤ S(K)ⁿ"),
        _check("reverse_isoperimetric", s_n / v_n1,
               0.0, c["reverse_isoperimetric"], ANALYTIC_RELATIVE_ERROR,
               "∂(K)ⁿ ≤ n^{3n/2}(n+1)^{(n+1)/2}/n!·V(K)^{n−1}"),
    ]


@dataclass(frozen=True)
class TomographyReport:
    values: BodyValues
    position: PositionResult
    checks: List[BoundCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def tomography_suite(
    P: Polytope,
    quad: QuadratureRule,
    label: str = "polytope",
    sigma_multiplier: float = 3.0,
    tol_scale: float = 1.0,
    max_iters: int = 200,
    position_tol: float = 1e-9,
    defect_tolerance: float = 1e-6,
) -> TomographyReport:
    """表面等方位置へ移してから ∂(K), V(ΠK), V(Π*K), V(ΨK), V(Ψ*K), V(K) の不等式を検証"""
    position = minimal_surface_position(P, max_iters=max_iters, tol=position_tol)
    values = polytope_tomography_values(position.polytope, quad)
    checks = tomography_checks(values, label, sigma_multiplier=sigma_multiplier, tol_scale=tol_scale)
    checks.append(
        BoundCheck(
            name=f"{label}.position_defect",
            value=position.defect,
            upper=defect_tolerance,
            provenance="isotropy defect of the normalized surface measure after positioning",
            sigma_multiplier=sigma_multiplier,
        )
    )
    report = TomographyReport(values=values, position=position, checks=checks)
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} トモグラフィ検証 {label}: ∂={values.surface:.6g}, V={values.volume:.6g}, defect={position.defect:.2e}")
    return report


def identity_suite(quad: QuadratureRule, tolerance: float = 1e-6) -> List[BoundCheck]:
    """n=3 の単位球について h(Π₁ΠB, v) の恒等式と断面積分公式の比を評価"""
    if quad.n != 3:
        raise UnsupportedDimensionError(f"identity suite is implemented for n=3 only, got n={quad.n}")
    n = 3
    sine_zero = funk_hecke_multiplier(KernelKind.SINE, n, 0)
    projection_support = 0.5 * funk_hecke_multiplier(KernelKind.COSINE, n, 0)

    # V₁ of the planar section ΠB|v^⊥ is half its perimeter: ½∫_{S¹} h dθ
    circle = 2.0 * math.pi * np.arange(256) / 256
    v = np.array([0.0, 0.0, 1.0])
    in_plane = np.stack([np.cos(circle), np.sin(circle), np.zeros_like(circle)], axis=1)
    lhs_c = 0.5 * float(np.sum(np.full(len(in_plane), projection_support))) * (2.0 * math.pi / len(in_plane))
    rhs_c = unit_ball_volume(n - 2) / (n - 1) * sine_zero

    surface = quad.weights
    lhs_c_quad = 0.5 * float(np.mean(0.5 * np.abs(in_plane @ quad.nodes.T) @ surface)) * 2.0 * math.pi
    dots = quad.nodes @ v
    rhs_c_quad = unit_ball_volume(n - 2) / (n - 1) * float(surface @ np.sqrt(np.clip(1.0 - dots * dots, 0.0, None)))

    lhs_a, _ = integrate.quad(lambda t: math.pi * math.sqrt(max(1.0 - t * t, 0.0)), -1.0, 1.0, epsabs=1e-13)
    rhs_a = sine_zero / (2.0 * (n + 1))
    budget = quad.accuracy_budget * math.pi ** 2

    return [
        BoundCheck.equality("identity_c.lhs", lhs_c, math.pi ** 2, tolerance, "V₁(ΠB|v^⊥) with ΠB = πB"),
        BoundCheck.equality("identity_c.rhs", rhs_c, math.pi ** 2, tolerance, "(κ₁/2)∫|v|u^⊥| dS₂(B, u)"),
        BoundCheck.equality("identity_c.difference", lhs_c - rhs_c, 0.0, tolerance, "h(Π₁ΠB, v) identity"),
        BoundCheck.equality("identity_c.quadrature_lhs", lhs_c_quad, math.pi ** 2, budget, "sphere quadrature of ΠB"),
        BoundCheck.equality("identity_c.quadrature_rhs", rhs_c_quad, math.pi ** 2, budget, "sphere quadrature of the sine transform"),
        BoundCheck.equality("identity_a.lhs", lhs_a, math.pi ** 2 / 2.0, tolerance, "∫ V₁(B∩(v^⊥+tv)) dt by 1-D quadrature"),
        BoundCheck.recorded("identity_a.rhs", rhs_a, "1/(2(n+1)) ∫|v|u^⊥| dS₂(B, u)"),
        BoundCheck.recorded("identity_a.ratio", lhs_a / rhs_a, "section integral / displayed right-hand side"),
    ]
