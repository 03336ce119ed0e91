"""検証スイート（定数・定理・BL・トモグラフィ・恒等式・推定量）の実行"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
import logging
import math
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.application.dto.report_dto import VerificationReport
from src.application.dto.suite_config_dto import SuiteConfig
from src.application.services.report_builder import ReportBuilder
from src.domain.entities.polytope import Polytope
from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.entities.support_body import SupportBody, VolumeMethod
from src.domain.repositories.measure_repository import MeasureRepositoryInterface
from src.domain.repositories.polytope_repository import PolytopeRepositoryInterface
from src.domain.services import bltheory, bodies
from src.domain.services.asymptotics import (
    asymptotic_ratios,
    cross_measure_polar_interval,
    cross_measure_volume_interval,
    polar_volume_bounds,
    volume_bounds,
)
from src.domain.services.measures import (
    cross_measure,
    evenize,
    lebesgue_measure,
    random_isotropic_measure,
    random_measure_suite,
    simplex_measure,
)
from src.domain.services.numerics import (
    build_sphere_quadrature,
    constants,
    gegenbauer_ratio,
    unit_ball_volume,
    unit_ball_volume_recurrence,
)
from src.domain.services.positioning import minimal_surface_position
from src.domain.services.tomography import (
    ball_polytope,
    ball_tomography_values,
    identity_suite,
    polytope_tomography_values,
    psi_constant,
    random_symmetric_polytope,
    tomography_checks,
    tomography_suite,
)
from src.domain.services.transforms import (
    even_injectivity_diagnostic,
    funk_hecke_multiplier,
    multiplier_action_residual,
)
from src.domain.value_objects.bound_check import BoundCheck
from src.domain.value_objects.kernel_kind import KernelKind
from src.infrastructure.reports.json_report_writer import JsonReportWriter
from src.utils.concurrency import run_chunks

logger = logging.getLogger(__name__)

FUNK_HECKE_DIMENSIONS = range(3, 7)
FUNK_HECKE_DEGREES = range(0, 5)
UNIT_BALL_DIMENSIONS = range(3, 6)
# 予想比較に使う測度数と球面解像度
CONJECTURE_MEASURES = 8
CONJECTURE_RESOLUTION = 16


@dataclass
class SuiteResult:
    checks: List[BoundCheck] = field(default_factory=list)
    tables: Dict[str, Any] = field(default_factory=dict)

    def extend(self, other: "SuiteResult") -> None:
        self.checks.extend(other.checks)
        self.tables.update(other.tables)


class _SineBodyCorpus:
    """ラベル付き測度の sine 体と、その極体体積・体積の遅延評価"""

    def __init__(
        self,
        labels: List[str],
        measures: List[SphericalMeasure],
        quad: QuadratureRule,
        max_workers: int = 1,
    ):
        self.labels = labels
        self.measures = measures
        self.quad = quad
        self.max_workers = max_workers
        # S μ = S(evenize μ) なので非偶測度は evenize してから凸体にする
        self.bodies = [bodies.sine_body(mu if mu.is_even else evenize(mu)) for mu in measures]
        self._polar: Optional[List[bltheory.IntegralEstimate]] = None
        self._volumes: Optional[List[bltheory.IntegralEstimate]] = None

    def polar(self) -> List[bltheory.IntegralEstimate]:
        if self._polar is None:
            n = self.quad.n
            values = [bodies.polar_volume(body, self.quad) for body in self.bodies]
            self._polar = [
                bltheory.IntegralEstimate(value, value * n * self.quad.accuracy_budget, "polar-quadrature")
                for value in values
            ]
        return self._polar

    def volumes(self) -> List[bltheory.IntegralEstimate]:
        if self._volumes is None:
            # 結果は凸体の順
            estimates = run_chunks(
                lambda index: bodies.volume(self.bodies[index], VolumeMethod.EXP_INTEGRAL, quad=self.quad),
                len(self.bodies),
                self.max_workers,
            )
            self._volumes = [
                bltheory.IntegralEstimate(e.value, e.std_error, e.method.value) for e in estimates
            ]
        return self._volumes


class VerificationSuiteService:
    """検証スイートを実行して VerificationReport を返すアプリケーションサービス"""

    def __init__(
        self,
        measure_repository: MeasureRepositoryInterface,
        polytope_repository: PolytopeRepositoryInterface,
        report_writer: Optional[JsonReportWriter] = None,
        report_builder: Optional[ReportBuilder] = None,
    ):
        self.measure_repository = measure_repository
        self.polytope_repository = polytope_repository
        self.report_writer = report_writer
        self.report_builder = report_builder or ReportBuilder()
        self._quadratures: Dict[int, QuadratureRule] = {}
        self._corpora: Dict[Tuple[str, int], _SineBodyCorpus] = {}
        self._input_measure: Optional[SphericalMeasure] = None

    def _suite_handlers(self) -> Dict[str, Callable[[SuiteConfig], SuiteResult]]:
        return {
            "constants": self._constants_suite,
            "thm1": self._polar_volume_suite,
            "thm2": self._volume_suite,
            "thm4-2": self._duality_suite,
            "thm4-4": self._asymptotic_suite,
            "bl": self._brascamp_lieb_suite,
            "tomography": self._tomography_suite,
            "identities": self._identity_suite,
            "funk-hecke": self._funk_hecke_suite,
            "estimators": self._estimator_suite,
        }

    def run_suite(self, config: SuiteConfig) -> VerificationReport:
        """スイートを実行し、config.out が指定されていれば JSON を書き出す"""
        started = time.perf_counter()
        self._quadratures = {}
        self._corpora = {}
        self._input_measure = None

        handlers = self._suite_handlers()
        result = SuiteResult()
        for name in config.suites:
            logger.info(f"🔍 スイート開始: {name}")
            suite_started = time.perf_counter()
            result.extend(handlers[name](config))
            logger.info(f"📊 スイート {name} 完了 ({time.perf_counter() - suite_started:.1f}s)")

        report = self.report_builder.build(
            suite_name=config.suite,
            checks=result.checks,
            tables=result.tables,
            seeds=[config.seed],
            resolutions={f"n{n}": quad.resolution for n, quad in sorted(self._quadratures.items())},
            timing_seconds=time.perf_counter() - started,
        )
        if config.out and self.report_writer is not None:
            self.report_writer.write(report, config.out)
        return report

    # ------------------------------------------------------------------
    # 共通部品

    def _quadrature(self, config: SuiteConfig, n: int) -> QuadratureRule:
        if n not in self._quadratures:
            quad = build_sphere_quadrature(n, config.resolution_for(n), seed=config.seed)
            logger.info(f"📊 求積則 n={n}: nodes={quad.size}, budget={quad.accuracy_budget:.3e}")
            self._quadratures[n] = quad
        return self._quadratures[n]

    def _load_input_measure(self, config: SuiteConfig) -> Optional[SphericalMeasure]:
        if config.measure_path is None:
            return None
        if self._input_measure is None:
            self._input_measure = self.measure_repository.load(config.measure_path)
        return self._input_measure

    def _corpus(self, config: SuiteConfig, n: int, even: bool) -> _SineBodyCorpus:
        key = ("even" if even else "simplex", n)
        if key not in self._corpora:
            measures = random_measure_suite(n, config.measure_count, config.seed, even=even)
            prefix = "m" if even else "s"
            labels = [f"{prefix}{index:03d}" for index in range(len(measures))]
            supplied = self._load_input_measure(config)
            if supplied is not None and supplied.n == n and supplied.is_even == even:
                measures.append(supplied)
                labels.append("input")
            self._corpora[key] = _SineBodyCorpus(labels, measures, self._quadrature(config, n), config.max_workers)
        return self._corpora[key]

    def _lebesgue(self, config: SuiteConfig, n: int) -> _SineBodyCorpus:
        key = ("lebesgue", n)
        if key not in self._corpora:
            measure = lebesgue_measure(n, config.lebesgue_resolution, seed=config.seed)
            self._corpora[key] = _SineBodyCorpus(["lebesgue"], [measure], self._quadrature(config, n), config.max_workers)
        return self._corpora[key]

    @staticmethod
    def _bound(
        config: SuiteConfig,
        name: str,
        value: float,
        lower: float = -math.inf,
        upper: float = math.inf,
        error: float = 0.0,
        provenance: str = "",
    ) -> BoundCheck:
        return BoundCheck(
            name=name,
            value=value,
            lower=lower,
            upper=upper,
            error=config.tol_scale * error,
            provenance=provenance,
            sigma_multiplier=config.sigma_multiplier,
        )

    @staticmethod
    def _relative(config: SuiteConfig, name: str, value: float, target: float, tolerance: str, provenance: str) -> BoundCheck:
        return BoundCheck.equality(name, value, target, config.tolerance(tolerance) * abs(target), provenance)

    # ------------------------------------------------------------------
    # constants

    def _constants_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        c3 = constants(3)
        for name, value, target in (
            ("kappa_3", c3.kappa, 4.0 * math.pi / 3.0),
            ("gamma_3", c3.gamma, 3.0 * math.pi / 4.0),
            ("alpha_3", c3.alpha, 192.0 / math.sqrt(2.0)),
        ):
            result.checks.append(
                self._relative(config, f"constants.{name}", value, target, "constants_relative", "closed form at n=3")
            )

        recurrence = max(
            abs(unit_ball_volume_recurrence(m) - unit_ball_volume(m)) / unit_ball_volume(m) for m in range(1, 51)
        )
        result.checks.append(
            BoundCheck(
                name="constants.kappa_recurrence",
                value=recurrence,
                upper=config.tolerance("recurrence_relative"),
                provenance="κ_m = 2π/m·κ_{m−2} against log-gamma, m ≤ 50",
            )
        )
        gammas = np.array([constants(n).gamma for n in range(3, 51)])
        result.checks.append(
            BoundCheck(
                name="constants.gamma_increasing",
                value=float(np.min(np.diff(gammas))),
                lower=0.0,
                provenance="γ_n increasing for n = 3..50",
            )
        )
        unit_error = max(
            abs(gegenbauer_ratio(n, k, 1.0) - 1.0) for n in range(3, 11) for k in range(0, 21)
        )
        result.checks.append(
            BoundCheck(
                name="constants.gegenbauer_at_one",
                value=unit_error,
                upper=config.tolerance("gegenbauer_unit"),
                provenance="C_k(1)/C_k(1) = 1 for k ≤ 20",
            )
        )
        result.checks.append(
            BoundCheck.equality(
                "constants.gegenbauer_legendre",
                gegenbauer_ratio(3, 2, 0.0),
                -0.5,
                config.tolerance("gegenbauer_unit"),
                "P₂(0) = −1/2",
            )
        )

        table = {}
        for n in config.n_values:
            quad = self._quadrature(config, n)
            c = constants(n)
            table[f"n{n}"] = {**c.to_dict(), "nodes": quad.size, "budget": quad.accuracy_budget}
            result.checks.append(
                self._relative(
                    config, f"constants.quadrature.n{n}.mass", float(quad.weights.sum()), c.sphere_area,
                    "quadrature_mass", "weights sum to nκ_n",
                )
            )
            x = np.random.default_rng([config.seed, n]).standard_normal(n)
            moment = quad.integrate((quad.nodes @ x) ** 2)
            target = c.kappa * float(x @ x)
            result.checks.append(
                self._bound(
                    config, f"constants.quadrature.n{n}.second_moment", moment, target, target,
                    error=quad.accuracy_budget * target / config.sigma_multiplier,
                    provenance="∫(x·u)² du = κ_n|x|²",
                )
            )
            odd = abs(quad.integrate((quad.nodes @ x) ** 3)) / c.sphere_area
            result.checks.append(
                BoundCheck(
                    name=f"constants.quadrature.n{n}.parity",
                    value=odd,
                    upper=config.tolerance("parity") * float(np.abs(x).sum()) ** 3,
                    provenance="odd integrands vanish on an antipodal rule",
                )
            )
            if n == 3:
                v = x / np.linalg.norm(x)
                dots = quad.nodes @ v
                sine = quad.integrate(np.sqrt(np.clip(1.0 - dots * dots, 0.0, None)))
                result.checks.append(
                    self._bound(
                        config, "constants.quadrature.n3.sine_kernel", sine, math.pi ** 2, math.pi ** 2,
                        error=quad.accuracy_budget * math.pi ** 2 / config.sigma_multiplier,
                        provenance="∫√(1−(u·v)²) du = π²",
                    )
                )
        result.tables["constants"] = table
        return result

    # ------------------------------------------------------------------
    # 極体体積・体積の両側評価

    def _polar_volume_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        table = {}
        for n in config.n_values:
            lower, upper = polar_volume_bounds(n)
            corpus = self._corpus(config, n, even=True)
            estimates = corpus.polar()
            for label, estimate in zip(corpus.labels, estimates):
                result.checks.append(
                    self._bound(
                        config, f"thm1.n{n}.{label}", estimate.value, lower, upper, estimate.std_error,
                        "κ_n/γ_nⁿ ≤ V(S_μ*) ≤ κ_nγ_nⁿ/α_n",
                    )
                )
            lebesgue = self._lebesgue(config, n).polar()[0]
            result.checks.append(
                self._relative(
                    config, f"thm1.n{n}.lebesgue_left_bound", lebesgue.value, lower,
                    "lebesgue_relative", "normalized Lebesgue measure attains the left bound",
                )
            )
            values = [e.value for e in estimates]
            table[f"n{n}"] = {"lower": lower, "upper": upper, "min": min(values), "max": max(values), "lebesgue": lebesgue.value}
        result.tables["thm1"] = table
        return result

    def _volume_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        table = {}
        for n in config.n_values:
            lower, upper = volume_bounds(n)
            corpus = self._corpus(config, n, even=True)
            estimates = corpus.volumes()
            for label, estimate in zip(corpus.labels, estimates):
                result.checks.append(
                    self._bound(
                        config, f"thm2.n{n}.{label}", estimate.value, lower, upper, estimate.std_error,
                        "κ_nα_n/γ_nⁿ ≤ V(S_μ) ≤ κ_nγ_nⁿ",
                    )
                )
            lebesgue = self._lebesgue(config, n).volumes()[0]
            result.checks.append(
                self._relative(
                    config, f"thm2.n{n}.lebesgue_right_bound", lebesgue.value, upper,
                    "lebesgue_relative", "normalized Lebesgue measure attains the right bound",
                )
            )
            values = [e.value for e in estimates]
            table[f"n{n}"] = {"lower": lower, "upper": upper, "min": min(values), "max": max(values), "lebesgue": lebesgue.value}
        result.tables["thm2"] = table
        return result

    def _duality_suite(self, config: SuiteConfig) -> SuiteResult:
        """V(S_μ*) ≤ V(S_μ)/α_n（偶測度と simplex ブロックの非偶測度）"""
        result = SuiteResult()
        table = {}
        for n in config.n_values:
            alpha = constants(n).alpha
            ratios = []
            for even in (True, False):
                corpus = self._corpus(config, n, even=even)
                for label, polar, volume in zip(corpus.labels, corpus.polar(), corpus.volumes()):
                    right = volume.value / alpha
                    result.checks.append(
                        self._bound(
                            config, f"thm4-2.n{n}.{label}", polar.value, upper=right,
                            error=math.hypot(polar.std_error, volume.std_error / alpha),
                            provenance="V(S_μ*) ≤ V(S_μ)/α_n",
                        )
                    )
                    ratios.append(right / polar.value)

            lebesgue = self._lebesgue(config, n)
            slack = lebesgue.volumes()[0].value / alpha / lebesgue.polar()[0].value
            oracle = math.exp(2 * n * constants(n).log_gamma - constants(n).log_alpha)
            name = f"thm4-2.n{n}.lebesgue_slack"
            if n == 3:
                result.checks.append(
                    self._relative(config, name, slack, oracle, "lebesgue_relative", "C/A = γ_n^{2n}/α_n for Lebesgue measure")
                )
            else:
                result.checks.append(BoundCheck.recorded(name, slack, f"oracle γ_n^(2n)/α_n = {oracle:.10g}"))
            table[f"n{n}"] = {"min_slack": min(ratios), "max_slack": max(ratios), "lebesgue_slack": slack, "oracle": oracle}
        result.tables["thm4-2"] = table
        return result

    # ------------------------------------------------------------------
    # 漸近比と cross 測度

    def _asymptotic_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        table = asymptotic_ratios(config.nmax)
        last = table.row(config.nmax)
        tolerance = config.tolerance("asymptotic")
        result.checks.append(BoundCheck.equality(f"thm4-4.r1_n{config.nmax}", last.r1, 1.0, tolerance, "α_n/(nⁿγ_nⁿ)(1−1/n)^{−n/2} → 1"))
        result.checks.append(BoundCheck.equality(f"thm4-4.r2_n{config.nmax}", last.r2, 1.0, tolerance, "nⁿγ_nⁿ/α_n·(1−1/n)^{n/2} → 1"))
        reciprocal = max(abs(row.r1 * row.r2 - 1.0) for row in table.rows)
        result.checks.append(
            BoundCheck(
                name="thm4-4.reciprocal",
                value=reciprocal,
                upper=config.tolerance("reciprocal"),
                provenance="r₁r₂ = 1",
            )
        )
        result.checks.append(
            BoundCheck.recorded("thm4-4.monotone_from", float(table.monotone_from or 0), "|r₁(n) − 1| decreasing from here on")
        )

        quad = self._quadrature(config, 3)
        cross_body = bodies.sine_body(cross_measure(3))
        polar_value = bodies.polar_volume(cross_body, quad)
        polar_low, polar_high = cross_measure_polar_interval(3)
        result.checks.append(
            self._bound(
                config, "thm4-4.cross_n3.polar_volume", polar_value, polar_low, polar_high,
                polar_value * 3 * quad.accuracy_budget, "V(S_ν*) for the cross measure",
            )
        )
        volume = bodies.volume(cross_body, VolumeMethod.EXP_INTEGRAL, quad=quad)
        volume_low, volume_high = cross_measure_volume_interval(3)
        result.checks.append(
            self._bound(
                config, "thm4-4.cross_n3.volume", volume.value, volume_low, volume_high,
                volume.std_error, "V(S_ν) for the cross measure",
            )
        )
        # 区間端点の閉形式を引用値（最終桁1単位）と照合
        for name, value, quoted, unit in (
            ("polar_lower", polar_low, 0.2850, 1e-4),
            ("polar_upper", polar_high, 0.4036, 1e-4),
            ("volume_lower", volume_low, 43.4, 0.1),
            ("volume_upper", volume_high, 61.6, 0.1),
        ):
            result.checks.append(BoundCheck.equality(f"thm4-4.interval.{name}", value, quoted, unit, "closed-form endpoint"))

        measures = random_measure_suite(3, min(config.corpus_size, CONJECTURE_MEASURES), config.seed)
        conjecture_quad = build_sphere_quadrature(3, CONJECTURE_RESOLUTION, seed=config.seed)
        comparison = bltheory.cross_measure_conjecture_comparison(measures, cross_measure(3), conjecture_quad)
        result.checks.append(BoundCheck.recorded("thm4-4.conjecture.max_polar_ratio", comparison.max_polar_ratio, "max V(S_μ*)/V(S_ν*)"))
        result.checks.append(BoundCheck.recorded("thm4-4.conjecture.min_volume_ratio", comparison.min_volume_ratio, "min V(S_μ)/V(S_ν)"))
        result.tables["thm4-4"] = {
            "asymptotic": table.to_dict(),
            "cross_n3": {"polar_volume": polar_value, "volume": volume.value},
            "conjecture": {**comparison.to_dict(), "resolution": CONJECTURE_RESOLUTION},
        }
        return result

    # ------------------------------------------------------------------
    # Brascamp–Lieb

    def _bl_instances(self, config: SuiteConfig, n: int) -> Dict[str, Any]:
        return {
            "cross": bltheory.bl_instance_from_measure(cross_measure(n)),
            "simplex": bltheory.bl_instance_from_measure(simplex_measure(n)),
            "mixture": bltheory.bl_instance_from_measure(random_isotropic_measure(n, 2, config.seed)),
        }

    def _brascamp_lieb_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        sampling = dict(max_workers=config.max_workers, chunk_size=config.chunk_size)
        for n in config.n_values:
            for name, inst in self._bl_instances(config, n).items():
                prefix = f"bl.n{n}.{name}"
                gaussians = bltheory.gaussian_densities(inst)
                left = bltheory.bl_left_integral(
                    inst, gaussians, config.samples, config.seed, resolution=config.resolution, **sampling
                )
                result.checks.append(
                    self._bound(config, f"{prefix}.gaussian_bl", left.value, 1.0, 1.0, left.std_error, "identical standard Gaussians give equality in BL")
                )
                reverse = bltheory.rbl_left_integral(inst, gaussians, config.samples, config.seed, **sampling)
                result.checks.append(
                    self._bound(config, f"{prefix}.gaussian_rbl", reverse.value, 1.0, 1.0, reverse.std_error, "identical standard Gaussians give equality in reverse BL")
                )
                strictness = bltheory.gaussian_strictness_check(inst)
                result.checks.append(
                    BoundCheck.flag(f"{prefix}.orthogonal_configuration", strictness.orthogonal_configuration, name == "cross", "directions inside {±b₁…±b_n}")
                )
                if n != 3:
                    continue

                f = bltheory.exp_chain_densities(inst)
                g = bltheory.ball_chain_densities(inst)
                for label, density in (("exp_norm", f[0]), ("ball_indicator", g[0])):
                    result.checks.append(
                        self._relative(
                            config, f"{prefix}.{label}_integral", density.radial_integral(), 1.0,
                            "density_integral", "radial quadrature of the chain density",
                        )
                    )
                bl_value = bltheory.bl_left_integral(
                    inst, f, config.samples, config.seed, chain_mode=True, method="monte-carlo", **sampling
                )
                rbl_value = bltheory.rbl_left_integral(inst, g, config.samples, config.seed, chain_mode=True, **sampling)
                result.checks.append(
                    self._bound(config, f"{prefix}.bl_direction", bl_value.value, upper=bltheory.product_of_integrals(inst, f),
                                error=bl_value.std_error, provenance="∫∏fᵢ^{cᵢ} ≤ ∏(∫fᵢ)^{cᵢ}")
                )
                result.checks.append(
                    self._bound(config, f"{prefix}.rbl_direction", rbl_value.value, lower=bltheory.product_of_integrals(inst, g),
                                error=rbl_value.std_error, provenance="∫sup∏gᵢ^{cᵢ} ≥ ∏(∫gᵢ)^{cᵢ}")
                )
                result.checks.append(
                    self._bound(config, f"{prefix}.kantorovich", bl_value.value, upper=rbl_value.value,
                                error=math.hypot(bl_value.std_error, rbl_value.std_error),
                                provenance="BL side ≤ reverse BL side for unit-integral fᵢ, gᵢ")
                )
        result.extend(self._chain_checks(config))
        return result

    def _chain_checks(self, config: SuiteConfig) -> SuiteResult:
        """n=3 の連鎖 A = B ≤ C（cross、Lebesgue、偶測度コーパス先頭 corpus_size 個）"""
        result = SuiteResult()
        quad = self._quadrature(config, 3)
        measures: List[Tuple[str, SphericalMeasure]] = [
            ("cross", cross_measure(3)),
            ("lebesgue", self._lebesgue(config, 3).measures[0]),
        ]
        corpus = self._corpus(config, 3, even=True)
        measures.extend(list(zip(corpus.labels, corpus.measures))[: config.corpus_size])

        chain_table = {}
        for label, mu in measures:
            report = bltheory.kantorovich_chain_check(
                mu, config.samples, config.seed, quad=quad, sigma_multiplier=config.sigma_multiplier,
                max_workers=config.max_workers, chunk_size=config.chunk_size,
            )
            a, b, c = report.polar_volume, report.bl_side, report.volume_side
            prefix = f"bl.chain.{label}"
            result.checks.append(
                self._bound(config, f"{prefix}.a_equals_b", b.value, a.value, a.value, report.combined_sigma, "V(S_μ*) equals the BL line of the chain")
            )
            result.checks.append(
                BoundCheck(
                    name=f"{prefix}.relative_gap",
                    value=report.relative_gap,
                    upper=config.tolerance("chain_relative"),
                    provenance="|A − B|/A",
                )
            )
            result.checks.append(
                self._bound(config, f"{prefix}.b_le_c", b.value, upper=c.value,
                            error=math.hypot(b.std_error, c.std_error), provenance="BL line ≤ V(S_μ)/α_n")
            )
            result.checks.append(BoundCheck.recorded(f"{prefix}.slack_ratio", report.slack_ratio, "C/A"))
            chain_table[label] = report.to_dict()
        result.tables["bl.chain"] = chain_table
        return result

    # ------------------------------------------------------------------
    # トモグラフィ

    def _tomography_corpus(self, config: SuiteConfig) -> List[Tuple[str, Polytope]]:
        corpus = []
        for index in range(config.corpus_size):
            seed = config.seed * 1009 + index
            kind = index % 3
            if kind == 0:
                polytope = random_symmetric_polytope(3, 8 + index, seed)
            elif kind == 1:
                polytope = ball_polytope(3, 16 + index, seed)
            else:
                rng = np.random.default_rng(seed)
                shear = np.eye(3) + np.triu(0.4 * rng.standard_normal((3, 3)), k=1)
                stretch = np.diag(np.exp(0.4 * rng.standard_normal(3)))
                polytope = Polytope.cube(3).transformed(stretch @ shear)
            corpus.append((f"corpus{index:02d}", polytope))
        return corpus

    def _tomography_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        quad = self._quadrature(config, 3)
        n = 3

        cube_values = polytope_tomography_values(Polytope.cube(n), quad)
        surface_cubed = cube_values.surface ** n
        result.checks.append(
            self._relative(config, "tomography.cube.projection_over_surface", cube_values.projection / surface_cubed,
                           1.0 / 27.0, "cube_analytic", "V(ΠC)/∂(C)³ = 1/27")
        )
        result.checks.append(
            self._relative(config, "tomography.cube.polar_projection_times_surface", cube_values.polar_projection * surface_cubed,
                           288.0, "cube_analytic", "V(Π*C)∂(C)³ = 288")
        )
        result.checks.extend(tomography_checks(cube_values, "tomography.cube", config.sigma_multiplier, config.tol_scale))

        ball_values = ball_tomography_values(n)
        ball_surface_cubed = ball_values.surface ** n
        result.checks.append(
            self._relative(config, "tomography.ball.polar_projection_times_surface", ball_values.polar_projection * ball_surface_cubed,
                           256.0 * math.pi / 3.0, "ball_closed_form", "V(Π*B)∂(B)³ = 256π/3")
        )
        result.checks.append(
            self._relative(config, "tomography.ball.projection_over_surface", ball_values.projection / ball_surface_cubed,
                           math.pi / 48.0, "ball_closed_form", "V(ΠB)/∂(B)³ = π/48")
        )
        nodes = quad.nodes
        projection_support = 0.5 * funk_hecke_multiplier(KernelKind.COSINE, n, 0) * np.linalg.norm(nodes, axis=1)
        psi_support = psi_constant(n) * funk_hecke_multiplier(KernelKind.SINE, n, 0) * np.linalg.norm(nodes, axis=1)
        result.checks.append(
            BoundCheck(
                name="tomography.ball.support_residual",
                value=float(np.max(np.abs(projection_support - psi_support))),
                upper=config.tolerance("ball_support_residual"),
                provenance="h(ΠB, u) = h(ΨB, u) at every quadrature node",
            )
        )
        result.checks.extend(tomography_checks(ball_values, "tomography.ball", config.sigma_multiplier, config.tol_scale))

        result.extend(self._positioning_checks(config))

        corpus = self._tomography_corpus(config)
        if config.polytope_path is not None:
            corpus.append(("input", self.polytope_repository.load(config.polytope_path, config.vertices_path)))
        corpus_table = {}
        for label, polytope in corpus:
            report = tomography_suite(
                polytope,
                self._quadrature(config, polytope.n),
                label=f"tomography.{label}",
                sigma_multiplier=config.sigma_multiplier,
                tol_scale=config.tol_scale,
                max_iters=config.max_iters,
                position_tol=config.tolerance("position_solver"),
                defect_tolerance=config.tolerance("position_defect"),
            )
            result.checks.extend(report.checks)
            corpus_table[label] = {**report.values.to_dict(), **report.position.to_dict()}
        result.tables["tomography"] = {
            "cube": cube_values.to_dict(),
            "ball": ball_values.to_dict(),
            "corpus": corpus_table,
        }
        return result

    def _positioning_checks(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        shear = np.array([[1.0, 0.6, 0.0], [0.0, 1.0, 0.4], [0.0, 0.0, 1.0]])
        sheared = Polytope.cube(3).transformed(shear)
        position = minimal_surface_position(sheared, max_iters=config.max_iters, tol=config.tolerance("position_solver"))
        prefix = "tomography.positioning.sheared_cube"
        result.checks.append(
            BoundCheck(name=f"{prefix}.defect", value=position.defect, upper=config.tolerance("position_defect"),
                       provenance="isotropy defect after positioning")
        )
        result.checks.append(
            BoundCheck(name=f"{prefix}.iterations", value=float(position.iterations), upper=float(config.max_iters),
                       provenance="iteration budget")
        )
        increase = float(np.max(np.diff(position.objective_history))) if len(position.objective_history) > 1 else 0.0
        result.checks.append(
            BoundCheck(name=f"{prefix}.monotone", value=increase, upper=0.0, provenance="surface area never increases")
        )
        result.checks.append(
            self._relative(config, f"{prefix}.minimal_surface", position.polytope.surface_area, 6.0,
                           "position_defect", "∂ of a unit-volume cube is 6")
        )
        result.tables["positioning"] = position.to_dict()
        return result

    # ------------------------------------------------------------------
    # 恒等式・Funk–Hecke・推定量

    def _identity_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        checks = identity_suite(self._quadrature(config, 3), tolerance=config.tolerance("identity"))
        result.checks.extend(replace(check, name=f"identities.{check.name}") for check in checks)
        return result

    def _funk_hecke_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        table: Dict[str, Dict[str, float]] = {}
        for n in FUNK_HECKE_DIMENSIONS:
            row = {}
            for k in FUNK_HECKE_DEGREES:
                odd = funk_hecke_multiplier(KernelKind.SINE, n, 2 * k + 1)
                even = funk_hecke_multiplier(KernelKind.SINE, n, 2 * k)
                row[f"a{2 * k}"] = even
                row[f"a{2 * k + 1}"] = odd
                result.checks.append(
                    BoundCheck(name=f"funk-hecke.n{n}.a{2 * k + 1}", value=abs(odd),
                               upper=config.tolerance("funk_hecke_odd"), provenance="odd multipliers of the sine transform vanish")
                )
                result.checks.append(
                    BoundCheck(name=f"funk-hecke.n{n}.a{2 * k}", value=abs(even),
                               lower=config.tolerance("funk_hecke_even_floor"), provenance="even multipliers of the sine transform are nonzero")
                )
            table[f"n{n}"] = row
        result.checks.append(
            BoundCheck.equality("funk-hecke.n3.a0", funk_hecke_multiplier(KernelKind.SINE, 3, 0), math.pi ** 2,
                                config.tolerance("funk_hecke_zero"), "a₀[SINE] = π² at n=3")
        )

        quad = self._quadrature(config, 3)
        for kernel in (KernelKind.SINE, KernelKind.COSINE):
            for k in range(0, 5):
                residual = multiplier_action_residual(kernel, k, quad)
                result.checks.append(
                    BoundCheck(name=f"funk-hecke.residual.{kernel.value}.k{k}", value=residual,
                               upper=config.tol_scale * quad.accuracy_budget, provenance="T_g Y_k = a_k Y_k on the quadrature nodes")
                )

        cross = cross_measure(3)
        rotation = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        tilt = np.linalg.qr(np.random.default_rng(config.seed).standard_normal((3, 3)))[0]
        for name, other, same in (
            ("identical", cross, True),
            ("axis_permutation", cross.rotated(rotation), True),
            ("rotated", cross.rotated(tilt), False),
        ):
            report = even_injectivity_diagnostic(cross, other, quad)
            result.checks.append(
                BoundCheck.flag(f"funk-hecke.injectivity.{name}", report.consistent_with_injectivity, True,
                                "sine transforms agree exactly when the even measures agree")
            )
            result.checks.append(
                BoundCheck.flag(f"funk-hecke.injectivity.{name}.same_measure",
                                report.measure_distance <= report.measure_tolerance, same, "atom-wise comparison")
            )
        result.tables["funk-hecke"] = table
        return result

    def _estimator_bodies(self) -> List[Tuple[str, SupportBody, Optional[float]]]:
        listed: List[Tuple[str, SupportBody, Optional[float]]] = [
            ("sine_cross_n3", bodies.sine_body(cross_measure(3)), None),
            ("sine_simplex_n3", bodies.sine_body(evenize(simplex_measure(3))), None),
            ("cosine_cross_n3", bodies.cosine_body(cross_measure(3)), 8.0),
        ]
        listed.extend((f"unit_ball_n{n}", bodies.ball(n), unit_ball_volume(n)) for n in UNIT_BALL_DIMENSIONS)
        return listed

    def _estimator_suite(self, config: SuiteConfig) -> SuiteResult:
        result = SuiteResult()
        table = {}
        for label, body, exact in self._estimator_bodies():
            quad = self._quadrature(config, body.n)
            radial = bodies.volume(body, VolumeMethod.EXP_INTEGRAL, quad=quad)
            membership = bodies.volume(
                body, VolumeMethod.MC_MEMBERSHIP, samples=config.samples, seed=config.seed,
                max_workers=config.max_workers, chunk_size=config.chunk_size,
            )
            prefix = f"estimators.{label}"
            agreement = config.tolerance("estimator_agreement") * membership.value
            result.checks.append(
                self._bound(config, f"{prefix}.agreement", radial.value, membership.value - agreement, membership.value + agreement,
                            math.hypot(radial.std_error, membership.std_error), "radial quadrature vs MC membership")
            )
            if exact is not None:
                relative = config.tolerance("unit_ball_volume_relative")
                for method, estimate in (("radial", radial), ("membership", membership)):
                    result.checks.append(
                        self._bound(config, f"{prefix}.{method}_exact", estimate.value,
                                    exact * (1.0 - relative), exact * (1.0 + relative), estimate.std_error,
                                    f"closed-form volume {exact:.10g}")
                    )
            gap = bodies.mean_width_functional(body, quad) - (radial.value / constants(body.n).kappa) ** (1.0 / body.n)
            gap_error = radial.std_error / radial.value / body.n + quad.accuracy_budget
            if body.is_ball():
                result.checks.append(
                    self._bound(config, f"{prefix}.urysohn_gap", gap, 0.0, 0.0, gap_error, "equality in Urysohn for balls")
                )
            else:
                result.checks.append(
                    self._bound(config, f"{prefix}.urysohn_gap", gap, lower=0.0, error=gap_error,
                                provenance="(V/κ_n)^{1/n} ≤ mean width functional")
                )
            table[label] = {
                "radial": radial.value,
                "radial_error": radial.std_error,
                "membership": membership.value,
                "membership_error": membership.std_error,
                "urysohn_gap": gap,
            }
        result.tables["estimators"] = table
        return result
