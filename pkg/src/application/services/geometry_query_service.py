import logging
from typing import Any, Dict, List, Optional

import numpy as np

from src.domain.entities.support_body import VolumeMethod
from src.domain.exceptions import ConfigurationError, DomainError
from src.domain.repositories.measure_repository import MeasureRepositoryInterface
from src.domain.repositories.polytope_repository import PolytopeRepositoryInterface
from src.domain.services import bodies
from src.domain.services.asymptotics import polar_volume_bounds, volume_bounds
from src.domain.services.measures import evenize, isotropy_defect
from src.domain.services.numerics import build_sphere_quadrature, constants
from src.domain.services.positioning import minimal_surface_position
from src.domain.services.transforms import cosine_transform, sine_transform
from src.domain.value_objects.kernel_kind import KernelKind

logger = logging.getLogger(__name__)


class GeometryQueryService:
    """CLI の単発コマンド（constants / volume / transform / position）用アプリケーションサービス"""

    def __init__(
        self,
        measure_repository: MeasureRepositoryInterface,
        polytope_repository: PolytopeRepositoryInterface,
    ):
        self.measure_repository = measure_repository
        self.polytope_repository = polytope_repository

    def constants_summary(self, n: int) -> Dict[str, Any]:
        """κ_n, α_n, γ_n と体積不等式の端点"""
        summary = constants(n).to_dict()
        summary["polar_volume_bounds"] = list(polar_volume_bounds(n))
        summary["volume_bounds"] = list(volume_bounds(n))
        return summary

    def measure_volume(
        self,
        measure_path: str,
        method: str = VolumeMethod.EXP_INTEGRAL.value,
        kernel: str = KernelKind.SINE.value,
        resolution: int = 48,
        samples: int = 200_000,
        seed: int = 7,
        max_workers: int = 4,
        chunk_size: int = 65536,
    ) -> Dict[str, Any]:
        """測度ファイルから sine / cosine 体を作り、体積と極体体積を推定"""
        volume_method = self._parse_enum(VolumeMethod, method, "method")
        kernel_kind = self._parse_enum(KernelKind, kernel, "kernel")
        measure = self.measure_repository.load(measure_path)
        if not measure.is_even:
            logger.warning("⚠️ 非偶測度のため evenize した測度で凸体を作ります")
            measure = evenize(measure)

        body = bodies.sine_body(measure) if kernel_kind is KernelKind.SINE else bodies.cosine_body(measure)
        quad = build_sphere_quadrature(measure.n, resolution, seed=seed)
        estimate = bodies.volume(
            body,
            volume_method,
            quad=quad,
            samples=samples,
            seed=seed,
            max_workers=max_workers,
            chunk_size=chunk_size,
        )
        polar = bodies.polar_volume(body, quad)
        logger.info(f"📊 V = {estimate.value:.10g} ± {estimate.std_error:.2g}, V* = {polar:.10g}")
        return {
            "n": measure.n,
            "kernel": kernel_kind.value,
            "method": estimate.method.value,
            "volume": estimate.value,
            "std_error": estimate.std_error,
            "polar_volume": polar,
            "polar_std_error": polar * measure.n * quad.accuracy_budget,
            "isotropy_defect": isotropy_defect(measure),
        }

    def measure_transform(
        self,
        measure_path: str,
        direction: List[float],
        kernel: str = KernelKind.SINE.value,
    ) -> Dict[str, Any]:
        """測度ファイルの sine / cosine 変換を1点で評価"""
        kernel_kind = self._parse_enum(KernelKind, kernel, "kernel")
        measure = self.measure_repository.load(measure_path)
        x = np.asarray(direction, dtype=float)
        if x.shape != (measure.n,):
            raise DomainError(f"direction must have {measure.n} coordinates, got {x.size}")
        transform = sine_transform if kernel_kind is KernelKind.SINE else cosine_transform
        value = transform(measure, x)
        return {"n": measure.n, "kernel": kernel_kind.value, "direction": x.tolist(), "value": float(value)}

    def position_polytope(
        self,
        polytope_path: str,
        vertices_path: Optional[str] = None,
        max_iters: int = 200,
        tol: float = 1e-9,
    ) -> Dict[str, Any]:
        """多面体を表面積最小位置へ移す"""
        polytope = self.polytope_repository.load(polytope_path, vertices_path)
        result = minimal_surface_position(polytope, max_iters=max_iters, tol=tol)
        if not result.converged:
            logger.warning(f"⚠️ 位置最適化が {result.iterations} 回で収束しませんでした (defect={result.defect:.2e})")
        summary = result.to_dict()
        summary["initial_surface_area"] = polytope.surface_area
        return summary

    @staticmethod
    def _parse_enum(enum_type, value: str, label: str):
        try:
            return enum_type(value)
        except ValueError as e:
            choices = ", ".join(member.value for member in enum_type)
            raise ConfigurationError(f"unknown {label} '{value}' (choose from {choices})") from e
