from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

SUITE_NAMES = (
    "constants",
    "thm1",
    "thm2",
    "thm4-2",
    "thm4-4",
    "bl",
    "tomography",
    "identities",
    "funk-hecke",
    "estimators",
)


class ToleranceConfig(BaseModel):
    """スイートで使う許容誤差（すべて tol_scale 倍して使う）"""
    constants_relative: float = Field(1e-9, description="γ₃, α₃ の相対誤差")
    recurrence_relative: float = Field(1e-12, description="κ_n 漸化式と log-gamma の一致")
    gegenbauer_unit: float = Field(1e-12, description="C_k(1)/C_k(1) = 1 の誤差")
    quadrature_mass: float = Field(1e-9, description="求積重みの総和 nκ_n の相対誤差")
    parity: float = Field(1e-12, description="奇関数の求積値（表面積比）")
    lebesgue_relative: float = Field(0.01, description="Lebesgue 測度で端点を再現する相対誤差")
    asymptotic: float = Field(0.05, description="|r(n_max) − 1|")
    reciprocal: float = Field(1e-12, description="|r₁r₂ − 1|")
    funk_hecke_odd: float = Field(1e-10, description="|a_{2k+1}[SINE]| の上界")
    funk_hecke_even_floor: float = Field(1e-6, description="|a_{2k}[SINE]| の下界")
    funk_hecke_zero: float = Field(1e-9, description="a₀(n=3) = π² の誤差")
    cube_analytic: float = Field(1e-9, description="立方体の解析値の相対誤差")
    ball_closed_form: float = Field(1e-4, description="球の閉形式の相対誤差")
    ball_support_residual: float = Field(1e-8, description="ΠB = ΨB の支持関数残差")
    position_defect: float = Field(1e-6, description="表面等方位置の欠損")
    position_solver: float = Field(1e-9, description="位置最適化の収束判定")
    identity: float = Field(1e-6, description="n=3 恒等式の誤差")
    unit_ball_volume_relative: float = Field(0.01, description="閉形式体積（単位球・立方体）推定の相対誤差")
    estimator_agreement: float = Field(0.01, description="動径求積と MC 所属判定の相対差")
    chain_relative: float = Field(0.02, description="連鎖 |A − B|/A の上界")
    density_integral: float = Field(1e-6, description="連鎖密度の放射状求積による ∫ = 1 の誤差")


class SuiteConfig(BaseModel):
    """検証スイートの実行設定（Settings と CLI フラグから組み立てる）"""
    suite: str = Field(..., description="スイート名または all")
    n_values: List[int] = Field(default_factory=lambda: [3, 4, 5], description="検証する次元")
    nmax: int = Field(200, description="漸近比の最大次元")
    resolution: int = Field(48, description="n=3 の求積解像度")
    high_dim_resolution: int = Field(32, description="n≥4 の求積解像度")
    lebesgue_resolution: int = Field(16, description="Lebesgue 測度を近似する原子集合の解像度")
    samples: int = Field(200_000, description="モンテカルロのサンプル数")
    seed: int = Field(7, description="乱数シード")
    measure_count: int = Field(100, description="ランダム等方測度の個数")
    corpus_size: int = Field(20, description="トモグラフィ用多面体の個数")
    tol_scale: float = Field(1.0, description="全許容誤差の倍率")
    sigma_multiplier: float = Field(3.0, description="誤差棒の σ 倍率")
    max_workers: int = Field(4, description="サンプル chunk の並列数")
    chunk_size: int = Field(65536, description="1 chunk のサンプル数")
    max_iters: int = Field(200, description="位置最適化の最大反復数")
    measure_path: Optional[str] = Field(None, description="測度CSV")
    polytope_path: Optional[str] = Field(None, description="多面体CSV")
    vertices_path: Optional[str] = Field(None, description="多面体の頂点CSV")
    out: Optional[str] = Field("report.json", description="JSON レポートの出力先")
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)

    @field_validator("suite")
    @classmethod
    def _known_suite(cls, value: str) -> str:
        if value != "all" and value not in SUITE_NAMES:
            raise ValueError(f"unknown suite '{value}' (choose from {', '.join(SUITE_NAMES)}, all)")
        return value

    @field_validator("n_values")
    @classmethod
    def _valid_dimensions(cls, value: List[int]) -> List[int]:
        if not value or any(n < 3 for n in value):
            raise ValueError("n_values must be a non-empty list of dimensions >= 3")
        return sorted(set(value))

    @field_validator("samples", "measure_count", "corpus_size", "max_workers", "chunk_size", "max_iters")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    def tolerance(self, name: str) -> float:
        """tol_scale を掛けた許容誤差"""
        return self.tol_scale * getattr(self.tolerances, name)

    def resolution_for(self, n: int) -> int:
        return self.resolution if n == 3 else self.high_dim_resolution

    @property
    def suites(self) -> List[str]:
        return list(SUITE_NAMES) if self.suite == "all" else [self.suite]
