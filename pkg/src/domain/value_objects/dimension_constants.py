from dataclasses import dataclass
import math

from src.domain.exceptions import DomainError


@dataclass(frozen=True)
class DimensionConstants:
    """次元nに依存する定数 κ_n, α_n, γ_n のバリューオブジェクト

    log_* は大きなnでのオーバーフロー回避用。kappa/alpha/gamma は
    表現できない場合 0.0 / inf になり得るが、log_* は常に有限。
    """
    n: int
    kappa: float
    alpha: float
    gamma: float
    log_kappa: float
    log_alpha: float
    log_gamma: float

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"dimension must be >= 3, got {self.n}")
        for name in ("log_kappa", "log_alpha", "log_gamma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} is not finite for n={self.n}")
        if self.log_gamma <= 0.0:
            raise DomainError(f"gamma_n must exceed 1, got log_gamma={self.log_gamma}")

    @property
    def sphere_area(self) -> float:
        """単位球面の表面積 nκ_n"""
        return self.n * self.kappa

    def to_dict(self) -> dict:
        """辞書形式で返す（レポート・CLI出力用）"""
        return {
            "n": self.n,
            "kappa": self.kappa,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "log_kappa": self.log_kappa,
            "log_alpha": self.log_alpha,
            "log_gamma": self.log_gamma,
        }
