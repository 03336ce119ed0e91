from dataclasses import dataclass
import math


@dataclass(frozen=True)
class BoundCheck:
    """lower − k·error ≤ value ≤ upper + k·error 形式の数値検証1件"""
    name: str
    value: float
    lower: float = -math.inf
    upper: float = math.inf
    error: float = 0.0
    provenance: str = ""
    asserted: bool = True
    sigma_multiplier: float = 3.0

    @property
    def passed(self) -> bool:
        if not self.asserted:
            return True
        if not math.isfinite(self.value):
            return False
        slack = self.sigma_multiplier * self.error
        return self.lower - slack <= self.value <= self.upper + slack

    @classmethod
    def equality(
        cls,
        name: str,
        value: float,
        target: float,
        tolerance: float,
        provenance: str = "",
    ) -> "BoundCheck":
        """|value − target| ≤ tolerance（tolerance は絶対値）"""
        return cls(
            name=name,
            value=value,
            lower=target - tolerance,
            upper=target + tolerance,
            error=0.0,
            provenance=provenance,
        )

    @classmethod
    def recorded(cls, name: str, value: float, provenance: str = "") -> "BoundCheck":
        """検証せず記録のみ"""
        return cls(name=name, value=value, provenance=provenance, asserted=False)

    @classmethod
    def flag(cls, name: str, observed: bool, expected: bool = True, provenance: str = "") -> "BoundCheck":
        """真偽値の一致（1.0/0.0 として記録）"""
        target = 1.0 if expected else 0.0
        return cls.equality(name, 1.0 if observed else 0.0, target, 0.0, provenance)
