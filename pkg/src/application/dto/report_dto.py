from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field

REPORT_SCHEMA_VERSION = "1"


class CheckEntry(BaseModel):
    """検証項目1件のDTO"""
    model_config = ConfigDict(ser_json_inf_nan="strings")

    name: str = Field(..., description="検証項目名（suite.check 形式）")
    computed_value: float = Field(..., description="計算値")
    lower_bound: float = Field(..., description="下界（なければ -Infinity）")
    upper_bound: float = Field(..., description="上界（なければ Infinity）")
    error_bar: float = Field(..., description="許容幅 = sigma倍率 × 推定誤差")
    passed: bool = Field(..., description="合否")
    asserted: bool = Field(True, description="False なら記録のみで合否に影響しない")
    provenance: str = Field("", description="不等式・恒等式の出典メモ")


class VerificationReport(BaseModel):
    """検証スイートの JSON レポートDTO（schema_version で固定）"""
    model_config = ConfigDict(ser_json_inf_nan="strings")

    schema_version: str = Field(REPORT_SCHEMA_VERSION, description="レポートスキーマのバージョン")
    suite_name: str = Field(..., description="実行したスイート名")
    passed: bool = Field(..., description="全項目が合格なら True")
    checks: List[CheckEntry] = Field(default_factory=list, description="名前順に並んだ検証項目")
    tables: Dict[str, Any] = Field(default_factory=dict, description="記録用の表（漸近比・連鎖比など）")
    seeds: List[int] = Field(default_factory=list, description="使用した乱数シード")
    resolutions: Dict[str, int] = Field(default_factory=dict, description="次元ごとの求積解像度")
    timing_seconds: float = Field(0.0, description="実行時間（秒）")

    @classmethod
    def build(
        cls,
        suite_name: str,
        checks: List[CheckEntry],
        tables: Dict[str, Any],
        seeds: List[int],
        resolutions: Dict[str, int],
        timing_seconds: float,
    ) -> "VerificationReport":
        ordered = sorted(checks, key=lambda entry: entry.name)
        return cls(
            suite_name=suite_name,
            passed=all(entry.passed for entry in ordered),
            checks=ordered,
            tables=tables,
            seeds=sorted(set(seeds)),
            resolutions=resolutions,
            timing_seconds=timing_seconds,
        )

    @property
    def failed_checks(self) -> List[CheckEntry]:
        return [entry for entry in self.checks if not entry.passed]
