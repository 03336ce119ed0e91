import json
from typing import Annotated, Any, List

from pydantic import field_validator
from pydantic_settings import BaseSettings, NoDecode, SettingsConfigDict


class Settings(BaseSettings):
    log_level: str = "INFO"
    resolution: int = 48
    high_dim_resolution: int = 32
    lebesgue_resolution: int = 16
    samples: int = 200_000
    seed: int = 7
    suite_measures: int = 100
    corpus_size: int = 20
    n_values: Annotated[List[int], NoDecode] = [3, 4, 5]
    nmax: int = 200
    tol_scale: float = 1.0
    sigma_multiplier: float = 3.0
    chain_relative_tolerance: float = 0.02
    max_workers: int = 4
    mc_chunk_size: int = 65536
    out: str = "report.json"

    model_config = SettingsConfigDict(
        env_prefix="SINEBODY_",
        env_file=".env",
        populate_by_name=True,
        extra="ignore",
    )

    @field_validator("n_values", mode="before")
    @classmethod
    def _parse_n_values(cls, raw: Any) -> Any:
        """JSON 配列 "[3,4,5]" とカンマ区切り "3,4,5" の両方を受け付ける"""
        if not isinstance(raw, str):
            return raw
        stripped = raw.strip()
        if not stripped:
            return []
        try:
            parsed = json.loads(stripped)
            if isinstance(parsed, list):
                return parsed
            if isinstance(parsed, int):
                return [parsed]
        except json.JSONDecodeError:
            pass
        return [item.strip() for item in stripped.split(",") if item.strip()]
