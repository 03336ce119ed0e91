from abc import ABC, abstractmethod
from pathlib import Path
from typing import Union

from src.domain.entities.spherical_measure import SphericalMeasure


class MeasureRepositoryInterface(ABC):
    """球面測度ファイルのリポジトリインターフェース"""

    @abstractmethod
    def load(self, path: Union[str, Path]) -> SphericalMeasure:
        """ファイルから測度を読み込む"""
        pass

    @abstractmethod
    def save(self, measure: SphericalMeasure, path: Union[str, Path]) -> None:
        """測度をファイルへ書き出す"""
        pass
