from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional, Union

from src.domain.entities.polytope import Polytope


class PolytopeRepositoryInterface(ABC):
    """多面体ファイル（ファセット + 任意の頂点ファイル）のリポジトリインターフェース"""

    @abstractmethod
    def load(self, path: Union[str, Path], vertices_path: Optional[Union[str, Path]] = None) -> Polytope:
        """ファセットファイル（と頂点ファイル）から多面体を読み込む"""
        pass

    @abstractmethod
    def save(self, polytope: Polytope, path: Union[str, Path], vertices_path: Optional[Union[str, Path]] = None) -> None:
        """ファセット（と頂点）を書き出す"""
        pass
