from typing import Optional


class SineBodyError(ValueError):
    """ライブラリ共通の基底例外"""


class DomainError(SineBodyError):
    """前提条件違反（次元・等方性・偶性など）"""

    def __init__(self, message: str, hint: Optional[str] = None):
        super().__init__(message if hint is None else f"{message} (hint: {hint})")
        self.hint = hint


class ConfigurationError(SineBodyError):
    """解像度・サンプル数・スイート名などの設定エラー"""


class DegenerateBodyError(DomainError):
    """対蹠点や大円部分球面に集中した測度から凸体を作ろうとした"""


class UnsupportedDimensionError(DomainError):
    """その次元では未実装の操作"""


class UnsupportedDensityError(DomainError):
    """逆Brascamp–Liebの内側supを評価できない密度"""


class InputFileError(SineBodyError):
    """CSV入力ファイルの形式エラー（行番号付き）"""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None):
        location = path if line is None else f"{path}:{line}"
        super().__init__(f"{location}: {message}" if location else message)
        self.path = path
        self.line = line
