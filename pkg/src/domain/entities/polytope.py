from __future__ import annotations

from dataclasses import dataclass
import itertools
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.exceptions import DegenerateBodyError, DomainError

MINKOWSKI_TOLERANCE = 1e-9
NORMAL_MERGE_DECIMALS = 9


@dataclass(frozen=True, eq=False)
class Polytope:
    """ファセット法線と面積で与えられる凸多面体エンティティ

    offsets はファセットの支持値 h(P, uᵢ)（原点が内部にあるとき正）。
    offsets か vertices があれば体積を計算できる。
    """
    normals: np.ndarray
    areas: np.ndarray
    vertices: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None

    def __post_init__(self):
        normals = np.array(self.normals, dtype=float)
        areas = np.array(self.areas, dtype=float)
        if normals.ndim != 2 or normals.shape[0] == 0:
            raise DomainError(f"normals must be a non-empty (m, n) array, got {normals.shape}")
        if areas.shape != (normals.shape[0],):
            raise DomainError("exactly one area per facet normal is required")
        if np.any(~np.isfinite(areas)) or np.any(areas <= 0.0):
            raise DomainError("facet areas must be positive")
        norms = np.linalg.norm(normals, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise DomainError("facet normals must be unit vectors")
        normals = normals / norms[:, None]
        surface = float(areas.sum())
        closure = float(np.linalg.norm(areas @ normals))
        if closure >= MINKOWSKI_TOLERANCE * surface:
            raise DomainError(
                f"facet data violates the Minkowski condition: |Σ Aᵢuᵢ| = {closure:.3e}",
                hint="normals and areas must close up",
            )
        if np.linalg.matrix_rank(normals, tol=1e-10) < normals.shape[1]:
            raise DegenerateBodyError("facet normals do not span the space")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "areas", areas)
        if self.vertices is not None:
            object.__setattr__(self, "vertices", np.array(self.vertices, dtype=float))
        if self.offsets is not None:
            offsets = np.array(self.offsets, dtype=float)
            if offsets.shape != areas.shape:
                raise DomainError("exactly one offset per facet is required")
            object.__setattr__(self, "offsets", offsets)

    @property
    def n(self) -> int:
        return int(self.normals.shape[1])

    @property
    def facet_count(self) -> int:
        return int(self.normals.shape[0])

    @property
    def surface_area(self) -> float:
        return float(self.areas.sum())

    @property
    def has_volume(self) -> bool:
        return self.offsets is not None or self.vertices is not None

    @property
    def volume(self) -> float:
        """V(P) = (1/n) Σ h(P, uᵢ)Aᵢ、なければ頂点の凸包体積"""
        if self.offsets is not None:
            return float(self.offsets @ self.areas) / self.n
        if self.vertices is not None:
            return float(ConvexHull(self.vertices).volume)
        raise DomainError("polytope volume is unknown", hint="supply vertices for this polytope")

    def surface_measure(self) -> SphericalMeasure:
        """正規化表面積測度 (n/S)·S_{n−1}(P, ·)（質量 n）"""
        return SphericalMeasure.from_atoms(self.normals, self.n * self.areas / self.surface_area)

    def minkowski_defect(self) -> float:
        """|Σ Aᵢuᵢ| / 表面積"""
        return float(np.linalg.norm(self.areas @ self.normals)) / self.surface_area

    def transformed(self, phi: np.ndarray) -> "Polytope":
        """線形写像 φ による像 φP（法線 → φ^{−T}u/|·|、面積 → |det φ|·A·|φ^{−T}u|）"""
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (self.n, self.n):
            raise DomainError(f"phi must be {self.n}x{self.n}")
        determinant = float(np.linalg.det(phi))
        if abs(determinant) < 1e-14:
            raise DegenerateBodyError("phi must be invertible")
        mapped = self.normals @ np.linalg.inv(phi)
        lengths = np.linalg.norm(mapped, axis=1)
        vertices = None if self.vertices is None else self.vertices @ phi.T
        offsets = None if self.offsets is None else self.offsets / lengths
        return Polytope(
            normals=mapped / lengths[:, None],
            areas=abs(determinant) * self.areas * lengths,
            vertices=vertices,
            offsets=offsets,
        )

    @classmethod
    def cube(cls, n: int, side: float = 1.0) -> "Polytope":
        """原点中心の立方体 [−side/2, side/2]^n"""
        if n < 2:
            raise DomainError(f"dimension must be >= 2, got {n}")
        identity = np.eye(n)
        normals = np.concatenate([identity, -identity])
        areas = np.full(2 * n, side ** (n - 1))
        vertices = 0.5 * side * np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
        return cls(normals=normals, areas=areas, vertices=vertices, offsets=np.full(2 * n, 0.5 * side))

    @classmethod
    def from_vertices(cls, points: np.ndarray) -> "Polytope":
        """点集合の凸包から多面体を構築（同一超平面上の単体はまとめる）"""
        points = np.asarray(points, dtype=float)
        hull = ConvexHull(points)
        n = points.shape[1]
        grouped: Dict[Tuple[float, ...], List[float]] = {}
        for simplex, equation in zip(hull.simplices, hull.equations):
            corners = points[simplex]
            edges = corners[1:] - corners[0]
            gram = edges @ edges.T
            area = math.sqrt(max(float(np.linalg.det(gram)), 0.0)) / math.factorial(n - 1)
            key = tuple(np.round(equation[:-1], NORMAL_MERGE_DECIMALS))
            entry = grouped.setdefault(key, [0.0, -float(equation[-1]), *equation[:-1]])
            entry[0] += area
        rows = np.array([entry for entry in grouped.values() if entry[0] > 0.0])
        normals = rows[:, 2:]
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        return cls(
            normals=normals,
            areas=rows[:, 0],
            vertices=points[hull.vertices],
            offsets=rows[:, 1],
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "facets": self.facet_count,
            "surface_area": self.surface_area,
            "minkowski_defect": self.minkowski_defect(),
        }
