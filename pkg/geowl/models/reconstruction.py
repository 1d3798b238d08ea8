from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from geowl.models.point_cloud import SymmetryGroup


@dataclass(frozen=True, eq=False)
class TriangularEncoding:
    """每个节点到两个锚点的距离, 外加锚点间距"""

    anchor_pair: Tuple[np.ndarray, np.ndarray]
    anchor_gap: float
    per_node: np.ndarray  # (n, 2): (d_{i,c1}, d_{i,c2})
    labels: Optional[Tuple[int, ...]] = None

    @property
    def n(self) -> int:
        return int(self.per_node.shape[0])


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    coords: np.ndarray
    group: SymmetryGroup
    residual_rmsd: Optional[float] = None
    planar: bool = False
    max_distance_error: float = field(default=0.0)

    def to_dict(self) -> dict:
        return {
            "coords": [[float(v) for v in row] for row in self.coords],
            "group": self.group.value,
            "residual_rmsd": self.residual_rmsd,
            "planar": self.planar,
            "max_distance_error": self.max_distance_error,
        }
