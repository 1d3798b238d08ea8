from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from geowl.models.refinement import Coloring


@dataclass(frozen=True)
class MassFunction:
    """颜色 id → 实数权重, 未列出的颜色权重为 default"""

    weights: Mapping[int, float]
    default: float = 0.0

    @classmethod
    def uniform(cls) -> "MassFunction":
        return cls({}, 1.0)

    @classmethod
    def indicator(cls, color: int) -> "MassFunction":
        return cls({color: 1.0}, 0.0)

    def mass_of(self, color: int) -> float:
        return float(self.weights.get(color, self.default))

    def node_masses(self, coloring: Coloring) -> List[float]:
        return [self.mass_of(color) for color in coloring.colors]


@dataclass(frozen=True)
class SymmetryReport:
    c_symmetric: bool
    d_symmetric: bool
    k_classes_c: int
    k_classes_d: int
    c_deviation: float
    d_deviation: float
    decimals: int
    eps: float

    @property
    def max_center_deviation(self) -> float:
        return max(self.c_deviation, self.d_deviation)

    @property
    def tolerances(self) -> Tuple[int, float]:
        return self.decimals, self.eps

    def to_dict(self) -> Dict[str, object]:
        return {
            "c_symmetric": self.c_symmetric,
            "d_symmetric": self.d_symmetric,
            "k_classes_c": self.k_classes_c,
            "k_classes_d": self.k_classes_d,
            "c_deviation": self.c_deviation,
            "d_deviation": self.d_deviation,
            "max_center_deviation": self.max_center_deviation,
            "tolerances": {"r": self.decimals, "eps": self.eps},
        }


@dataclass(frozen=True)
class ScanRow:
    eps: float
    proportion_c: float
    proportion_d: float


@dataclass(frozen=True)
class ScanTable:
    decimals: int
    rows: Tuple[ScanRow, ...]
    n_total: int
    n_skipped: int = 0
    skipped_indices: Tuple[int, ...] = field(default=())

    def to_dict(self) -> Dict[str, object]:
        return {
            "decimals": self.decimals,
            "n_total": self.n_total,
            "n_skipped": self.n_skipped,
            "skipped_indices": list(self.skipped_indices),
            "rows": [
                {"eps": row.eps, "proportion_c": row.proportion_c, "proportion_d": row.proportion_d}
                for row in self.rows
            ],
        }
