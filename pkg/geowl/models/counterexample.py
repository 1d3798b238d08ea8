import enum
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from geowl.models.point_cloud import PointCloud
from geowl.models.refinement import ModelKind


class PolyhedronKind(enum.Enum):
    TETRAHEDRON = "tetrahedron"
    CUBE = "cube"
    OCTAHEDRON = "octahedron"
    DODECAHEDRON = "dodecahedron"
    ICOSAHEDRON = "icosahedron"


class AugmentMode(enum.Enum):
    ORIGIN = "origin"
    COMPLEMENTARY = "complementary"
    ALL = "all"


@dataclass(frozen=True)
class PairProvenance:
    """反例对的来源: 多面体种类, 顶点选择, 壳层比例, 增广方式"""

    kinds: Tuple[str, ...]
    selection_left: Tuple[int, ...] = ()
    selection_right: Tuple[int, ...] = ()
    scale_ratios: Tuple[float, ...] = (1.0,)
    augmentation: Optional[str] = None
    copies: int = 1
    shell_ratio: float = 0.5

    def to_dict(self) -> Dict[str, object]:
        return {
            "kinds": list(self.kinds),
            "selection_left": list(self.selection_left),
            "selection_right": list(self.selection_right),
            "scale_ratios": list(self.scale_ratios),
            "augmentation": self.augmentation,
            "copies": self.copies,
            "shell_ratio": self.shell_ratio,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "PairProvenance":
        return cls(
            kinds=tuple(data.get("kinds", ())),
            selection_left=tuple(int(v) for v in data.get("selection_left", ())),
            selection_right=tuple(int(v) for v in data.get("selection_right", ())),
            scale_ratios=tuple(float(v) for v in data.get("scale_ratios", (1.0,))),
            augmentation=data.get("augmentation"),
            copies=int(data.get("copies", 1)),
            shell_ratio=float(data.get("shell_ratio", 0.5)),
        )


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    p1: PointCloud
    p2: PointCloud
    provenance: PairProvenance
    verified_noniso: Optional[bool] = None
    verified_blind: Dict[ModelKind, bool] = field(default_factory=dict)

    @property
    def is_valid(self) -> bool:
        return bool(self.verified_noniso) and self.verified_blind.get(ModelKind.D, False)

    def with_certificates(
        self, verified_noniso: bool, verified_blind: Dict[ModelKind, bool]
    ) -> "CounterexamplePair":
        return replace(self, verified_noniso=verified_noniso, verified_blind=dict(verified_blind))


@dataclass(frozen=True)
class SearchResult:
    pairs: List[CounterexamplePair]
    budget_exhausted: bool
    subsets_enumerated: int
    orbits: int
    fingerprint_groups: int = 0
