import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from geowl.models.point_cloud import Quantizer


class ModelKind(enum.Enum):
    C = "c"
    D = "d"
    GEONGNN = "geongnn"
    GEONGNN_C = "geongnn-c"
    DIMENET_EDGE = "dimenet-edge"
    TWOFWL_GEO = "2fwl"

    @classmethod
    def parse(cls, value: str) -> "ModelKind":
        normalized = value.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == normalized or member.name.lower().replace("_", "-") == normalized:
                return member
        raise ValueError(f"未知模型: {value}")


class Verdict(enum.Enum):
    DISTINGUISHED = "distinguished"
    NOT_DISTINGUISHED = "not_distinguished"


def _dense_partition(values) -> Tuple[int, ...]:
    """按首次出现顺序把颜色重编号为 0..K-1, 便于划分比较"""
    mapping: Dict[int, int] = {}
    dense = []
    for value in values:
        if value not in mapping:
            mapping[value] = len(mapping)
        dense.append(mapping[value])
    return tuple(dense)


@dataclass(frozen=True)
class Coloring:
    """节点颜色, 颜色 id 是编码字节的 64 位摘要"""

    colors: Tuple[int, ...]
    round: int = 0

    @classmethod
    def uniform(cls, n: int) -> "Coloring":
        return cls(tuple([0] * n), 0)

    @property
    def n(self) -> int:
        return len(self.colors)

    def partition(self) -> Tuple[int, ...]:
        return _dense_partition(self.colors)

    @property
    def num_classes(self) -> int:
        return len(set(self.colors))

    def class_sizes(self) -> Tuple[int, ...]:
        return tuple(sorted(Counter(self.colors).values()))

    def classes(self) -> Dict[int, List[int]]:
        members: Dict[int, List[int]] = {}
        for index, color in enumerate(self.colors):
            members.setdefault(color, []).append(index)
        return members


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    """有序节点对 (含对角线) 的颜色矩阵"""

    colors: np.ndarray
    round: int = 0

    @property
    def n(self) -> int:
        return int(self.colors.shape[0])

    def partition(self) -> Tuple[int, ...]:
        return _dense_partition(int(value) for value in self.colors.ravel())

    @property
    def num_classes(self) -> int:
        return len(np.unique(self.colors))


@dataclass(frozen=True)
class Fingerprint:
    """
    点云在某个模型下的 128 位规范摘要
    只有 digest 与 model 参与相等比较, 其余字段是溯源信息
    """

    digest: str
    model: ModelKind
    rounds_to_stable: int = field(default=0, compare=False)
    class_histogram: Tuple[int, ...] = field(default=(), compare=False)
    quantizer: Quantizer = field(default_factory=Quantizer, compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "digest": self.digest,
            "model": self.model.value,
            "rounds_to_stable": self.rounds_to_stable,
            "class_histogram": list(self.class_histogram),
            "decimals": self.quantizer.decimals,
        }


@dataclass(frozen=True)
class RefineConfig:
    n_in: int = 5
    n_out: int = 1
    r_sub: float = math.inf
    r_cutoff: float = math.inf
    max_iters: Optional[int] = None
    quantizer: Quantizer = field(default_factory=Quantizer)
    threads: int = 1

    def __post_init__(self) -> None:
        if self.n_in < 1:
            raise ValueError("n_in 必须 ≥ 1")
        if self.n_out < 0:
            raise ValueError("n_out 必须 ≥ 0")
        if not (self.r_sub > 0 and self.r_cutoff > 0):
            raise ValueError("r_sub 与 r_cutoff 必须为正数或无穷大")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters 必须 ≥ 1")
        if self.threads < 1:
            raise ValueError("threads 必须 ≥ 1")

    def node_cap(self, n: int) -> int:
        return self.max_iters if self.max_iters is not None else 2 * n + 4

    def edge_cap(self, n: int) -> int:
        return self.max_iters if self.max_iters is not None else 2 * n + 6
