import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from geowl.errors import InvalidCloud

MAX_DECIMALS = 12


class SymmetryGroup(enum.Enum):
    E3 = "e3"  # 含反射
    SE3 = "se3"  # 仅旋转+平移


@dataclass(frozen=True, eq=False)
class PointCloud:
    """n×3 坐标加可选的整数节点标签, 所有编码器的输入"""

    coords: np.ndarray
    labels: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        coords = np.array(self.coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 3:
            raise InvalidCloud(f"坐标必须是 n×3 数组, 实际形状 {coords.shape}")
        if coords.shape[0] < 2:
            raise InvalidCloud("点云至少需要 2 个节点", n=int(coords.shape[0]))
        if not np.all(np.isfinite(coords)):
            raise InvalidCloud("坐标包含非有限值")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

        if self.labels is not None:
            labels = tuple(int(label) for label in self.labels)
            if len(labels) != coords.shape[0]:
                raise InvalidCloud(
                    f"标签数量 {len(labels)} 与节点数 {coords.shape[0]} 不一致"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.coords.shape[0])

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def label_of(self, index: int) -> int:
        """无标签点云统一视为标签 0"""
        return 0 if self.labels is None else self.labels[index]

    def label_array(self) -> np.ndarray:
        if self.labels is None:
            return np.zeros(self.n, dtype=np.int64)
        return np.asarray(self.labels, dtype=np.int64)

    def with_coords(self, coords: np.ndarray) -> "PointCloud":
        return PointCloud(coords, self.labels)

    def subset(self, indices: Sequence[int]) -> "PointCloud":
        idx = list(indices)
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return PointCloud(self.coords[idx], labels)

    def __repr__(self) -> str:
        tag = "labeled" if self.is_labeled else "unlabeled"
        return f"PointCloud(n={self.n}, {tag})"


@dataclass(frozen=True)
class Quantizer:
    """距离及派生标量的舍入位数 r"""

    decimals: int = 9

    def __post_init__(self) -> None:
        if not 0 <= self.decimals <= MAX_DECIMALS:
            raise ValueError(f"decimals 必须位于 [0, {MAX_DECIMALS}], 实际为 {self.decimals}")


@dataclass(frozen=True)
class AlignmentResult:
    rmsd: float
    permutation: Tuple[int, ...]
    used_reflection: bool
    rotation: np.ndarray = field(repr=False, compare=False)
    translation: np.ndarray = field(repr=False, compare=False)

    def inverse_permutation(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.permutation)
        for source, target in enumerate(self.permutation):
            inverse[target] = source
        return tuple(inverse)
