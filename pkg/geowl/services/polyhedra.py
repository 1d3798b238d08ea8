"""
正多面体顶点与同心组合

顶点以原点为中心, 缩放到外接球半径 scale. 正十二面体沿用 (0, ±φ, ±1/φ) 一族的顶点顺序,
反例夹具里的 0/1 选择向量都按这个顺序解读.
"""
import functools
import itertools
import math
from typing import List, Sequence, Tuple, Union

import numpy as np

from geowl.errors import NotCentered
from geowl.models.counterexample import PolyhedronKind
from geowl.models.point_cloud import PointCloud, SymmetryGroup
from geowl.services import geometry

PHI = (1 + 5**0.5) / 2
CENTER_TOL = 1e-9
DEFAULT_SHELL_RATIO = 0.5

# 组合种类的书写形式, 例如 "cube+octahedron"
COMBINATIONS = {
    "cube+octahedron": (PolyhedronKind.CUBE, PolyhedronKind.OCTAHEDRON),
    "cube+cube": (PolyhedronKind.CUBE, PolyhedronKind.CUBE),
}


def _tetrahedron() -> List[List[float]]:
    return [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]


def _cube() -> List[List[float]]:
    return [list(corner) for corner in itertools.product((1, -1), repeat=3)]


def _octahedron() -> List[List[float]]:
    return [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]


def _dodecahedron() -> List[List[float]]:
    u, s, sr = 1.0, PHI, 1 / PHI
    return [
        [0, s, sr], [0, -s, sr], [0, -s, -sr], [0, s, -sr],
        [sr, 0, s], [-sr, 0, s], [-sr, 0, -s], [sr, 0, -s],
        [s, sr, 0], [-s, sr, 0], [-s, -sr, 0], [s, -sr, 0],
        [u, u, u], [u, u, -u], [u, -u, u], [-u, u, u],
        [-u, u, -u], [-u, -u, u], [u, -u, -u], [-u, -u, -u],
    ]  # fmt: skip


def _icosahedron() -> List[List[float]]:
    vertices = []
    for a, b in itertools.product((1, -1), repeat=2):
        vertices.append([0, a, b * PHI])
        vertices.append([a, b * PHI, 0])
        vertices.append([b * PHI, 0, a])
    return vertices


_BUILDERS = {
    PolyhedronKind.TETRAHEDRON: _tetrahedron,
    PolyhedronKind.CUBE: _cube,
    PolyhedronKind.OCTAHEDRON: _octahedron,
    PolyhedronKind.DODECAHEDRON: _dodecahedron,
    PolyhedronKind.ICOSAHEDRON: _icosahedron,
}


def polyhedron_vertices(kind: PolyhedronKind, scale: float = 1.0) -> PointCloud:
    if not scale > 0:
        raise ValueError(f"scale 必须为正数, 实际为 {scale}")
    base = np.asarray(_BUILDERS[kind](), dtype=np.float64)
    radius = math.sqrt(float(base[0] @ base[0]))
    return PointCloud(base * (scale / radius))


def combine_clouds(
    outer: PointCloud, inner: PointCloud, ratio: float, shell_labels: bool = False
) -> PointCloud:
    """outer 与按 ratio 缩放后的 inner 拼接; shell_labels 时外层标 0, 内层标 1"""
    if not ratio > 0:
        raise ValueError(f"ratio 必须为正数, 实际为 {ratio}")
    for name, cloud in (("outer", outer), ("inner", inner)):
        offset = float(np.linalg.norm(geometry.centroid(cloud)))
        if offset > CENTER_TOL:
            raise NotCentered(f"{name} 点云中心偏离原点 {offset:.3e}", cloud=name)

    coords = np.vstack([outer.coords, inner.coords * ratio])
    if shell_labels:
        labels = [0] * outer.n + [1] * inner.n
    elif outer.is_labeled and inner.is_labeled:
        labels = list(outer.labels) + list(inner.labels)
    else:
        labels = None
    return PointCloud(coords, labels)


def parse_kind(name: str) -> Tuple[PolyhedronKind, ...]:
    """单一多面体或组合种类 → 各层多面体"""
    normalized = name.strip().lower()
    if normalized in COMBINATIONS:
        return COMBINATIONS[normalized]
    try:
        return (PolyhedronKind(normalized),)
    except ValueError:
        choices = [kind.value for kind in PolyhedronKind] + list(COMBINATIONS)
        raise ValueError(f"未知多面体种类: {name}, 可选 {choices}") from None


def shell_ratios(count: int, ratio: float = DEFAULT_SHELL_RATIO) -> Tuple[float, ...]:
    return tuple(ratio**index for index in range(count))


def layered_cloud(
    kinds: Sequence[Union[PolyhedronKind, str]], ratios: Sequence[float]
) -> PointCloud:
    """按层拼接多面体顶点, 第 k 层外接球半径为 ratios[k]"""
    if len(kinds) != len(ratios) or not kinds:
        raise ValueError("多面体层数与比例个数不一致")
    resolved = [kind if isinstance(kind, PolyhedronKind) else PolyhedronKind(kind) for kind in kinds]
    cloud = polyhedron_vertices(resolved[0], ratios[0])
    for kind, ratio in zip(resolved[1:], ratios[1:]):
        cloud = combine_clouds(cloud, polyhedron_vertices(kind), ratio)
    return cloud


@functools.lru_cache(maxsize=None)
def rotation_permutations(
    kinds: Tuple[PolyhedronKind, ...], ratio: float = DEFAULT_SHELL_RATIO
) -> Tuple[Tuple[int, ...], ...]:
    """(组合)多面体的旋转对称群, 以顶点置换表示"""
    cloud = layered_cloud(kinds, shell_ratios(len(kinds), ratio))
    return tuple(geometry.symmetry_permutations(cloud, SymmetryGroup.SE3))
