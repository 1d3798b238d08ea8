"""
点云几何基础: 距离矩阵, 几何中心, 归一化, 量化, 刚体对齐与穷举同构判定
所有函数都是输入的纯函数, 可在多线程中并发调用
"""
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from geowl.config import get_logger
from geowl.errors import DegenerateCloud, TooLarge
from geowl.models.point_cloud import AlignmentResult, PointCloud, Quantizer, SymmetryGroup

logger = get_logger(__name__)

DEFAULT_ALIGN_TOL = 1e-6
DEFAULT_ISO_BUDGET = 1_000_000
_INT64_LIMIT = 2**63 - 1


def distance_matrix(cloud: PointCloud) -> np.ndarray:
    """成对欧氏距离, 对角线为 0 且严格对称"""
    coords = cloud.coords
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    # p_i - p_j 与 p_j - p_i 的平方和逐位相同, 这里仅消除 einsum 的求和顺序差异
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    return dist


def centroid(cloud: PointCloud) -> np.ndarray:
    return cloud.coords.mean(axis=0)


def centroid_distances(cloud: PointCloud) -> np.ndarray:
    return np.linalg.norm(cloud.coords - centroid(cloud), axis=1)


def rescale_unit(cloud: PointCloud) -> PointCloud:
    """平移到几何中心并等比缩放, 使最远节点到中心的距离为 1"""
    centered = cloud.coords - centroid(cloud)
    radius = float(np.max(np.linalg.norm(centered, axis=1)))
    scale = max(1.0, float(np.max(np.abs(cloud.coords))))
    if radius <= 1e-12 * scale:
        raise DegenerateCloud("所有节点重合, 无法归一化", n=cloud.n)
    return cloud.with_coords(centered / radius)


def _decimal(value: float) -> Decimal:
    # repr 给出最短的可回读十进制表示, 与肉眼看到的数值一致
    return Decimal(repr(float(value)))


def quantize(value: float, quantizer: Quantizer) -> float:
    """四舍五入到 r 位小数, 恰好在中点时远离零"""
    step = Decimal(1).scaleb(-quantizer.decimals)
    return float(_decimal(value).quantize(step, rounding=ROUND_HALF_UP))


def quantize_units(value: float, quantizer: Quantizer) -> int:
    """量化后以 10^-r 为单位的整数表示, 作为哈希输入"""
    units = int(_decimal(value).scaleb(quantizer.decimals).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    if abs(units) > _INT64_LIMIT:
        raise ValueError(f"数值 {value} 在 r={quantizer.decimals} 下超出 64 位整数范围")
    return units


def quantize_units_array(values: np.ndarray, quantizer: Quantizer) -> np.ndarray:
    flat = [quantize_units(v, quantizer) for v in np.asarray(values, dtype=np.float64).ravel().tolist()]
    return np.asarray(flat, dtype=np.int64).reshape(np.shape(values))


def quantized_distance_units(dist: np.ndarray, quantizer: Quantizer) -> np.ndarray:
    """对称距离矩阵的量化单位, 只计算上三角"""
    n = dist.shape[0]
    units = np.zeros((n, n), dtype=np.int64)
    rows, cols = np.triu_indices(n, k=1)
    upper = quantize_units_array(dist[rows, cols], quantizer)
    units[rows, cols] = upper
    units[cols, rows] = upper
    return units


def units_to_float(units: np.ndarray, quantizer: Quantizer) -> np.ndarray:
    return units.astype(np.float64) / (10.0**quantizer.decimals)


# --------------------------- 变换工具 ---------------------------
def apply_rigid(cloud: PointCloud, rotation: np.ndarray, translation: Sequence[float]) -> PointCloud:
    return cloud.with_coords(cloud.coords @ np.asarray(rotation).T + np.asarray(translation, dtype=np.float64))


def permute(cloud: PointCloud, perm: Sequence[int]) -> PointCloud:
    """新点云第 k 个节点取原点云的第 perm[k] 个节点"""
    return cloud.subset(perm)


def mirror(cloud: PointCloud) -> PointCloud:
    coords = np.array(cloud.coords)
    coords[:, 2] = -coords[:, 2]
    return cloud.with_coords(coords)


def random_orthogonal(rng: np.random.Generator, proper: bool = True) -> np.ndarray:
    """QR 分解得到均匀分布的正交矩阵, proper=False 时以 1/2 概率带反射"""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if proper and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def plane_residual(cloud: PointCloud) -> float:
    """到最佳拟合平面的均方根距离"""
    centered = cloud.coords - centroid(cloud)
    singular = np.linalg.svd(centered, compute_uv=False)
    smallest = singular[-1] if singular.shape[0] >= 3 else 0.0
    return float(smallest) / math.sqrt(cloud.n)


# --------------------------- 刚体对齐 ---------------------------
def kabsch(
    source: np.ndarray, target: np.ndarray, allow_reflection: bool
) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    正交 Procrustes: 求 R, t 使 source @ R.T + t 与 target 的 RMSD 最小

    allow_reflection=False 时按行列式符号修正, 保证 det(R) = +1
    """
    centroid_s = source.mean(axis=0)
    centroid_t = target.mean(axis=0)
    h = (source - centroid_s).T @ (target - centroid_t)
    u, _, vt = np.linalg.svd(h)
    v = vt.T
    if allow_reflection:
        rotation = v @ u.T
    else:
        d = np.sign(np.linalg.det(v @ u.T))
        d = 1.0 if d == 0 else d
        rotation = v @ np.diag([1.0, 1.0, d]) @ u.T
    translation = centroid_t - rotation @ centroid_s
    residual = source @ rotation.T + translation - target
    rmsd = math.sqrt(float(np.sum(residual * residual)) / source.shape[0])
    return rotation, translation, rmsd


def enumerate_isometries(
    first: PointCloud,
    second: PointCloud,
    group: SymmetryGroup = SymmetryGroup.E3,
    tol: float = DEFAULT_ALIGN_TOL,
    budget: int = DEFAULT_ISO_BUDGET,
) -> Iterator[AlignmentResult]:
    """
    回溯枚举保持成对距离的节点双射, 每个完整双射再做 Procrustes 校验

    候选按标签与到中心距离分组剪枝; 部分匹配每扩展一个节点都检查它与已匹配节点的距离.
    访问的部分匹配数超过 budget 时抛出 TooLarge.
    """
    n = first.n
    if second.n != n:
        return
    if sorted(first.label_array().tolist()) != sorted(second.label_array().tolist()):
        return

    dist_a = distance_matrix(first)
    dist_b = distance_matrix(second)
    radial_a = centroid_distances(first)
    radial_b = centroid_distances(second)
    labels_a = first.label_array()
    labels_b = second.label_array()

    # RMSD ≤ tol 时单点偏差 ≤ sqrt(n)·tol, 成对距离偏差 ≤ 2·sqrt(n)·tol
    dist_tol = 2.0 * math.sqrt(n) * tol

    candidates: List[List[int]] = []
    for i in range(n):
        options = [
            j
            for j in range(n)
            if labels_a[i] == labels_b[j] and abs(radial_a[i] - radial_b[j]) <= dist_tol
        ]
        if not options:
            return
        candidates.append(options)

    order = sorted(range(n), key=lambda i: (len(candidates[i]), i))
    allow_reflection = group is SymmetryGroup.E3

    assignment = [-1] * n
    used = [False] * n
    visited = 0

    def extend(depth: int) -> Iterator[AlignmentResult]:
        nonlocal visited
        if depth == n:
            perm = tuple(assignment)
            rotation, translation, rmsd = kabsch(first.coords, second.coords[list(perm)], allow_reflection)
            if rmsd <= tol:
                yield AlignmentResult(
                    rmsd=rmsd,
                    permutation=perm,
                    used_reflection=bool(np.linalg.det(rotation) < 0),
                    rotation=rotation,
                    translation=translation,
                )
            return

        node = order[depth]
        for target in candidates[node]:
            if used[target]:
                continue
            visited += 1
            if visited > budget:
                raise TooLarge("同构判定超出回溯预算", budget=budget, n=n)
            consistent = True
            for placed in order[:depth]:
                if abs(dist_a[node, placed] - dist_b[target, assignment[placed]]) > dist_tol:
                    consistent = False
                    break
            if not consistent:
                continue
            assignment[node] = target
            used[target] = True
            yield from extend(depth + 1)
            used[target] = False
            assignment[node] = -1

    yield from extend(0)


def align_isomorphic(
    first: PointCloud,
    second: PointCloud,
    group: SymmetryGroup = SymmetryGroup.E3,
    tol: float = DEFAULT_ALIGN_TOL,
    budget: int = DEFAULT_ISO_BUDGET,
) -> Optional[AlignmentResult]:
    """两点云在给定群下同构时返回一个 RMSD ≤ tol 的对齐, 否则返回 None"""
    for result in enumerate_isometries(first, second, group, tol, budget):
        logger.debug(f"找到对齐: rmsd={result.rmsd:.3e}, reflection={result.used_reflection}")
        return result
    return None


def symmetry_permutations(
    cloud: PointCloud,
    group: SymmetryGroup = SymmetryGroup.SE3,
    tol: float = DEFAULT_ALIGN_TOL,
    budget: int = DEFAULT_ISO_BUDGET,
) -> List[Tuple[int, ...]]:
    """点云到自身的全部等距置换 (SE3 时即旋转对称群)"""
    perms = sorted({result.permutation for result in enumerate_isometries(cloud, cloud, group, tol, budget)})
    logger.debug(f"对称置换数: {len(perms)} (group={group.value}, n={cloud.n})")
    return perms
