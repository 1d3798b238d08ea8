"""
由两个锚点的三角距离编码重建坐标

坐标系: c1 在原点, c2 在 +x 轴. 每个节点的 x 与离轴距离 ρ 由两个锚点距离确定,
剩下的绕轴角度以离轴最远的节点为 0, 其余节点的角度符号靠与已放置节点的距离来定.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from geowl.config import get_logger
from geowl.errors import CoincidentAnchors, InconsistentDistances, MissingOrientation
from geowl.models.point_cloud import PointCloud, Quantizer, SymmetryGroup
from geowl.models.reconstruction import ReconstructionResult, TriangularEncoding
from geowl.services import geometry
from geowl.services.refine import SIGN_ZERO_BAND, c_encode
from geowl.services.symmetry import classify_symmetry

logger = get_logger(__name__)

ANCHOR_MIN_GAP = 1e-9
DISTANCE_TOL = 1e-6
# 离轴距离低于该比例视为在轴上
AXIS_TOL = 1e-7
# 到 seed 所在轴平面的距离低于该比例视为共面; arccos 在 ±1 附近只保留一半有效位
PLANE_TOL = 1e-6
CANONICAL_DECIMALS = 6


def triangular_encoding(cloud: PointCloud, c1: Sequence[float], c2: Sequence[float]) -> TriangularEncoding:
    first = np.asarray(c1, dtype=np.float64)
    second = np.asarray(c2, dtype=np.float64)
    gap = float(np.linalg.norm(first - second))
    if gap <= ANCHOR_MIN_GAP:
        raise CoincidentAnchors("两个锚点重合", gap=gap)
    per_node = np.stack(
        [
            np.linalg.norm(cloud.coords - first, axis=1),
            np.linalg.norm(cloud.coords - second, axis=1),
        ],
        axis=1,
    )
    return TriangularEncoding((first, second), gap, per_node, cloud.labels)


def orientation_signs(cloud: PointCloud, c1: Sequence[float], c2: Sequence[float]) -> np.ndarray:
    """S[a, b] = sign((c2−c1) × (p_a−c1) · (p_b−c1)), 近零值按共面处理为 0"""
    first = np.asarray(c1, dtype=np.float64)
    axis = np.asarray(c2, dtype=np.float64) - first
    rel = cloud.coords - first
    normals = np.cross(axis, rel)
    triple = normals @ rel.T
    radius = max(float(np.max(np.linalg.norm(rel, axis=1))), float(np.linalg.norm(axis)))
    band = SIGN_ZERO_BAND * radius**3
    return np.where(np.abs(triple) <= band, 0, np.sign(triple)).astype(np.int64)


def _axial_frame(enc: TriangularEncoding) -> Tuple[np.ndarray, np.ndarray, float]:
    to_first = enc.per_node[:, 0]
    to_second = enc.per_node[:, 1]
    gap = enc.anchor_gap
    x = (to_first**2 - to_second**2 + gap**2) / (2.0 * gap)
    rho = np.sqrt(np.maximum(to_first**2 - x**2, 0.0))
    scale = max(1.0, float(np.max(to_first)), gap)
    return x, rho, scale


def _place(x: float, rho: float, theta: float) -> np.ndarray:
    return np.array([x, rho * math.cos(theta), rho * math.sin(theta)])


def _relative_angles(x: np.ndarray, rho: np.ndarray, dist: np.ndarray, seed: int) -> np.ndarray:
    """各节点相对 seed 的绕轴夹角 α ∈ [0, π], 由 d(seed, i) 反推"""
    denominator = 2.0 * rho[seed] * rho
    numerator = rho[seed] ** 2 + rho**2 + (x[seed] - x) ** 2 - dist[seed] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        cosine = np.where(denominator > 0, numerator / denominator, 1.0)
    return np.arccos(np.clip(cosine, -1.0, 1.0))


def _reconstruct(
    enc: TriangularEncoding,
    dist: np.ndarray,
    group: SymmetryGroup,
    signs: Optional[np.ndarray] = None,
    seed: Optional[int] = None,
) -> ReconstructionResult:
    n = enc.n
    if dist.shape != (n, n):
        raise InconsistentDistances(f"距离矩阵形状 {dist.shape} 与节点数 {n} 不一致")

    x, rho, scale = _axial_frame(enc)
    off_axis = [i for i in range(n) if rho[i] > AXIS_TOL * scale]
    coords = np.zeros((n, 3))
    coords[:, 0] = x
    planar = True

    if off_axis:
        if seed is None:
            seed = max(off_axis, key=lambda i: (rho[i], -i))
        alpha = _relative_angles(x, rho, dist, seed)
        height = rho * np.sin(alpha)
        others = [i for i in off_axis if i != seed]
        planar = all(height[i] <= PLANE_TOL * scale for i in others)

        if planar:
            for i in off_axis:
                coords[i] = [x[i], math.copysign(rho[i], math.cos(alpha[i])), 0.0]
        else:
            pivot = max(others, key=lambda i: (height[i], -i))
            sign = 1
            if group is SymmetryGroup.SE3:
                sign = 0 if signs is None else int(signs[seed, pivot])
                if sign == 0:
                    raise MissingOrientation("非共面点云缺少可用的定向符号", seed=seed, pivot=pivot)
            coords[seed] = _place(x[seed], rho[seed], 0.0)
            coords[pivot] = _place(x[pivot], rho[pivot], sign * alpha[pivot])
            placed: List[int] = [seed, pivot]

            for i in sorted(others, key=lambda j: (-rho[j], j)):
                if i == pivot:
                    continue
                best = None
                for theta in (alpha[i], -alpha[i]):
                    candidate = _place(x[i], rho[i], theta)
                    error = float(
                        np.sum((np.linalg.norm(coords[placed] - candidate, axis=1) - dist[i, placed]) ** 2)
                    )
                    if best is None or error < best[0]:
                        best = (error, candidate)
                coords[i] = best[1]
                placed.append(i)

    rebuilt = geometry.distance_matrix(PointCloud(coords))
    error = float(np.max(np.abs(rebuilt - dist)))
    if error > DISTANCE_TOL * scale:
        raise InconsistentDistances("没有符号组合能复现距离矩阵", max_error=error)
    logger.debug(f"重建完成: n={n}, planar={planar}, max_error={error:.2e}")
    return ReconstructionResult(coords, group, None, planar, error)


def reconstruct_e3(enc: TriangularEncoding, dist: np.ndarray) -> ReconstructionResult:
    """结果与原点云在 E(3) 下全等, 可能是镜像"""
    return _reconstruct(enc, np.asarray(dist, dtype=np.float64), SymmetryGroup.E3)


def reconstruct_se3(enc: TriangularEncoding, dist: np.ndarray, signs: Optional[np.ndarray]) -> ReconstructionResult:
    """第一个离面节点的角度符号取自定向符号, 结果与原点云在 SE(3) 下全等"""
    return _reconstruct(enc, np.asarray(dist, dtype=np.float64), SymmetryGroup.SE3, signs)


def reconstruct_cloud(
    cloud: PointCloud, c1: Sequence[float], c2: Sequence[float], group: SymmetryGroup
) -> ReconstructionResult:
    """编码-重建往返, 并以同构对齐的 RMSD 作为残差"""
    enc = triangular_encoding(cloud, c1, c2)
    dist = geometry.distance_matrix(cloud)
    if group is SymmetryGroup.SE3:
        result = reconstruct_se3(enc, dist, orientation_signs(cloud, c1, c2))
    else:
        result = reconstruct_e3(enc, dist)
    rebuilt = PointCloud(result.coords, cloud.labels)
    alignment = geometry.align_isomorphic(cloud, rebuilt, group, tol=DISTANCE_TOL)
    residual = None if alignment is None else alignment.rmsd
    return ReconstructionResult(result.coords, group, residual, result.planar, result.max_distance_error)


def default_anchors(cloud: PointCloud) -> Tuple[np.ndarray, np.ndarray]:
    """几何中心与离中心最远的节点 (并列取下标最小)"""
    center = geometry.centroid(cloud)
    radial = geometry.centroid_distances(cloud)
    return center, cloud.coords[int(np.argmax(radial))]


def _canonical_rows(
    coords: np.ndarray, labels: np.ndarray
) -> Tuple[List[Tuple[float, float, float, int]], np.ndarray]:
    rounded = np.round(coords, CANONICAL_DECIMALS) + 0.0
    return sorted(
        (float(row[0]), float(row[1]), float(row[2]), int(label)) for row, label in zip(rounded, labels)
    ), np.lexsort((labels, rounded[:, 2], rounded[:, 1], rounded[:, 0]))


def complete_invariant(cloud: PointCloud, quantizer: Quantizer, eps: float) -> Optional[np.ndarray]:
    """
    𝒞-非对称点云的规范形式: 每行 (x, y, z, label), 𝒞-对称时返回 None

    锚点取几何中心与颜色 id 最小且中心偏离超过 eps 的 𝒞 类中心; 并列的种子节点和
    两种镜像都试一遍, 取字典序最小者.
    """
    if classify_symmetry(cloud, quantizer, eps).c_symmetric:
        return None

    c1 = geometry.centroid(cloud)
    c2 = None
    classes = c_encode(cloud, quantizer).classes()
    for color in sorted(classes):
        members = classes[color]
        candidate = cloud.coords[members].mean(axis=0)
        if np.linalg.norm(candidate - c1) > eps:
            c2 = candidate
            break
    if c2 is None:
        return None

    enc = triangular_encoding(cloud, c1, c2)
    dist = geometry.distance_matrix(cloud)
    labels = cloud.label_array()
    x, rho, scale = _axial_frame(enc)
    top = float(np.max(rho))
    seeds = [i for i in range(cloud.n) if rho[i] > AXIS_TOL * scale and rho[i] >= top - AXIS_TOL * scale]

    best_rows = None
    best_coords = None
    for seed in seeds or [None]:
        result = _reconstruct(enc, dist, SymmetryGroup.E3, seed=seed)
        for flip in (1.0, -1.0):
            coords = result.coords * np.array([1.0, 1.0, flip])
            rows, order = _canonical_rows(coords, labels)
            if best_rows is None or rows < best_rows:
                best_rows = rows
                best_coords = np.column_stack([coords[order], labels[order].astype(np.float64)])
    return best_coords
