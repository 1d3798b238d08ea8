"""
𝒜-对称性检测

按颜色类分组, 比较各类几何中心是否落在半径 ε 的球内; 另外实现只用距离推出
节点到加权中心距离与两个加权中心间距离的公式, 以及数据集级别的对称比例扫描.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from geowl.config import get_logger
from geowl.config.settings import DEFAULT_EPS_GRID
from geowl.errors import DegenerateCloud, InvalidCloud, NegativeRadicand, ZeroMass
from geowl.models.point_cloud import PointCloud, Quantizer
from geowl.models.refinement import Coloring, RefineConfig
from geowl.models.symmetry import MassFunction, ScanRow, ScanTable, SymmetryReport
from geowl.services import geometry
from geowl.services.refine import c_encode, stable_d_coloring

logger = get_logger(__name__)

RADICAND_CLAMP = 1e-12


@dataclass(frozen=True)
class ScanPreset:
    decimals: int
    eps_grid: Tuple[float, ...]


SCAN_PRESETS: Dict[str, ScanPreset] = {
    "qm9": ScanPreset(decimals=2, eps_grid=tuple(DEFAULT_EPS_GRID)),
    "modelnet": ScanPreset(decimals=1, eps_grid=tuple(DEFAULT_EPS_GRID)),
}


def a_symmetry_test(cloud: PointCloud, coloring: Coloring, eps: float) -> Tuple[bool, float]:
    """所有颜色类中心到类中心均值的最大距离 ≤ eps 时为 𝒜-对称, 偏差总会返回"""
    if coloring.n != cloud.n:
        raise ValueError(f"着色覆盖 {coloring.n} 个节点, 点云有 {cloud.n} 个")
    centers = np.asarray(
        [cloud.coords[members].mean(axis=0) for members in coloring.classes().values()]
    )
    deviation = float(np.max(np.linalg.norm(centers - centers.mean(axis=0), axis=1)))
    return deviation <= eps, deviation


def count_centers_indicator(cloud: PointCloud, coloring: Coloring, eps: float) -> bool:
    """着色下可计算的中心集合是否只有一个点"""
    symmetric, _ = a_symmetry_test(cloud, coloring, eps)
    return symmetric


def _masses(coloring: Coloring, mass: MassFunction) -> Tuple[np.ndarray, float]:
    weights = np.asarray(mass.node_masses(coloring), dtype=np.float64)
    total = float(weights.sum())
    if abs(total) < 1e-15:
        raise ZeroMass("质量函数在该着色下总质量为 0")
    return weights, total


def _clamp(radicand: np.ndarray, scale: float) -> np.ndarray:
    tolerance = RADICAND_CLAMP * max(1.0, scale)
    if np.any(radicand < -tolerance):
        raise NegativeRadicand("根号内为负, 距离数据不一致", minimum=float(radicand.min()))
    return np.maximum(radicand, 0.0)


def _center_radicands(
    squared: np.ndarray, coloring: Coloring, mass: MassFunction
) -> Tuple[np.ndarray, np.ndarray, float]:
    weights, total = _masses(coloring, mass)
    # f(m, i) = Σ_j m_j d_ij²
    profile = squared @ weights
    radicand = (profile - float(weights @ profile) / (2.0 * total)) / total
    return radicand, weights, total


def node_center_distance(cloud: PointCloud, coloring: Coloring, mass: MassFunction) -> List[float]:
    """只用成对距离计算每个节点到加权中心 c^m 的距离"""
    squared = geometry.distance_matrix(cloud) ** 2
    radicand, _, _ = _center_radicands(squared, coloring, mass)
    scale = float(squared.max()) if squared.size else 1.0
    return np.sqrt(_clamp(radicand, scale)).tolist()


def center_center_distance(
    cloud: PointCloud, coloring: Coloring, first: MassFunction, second: MassFunction
) -> float:
    """
    Σ_i m1_i (‖p_i−c1‖² − ‖p_i−c2‖²) / M1 = −‖c1−c2‖², 只依赖节点到中心的距离
    """
    squared = geometry.distance_matrix(cloud) ** 2
    scale = float(squared.max()) if squared.size else 1.0
    radicand_first, weights, total = _center_radicands(squared, coloring, first)
    radicand_second, _, _ = _center_radicands(squared, coloring, second)
    to_first = _clamp(radicand_first, scale)
    to_second = _clamp(radicand_second, scale)
    value = float(weights @ (to_first - to_second)) / total
    return math.sqrt(float(_clamp(np.asarray([-value]), scale)[0]))


def _deviations(cloud: PointCloud, quantizer: Quantizer) -> Tuple[int, float, int, float]:
    c_coloring = c_encode(cloud, quantizer)
    d_coloring = stable_d_coloring(cloud, RefineConfig(quantizer=quantizer))
    _, c_deviation = a_symmetry_test(cloud, c_coloring, math.inf)
    _, d_deviation = a_symmetry_test(cloud, d_coloring, math.inf)
    return c_coloring.num_classes, c_deviation, d_coloring.num_classes, d_deviation


def classify_symmetry(cloud: PointCloud, quantizer: Quantizer, eps: float) -> SymmetryReport:
    """先 𝒞 后 𝒟; 𝒟-对称蕴含 𝒞-对称, 报告按该蕴含关系填写"""
    k_c, c_deviation, k_d, d_deviation = _deviations(cloud, quantizer)
    d_symmetric = d_deviation <= eps
    return SymmetryReport(
        c_symmetric=c_deviation <= eps or d_symmetric,
        d_symmetric=d_symmetric,
        k_classes_c=k_c,
        k_classes_d=k_d,
        c_deviation=c_deviation,
        d_deviation=d_deviation,
        decimals=quantizer.decimals,
        eps=eps,
    )


def _scan_item(cloud: PointCloud, quantizer: Quantizer) -> Optional[Tuple[float, float]]:
    try:
        unit = geometry.rescale_unit(cloud)
    except DegenerateCloud:
        return None
    _, c_deviation, _, d_deviation = _deviations(unit, quantizer)
    return c_deviation, d_deviation


def symmetry_scan(
    dataset: Sequence[PointCloud],
    quantizer: Quantizer,
    eps_grid: Sequence[float],
    threads: int = 1,
) -> ScanTable:
    """每个点云先做单位归一化; 退化点云跳过并单独计数"""
    if not dataset:
        raise InvalidCloud("对称性扫描的数据集为空")
    grid = sorted(float(eps) for eps in eps_grid)
    if not grid or grid[0] <= 0:
        raise ValueError("eps_grid 必须是非空的正数列表")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda item: _scan_item(item, quantizer), dataset))
    else:
        results = [_scan_item(item, quantizer) for item in dataset]

    skipped = tuple(index for index, result in enumerate(results) if result is None)
    if skipped:
        logger.warning(f"跳过 {len(skipped)} 个退化点云: {list(skipped)[:10]}")
    evaluated = [result for result in results if result is not None]
    count = len(evaluated)

    rows = []
    for eps in grid:
        d_hits = sum(1 for _, d_dev in evaluated if d_dev <= eps)
        c_hits = sum(1 for c_dev, d_dev in evaluated if c_dev <= eps or d_dev <= eps)
        rows.append(
            ScanRow(
                eps=eps,
                proportion_c=c_hits / count if count else 0.0,
                proportion_d=d_hits / count if count else 0.0,
            )
        )

    logger.info(f"对称性扫描完成: {count} 个点云, r={quantizer.decimals}, {len(grid)} 个 ε")
    return ScanTable(
        decimals=quantizer.decimals,
        rows=tuple(rows),
        n_total=len(dataset),
        n_skipped=len(skipped),
        skipped_indices=skipped,
    )
