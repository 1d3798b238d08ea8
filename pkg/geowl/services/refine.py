"""
颜色细化引擎

每个引擎以最大表达能力实现一种几何不变模型: 消息函数用 "排序 + 哈希" 代替可学习的单射函数,
两个点云在某模型下不可区分当且仅当它们的指纹相等.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Hashable, List, Optional, Sequence, Tuple, Union

import numpy as np

from geowl.config import get_logger, log_with_context
from geowl.errors import NoStabilization
from geowl.models.point_cloud import PointCloud, Quantizer
from geowl.models.refinement import (
    Coloring,
    EdgeColoring,
    Fingerprint,
    ModelKind,
    RefineConfig,
    Verdict,
)
from geowl.services import geometry
from geowl.services.hashing import color_id, digest128, multiset_id, pack_ints, refine_rows

logger = get_logger(__name__)

# 三重积绝对值低于 SIGN_ZERO_BAND·R³ 视为共面, R 为最远节点到中心的距离
SIGN_ZERO_BAND = 1e-9


@dataclass(frozen=True, eq=False)
class _CloudTables:
    """一次运行内共享的量化距离表, 只计算一次"""

    labels: np.ndarray
    units: np.ndarray  # 量化距离, 以 10^-r 为单位
    qdist: np.ndarray  # 量化距离的浮点值, 用于半径比较

    @classmethod
    def build(cls, cloud: PointCloud, quantizer: Quantizer) -> "_CloudTables":
        units = geometry.quantized_distance_units(geometry.distance_matrix(cloud), quantizer)
        return cls(cloud.label_array(), units, geometry.units_to_float(units, quantizer))

    def neighbor_mask(self, r_cutoff: float, members: Optional[np.ndarray] = None) -> np.ndarray:
        qdist = self.qdist if members is None else self.qdist[np.ix_(members, members)]
        mask = qdist <= r_cutoff
        np.fill_diagonal(mask, False)
        return mask


def _radius_units(radius: float, quantizer: Quantizer) -> int:
    return -1 if math.isinf(radius) else geometry.quantize_units(radius, quantizer)


def _num_classes(colors: np.ndarray) -> int:
    return int(np.unique(colors).shape[0])


def _class_histogram(colors: np.ndarray) -> Tuple[int, ...]:
    _, counts = np.unique(colors, return_counts=True)
    return tuple(sorted(int(count) for count in counts))


def _to_coloring(colors: np.ndarray, round_index: int) -> Coloring:
    return Coloring(tuple(int(value) for value in colors), round_index)


def _run_to_stable(
    colors: np.ndarray, step: Callable[[np.ndarray], np.ndarray], cap: int, what: str
) -> Tuple[np.ndarray, int]:
    """
    迭代直到划分不再细化

    返回不再细化的那一轮颜色 (第 s+1 轮) 和 s. 第 s+1 轮颜色编码了第 s 轮划分上的全部计数,
    两个点云在这一轮直方图相同就保证之后每一轮都相同.
    """
    classes = _num_classes(colors)
    for round_index in range(1, cap + 1):
        refined = step(colors)
        refined_classes = _num_classes(refined)
        logger.debug(f"{what} 第 {round_index} 轮: {classes} -> {refined_classes} 类")
        if refined_classes == classes:
            return refined, round_index - 1
        colors, classes = refined, refined_classes
    raise NoStabilization(f"{what} 在 {cap} 轮内未稳定", cap=cap, classes=classes)


def _node_step(
    tag: bytes,
    colors: np.ndarray,
    units: np.ndarray,
    mask: np.ndarray,
    signs: Optional[np.ndarray] = None,
) -> np.ndarray:
    """color_i ← id(color_i, {{(color_j, q(d_ij)[, sign]) : j ∈ N(i)}})"""
    m = colors.shape[0]
    keys = [np.tile(colors, (m, 1)), units]
    if signs is not None:
        keys.append(signs)
    return refine_rows(tag, colors, keys, mask)


# --------------------------- 𝒞 / 𝒟 编码 ---------------------------
def initial_coloring(cloud: PointCloud) -> Coloring:
    """无标签点云为单一颜色, 否则按标签着色"""
    labels = cloud.label_array()
    return Coloring(tuple(color_id(b"label", pack_ints(int(label))) for label in labels), 0)


def c_encode(cloud: PointCloud, quantizer: Quantizer) -> Coloring:
    """节点颜色 = id(标签, 到几何中心的量化距离)"""
    radial = geometry.quantize_units_array(geometry.centroid_distances(cloud), quantizer)
    labels = cloud.label_array()
    return Coloring(
        tuple(color_id(b"C", pack_ints(int(label), int(r))) for label, r in zip(labels, radial)),
        0,
    )


def c_fingerprint(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    colors = np.asarray(c_encode(cloud, cfg.quantizer).colors, dtype=np.uint64)
    digest = digest128(b"C", [cfg.quantizer.decimals, cloud.n], colors)
    return Fingerprint(digest, ModelKind.C, 0, _class_histogram(colors), cfg.quantizer)


def disgnn_refine(cloud: PointCloud, init: Coloring, cfg: RefineConfig) -> Tuple[Coloring, Fingerprint]:
    """按距离做颜色细化直到划分稳定, 返回稳定着色与指纹"""
    if init.n != cloud.n:
        raise ValueError(f"初始着色有 {init.n} 个颜色, 点云有 {cloud.n} 个节点")

    tables = _CloudTables.build(cloud, cfg.quantizer)
    mask = tables.neighbor_mask(cfg.r_cutoff)
    colors = np.asarray(init.colors, dtype=np.uint64)

    stable, rounds = _run_to_stable(
        colors,
        lambda current: _node_step(b"D", current, tables.units, mask),
        cfg.node_cap(cloud.n),
        "DisGNN",
    )
    digest = digest128(
        b"D",
        [cfg.quantizer.decimals, cloud.n, _radius_units(cfg.r_cutoff, cfg.quantizer)],
        stable,
    )
    fingerprint = Fingerprint(digest, ModelKind.D, rounds, _class_histogram(stable), cfg.quantizer)
    return _to_coloring(stable, rounds + 1), fingerprint


def d_fingerprint(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    _, fingerprint = disgnn_refine(cloud, initial_coloring(cloud), cfg)
    return fingerprint


def stable_d_coloring(cloud: PointCloud, cfg: RefineConfig) -> Coloring:
    coloring, _ = disgnn_refine(cloud, initial_coloring(cloud), cfg)
    return coloring


# --------------------------- 嵌套子图 ---------------------------
def _orientation_cross(cloud: PointCloud) -> Tuple[np.ndarray, np.ndarray, float]:
    rel = cloud.coords - geometry.centroid(cloud)
    cross = np.cross(rel[:, None, :], rel[None, :, :])
    radius = float(np.max(np.linalg.norm(rel, axis=1)))
    return rel, cross, SIGN_ZERO_BAND * radius**3


def _banded_sign(values: np.ndarray, band: float) -> np.ndarray:
    return np.where(np.abs(values) <= band, 0, np.sign(values)).astype(np.int64)


def _nested_fingerprint(cloud: PointCloud, cfg: RefineConfig, chiral: bool) -> Fingerprint:
    model = ModelKind.GEONGNN_C if chiral else ModelKind.GEONGNN
    tag = b"GC" if chiral else b"G"
    tables = _CloudTables.build(cloud, cfg.quantizer)
    n = cloud.n
    orientation = _orientation_cross(cloud) if chiral else None

    def run_subgraph(center: int) -> int:
        members = np.flatnonzero(tables.qdist[center] <= cfg.r_sub)
        sub_units = tables.units[np.ix_(members, members)]
        mask = tables.neighbor_mask(cfg.r_cutoff, members)
        colors = np.fromiter(
            (
                color_id(
                    b"G0",
                    pack_ints(int(tables.labels[j]), int(tables.units[center, j]), int(j == center)),
                )
                for j in members
            ),
            dtype=np.uint64,
            count=members.shape[0],
        )
        signs = None
        if orientation is not None:
            rel, cross, band = orientation
            signs = _banded_sign(cross[np.ix_(members, members)] @ rel[center], band)
        for _ in range(cfg.n_in):
            colors = _node_step(tag, colors, sub_units, mask, signs)
        return multiset_id(b"GP", colors)

    if cfg.threads > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=min(cfg.threads, n)) as executor:
            pooled = list(executor.map(run_subgraph, range(n)))
    else:
        pooled = [run_subgraph(center) for center in range(n)]

    colors = np.asarray(pooled, dtype=np.uint64)
    mask = tables.neighbor_mask(cfg.r_cutoff)
    for _ in range(cfg.n_out):
        colors = _node_step(b"GO", colors, tables.units, mask)

    header = [
        cfg.quantizer.decimals,
        n,
        cfg.n_in,
        cfg.n_out,
        _radius_units(cfg.r_sub, cfg.quantizer),
        _radius_units(cfg.r_cutoff, cfg.quantizer),
    ]
    digest = digest128(tag, header, colors)
    log_with_context(
        logger,
        logging.INFO,
        "嵌套子图指纹完成",
        model=model.value,
        n=n,
        classes=_num_classes(colors),
    )
    return Fingerprint(digest, model, cfg.n_in + cfg.n_out, _class_histogram(colors), cfg.quantizer)


def geongnn_fingerprint(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    return _nested_fingerprint(cloud, cfg, chiral=False)


def geongnn_c_fingerprint(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    """子图 k 内聚合的每一对额外携带 sign((p_i−c)×(p_j−c)·(p_k−c)), 对反射敏感"""
    return _nested_fingerprint(cloud, cfg, chiral=True)


# --------------------------- 边细化 ---------------------------
def _edge_init(tables: _CloudTables) -> np.ndarray:
    n = tables.labels.shape[0]
    h = np.empty((n, n), dtype=np.uint64)
    for i in range(n):
        for j in range(n):
            h[i, j] = color_id(
                b"E0", pack_ints(int(tables.labels[i]), int(tables.labels[j]), int(tables.units[i, j]))
            )
    return h


def _dimenet_step(h: np.ndarray, units: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    out = np.empty_like(h)
    for i in range(n):
        # 第 j 行是边 (i, j): 遍历 k 的 (h_ki, q(d_kj))
        incoming = np.tile(h[:, i], (n, 1))
        out[i] = refine_rows(b"DN", h[i], [incoming, units])
    return out


def _twofwl_step(h: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    out = np.empty_like(h)
    transposed = np.ascontiguousarray(h.T)
    for i in range(n):
        # 第 j 行是边 (i, j): 遍历 k 的 (h_ik, h_kj)
        outgoing = np.tile(h[i, :], (n, 1))
        out[i] = refine_rows(b"FW", h[i], [outgoing, transposed])
    return out


def _edge_refine(cloud: PointCloud, cfg: RefineConfig, model: ModelKind) -> Tuple[EdgeColoring, Fingerprint]:
    tables = _CloudTables.build(cloud, cfg.quantizer)
    h = _edge_init(tables)
    if model is ModelKind.DIMENET_EDGE:
        step = lambda current: _dimenet_step(current, tables.units)  # noqa: E731
    else:
        step = _twofwl_step

    stable, rounds = _run_to_stable(h, step, cfg.edge_cap(cloud.n), model.value)

    # 先对每一列 {{h_ij : i}} 取 id, 再对列 id 的多重集取摘要
    columns = np.asarray([multiset_id(b"EC", stable[:, j]) for j in range(cloud.n)], dtype=np.uint64)
    digest = digest128(model.value.encode(), [cfg.quantizer.decimals, cloud.n], columns)
    fingerprint = Fingerprint(digest, model, rounds, _class_histogram(stable), cfg.quantizer)
    return EdgeColoring(stable, rounds + 1), fingerprint


def refine_edges_dimenet(cloud: PointCloud, cfg: RefineConfig) -> Tuple[EdgeColoring, Fingerprint]:
    return _edge_refine(cloud, cfg, ModelKind.DIMENET_EDGE)


def refine_edges_twofwl(cloud: PointCloud, cfg: RefineConfig) -> Tuple[EdgeColoring, Fingerprint]:
    return _edge_refine(cloud, cfg, ModelKind.TWOFWL_GEO)


def edge_refine_dimenet(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    return refine_edges_dimenet(cloud, cfg)[1]


def twofwl_geo_fingerprint(cloud: PointCloud, cfg: RefineConfig) -> Fingerprint:
    return refine_edges_twofwl(cloud, cfg)[1]


# --------------------------- 判定 ---------------------------
_ENGINES = {
    ModelKind.C: c_fingerprint,
    ModelKind.D: d_fingerprint,
    ModelKind.GEONGNN: geongnn_fingerprint,
    ModelKind.GEONGNN_C: geongnn_c_fingerprint,
    ModelKind.DIMENET_EDGE: edge_refine_dimenet,
    ModelKind.TWOFWL_GEO: twofwl_geo_fingerprint,
}


def _as_model(model: Union[ModelKind, str]) -> ModelKind:
    return model if isinstance(model, ModelKind) else ModelKind.parse(model)


def fingerprint(cloud: PointCloud, model: Union[ModelKind, str], cfg: RefineConfig) -> Fingerprint:
    return _ENGINES[_as_model(model)](cloud, cfg)


def distinguish(
    first: PointCloud, second: PointCloud, model: Union[ModelKind, str], cfg: RefineConfig
) -> Verdict:
    """节点数不同或指纹不同即可区分"""
    kind = _as_model(model)
    if first.n != second.n:
        return Verdict.DISTINGUISHED
    same = fingerprint(first, kind, cfg) == fingerprint(second, kind, cfg)
    return Verdict.NOT_DISTINGUISHED if same else Verdict.DISTINGUISHED


def identifies(
    cloud: PointCloud, others: Sequence[PointCloud], model: Union[ModelKind, str], cfg: RefineConfig
) -> List[int]:
    """others 中与 cloud 不可区分的下标; 对非同构样本返回空列表即在该样本上可识别"""
    kind = _as_model(model)
    own = fingerprint(cloud, kind, cfg)
    return [
        index
        for index, other in enumerate(others)
        if other.n == cloud.n and fingerprint(other, kind, cfg) == own
    ]


def partition_refines(fine: Sequence[Hashable], coarse: Sequence[Hashable]) -> bool:
    """fine 的每个类都落在 coarse 的某一个类里"""
    if len(fine) != len(coarse):
        raise ValueError("两个划分的元素数不一致")
    seen = {}
    for f, c in zip(fine, coarse):
        if seen.setdefault(f, c) != c:
            return False
    return True
