"""
DisGNN 盲对的构造, 搜索与验证

在多面体顶点上枚举固定大小的子集, 用旋转群按轨道去重, 按 DisGNN 指纹分组,
同组内两两做同构判定, 非同构者即为盲对. 每个输出都带机器校验过的证书.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from geowl.config import get_logger, log_with_context
from geowl.errors import TooLarge, VerificationFailed
from geowl.models.counterexample import (
    AugmentMode,
    CounterexamplePair,
    PairProvenance,
    PolyhedronKind,
    SearchResult,
)
from geowl.models.point_cloud import PointCloud, SymmetryGroup
from geowl.models.refinement import ModelKind, RefineConfig, Verdict
from geowl.services import geometry, polyhedra
from geowl.services.refine import d_fingerprint, distinguish

logger = get_logger(__name__)

DEFAULT_SEARCH_BUDGET = 1_000_000
_CHUNK = 4096
_MAX_BITMASK_NODES = 62


def _mask_to_subset(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(index for index in range(n) if (mask >> index) & 1)


def _orbit_representatives(
    n: int, perms: Sequence[Sequence[int]], subset_size: int, budget: int
) -> Tuple[List[Tuple[int, ...]], int, bool]:
    """
    按置换群轨道对 k-子集去重

    子集编码成位掩码, 一个轨道的代表取群作用下掩码的最小值; 按块批量计算.
    """
    if n > _MAX_BITMASK_NODES:
        raise TooLarge(f"节点数 {n} 超出子集位掩码的上限", n=n)
    group = np.asarray(perms, dtype=np.int64).reshape(-1, n)
    if group.shape[0] == 0:
        group = np.arange(n, dtype=np.int64)[None, :]

    total = math.comb(n, subset_size)
    combos = itertools.combinations(range(n), subset_size)
    canonical_masks = set()
    enumerated = 0
    while enumerated < budget:
        chunk = list(itertools.islice(combos, min(_CHUNK, budget - enumerated)))
        if not chunk:
            break
        enumerated += len(chunk)
        subsets = np.asarray(chunk, dtype=np.int64)
        images = group[:, subsets]
        masks = np.left_shift(np.int64(1), images).sum(axis=2)
        canonical_masks.update(masks.min(axis=0).tolist())

    representatives = sorted(_mask_to_subset(mask, n) for mask in canonical_masks)
    return representatives, enumerated, enumerated < total


def _non_isomorphic_classes(
    base: PointCloud,
    members: Sequence[Tuple[int, ...]],
    iso_tol: float,
    iso_budget: int,
) -> List[Tuple[int, ...]]:
    """同一指纹组内两两 E(3) 非同构的代表"""
    classes: List[Tuple[int, ...]] = []
    for subset in members:
        cloud = base.subset(subset)
        if any(
            geometry.align_isomorphic(cloud, base.subset(other), SymmetryGroup.E3, iso_tol, iso_budget)
            is not None
            for other in classes
        ):
            continue
        classes.append(subset)
    return classes


def search_blind_pairs_in(
    base: PointCloud,
    symmetry: Sequence[Sequence[int]],
    subset_size: int,
    cfg: RefineConfig,
    budget: int = DEFAULT_SEARCH_BUDGET,
    kinds: Tuple[str, ...] = (),
    scale_ratios: Tuple[float, ...] = (1.0,),
    iso_tol: float = geometry.DEFAULT_ALIGN_TOL,
    iso_budget: int = geometry.DEFAULT_ISO_BUDGET,
) -> SearchResult:
    """在 base 的顶点子集上搜索盲对; 预算用尽时返回部分结果并置位标志"""
    if not 2 <= subset_size <= base.n:
        raise ValueError(f"subset_size 必须位于 [2, {base.n}], 实际为 {subset_size}")

    representatives, enumerated, exhausted = _orbit_representatives(base.n, symmetry, subset_size, budget)
    if exhausted:
        logger.warning(f"子集枚举预算 {budget} 用尽, 返回部分结果")

    def digest_of(subset: Tuple[int, ...]) -> str:
        return d_fingerprint(base.subset(subset), cfg).digest

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
            digests = list(executor.map(digest_of, representatives))
    else:
        digests = [digest_of(subset) for subset in representatives]

    groups: Dict[str, List[Tuple[int, ...]]] = {}
    for subset, digest in zip(representatives, digests):
        groups.setdefault(digest, []).append(subset)

    pairs: List[CounterexamplePair] = []
    for digest in sorted(groups, key=lambda key: groups[key][0]):
        members = groups[digest]
        if len(members) < 2:
            continue
        classes = _non_isomorphic_classes(base, members, iso_tol, iso_budget)
        for left, right in itertools.combinations(classes, 2):
            provenance = PairProvenance(
                kinds=kinds,
                selection_left=left,
                selection_right=right,
                scale_ratios=scale_ratios,
            )
            pairs.append(
                CounterexamplePair(
                    base.subset(left),
                    base.subset(right),
                    provenance,
                    verified_noniso=True,
                    verified_blind={ModelKind.D: True},
                )
            )

    log_with_context(
        logger,
        logging.INFO,
        "盲对搜索完成",
        kinds=list(kinds),
        subset_size=subset_size,
        enumerated=enumerated,
        orbits=len(representatives),
        pairs=len(pairs),
    )
    return SearchResult(
        pairs=pairs,
        budget_exhausted=exhausted,
        subsets_enumerated=enumerated,
        orbits=len(representatives),
        fingerprint_groups=len(groups),
    )


def search_disgnn_blind_pairs(
    kind: Union[PolyhedronKind, str],
    subset_size: int,
    cfg: RefineConfig,
    budget: int = DEFAULT_SEARCH_BUDGET,
    iso_tol: float = geometry.DEFAULT_ALIGN_TOL,
    iso_budget: int = geometry.DEFAULT_ISO_BUDGET,
    ratio: float = polyhedra.DEFAULT_SHELL_RATIO,
) -> SearchResult:
    """kind 可以是单个多面体, 也可以是 "cube+octahedron" 这样的同心组合"""
    kinds = (kind,) if isinstance(kind, PolyhedronKind) else polyhedra.parse_kind(kind)
    ratios = polyhedra.shell_ratios(len(kinds), ratio)
    base = polyhedra.layered_cloud(kinds, ratios)
    symmetry = polyhedra.rotation_permutations(tuple(kinds), ratio)
    return search_blind_pairs_in(
        base,
        symmetry,
        subset_size,
        cfg,
        budget,
        kinds=tuple(k.value for k in kinds),
        scale_ratios=ratios,
        iso_tol=iso_tol,
        iso_budget=iso_budget,
    )


def verify_counterexample(
    pair: CounterexamplePair,
    models: Iterable[ModelKind],
    cfg: RefineConfig,
    iso_tol: float = geometry.DEFAULT_ALIGN_TOL,
    iso_budget: int = geometry.DEFAULT_ISO_BUDGET,
) -> CounterexamplePair:
    """重新计算非同构与各模型盲性证书, 幂等"""
    noniso = (
        geometry.align_isomorphic(pair.p1, pair.p2, SymmetryGroup.E3, iso_tol, iso_budget) is None
    )
    blind = {
        model: distinguish(pair.p1, pair.p2, model, cfg) is Verdict.NOT_DISTINGUISHED for model in models
    }
    return pair.with_certificates(noniso, blind)


def _shell_selection(selection: Sequence[int], n: int, mode: AugmentMode) -> Tuple[int, ...]:
    if mode is AugmentMode.ORIGIN:
        return tuple(selection)
    if mode is AugmentMode.COMPLEMENTARY:
        chosen = set(selection)
        return tuple(index for index in range(n) if index not in chosen)
    return tuple(range(n))


def _shells(
    base: PointCloud, selection: Sequence[int], mode: AugmentMode, copies: int, ratio: float
) -> PointCloud:
    """第 0 层用原选择, 之后各层按 mode 选择, 第 s 层半径缩放 ratio^s"""
    layers = [base.subset(selection).coords]
    for shell in range(1, copies):
        chosen = _shell_selection(selection, base.n, mode)
        if chosen:
            layers.append(base.subset(chosen).coords * ratio**shell)
    return PointCloud(np.vstack(layers))


def augment_combinatorial(
    pair: CounterexamplePair,
    mode: AugmentMode,
    copies: int,
    cfg: RefineConfig,
    ratio: float = polyhedra.DEFAULT_SHELL_RATIO,
    iso_tol: float = geometry.DEFAULT_ALIGN_TOL,
    iso_budget: int = geometry.DEFAULT_ISO_BUDGET,
) -> CounterexamplePair:
    """把盲对的选择模式复制到多层同心壳上, 构造组合盲对并重新验证"""
    if copies < 2:
        raise ValueError(f"copies 必须 ≥ 2, 实际为 {copies}")
    if not pair.is_valid:
        raise ValueError("只能增广已验证的盲对")
    provenance = pair.provenance
    if not provenance.kinds or not provenance.selection_left:
        raise ValueError("盲对缺少多面体来源, 无法增广")

    base = polyhedra.layered_cloud(provenance.kinds, provenance.scale_ratios)
    candidate = CounterexamplePair(
        _shells(base, provenance.selection_left, mode, copies, ratio),
        _shells(base, provenance.selection_right, mode, copies, ratio),
        PairProvenance(
            kinds=provenance.kinds,
            selection_left=provenance.selection_left,
            selection_right=provenance.selection_right,
            scale_ratios=provenance.scale_ratios,
            augmentation=mode.value,
            copies=copies,
            shell_ratio=ratio,
        ),
    )
    verified = verify_counterexample(candidate, [ModelKind.D], cfg, iso_tol, iso_budget)
    if not verified.is_valid:
        raise VerificationFailed(
            "组合增广结果不是盲对",
            mode=mode.value,
            copies=copies,
            verified_noniso=verified.verified_noniso,
            verified_blind_d=verified.verified_blind.get(ModelKind.D),
        )
    logger.info(f"组合增广成功: mode={mode.value}, copies={copies}, n={verified.p1.n}")
    return verified


def separation_table(
    pairs: Sequence[CounterexamplePair], models: Iterable[ModelKind], cfg: RefineConfig
) -> Dict[ModelKind, float]:
    """每个模型区分出的盲对比例"""
    if not pairs:
        raise ValueError("盲对列表为空")
    table: Dict[ModelKind, float] = {}
    for model in models:
        hits = sum(
            1 for pair in pairs if distinguish(pair.p1, pair.p2, model, cfg) is Verdict.DISTINGUISHED
        )
        table[model] = hits / len(pairs)
    return table

