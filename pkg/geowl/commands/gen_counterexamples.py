import argparse

from geowl.commands.common import CommandResult, add_refine_arguments, build_report, parse_models, write_text
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.errors import BudgetExhausted, ConfigError, VerificationFailed
from geowl.models.counterexample import AugmentMode
from geowl.models.refinement import ModelKind
from geowl.services import cloud_io, polyhedra
from geowl.services.counterexamples import (
    augment_combinatorial,
    search_disgnn_blind_pairs,
    separation_table,
    verify_counterexample,
)

logger = get_logger(__name__)

KIND_CHOICES = ["tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"] + sorted(
    polyhedra.COMBINATIONS
)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "gen-counterexamples", parents=parents, help="在多面体顶点子集上搜索 DisGNN 盲对"
    )
    parser.add_argument("--kind", required=True, choices=KIND_CHOICES, help="多面体或同心组合")
    parser.add_argument("--subset-size", type=int, required=True, help="子集大小")
    parser.add_argument("--budget", dest="search_budget", type=int, help="最多枚举的子集数")
    parser.add_argument("--ratio", type=float, default=polyhedra.DEFAULT_SHELL_RATIO, help="同心壳半径比例")
    parser.add_argument(
        "--augment", choices=[mode.value for mode in AugmentMode], help="对找到的盲对做组合增广"
    )
    parser.add_argument("--copies", type=int, default=2, help="增广的壳层数")
    parser.add_argument("--models", help="写入证书的模型, 逗号分隔; 缺省 d,geongnn,dimenet-edge,2fwl")
    parser.add_argument("--pairs-out", help="把盲对写成 JSON 盲对文件")
    add_refine_arguments(parser)
    parser.set_defaults(handler=run)


DEFAULT_CERTIFICATE_MODELS = (
    ModelKind.D,
    ModelKind.GEONGNN,
    ModelKind.DIMENET_EDGE,
    ModelKind.TWOFWL_GEO,
)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    """搜索是确定性的; seed 只回显在报告里以便复现"""
    if args.augment and args.copies < 2:
        raise ConfigError("--copies 至少为 2", copies=args.copies)
    cfg = config.to_refine_config()
    models = parse_models(args.models, DEFAULT_CERTIFICATE_MODELS)
    result = search_disgnn_blind_pairs(
        args.kind,
        args.subset_size,
        cfg,
        budget=config.search_budget,
        iso_tol=config.iso_tol,
        iso_budget=config.iso_budget,
        ratio=args.ratio,
    )
    pairs = list(result.pairs)
    warnings = []
    if result.budget_exhausted:
        warnings.append(
            BudgetExhausted(
                "子集枚举预算用尽, 盲对列表不完整",
                budget=config.search_budget,
                enumerated=result.subsets_enumerated,
            ).to_dict()
        )

    augmentation_failures = []
    if args.augment:
        mode = AugmentMode(args.augment)
        augmented = []
        for index, pair in enumerate(pairs):
            try:
                augmented.append(
                    augment_combinatorial(
                        pair, mode, args.copies, cfg, args.ratio, config.iso_tol, config.iso_budget
                    )
                )
            except VerificationFailed as exc:
                logger.warning(f"第 {index} 对增广失败: {exc.message}")
                augmentation_failures.append({"index": index, **exc.to_dict()})
        pairs = augmented

    certified = [
        verify_counterexample(pair, models, cfg, config.iso_tol, config.iso_budget) for pair in pairs
    ]
    table = separation_table(certified, models, cfg) if certified else {}

    if args.pairs_out:
        write_text(args.pairs_out, cloud_io.write_pair_file(certified))
        logger.info(f"{len(certified)} 个盲对已写入 {args.pairs_out}")

    report = build_report(
        "gen-counterexamples",
        config,
        kind=args.kind,
        subset_size=args.subset_size,
        augmentation={"mode": args.augment, "copies": args.copies} if args.augment else None,
        search={
            "budget_exhausted": result.budget_exhausted,
            "subsets_enumerated": result.subsets_enumerated,
            "orbits": result.orbits,
            "fingerprint_groups": result.fingerprint_groups,
        },
        pairs=[cloud_io.pair_to_dict(pair) for pair in certified],
        augmentation_failures=augmentation_failures,
        warnings=warnings,
        separation={model.value: fraction for model, fraction in table.items()},
    )
    return CommandResult(report)
