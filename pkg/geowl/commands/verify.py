import argparse

from geowl.commands.common import CommandResult, add_refine_arguments, build_report, parse_models
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.errors import VerificationFailed
from geowl.services import cloud_io
from geowl.services.counterexamples import separation_table, verify_counterexample

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("verify", parents=parents, help="重放盲对文件中的证书")
    parser.add_argument("pair_file", help="JSON 盲对文件")
    parser.add_argument("--models", help="要重放的模型, 逗号分隔; 缺省为文件中记录的模型")
    add_refine_arguments(parser)
    parser.set_defaults(handler=run)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    """重新计算的证书与文件记录不一致时以 VerificationFailed 结束"""
    cfg = config.to_refine_config()
    stored = cloud_io.load_pairs(args.pair_file)
    replayed = []
    mismatches = []
    for index, pair in enumerate(stored):
        models = parse_models(args.models, pair.verified_blind.keys())
        fresh = verify_counterexample(pair, models, cfg, config.iso_tol, config.iso_budget)
        expected = {model: flag for model, flag in pair.verified_blind.items() if model in models}
        actual = {model: fresh.verified_blind[model] for model in expected}
        consistent = fresh.verified_noniso == pair.verified_noniso and expected == actual
        if not consistent:
            mismatches.append(index)
            logger.error(f"第 {index} 对证书不一致")
        replayed.append({"index": index, "consistent": consistent, **cloud_io.pair_to_dict(fresh)})

    if mismatches:
        raise VerificationFailed("盲对证书重放不一致", pair_file=args.pair_file, mismatches=mismatches)

    models = parse_models(args.models, stored[0].verified_blind.keys()) if stored else []
    table = separation_table(stored, models, cfg) if stored and models else {}
    report = build_report(
        "verify",
        config,
        pair_file=args.pair_file,
        pairs=replayed,
        separation={model.value: fraction for model, fraction in table.items()},
    )
    return CommandResult(report)
