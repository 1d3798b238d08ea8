import argparse

from geowl.commands.common import (
    EXIT_NOT_DISTINGUISHED,
    EXIT_OK,
    CommandResult,
    add_model_argument,
    add_refine_arguments,
    build_report,
)
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.errors import ParseError
from geowl.models.refinement import Verdict
from geowl.services import cloud_io
from geowl.services.refine import distinguish

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "distinguish",
        parents=parents,
        help="判断模型能否区分两个点云; 可区分退出码 0, 不可区分退出码 3",
    )
    add_model_argument(parser)
    add_refine_arguments(parser)
    parser.add_argument("file_a", help="第一个点云文件, 或包含一对点云的文件")
    parser.add_argument("file_b", nargs="?", help="第二个点云文件")
    parser.set_defaults(handler=run)


def _load_pair(args: argparse.Namespace):
    if args.file_b:
        return cloud_io.load_single_cloud(args.file_a), cloud_io.load_single_cloud(args.file_b)
    # 只给一个文件时, 接受含两个点云的文件或盲对文件的第一对
    if args.file_a.endswith(".json"):
        try:
            pair = cloud_io.load_pairs(args.file_a)[0]
            return pair.p1, pair.p2
        except (ParseError, IndexError):
            pass
    clouds = cloud_io.load_clouds(args.file_a)
    if len(clouds) != 2:
        raise ParseError(f"{args.file_a} 应包含恰好两个点云, 实际 {len(clouds)} 个")
    return clouds[0], clouds[1]


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    first, second = _load_pair(args)
    verdict = distinguish(first, second, args.model, config.to_refine_config())
    logger.info(f"{args.model.value}: {verdict.value}")
    report = build_report(
        "distinguish",
        config,
        model=args.model.value,
        files=[args.file_a, args.file_b] if args.file_b else [args.file_a],
        verdict=verdict.value,
    )
    exit_code = EXIT_OK if verdict is Verdict.DISTINGUISHED else EXIT_NOT_DISTINGUISHED
    return CommandResult(report, exit_code)
