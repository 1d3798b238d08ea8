import argparse

from geowl.commands.common import CommandResult, add_model_argument, add_refine_arguments, build_report
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.services import cloud_io
from geowl.services.refine import fingerprint

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("fingerprint", parents=parents, help="计算点云在指定模型下的指纹")
    add_model_argument(parser)
    add_refine_arguments(parser)
    parser.add_argument("file", help="XYZ 或 JSON 点云文件")
    parser.set_defaults(handler=run)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    """文件中的每个点云输出一个指纹"""
    clouds = cloud_io.load_clouds(args.file)
    cfg = config.to_refine_config()
    fingerprints = []
    for index, cloud in enumerate(clouds):
        result = fingerprint(cloud, args.model, cfg)
        logger.info(f"[{index}] {args.model.value} 指纹: {result.digest}")
        fingerprints.append({"index": index, "n": cloud.n, **result.to_dict()})
    return CommandResult(build_report("fingerprint", config, file=args.file, fingerprints=fingerprints))
