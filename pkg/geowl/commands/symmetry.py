import argparse

from geowl.commands.common import CommandResult, build_report
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.services import cloud_io
from geowl.services.symmetry import classify_symmetry

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("symmetry", parents=parents, help="判定点云的 𝒞 / 𝒟 对称性")
    parser.add_argument("--eps", type=float, help="中心偏差容差 ε")
    parser.add_argument("--decimals", "--r", dest="decimals", type=int, help="量化小数位 r")
    parser.add_argument("file", help="XYZ 或 JSON 点云文件")
    parser.set_defaults(handler=run)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    reports = []
    for index, cloud in enumerate(cloud_io.load_clouds(args.file)):
        report = classify_symmetry(cloud, config.quantizer, config.eps)
        logger.info(f"[{index}] C={report.c_symmetric}, D={report.d_symmetric}")
        reports.append({"index": index, "n": cloud.n, **report.to_dict()})
    return CommandResult(build_report("symmetry", config, file=args.file, reports=reports))
