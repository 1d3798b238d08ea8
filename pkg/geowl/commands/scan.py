import argparse

from geowl.commands.common import CommandResult, build_report, write_text
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.services import cloud_io
from geowl.services.symmetry import SCAN_PRESETS, symmetry_scan

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("scan", parents=parents, help="数据集对称比例随 ε 的变化")
    parser.add_argument("--eps-grid", help="逗号分隔的 ε 列表")
    parser.add_argument("--eps", dest="eps_grid", help="--eps-grid 的别名")
    parser.add_argument("--decimals", "--r", dest="decimals", type=int, help="量化小数位 r")
    parser.add_argument("--preset", choices=sorted(SCAN_PRESETS), help="使用预设的 r 与 ε 网格")
    parser.add_argument("--csv", help="额外写出 CSV 表格的路径")
    parser.add_argument("path", help="点云文件或目录")
    parser.set_defaults(handler=run, apply_preset=apply_preset)


def apply_preset(args: argparse.Namespace) -> None:
    """预设只填补命令行未显式给出的项"""
    if not getattr(args, "preset", None):
        return
    preset = SCAN_PRESETS[args.preset]
    if args.decimals is None:
        args.decimals = preset.decimals
    if args.eps_grid is None:
        args.eps_grid = ",".join(repr(eps) for eps in preset.eps_grid)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    dataset = cloud_io.load_clouds(args.path)
    table = symmetry_scan(dataset, config.quantizer, config.eps_grid, threads=config.threads)
    if args.csv:
        write_text(args.csv, cloud_io.scan_table_to_csv(table))
        logger.info(f"CSV 已写入 {args.csv}")
    report = build_report(
        "scan", config, path=args.path, preset=args.preset, csv=args.csv, table=table.to_dict()
    )
    return CommandResult(report)
