"""
命令行路由: 注册全部子命令, 统一处理配置, 日志, 报告输出和退出码
"""
import argparse
import sys
from typing import List, Optional

from geowl.commands import (
    distinguish,
    fingerprint,
    gen_counterexamples,
    reconstruct,
    scan,
    symmetry,
    verify,
)
from geowl.commands.common import common_parser, config_overrides, error_report, render_report, write_text
from geowl.config import get_logger, new_run_id, setup_logging
from geowl.config.settings import RunConfig, load_run_config
from geowl.errors import ConfigError, GeoWLError

logger = get_logger(__name__)

EXIT_INTERNAL = 2

# 注册顺序即帮助信息中的顺序
COMMANDS = (fingerprint, distinguish, symmetry, scan, gen_counterexamples, reconstruct, verify)


class CliArgumentParser(argparse.ArgumentParser):
    """参数错误转成 ConfigError, 由 main 统一输出错误对象并以 1 退出"""

    def error(self, message: str) -> None:
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(prog="geowl", description="几何点云颜色细化工具")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    parents = [common_parser()]
    for module in COMMANDS:
        module.register(subparsers, parents)
    return parser


def _emit(report: dict, config: Optional[RunConfig]) -> None:
    text = render_report(report) + "\n"
    if config is not None and config.output:
        write_text(config.output, text)
        logger.info(f"报告已写入 {config.output}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv: Optional[List[str]] = None) -> int:
    command = None
    config = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if args.log_level:
            setup_logging(log_level=args.log_level.upper())
        else:
            setup_logging()
        run_id = new_run_id()
        logger.debug(f"开始执行 {command}, run_id={run_id}")

        apply_preset = getattr(args, "apply_preset", None)
        if apply_preset is not None:
            apply_preset(args)

        config = load_run_config(args.config, config_overrides(args))
        result = args.handler(args, config)
        _emit(result.report, config)
        return result.exit_code
    except GeoWLError as exc:
        logger.error(f"{command or 'geowl'} 失败: {exc.message}")
        _emit(error_report(command, exc.to_dict(), config), config)
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"{command or 'geowl'} 内部错误")
        payload = {"status": "error", "code": "internal_error", "message": str(exc)}
        _emit(error_report(command, payload, config), config)
        return EXIT_INTERNAL
