"""
子命令共用的参数, 报告与输出
"""
import argparse
import json
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from geowl import __version__
from geowl.config.settings import RunConfig
from geowl.errors import ConfigError
from geowl.models.refinement import ModelKind

EXIT_OK = 0
EXIT_NOT_DISTINGUISHED = 3

# 命令行参数名 → RunConfig 字段
_OVERRIDE_FIELDS = (
    "n_in",
    "n_out",
    "r_sub",
    "r_cutoff",
    "max_iters",
    "decimals",
    "eps",
    "eps_grid",
    "seed",
    "threads",
    "output",
    "iso_budget",
    "iso_tol",
    "search_budget",
    "pin_timestamp",
)


@dataclass
class CommandResult:
    report: Dict[str, Any]
    exit_code: int = EXIT_OK


def common_parser() -> argparse.ArgumentParser:
    """所有子命令共享的全局选项"""
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("通用选项")
    group.add_argument("--config", help="KEY=value 格式的配置文件")
    group.add_argument("--out", dest="output", help="报告输出路径, 缺省写 stdout")
    group.add_argument("--threads", type=int, help="并行线程数, 缺省取 GEOWL_THREADS")
    group.add_argument("--seed", type=int, help="随机种子")
    group.add_argument("--log-level", help="日志级别, 缺省取 GEOWL_LOG_LEVEL")
    group.add_argument(
        "--pin-timestamp",
        action="store_const",
        const=True,
        default=None,
        help="在报告中写入生成时间",
    )
    return parser


def add_refine_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n-in", type=int, help="GeoNGNN 内层轮数")
    parser.add_argument("--n-out", type=int, help="GeoNGNN 外层轮数")
    parser.add_argument("--r-sub", help="子图半径, 可写 inf")
    parser.add_argument("--r-cutoff", help="截断距离, 可写 inf")
    parser.add_argument("--max-iters", type=int, help="稳定化迭代上限")
    parser.add_argument("--decimals", "--r", dest="decimals", type=int, help="量化小数位 r")


def add_model_argument(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--model",
        required=required,
        type=ModelKind.parse,
        help="模型: " + ", ".join(kind.value for kind in ModelKind),
    )


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {name: getattr(args, name) for name in _OVERRIDE_FIELDS if getattr(args, name, None) is not None}


def build_report(command: str, config: RunConfig, **payload: Any) -> Dict[str, Any]:
    """报告统一嵌入完整有效配置; 只有显式要求时才写时间戳"""
    report: Dict[str, Any] = {
        "status": "ok",
        "command": command,
        "version": __version__,
        "config": config.to_report(),
    }
    if config.pin_timestamp:
        report["generated_at"] = datetime.now().isoformat(timespec="seconds")
    report.update(payload)
    return report


def error_report(
    command: Optional[str], error: Dict[str, Any], config: Optional[RunConfig] = None
) -> Dict[str, Any]:
    report = dict(error)
    report["command"] = command
    if config is not None:
        report["config"] = config.to_report()
    return report


def _json_default(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


def _sanitize(value: Any) -> Any:
    """JSON 不支持无穷大与 NaN, 统一写成字符串"""
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return {key: _sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(item) for item in value]
    return value


def render_report(report: Dict[str, Any]) -> str:
    return json.dumps(_sanitize(report), sort_keys=True, indent=2, ensure_ascii=False, default=_json_default)


def write_text(path: str, text: str) -> None:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")


def parse_models(value: Optional[str], default: Iterable[ModelKind]) -> list:
    if not value:
        return list(default)
    try:
        return [ModelKind.parse(item) for item in value.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc), models=value) from exc
