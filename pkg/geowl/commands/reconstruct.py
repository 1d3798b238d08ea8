import argparse

from geowl.commands.common import CommandResult, build_report
from geowl.config import get_logger, log_function_call
from geowl.config.settings import RunConfig
from geowl.models.point_cloud import SymmetryGroup
from geowl.services import cloud_io
from geowl.services.reconstruct import complete_invariant, default_anchors, reconstruct_cloud

logger = get_logger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("reconstruct", parents=parents, help="由三角距离编码重建坐标")
    parser.add_argument(
        "--group", choices=[group.value for group in SymmetryGroup], default="e3", help="重建所在的群"
    )
    parser.add_argument("--eps", type=float, help="规范形式使用的 𝒞 对称容差 ε")
    parser.add_argument("--decimals", "--r", dest="decimals", type=int, help="量化小数位 r")
    parser.add_argument("file", help="XYZ 或 JSON 点云文件")
    parser.set_defaults(handler=run)


@log_function_call(logger)
def run(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    """锚点取几何中心与最远节点; 另附 𝒞-非对称点云的规范形式"""
    group = SymmetryGroup(args.group)
    results = []
    for index, cloud in enumerate(cloud_io.load_clouds(args.file)):
        c1, c2 = default_anchors(cloud)
        result = reconstruct_cloud(cloud, c1, c2, group)
        canonical = complete_invariant(cloud, config.quantizer, config.eps)
        logger.info(f"[{index}] 重建完成, residual={result.residual_rmsd}")
        results.append(
            {
                "index": index,
                "n": cloud.n,
                "anchors": [c1.tolist(), c2.tolist()],
                **result.to_dict(),
                "canonical_form": None if canonical is None else canonical.tolist(),
            }
        )
    return CommandResult(build_report("reconstruct", config, file=args.file, group=group.value, results=results))
