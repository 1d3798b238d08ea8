#!/usr/bin/env python3
"""
GeoNGNN 指纹复杂度基准
在 n ∈ {25, 50, 100} 的随机点云上计时, 检查增长不超过 n³·log n 的两倍拟合容差
"""

import argparse
import json
import math
import os
import sys
import time
from typing import Any, Dict, List

import numpy as np
import psutil

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))

from geowl.config.settings import RunConfig  # noqa: E402
from geowl.models.point_cloud import PointCloud  # noqa: E402
from geowl.services.refine import geongnn_fingerprint  # noqa: E402

SIZES = (25, 50, 100)
TIME_LIMIT_N100 = 5.0
FIT_TOLERANCE = 2.0


class EnvelopeBenchmark:
    """记录每个规模的耗时与内存变化"""

    def __init__(self, repeats: int = 1):
        self.repeats = repeats
        self.results: List[Dict[str, Any]] = []
        self.process = psutil.Process()

    def measure(self, n: int, seed: int) -> Dict[str, Any]:
        rng = np.random.default_rng(seed + n)
        cloud = PointCloud(rng.normal(size=(n, 3)))
        cfg = RunConfig(threads=1).to_refine_config()

        start_memory = self.process.memory_info().rss
        best = math.inf
        for _ in range(self.repeats):
            start_time = time.perf_counter()
            geongnn_fingerprint(cloud, cfg)
            best = min(best, time.perf_counter() - start_time)
        memory_diff = self.process.memory_info().rss - start_memory

        row = {
            "n": n,
            "seconds": best,
            "memory_usage": memory_diff,
            "normalized": best / (n**3 * math.log2(n)),
        }
        self.results.append(row)
        print(f"✅ n={n}: {best:.4f}秒, 内存变化: {memory_diff / 1024 / 1024:.2f}MB")
        return row

    def verdict(self) -> Dict[str, Any]:
        normalized = [row["normalized"] for row in self.results]
        within_fit = max(normalized) <= FIT_TOLERANCE * normalized[0]
        largest = next((row for row in self.results if row["n"] == 100), None)
        within_time = largest is None or largest["seconds"] < TIME_LIMIT_N100
        return {"within_fit": within_fit, "within_time": within_time}


def print_system_info():
    print("🖥️ 系统信息")
    print("=" * 50)
    print(f"Python版本: {sys.version}")
    print(f"CPU核心数: {psutil.cpu_count()}")
    print(f"可用内存: {psutil.virtual_memory().total / 1024**3:.1f} GB")
    print("=" * 50)


def main() -> int:
    parser = argparse.ArgumentParser(description="GeoNGNN 复杂度基准")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--report", help="把结果写成 JSON 文件")
    args = parser.parse_args()

    print_system_info()
    benchmark = EnvelopeBenchmark(repeats=args.repeats)
    for n in SIZES:
        benchmark.measure(n, args.seed)

    verdict = benchmark.verdict()
    print(f"\n📊 拟合检查: {'通过' if verdict['within_fit'] else '未通过'}")
    print(f"📊 n=100 时限: {'通过' if verdict['within_time'] else '未通过'}")

    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            json.dump({"results": benchmark.results, **verdict}, f, ensure_ascii=False, indent=2)
        print(f"\n📄 详细报告已保存到: {args.report}")

    return 0 if all(verdict.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
