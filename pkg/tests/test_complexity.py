import time

import numpy as np
import pytest

from geowl.models.point_cloud import PointCloud
from geowl.models.refinement import RefineConfig
from geowl.services.refine import geongnn_fingerprint

# 与 scripts/benchmark/complexity_envelope.py 的上限一致
TIME_LIMIT_N100 = 5.0


@pytest.mark.slow
def test_geongnn_hundred_points_within_limit():
    cloud = PointCloud(np.random.default_rng(100).normal(size=(100, 3)))
    cfg = RefineConfig(threads=1)

    start_time = time.perf_counter()
    fp = geongnn_fingerprint(cloud, cfg)
    elapsed = time.perf_counter() - start_time

    assert len(fp.digest) == 32
    assert elapsed < TIME_LIMIT_N100, f"n=100 用时 {elapsed:.2f}秒"
