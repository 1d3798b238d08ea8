import os
import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from geowl.models.point_cloud import PointCloud  # noqa: E402
from geowl.models.refinement import RefineConfig  # noqa: E402
from geowl.services import cloud_io  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 穷举搜索与复杂度测试, 用 -m 'not slow' 跳过")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def cfg():
    return RefineConfig()


@pytest.fixture
def generic_cloud(rng):
    """一般位置的 8 点点云, 没有非平凡对称"""
    return PointCloud(rng.normal(size=(8, 3)))


@pytest.fixture
def chiral_cloud():
    """不含镜面对称的 5 点点云"""
    return PointCloud(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.7, 0.0],
            [0.3, 0.4, 2.2],
            [-0.9, 0.6, 0.5],
        ]
    )


@pytest.fixture
def fixture_pairs():
    return cloud_io.load_pairs(str(FIXTURES / "dodecahedron_pairs.json"))


@pytest.fixture
def pair_file():
    return str(FIXTURES / "dodecahedron_pairs.json")
