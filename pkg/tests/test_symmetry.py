import math

import numpy as np
import pytest

from geowl.errors import DegenerateCloud, InvalidCloud, NegativeRadicand, ZeroMass
from geowl.models.counterexample import PolyhedronKind
from geowl.models.point_cloud import PointCloud, Quantizer
from geowl.models.refinement import Coloring, ModelKind, RefineConfig
from geowl.models.symmetry import MassFunction
from geowl.services import geometry, refine
from geowl.services.polyhedra import polyhedron_vertices
from geowl.services.symmetry import (
    SCAN_PRESETS,
    _clamp,
    a_symmetry_test,
    center_center_distance,
    classify_symmetry,
    count_centers_indicator,
    node_center_distance,
    symmetry_scan,
)

Q9 = Quantizer(9)


def witness_cloud() -> PointCloud:
    """𝒞-对称但非 𝒟-对称: 单位圆上三点加 (±1, 0, 0)"""
    angles = np.radians([90.0, 210.0, 330.0])
    ring = np.column_stack([np.cos(angles), np.sin(angles), np.zeros(3)])
    return PointCloud(np.vstack([ring, [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]]))


class TestASymmetry:
    def test_single_class_is_symmetric(self, generic_cloud):
        symmetric, deviation = a_symmetry_test(generic_cloud, Coloring.uniform(generic_cloud.n), 1e-9)
        assert symmetric
        assert deviation == 0.0

    def test_distinct_classes(self, generic_cloud):
        coloring = Coloring(tuple(range(generic_cloud.n)))
        symmetric, deviation = a_symmetry_test(generic_cloud, coloring, 1e-6)
        expected = np.max(np.linalg.norm(generic_cloud.coords - generic_cloud.coords.mean(axis=0), axis=1))
        assert not symmetric
        assert math.isclose(deviation, float(expected), rel_tol=1e-12)
        assert not count_centers_indicator(generic_cloud, coloring, 1e-6)

    def test_size_mismatch(self, generic_cloud):
        with pytest.raises(ValueError):
            a_symmetry_test(generic_cloud, Coloring.uniform(3), 1e-6)


class TestClassify:
    @pytest.mark.parametrize("kind", list(PolyhedronKind), ids=lambda k: k.value)
    def test_platonic_solids_are_d_symmetric(self, kind):
        report = classify_symmetry(polyhedron_vertices(kind), Q9, 1e-6)
        assert report.d_symmetric and report.c_symmetric
        assert report.k_classes_d == 1

    def test_generic_cloud_is_asymmetric(self, generic_cloud):
        report = classify_symmetry(generic_cloud, Q9, 1e-6)
        assert not report.c_symmetric
        assert not report.d_symmetric
        assert report.k_classes_c == generic_cloud.n

    def test_c_without_d(self):
        report = classify_symmetry(witness_cloud(), Q9, 1e-6)
        assert report.c_symmetric
        assert not report.d_symmetric
        assert report.k_classes_c == 1
        assert report.k_classes_d == 3
        assert report.d_deviation > 0.1

    def test_report_payload(self, generic_cloud):
        payload = classify_symmetry(generic_cloud, Q9, 1e-6).to_dict()
        assert payload["tolerances"] == {"r": 9, "eps": 1e-6}
        assert payload["max_center_deviation"] == max(payload["c_deviation"], payload["d_deviation"])

    def test_random_clouds_are_rarely_symmetric(self, rng):
        clouds = [PointCloud(rng.normal(size=(int(rng.integers(4, 12)), 3))) for _ in range(20)]
        assert not any(classify_symmetry(cloud, Q9, 1e-6).d_symmetric for cloud in clouds)


class TestCenterFormulas:
    def test_uniform_mass_matches_geometry(self, generic_cloud):
        coloring = Coloring.uniform(generic_cloud.n)
        computed = node_center_distance(generic_cloud, coloring, MassFunction.uniform())
        np.testing.assert_allclose(computed, geometry.centroid_distances(generic_cloud), atol=1e-9)

    def test_indicator_mass_matches_geometry(self, generic_cloud):
        coloring = Coloring((1, 1, 1, 2, 2, 3, 3, 3))
        computed = node_center_distance(generic_cloud, coloring, MassFunction.indicator(3))
        center = generic_cloud.coords[[5, 6, 7]].mean(axis=0)
        expected = np.linalg.norm(generic_cloud.coords - center, axis=1)
        np.testing.assert_allclose(computed, expected, atol=1e-9)

    def test_center_center(self, generic_cloud):
        coloring = Coloring((1, 1, 1, 2, 2, 3, 3, 3))
        computed = center_center_distance(
            generic_cloud, coloring, MassFunction.uniform(), MassFunction.indicator(2)
        )
        expected = np.linalg.norm(generic_cloud.coords.mean(axis=0) - generic_cloud.coords[[3, 4]].mean(axis=0))
        assert abs(computed - float(expected)) < 1e-9

    def test_same_center(self, generic_cloud):
        coloring = Coloring.uniform(generic_cloud.n)
        distance = center_center_distance(generic_cloud, coloring, MassFunction.uniform(), MassFunction.uniform())
        assert distance < 1e-6

    def test_zero_mass(self, generic_cloud):
        with pytest.raises(ZeroMass):
            node_center_distance(generic_cloud, Coloring.uniform(generic_cloud.n), MassFunction.indicator(42))

    def test_negative_radicand(self):
        with pytest.raises(NegativeRadicand):
            _clamp(np.array([1.0, -0.5]), 1.0)
        np.testing.assert_array_equal(_clamp(np.array([1.0, -1e-15]), 1.0), [1.0, 0.0])

    def test_d_classes_share_center_distance(self):
        cloud = witness_cloud()
        coloring = refine.stable_d_coloring(cloud, RefineConfig())
        distances = node_center_distance(cloud, coloring, MassFunction.uniform())
        for members in coloring.classes().values():
            values = [distances[i] for i in members]
            assert max(values) - min(values) < 1e-9


class TestScan:
    def _dataset(self, rng):
        clouds = [polyhedron_vertices(PolyhedronKind.CUBE, 3.0), witness_cloud()]
        clouds += [PointCloud(rng.normal(size=(6, 3))) for _ in range(3)]
        # 近似对称: 立方体加微小噪声
        noisy = polyhedron_vertices(PolyhedronKind.CUBE).coords + rng.normal(scale=1e-4, size=(8, 3))
        clouds.append(PointCloud(noisy))
        return clouds

    def test_monotone_in_eps(self, rng):
        table = symmetry_scan(self._dataset(rng), Quantizer(2), [1e-6, 1e-4, 1e-2, 1e-1, 2.0])
        previous_c = previous_d = -1.0
        for row in table.rows:
            assert row.proportion_d <= row.proportion_c
            assert row.proportion_c >= previous_c and row.proportion_d >= previous_d
            previous_c, previous_d = row.proportion_c, row.proportion_d
        assert table.rows[-1].proportion_c == 1.0

    def test_exact_symmetry_counted(self, rng):
        table = symmetry_scan(self._dataset(rng), Quantizer(2), [1e-6])
        row = table.rows[0]
        # 立方体 𝒟-对称; 见证点云 𝒞-对称
        assert row.proportion_d >= 1 / 6
        assert row.proportion_c >= 2 / 6

    def test_skips_degenerate(self, rng):
        dataset = [PointCloud(np.zeros((3, 3))), polyhedron_vertices(PolyhedronKind.OCTAHEDRON)]
        table = symmetry_scan(dataset, Quantizer(2), [1e-6])
        assert table.n_skipped == 1
        assert table.skipped_indices == (0,)
        assert table.rows[0].proportion_d == 1.0

    def test_empty_dataset(self):
        with pytest.raises(InvalidCloud):
            symmetry_scan([], Quantizer(2), [1e-6])

    def test_threads(self, rng):
        dataset = self._dataset(rng)
        serial = symmetry_scan(dataset, Quantizer(2), [1e-3])
        parallel = symmetry_scan(dataset, Quantizer(2), [1e-3], threads=3)
        assert serial == parallel

    def test_presets(self):
        assert SCAN_PRESETS["qm9"].decimals == 2
        assert SCAN_PRESETS["modelnet"].decimals == 1


def test_rescale_degenerate():
    with pytest.raises(DegenerateCloud):
        geometry.rescale_unit(PointCloud(np.zeros((2, 3))))


class TestAcceptance:
    def test_generic_clouds_are_never_symmetric(self):
        rng = np.random.default_rng(7)
        quantizer = Quantizer(6)
        symmetric = 0
        for _ in range(1000):
            cloud = geometry.rescale_unit(PointCloud(rng.normal(size=(8, 3))))
            report = classify_symmetry(cloud, quantizer, 1e-6)
            symmetric += report.c_symmetric or report.d_symmetric
        assert symmetric == 0

    def test_equilateral_triangle_is_identified(self, cfg):
        height = math.sqrt(3) / 2
        triangle = PointCloud([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, height, 0.0]])
        report = classify_symmetry(triangle, Q9, 1e-6)
        assert report.c_symmetric and report.d_symmetric

        rng = np.random.default_rng(11)
        others = [PointCloud(rng.normal(size=(3, 3))) for _ in range(100)]
        assert refine.identifies(triangle, others, ModelKind.D, cfg) == []

    def test_center_formulas_on_random_masses(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(3, 9))
            cloud = PointCloud(rng.normal(size=(n, 3)))
            coloring = Coloring(tuple(int(c) for c in rng.integers(0, 3, size=n)))
            first = MassFunction({c: float(rng.uniform(0.5, 2.0)) for c in range(3)})
            second = MassFunction({c: float(rng.uniform(0.5, 2.0)) for c in range(3)})

            def center(mass):
                weights = np.array(mass.node_masses(coloring))
                return weights @ cloud.coords / weights.sum()

            expected = np.linalg.norm(cloud.coords - center(first), axis=1)
            np.testing.assert_allclose(node_center_distance(cloud, coloring, first), expected, atol=1e-9)
            gap = float(np.linalg.norm(center(first) - center(second)))
            assert abs(center_center_distance(cloud, coloring, first, second) - gap) < 1e-9
