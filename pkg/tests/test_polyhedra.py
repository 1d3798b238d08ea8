import numpy as np
import pytest

from geowl.errors import NotCentered
from geowl.models.counterexample import PolyhedronKind
from geowl.models.point_cloud import PointCloud
from geowl.services import geometry
from geowl.services.polyhedra import (
    combine_clouds,
    layered_cloud,
    parse_kind,
    polyhedron_vertices,
    rotation_permutations,
    shell_ratios,
)


@pytest.mark.parametrize(
    "kind, count",
    [
        (PolyhedronKind.TETRAHEDRON, 4),
        (PolyhedronKind.CUBE, 8),
        (PolyhedronKind.OCTAHEDRON, 6),
        (PolyhedronKind.DODECAHEDRON, 20),
        (PolyhedronKind.ICOSAHEDRON, 12),
    ],
)
def test_vertices_on_sphere(kind, count):
    cloud = polyhedron_vertices(kind, 2.5)
    assert cloud.n == count
    np.testing.assert_allclose(np.linalg.norm(cloud.coords, axis=1), 2.5, atol=1e-12)
    np.testing.assert_allclose(geometry.centroid(cloud), 0.0, atol=1e-12)


def test_edge_length_is_uniform():
    # 正十二面体最短距离即棱长, 每个顶点恰好三条棱
    cloud = polyhedron_vertices(PolyhedronKind.DODECAHEDRON)
    dist = geometry.distance_matrix(cloud)
    shortest = np.min(dist[dist > 0])
    assert np.all(np.sum(np.isclose(dist, shortest), axis=1) == 3)


def test_bad_scale():
    with pytest.raises(ValueError):
        polyhedron_vertices(PolyhedronKind.CUBE, 0.0)


class TestCombine:
    def test_cube_and_octahedron(self):
        cloud = combine_clouds(
            polyhedron_vertices(PolyhedronKind.CUBE), polyhedron_vertices(PolyhedronKind.OCTAHEDRON), 0.5
        )
        assert cloud.n == 14
        radii = np.round(geometry.centroid_distances(cloud), 9)
        assert sorted(set(radii.tolist())) == [0.5, 1.0]

    def test_nested_cubes(self):
        cube = polyhedron_vertices(PolyhedronKind.CUBE)
        assert combine_clouds(cube, cube, 0.5).n == 16

    def test_shell_labels(self):
        cube = polyhedron_vertices(PolyhedronKind.CUBE)
        cloud = combine_clouds(cube, cube, 0.5, shell_labels=True)
        assert cloud.labels == (0,) * 8 + (1,) * 8

    def test_not_centered(self):
        cube = polyhedron_vertices(PolyhedronKind.CUBE)
        shifted = geometry.apply_rigid(cube, np.eye(3), [0.1, 0.0, 0.0])
        with pytest.raises(NotCentered):
            combine_clouds(cube, shifted, 0.5)

    def test_bad_ratio(self):
        cube = polyhedron_vertices(PolyhedronKind.CUBE)
        with pytest.raises(ValueError):
            combine_clouds(cube, cube, -1.0)


class TestKinds:
    def test_single(self):
        assert parse_kind(" Cube ") == (PolyhedronKind.CUBE,)

    def test_combination(self):
        assert parse_kind("cube+octahedron") == (PolyhedronKind.CUBE, PolyhedronKind.OCTAHEDRON)

    def test_unknown(self):
        with pytest.raises(ValueError):
            parse_kind("prism")

    def test_shell_ratios(self):
        assert shell_ratios(3, 0.5) == (1.0, 0.5, 0.25)

    def test_layered_cloud_accepts_names(self):
        cloud = layered_cloud(["cube", "octahedron"], [1.0, 0.5])
        assert isinstance(cloud, PointCloud)
        assert cloud.n == 14
        with pytest.raises(ValueError):
            layered_cloud(["cube"], [1.0, 0.5])


@pytest.mark.parametrize(
    "kinds, order",
    [
        ((PolyhedronKind.CUBE,), 24),
        ((PolyhedronKind.TETRAHEDRON,), 12),
        ((PolyhedronKind.DODECAHEDRON,), 60),
        ((PolyhedronKind.CUBE, PolyhedronKind.OCTAHEDRON), 24),
    ],
)
def test_rotation_group_order(kinds, order):
    perms = rotation_permutations(kinds)
    assert len(perms) == order
    assert tuple(range(len(perms[0]))) in perms
    assert len(set(perms)) == order
