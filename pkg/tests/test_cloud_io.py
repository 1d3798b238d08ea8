import numpy as np
import pytest

from geowl.errors import ParseError
from geowl.models.point_cloud import PointCloud
from geowl.models.refinement import ModelKind
from geowl.models.symmetry import ScanRow, ScanTable
from geowl.services import cloud_io

WATER = """3
water
O 0.0 0.0 0.1173
H 0.0 0.7572 -0.4692
H 0.0 -0.7572 -0.4692
"""

METHANE = """5
methane
C 0.0 0.0 0.0
H 0.629 0.629 0.629
H -0.629 -0.629 0.629
H -0.629 0.629 -0.629
H 0.629 -0.629 -0.629
"""


class TestXyz:
    def test_multi_frame(self):
        clouds = cloud_io.parse_xyz(WATER + "\n" + METHANE)
        assert [cloud.n for cloud in clouds] == [3, 5]
        # 标签按文件内首次出现顺序编号: O=0, H=1, C=2
        assert clouds[0].labels == (0, 1, 1)
        assert clouds[1].labels == (2, 1, 1, 1, 1)
        assert clouds[0].coords[1, 1] == 0.7572

    def test_byte_order_mark(self):
        assert len(cloud_io.parse_xyz("\ufeff" + WATER)) == 1

    def test_empty_input(self):
        assert cloud_io.parse_xyz("") == []

    def test_bad_count(self):
        with pytest.raises(ParseError) as excinfo:
            cloud_io.parse_xyz("three\ncomment\n")
        assert excinfo.value.details["line"] == 1

    def test_truncated_frame(self):
        with pytest.raises(ParseError) as excinfo:
            cloud_io.parse_xyz("3\nwater\nO 0 0 0\nH 1 0 0\n")
        assert excinfo.value.details["line"] == 5

    def test_bad_coordinate(self):
        with pytest.raises(ParseError) as excinfo:
            cloud_io.parse_xyz("2\n\nO 0 0 0\nH 1 zero 0\n")
        assert excinfo.value.details["line"] == 4

    def test_bad_label(self):
        with pytest.raises(ParseError):
            cloud_io.parse_xyz("2\n\nO 0 0 0\nH-1 1 0 0\n")

    def test_non_finite(self):
        with pytest.raises(ParseError):
            cloud_io.parse_xyz("2\n\nO 0 0 0\nH nan 0 0\n")

    def test_single_atom_frame(self):
        with pytest.raises(ParseError) as excinfo:
            cloud_io.parse_xyz("1\n\nO 0 0 0\n")
        assert excinfo.value.details["line"] == 1

    def test_write_then_parse(self, generic_cloud):
        text = cloud_io.write_xyz([generic_cloud])
        parsed = cloud_io.parse_xyz(text)[0]
        np.testing.assert_array_equal(parsed.coords, generic_cloud.coords)


class TestJson:
    def test_lossless(self, generic_cloud):
        labeled = PointCloud(generic_cloud.coords, [3, 1, 1, 2, 0, 0, 1, 2])
        restored = cloud_io.read_json_clouds(cloud_io.write_json_clouds([labeled, generic_cloud]))
        np.testing.assert_array_equal(restored[0].coords, labeled.coords)
        assert restored[0].labels == labeled.labels
        assert restored[1].labels is None

    def test_single_object(self):
        cloud = cloud_io.read_json_clouds('{"coords": [[0, 0, 0], [1, 0, 0]]}')[0]
        assert cloud.n == 2

    def test_missing_coords(self):
        with pytest.raises(ParseError):
            cloud_io.read_json_clouds('{"points": []}')

    def test_syntax_error(self):
        with pytest.raises(ParseError) as excinfo:
            cloud_io.read_json_clouds('{\n"coords": [\n')
        assert excinfo.value.details["line"] >= 2


class TestPairFile:
    def test_fixture_contents(self, fixture_pairs):
        first = fixture_pairs[0]
        assert first.provenance.kinds == ("dodecahedron",)
        assert first.provenance.selection_left == (0, 1, 2, 3, 8, 10)
        assert first.verified_noniso is True
        assert set(first.verified_blind) == {
            ModelKind.D,
            ModelKind.GEONGNN,
            ModelKind.DIMENET_EDGE,
            ModelKind.TWOFWL_GEO,
        }
        assert sorted(pair.p1.n for pair in fixture_pairs) == [6, 8, 10, 10, 12, 14]

    def test_rewrite_is_stable(self, fixture_pairs):
        text = cloud_io.write_pair_file(fixture_pairs)
        assert cloud_io.write_pair_file(cloud_io.read_pair_file(text)) == text

    def test_wrong_format(self):
        with pytest.raises(ParseError):
            cloud_io.read_pair_file('{"format": "geowl-cloud", "clouds": []}')

    def test_unknown_model(self, fixture_pairs):
        data = cloud_io.pair_to_dict(fixture_pairs[0])
        data["certificates"]["verified_blind"] = {"schnet": True}
        with pytest.raises(ParseError):
            cloud_io.pair_from_dict(data)


def test_scan_csv():
    table = ScanTable(decimals=2, rows=(ScanRow(1e-6, 0.5, 0.25), ScanRow(0.1, 1.0, 0.75)), n_total=4)
    lines = cloud_io.scan_table_to_csv(table).splitlines()
    assert lines[0] == "eps,proportion_c,proportion_d"
    assert lines[1] == "1e-06,0.5,0.25"
    assert len(lines) == 3


class TestLoadClouds:
    def test_directory(self, tmp_path, generic_cloud):
        (tmp_path / "b.xyz").write_text(WATER, encoding="utf-8")
        (tmp_path / "a.json").write_text(cloud_io.write_json_clouds([generic_cloud]), encoding="utf-8")
        (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
        clouds = cloud_io.load_clouds(str(tmp_path))
        assert [cloud.n for cloud in clouds] == [8, 3]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            cloud_io.load_clouds(str(tmp_path / "absent.xyz"))

    def test_single_cloud(self, tmp_path):
        path = tmp_path / "two.xyz"
        path.write_text(WATER + METHANE, encoding="utf-8")
        with pytest.raises(ParseError):
            cloud_io.load_single_cloud(str(path))
