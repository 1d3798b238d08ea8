import numpy as np

from geowl.services.hashing import color_id, digest128, multiset_id, pack_ints, refine_rows


def test_color_id_is_deterministic():
    assert color_id(b"D", pack_ints(1, 2)) == color_id(b"D", pack_ints(1, 2))
    assert color_id(b"D", pack_ints(1, 2)) != color_id(b"C", pack_ints(1, 2))
    assert color_id(b"D", pack_ints(1, 2)) != color_id(b"D", pack_ints(2, 1))


def test_length_prefix_keeps_parts_apart():
    assert color_id(b"T", b"ab", b"c") != color_id(b"T", b"a", b"bc")


def test_multiset_id_ignores_order():
    colors = np.array([5, 1, 9, 1], dtype=np.uint64)
    assert multiset_id(b"M", colors) == multiset_id(b"M", colors[::-1])
    assert multiset_id(b"M", colors) != multiset_id(b"M", colors[:3])


def test_digest128_format():
    digest = digest128(b"D", [9, 4], np.array([3, 2, 1], dtype=np.uint64))
    assert len(digest) == 32
    int(digest, 16)
    assert digest == digest128(b"D", [9, 4], np.array([1, 2, 3], dtype=np.uint64))
    assert digest != digest128(b"D", [8, 4], np.array([1, 2, 3], dtype=np.uint64))


def test_large_uint64_colors():
    big = np.array([2**64 - 1, 2**63, 7], dtype=np.uint64)
    assert multiset_id(b"M", big) == multiset_id(b"M", big[[2, 0, 1]])


class TestRefineRows:
    def test_column_order_does_not_matter(self):
        prefix = np.array([1, 1], dtype=np.uint64)
        colors = np.array([[10, 20, 30], [30, 10, 20]], dtype=np.uint64)
        dist = np.array([[1, 2, 3], [3, 1, 2]], dtype=np.int64)
        out = refine_rows(b"R", prefix, [colors, dist])
        assert out[0] == out[1]

    def test_pairs_are_kept_together(self):
        prefix = np.array([1, 1], dtype=np.uint64)
        colors = np.array([[10, 20], [10, 20]], dtype=np.uint64)
        dist = np.array([[1, 2], [2, 1]], dtype=np.int64)
        out = refine_rows(b"R", prefix, [colors, dist])
        assert out[0] != out[1]

    def test_invalid_columns_are_ignored(self):
        prefix = np.array([4, 4], dtype=np.uint64)
        colors = np.array([[7, 8, 99], [7, 123, 8]], dtype=np.uint64)
        dist = np.array([[1, 1, 5], [1, 6, 1]], dtype=np.int64)
        valid = np.array([[True, True, False], [True, False, True]])
        out = refine_rows(b"R", prefix, [colors, dist], valid)
        assert out[0] == out[1]

    def test_degree_is_encoded(self):
        prefix = np.array([4, 4], dtype=np.uint64)
        colors = np.array([[7, 7], [7, 7]], dtype=np.uint64)
        dist = np.array([[1, 1], [1, 1]], dtype=np.int64)
        valid = np.array([[True, True], [True, False]])
        out = refine_rows(b"R", prefix, [colors, dist], valid)
        assert out[0] != out[1]

    def test_prefix_is_encoded(self):
        prefix = np.array([1, 2], dtype=np.uint64)
        keys = np.zeros((2, 3), dtype=np.int64)
        out = refine_rows(b"R", prefix, [keys])
        assert out[0] != out[1]
