"""
规范颜色 id 与指纹摘要

颜色 id 是编码字节的 64 位 blake2b 摘要, 与运行顺序无关, 因此可以跨点云直接比较.
多重集先排序再序列化, 每段输入带长度前缀, 拼接保持单射.
"""
import hashlib
import struct
from typing import Iterable, Optional, Sequence

import numpy as np

_COLOR_PERSON = b"geowl-color"
_DIGEST_PERSON = b"geowl-digest"
_DIGEST_KEY = b"geowl/fingerprint/v1"


def pack_ints(*values: int) -> bytes:
    return struct.pack(f"<{len(values)}q", *values)


def _update(hasher, tag: bytes, parts: Iterable[bytes]) -> None:
    hasher.update(struct.pack("<I", len(tag)))
    hasher.update(tag)
    for part in parts:
        hasher.update(struct.pack("<I", len(part)))
        hasher.update(part)


def color_id(tag: bytes, *parts: bytes) -> int:
    hasher = hashlib.blake2b(digest_size=8, person=_COLOR_PERSON)
    _update(hasher, tag, parts)
    return int.from_bytes(hasher.digest(), "little")


def multiset_id(tag: bytes, colors: np.ndarray) -> int:
    """无序颜色集合的 id"""
    ordered = np.sort(np.asarray(colors, dtype=np.uint64))
    return color_id(tag, pack_ints(int(ordered.shape[0])), ordered.tobytes())


def digest128(tag: bytes, header: Sequence[int], colors: np.ndarray) -> str:
    """指纹摘要: 头部整数 + 排序后的最终颜色多重集, 128 位十六进制"""
    ordered = np.sort(np.asarray(colors, dtype=np.uint64).ravel())
    hasher = hashlib.blake2b(digest_size=16, key=_DIGEST_KEY, person=_DIGEST_PERSON)
    _update(hasher, tag, (pack_ints(*header), ordered.tobytes()))
    return hasher.hexdigest()


def _as_int64(values: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(values)
    if array.dtype == np.uint64:
        # 排序只需要一个确定的全序, 按位重解释即可
        return array.view(np.int64)
    return array.astype(np.int64, copy=False)


def refine_rows(
    tag: bytes,
    prefix: np.ndarray,
    keys: Sequence[np.ndarray],
    valid: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    一轮颜色细化的批量实现

    第 row 行的新颜色 = id(prefix[row], 有效列按 keys 字典序排序后的元组多重集).
    keys 中每个数组形状 (m, k), 第一个为主排序键; valid 为 None 时所有列有效.
    """
    columns = [_as_int64(key) for key in keys]
    m, k = columns[0].shape
    sort_keys = tuple(reversed(columns))
    if valid is None:
        degrees = np.full(m, k, dtype=np.int64)
    else:
        # 无效列排到最后, 再按行截断
        sort_keys = sort_keys + ((~valid).astype(np.int64),)
        degrees = valid.sum(axis=1)
    order = np.lexsort(sort_keys, axis=-1)
    ordered = [np.take_along_axis(column, order, axis=-1) for column in columns]

    prefix_bytes = np.ascontiguousarray(prefix, dtype=np.uint64)
    out = np.empty(m, dtype=np.uint64)
    for row in range(m):
        degree = int(degrees[row])
        parts = [prefix_bytes[row : row + 1].tobytes(), pack_ints(degree)]
        parts.extend(column[row, :degree].tobytes() for column in ordered)
        out[row] = color_id(tag, *parts)
    return out
