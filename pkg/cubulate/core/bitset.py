"""以 Python int 表示的顶点集合（第 i 位为 1 表示顶点 i 属于集合）"""
from __future__ import annotations

from typing import Iterable, Iterator, List


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> List[int]:
    return list(iter_bits(mask))


def lowest(mask: int) -> int:
    """最低位下标，空集返回 -1"""
    if not mask:
        return -1
    return (mask & -mask).bit_length() - 1


def full_mask(n: int) -> int:
    return (1 << n) - 1


def translate_mask(mask: int, mapping) -> int:
    """按下标映射搬运集合，映射值为 -1 的元素丢弃"""
    out = 0
    for i in iter_bits(mask):
        j = mapping[i]
        if j >= 0:
            out |= 1 << j
    return out


__all__ = ["mask_of", "iter_bits", "bits", "lowest", "full_mask", "translate_mask"]
