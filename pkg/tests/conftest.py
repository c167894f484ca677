"""Shared pytest fixtures."""
from __future__ import annotations

from typing import Callable, List, Sequence

import numpy as np
import pytest

RANDOM_SEED = 20240517


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(RANDOM_SEED)


@pytest.fixture
def random_words(rng: np.random.Generator) -> Callable[[Sequence[str], int, int], List[str]]:
    """draw(symbols, count, max_length)：长度在 0..max_length 之间的随机词"""

    def draw(symbols: Sequence[str], count: int, max_length: int) -> List[str]:
        letters = list(symbols)
        out = []
        for _ in range(count):
            n = int(rng.integers(0, max_length + 1))
            out.append("".join(letters[int(i)] for i in rng.integers(0, len(letters), size=n)))
        return out

    return draw
