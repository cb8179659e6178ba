"""Seed handling shared by every sampler.

Randomness is generated in blocks of ``rows_per_block(width)`` rows. Block ``b`` of a draw
seeded with ``seed`` uses the generator ``substream(seed, b)``, so a sample of
``count`` rows is a prefix of any longer sample with the same seed, and
splitting the work across threads never changes the result.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from dpnoise.errors import DomainError

BLOCK_ELEMENTS = 65536


def rows_per_block(width: int) -> int:
    """Rows per block for draws of ``width`` values per row; depends on width only."""
    return max(1, BLOCK_ELEMENTS // max(1, int(width)))


def substream(seed: int, index: int) -> np.random.Generator:
    """Generator for chunk ``index`` of the stream rooted at ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def blocked(
    count: int,
    seed: int,
    draw_block: Callable[[np.random.Generator, int], np.ndarray],
    width: int = 1,
    n_jobs: int = 1,
) -> np.ndarray:
    """Concatenate full blocks from ``draw_block(rng, rows)`` and trim to ``count`` rows.

    ``rows`` is always ``rows_per_block(width)``; the last block is drawn whole
    and truncated so that results do not depend on ``count``.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    rows = rows_per_block(width)
    n_blocks = -(-count // rows)

    def one(b: int) -> np.ndarray:
        return draw_block(substream(seed, b), rows)

    if n_jobs > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(one, range(n_blocks)))
    else:
        parts = [one(b) for b in range(n_blocks)]
    return np.concatenate(parts, axis=0)[:count]
