"""
Parallel-for over independent sweep lines.

The width comes from the THREADS environment variable (default 1). Blocks
are contiguous and results are concatenated in order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from src.errors import ConfigurationError


T = TypeVar('T')


def thread_count(threads: Optional[int] = None) -> int:
    """Resolve the parallel-for width from the argument or THREADS."""
    if threads is None:
        raw = os.getenv('THREADS', '1')
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigurationError(f"Invalid THREADS: {raw}. Must be a positive integer")
    if threads < 1:
        raise ConfigurationError(f"Invalid thread count: {threads}. Must be >= 1")
    return threads


def split_blocks(n_lines: int, n_blocks: int) -> List[slice]:
    """Contiguous, nearly equal blocks covering range(n_lines)."""
    n_blocks = max(1, min(n_blocks, n_lines))
    bounds = np.linspace(0, n_lines, n_blocks + 1).round().astype(int)
    return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def map_blocks(func: Callable[[slice], T], n_lines: int, threads: Optional[int] = None) -> List[T]:
    """Apply func to every block of lines, in parallel when threads > 1."""
    width = thread_count(threads)
    blocks = split_blocks(n_lines, width)
    if width == 1 or len(blocks) == 1:
        return [func(block) for block in blocks]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(func, blocks))
