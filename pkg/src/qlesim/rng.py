"""Counter-based, splittable random streams.

Every stream is a Philox generator keyed by ``(seed, tag, *keys)``.  Ensembles
are cut into fixed-size chunks and each chunk gets its own key, so the samples
produced for a given index never depend on how the work was partitioned.
"""
from __future__ import annotations

import zlib

import numpy as np

CHUNK = 4096


def _tag_key(tag: str) -> int:
    return zlib.crc32(tag.encode("utf8"))


def stream(seed, tag: str = "", *keys: int) -> np.random.Generator:
    """Generator for ``(seed, tag, *keys)``.

    ``seed`` may also be a Generator, in which case it is returned unchanged
    when no tag/keys are given, or used to draw a fresh 64-bit seed otherwise.
    """
    if isinstance(seed, np.random.Generator):
        if not tag and not keys:
            return seed
        seed = int(seed.integers(0, 2**63))
    if seed is None:
        raise ValueError("seed is required (reproducibility contract)")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_tag_key(tag), *map(int, keys)))
    return np.random.Generator(np.random.Philox(ss))


def chunks(n: int, size: int = CHUNK):
    """Yield ``(chunk_index, start, stop)`` covering ``range(n)``."""
    for j, a in enumerate(range(0, n, size)):
        yield j, a, min(n, a + size)
