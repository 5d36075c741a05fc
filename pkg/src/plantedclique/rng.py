"""Counter-based randomness with documented stream splitting.

Every sampled object is driven by a Philox4x64 generator keyed by
``(seed, stream id)``, so one 64-bit instance seed fans out into independent
substreams (edge coins, clique choice, anchor choice, ...) that are
reproducible across platforms and never share state.
"""

from __future__ import annotations

import numpy as np

# Substream ids.  Adding a new consumer means adding a new id, never reusing one.
STREAM_EDGES = 0       # G(n, p) edge coins
STREAM_PLANT = 1       # choice of the planted vertex set
STREAM_ANCHOR = 2      # choice of the anchor set for neighborhood planting
STREAM_COPY = 3        # choice of the partition-obeying copy
STREAM_EXTRA_IS = 4    # choice of the extra independent set
STREAM_LOOP = 5        # per-iteration reseeding inside repetition loops

_MASK64 = (1 << 64) - 1


def substream(seed: int, stream: int, index: int = 0) -> np.random.Generator:
    """Generator for substream ``stream`` of ``seed``; ``index`` splits further."""
    key = np.array(
        [seed & _MASK64, ((stream & 0xFFFFFFFF) << 32 | (index & 0xFFFFFFFF)) & _MASK64],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def splitmix64(x: int) -> int:
    """One splitmix64 step; used to fan a master seed out into trial seeds."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def fanout_seed(master_seed: int, trial: int) -> int:
    """Deterministic per-trial seed derived from a master seed."""
    return splitmix64((master_seed & _MASK64) ^ splitmix64(trial))
