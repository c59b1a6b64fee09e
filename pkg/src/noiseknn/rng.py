"""Counter-based random streams.

Every draw is addressed by ``(seed, stream, index)``: the seed and stream id
form the 128-bit Philox key, and the Philox counter advances with the draw
index. Two generators built from the same ``(seed, stream)`` therefore emit
identical sequences, independent of what other streams were consumed.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream ids used by the samplers.
STREAM_X = 0
STREAM_Y = 1
STREAM_FLIP = 2
STREAM_EVAL = 3
STREAM_SIGNS = 4


def generator(seed: int, stream: int) -> np.random.Generator:
    key = (int(seed) & _MASK64) | ((int(stream) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(*parts: int) -> int:
    """Hash integer parts into a 64-bit seed.

    Used for per-trial seeds so that adding trials or grid points never
    changes the seed of an existing cell.
    """
    ss = np.random.SeedSequence([int(p) & _MASK64 for p in parts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
