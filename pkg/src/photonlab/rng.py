"""Counter-based random streams for reproducible Monte Carlo.

Every stochastic routine in the package draws from a Philox stream keyed by
(seed, stream label).  Philox is counter-based, so the value at any position
in a stream depends only on the key and the counter, never on how many draws
other streams have made.  Scan points and trials can therefore be evaluated
in any order, or in parallel, with bit-identical results.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["stream", "label_key"]


def label_key(label: str) -> int:
    """Stable 64-bit key derived from a stream label."""
    data = label.encode("utf-8")
    hi = zlib.crc32(data)
    lo = zlib.crc32(data, 0xA5A5A5A5)
    return (hi << 32) | lo


def stream(seed: int, label: str = "") -> np.random.Generator:
    """Generator for the Philox stream identified by (seed, label)."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(label_key(label))])
    return np.random.Generator(np.random.Philox(key=key))
