"""Deterministic RNG stream derivation.

All randomness in the package flows from a single integer master seed.
Independent substreams are derived as child ``SeedSequence``s keyed by a
tuple of integer/string labels, so results never depend on execution
order or on how much randomness an unrelated component consumed.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["child_rng", "child_seed"]


def _label_to_int(label: int | str) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label)
    return zlib.crc32(str(label).encode("utf-8"))


def child_seed(master_seed: int, *labels: int | str) -> np.random.SeedSequence:
    """A SeedSequence uniquely keyed by (master_seed, labels)."""
    key = tuple(_label_to_int(lb) for lb in labels)
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)


def child_rng(master_seed: int, *labels: int | str) -> np.random.Generator:
    """A fresh Generator on the stream keyed by (master_seed, labels)."""
    return np.random.Generator(np.random.PCG64(child_seed(master_seed, *labels)))
