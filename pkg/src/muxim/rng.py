"""Deterministic random-stream derivation.

Every randomized routine in the package draws from a stream derived from a
64-bit master seed plus an integer key path (sample index, layer index,
task id, ...).  Results are therefore reproducible for a fixed master seed
and invariant to how work is split across workers: a unit of work always
derives its stream from its own key, never from shared RNG state.
"""

from __future__ import annotations

import random

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, *key: int) -> int:
    """Mix a master seed and an integer key path into a 64-bit stream seed.

    splitmix64-style finalizer applied per component; cheap enough to call
    once per Monte Carlo sample.
    """
    h = (master ^ 0x9E3779B97F4A7C15) & _MASK64
    for part in key:
        h = (h ^ (part & _MASK64)) & _MASK64
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    # finalize once more so a trailing zero key differs from no key
    h = (h * 0xBF58476D1CE4E5B9) & _MASK64
    h ^= h >> 31
    return h


def derive_rng(master: int, *key: int) -> random.Random:
    """Fresh generator for the stream identified by (master, *key)."""
    return random.Random(derive_seed(master, *key))
