"""Deterministic derivation of independent random streams from a master seed.

Every stochastic operation in the package takes either an explicit seed or a
Generator built here. Sub-streams are derived from (master seed, *keys) so that
results are pure functions of their inputs and independent of scheduling order
(`--jobs N` must be byte-identical for any N).
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key_word(key: int | str) -> int:
    """Map a label to a non-negative 64-bit entropy word."""
    if isinstance(key, str):
        digest = hashlib.blake2s(key.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big")
    value = int(key)
    if value < 0:
        raise ValueError(f"seed keys must be non-negative, got {value}")
    return value


def derive_seed(root: int, *keys: int | str) -> int:
    """Return a 64-bit sub-seed for the stream identified by keys."""
    seq = np.random.SeedSequence([_key_word(root), *(_key_word(k) for k in keys)])
    return int(seq.generate_state(1, np.uint64)[0])


def derive_rng(root: int, *keys: int | str) -> np.random.Generator:
    """Return a Generator for the stream identified by keys."""
    seq = np.random.SeedSequence([_key_word(root), *(_key_word(k) for k in keys)])
    return np.random.default_rng(seq)
