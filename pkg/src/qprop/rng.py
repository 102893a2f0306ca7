"""Seed derivation and random streams.

Every random draw in the package comes from a PCG64 generator (numpy's
``numpy.random.PCG64``) seeded with a 64-bit integer. Child seeds are derived
by hashing ``(parent_seed, *key)`` with BLAKE2b, so a stream is identified by
its parent seed plus a tuple of labels and the result does not depend on
platform, process, or call order.
"""
from __future__ import annotations

import hashlib
import struct

import numpy as np

MASK64 = (1 << 64) - 1


def _encode(part) -> bytes:
    if isinstance(part, bool):
        return b"b" + (b"1" if part else b"0")
    if isinstance(part, int):
        return b"i" + str(part).encode()
    if isinstance(part, float):
        return b"f" + struct.pack("<d", part)
    if isinstance(part, bytes):
        return b"y" + part
    if isinstance(part, (tuple, list)):
        return b"(" + b",".join(_encode(p) for p in part) + b")"
    return b"s" + str(part).encode()


def derive_seed(seed: int, *key) -> int:
    """Return the 64-bit child seed of ``seed`` for the stream label ``key``."""
    h = hashlib.blake2b(digest_size=8)
    h.update(_encode(int(seed) & MASK64))
    for part in key:
        h.update(b"|")
        h.update(_encode(part))
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: int, *key) -> np.random.Generator:
    """A PCG64 generator for ``seed`` (optionally split by ``key``)."""
    if key:
        seed = derive_seed(seed, *key)
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))
