"""Deterministic seed derivation.

Python's builtin hash() is salted per process, so worker seeds are derived
from blake2b over a canonical textual key instead.  Every random decision in
the miner flows from one of these generators, keyed by (seed, view,
attribute, restart, role), which is what makes the output independent of the
thread count and of scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stable_seed(*parts) -> int:
    """Collapse a tuple of ints/strings into a reproducible 64-bit seed."""
    key = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def rng_for(*parts) -> np.random.Generator:
    return np.random.default_rng(stable_seed(*parts))
