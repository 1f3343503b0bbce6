"""Reproducible random streams.

Two flavours are used.  Per-trial ``numpy.random.Generator`` streams are keyed
by ``(seed, trial, tag)`` through ``SeedSequence`` so a trial's draws do not
depend on scheduling order.  Inside the compiled kernels, draws that must be
reproducible across different schedulers (random anyon moves) come from a
counter-based splitmix64 hash of ``(key, step, site, salt)``.
"""

from __future__ import annotations

import hashlib
import os

import numba as nb
import numpy as np

DEFAULT_SEED_ENV = "MSGDECODER_SEED"

_TAGS = {
    "noise": 1,
    "decoder": 2,
    "scheduler": 3,
    "messages": 4,
    "cluster": 5,
    "asep": 6,
    "erosion": 7,
}


def default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "12345"))


def tag_code(tag: str) -> int:
    if tag in _TAGS:
        return _TAGS[tag]
    return int.from_bytes(hashlib.sha256(tag.encode()).digest()[:4], "little")


def stream(seed: int, trial: int = 0, tag: str = "noise") -> np.random.Generator:
    """Independent generator for one (seed, trial, purpose) triple."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial), tag_code(tag)])
    return np.random.Generator(np.random.Philox(ss))


def key(seed: int, trial: int = 0, tag: str = "decoder") -> int:
    """63-bit key for the counter-based hash used inside kernels (fits a signed int64)."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial), tag_code(tag)])
    return int(ss.generate_state(1, dtype=np.uint64)[0]) >> 1


@nb.njit(cache=True, inline="always")
def splitmix64(x):
    x = (x + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = x
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@nb.njit(cache=True)
def hash_u64(k, step, site, salt):
    h = splitmix64(np.uint64(k))
    h = splitmix64(h ^ np.uint64(step))
    h = splitmix64(h ^ np.uint64(site))
    return splitmix64(h ^ np.uint64(salt))


@nb.njit(cache=True)
def hash_uniform(k, step, site, salt):
    return float(hash_u64(k, step, site, salt) >> np.uint64(11)) * (1.0 / 9007199254740992.0)
