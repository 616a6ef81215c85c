"""Seeded random sources.

All randomness flows through :class:`numpy.random.Generator` (PCG64).
Sub-streams are derived by hashing a text label together with the parent
seed, so a stream's draws depend only on ``(seed, label)``: adding samples
or new labelled consumers never shifts the draws of existing ones.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_words(label: str) -> list[int]:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=16).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]


def derive_seed(seed: int, label: str) -> np.random.SeedSequence:
    if seed < 0:
        raise ValueError("seeds must be non-negative")
    return np.random.SeedSequence([seed & 0xFFFFFFFF, seed >> 32, *_label_words(label)])


def make_rng(seed: int, label: str = "") -> np.random.Generator:
    """Generator for the stream ``label`` under root ``seed``."""
    return np.random.Generator(np.random.PCG64(derive_seed(seed, label)))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an int seed or ``None`` (fresh entropy)."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return np.random.default_rng()
    return make_rng(int(rng))


def categorical(probs, u: float) -> int:
    """Index chosen by inverting the cumulative sum of ``probs`` at ``u``.

    ``probs`` may sum to slightly less than one; the last index absorbs the
    remainder so a draw never falls off the end.
    """
    acc = 0.0
    last = len(probs) - 1
    for i, p in enumerate(probs):
        acc += p
        if u < acc and p > 0.0:
            return i
    # remainder goes to the last positive entry
    for i in range(last, -1, -1):
        if probs[i] > 0.0:
            return i
    raise ValueError("categorical distribution has no positive mass")
