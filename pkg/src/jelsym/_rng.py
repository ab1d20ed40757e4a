"""Seeded, splittable random streams."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError

_U64 = 2**64


def _check_u64(value, name):
    value = int(value)
    if not 0 <= value < _U64:
        raise InputError(f"{name} must be a 64-bit unsigned integer, got {value}")
    return value


@dataclass(frozen=True)
class RngStream:
    """Identifies one independent stream ``(seed, stream_id)``.

    Streams are derived with :class:`numpy.random.SeedSequence` spawn keys,
    so draws depend only on the pair and never on scheduling.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", _check_u64(self.seed, "seed"))
        object.__setattr__(self, "stream_id", _check_u64(self.stream_id, "stream_id"))

    def generator(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng):
    """Accept an :class:`RngStream`, a ``Generator`` or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(rng).generator()


def derive_seed(seed, *key):
    """A 64-bit seed deterministically derived from ``seed`` and ``key``."""
    ss = np.random.SeedSequence(_check_u64(seed, "seed"), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
