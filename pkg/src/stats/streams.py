"""
Reproducible random streams.

A stream is identified by a 64-bit master seed and a 64-bit stream id. The
generator state is derived as ``Philox(SeedSequence([seed, stream_id]))``, a
counter-based bit generator, so that replicate ``k`` of experiment ``E`` can be
reproduced on any worker without sequential draw skipping. Stream ids for
named experiments come from :func:`stream_id_for`.
"""

import hashlib
from typing import Optional, Tuple, Union

import numpy as np

MASK64 = (1 << 64) - 1

ArrayLike = Union[float, np.ndarray]
Size = Optional[Union[int, Tuple[int, ...]]]


class RngStream:
    """Single-owner random stream bound to ``(seed, stream_id)``."""

    def __init__(self, seed: int, stream_id: int):
        self.seed = seed & MASK64
        self.stream_id = stream_id & MASK64
        sequence = np.random.SeedSequence([self.seed, self.stream_id])
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def uniform(self, size: Size = None) -> ArrayLike:
        """Uniform draws on [0, 1)."""
        return self.generator.random(size)

    def exponential(self, rate: ArrayLike = 1.0, size: Size = None) -> ArrayLike:
        return exp_sample(self, rate, size)

    def poisson(self, lam: ArrayLike, size: Size = None) -> ArrayLike:
        return self.generator.poisson(lam, size)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)

    def integers(self, low: int, high: int, size: Size = None) -> ArrayLike:
        return self.generator.integers(low, high, size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def derive_stream(master_seed: int, stream_id: int) -> RngStream:
    """Derive the stream for ``(master_seed, stream_id)``.

    Identical arguments always reproduce the identical sequence; distinct
    arguments give statistically independent sequences.
    """
    return RngStream(master_seed, stream_id)


def stream_id_for(experiment: str, index: int) -> int:
    """64-bit stream id for replicate (or block) ``index`` of ``experiment``.

    The id is the little-endian value of the 8-byte BLAKE2b digest of
    ``"<experiment>:<index>"``.
    """
    key = f"{experiment}:{int(index)}".encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def exp_sample(stream: RngStream, rate: ArrayLike = 1.0, size: Size = None) -> ArrayLike:
    """Exponential draw(s) by inversion: ``-ln(1 - U) / rate``.

    ``rate`` may be an array, in which case one draw per rate is returned
    (``size`` defaults to the rate shape).

    Raises:
        ValueError: if any rate is not strictly positive.
    """
    rates = np.asarray(rate, dtype=float)
    if not np.all(rates > 0):
        raise ValueError(f"Exponential rate must be positive, got {rate}")
    if size is None and rates.ndim > 0:
        size = rates.shape
    u = stream.uniform(size)
    draws = -np.log1p(-u) / rates
    if np.ndim(draws) == 0:
        return float(draws)
    return draws
