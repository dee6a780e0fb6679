"""BPSK over AWGN and channel LLR computation.

Randomness is counter-addressable: every frame owns its own generator derived
from (seed, frame index), so serial and parallel runs produce bit-identical
noise no matter how frames are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_LLR_SATURATION = 1000.0


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation per real dimension for BPSK at a given Eb/N0."""
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return math.sqrt(1.0 / (2.0 * rate * ebn0))


@dataclass(frozen=True)
class NoisePoint:
    """One operating point of the BPSK/AWGN channel."""

    ebn0_db: float
    rate: float

    @property
    def sigma(self) -> float:
        return ebn0_to_sigma(self.ebn0_db, self.rate)


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream id) pair naming one reproducible random sub-stream."""

    seed: int
    stream_id: int

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.stream_id])


def frame_rng(seed: int, frame_index: int) -> np.random.Generator:
    """Generator for one frame; draw order within a frame is part of the contract."""
    return RngStream(seed, frame_index).generator()


def bpsk_modulate(bits) -> np.ndarray:
    """Map bit 0 -> +1.0 and bit 1 -> -1.0."""
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(np.float64)


def awgn(symbols, sigma: float, rng: np.random.Generator | RngStream) -> np.ndarray:
    """Add white Gaussian noise of standard deviation sigma per sample."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    symbols = np.asarray(symbols, dtype=np.float64)
    if sigma == 0.0:
        return symbols.copy()
    if isinstance(rng, RngStream):
        rng = rng.generator()
    return symbols + sigma * rng.standard_normal(symbols.shape)


def llr_demap(y, sigma: float, saturation: float = DEFAULT_LLR_SATURATION) -> np.ndarray:
    """Channel LLRs 2*y/sigma^2 (positive favours bit 0).

    sigma = 0 yields clamped values of +-saturation so downstream fixed-point
    paths stay finite.
    """
    y = np.asarray(y, dtype=np.float64)
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return np.sign(y) * saturation
    return 2.0 * y / (sigma * sigma)
