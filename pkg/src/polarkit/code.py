"""Code construction and GF(2) encoding for polar codes.

Everything here uses the natural (non-bit-reversed) ordering: the generator
matrix is the m-fold Kronecker power of [[1,0],[1,1]] with no permutation.
Positions are 0-based throughout.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def polar_transform(bits: np.ndarray) -> np.ndarray:
    """Multiply a power-of-two-length bit vector by F^{(x)log2(len)} over GF(2).

    The transform is its own inverse. Works in-place on a copy via log2(len)
    butterfly stages (stride halving from len/2 down to 1).
    """
    x = np.asarray(bits, dtype=np.uint8).copy()
    n = x.size
    if not _is_pow2(n):
        raise ValueError(f"length must be a power of two, got {n}")
    half = n // 2
    while half >= 1:
        for start in range(0, n, 2 * half):
            x[start:start + half] ^= x[start + half:start + 2 * half]
        half //= 2
    return x


def bit_reversal_permutation(n: int) -> np.ndarray:
    """Index permutation reversing the log2(n) address bits (an involution)."""
    if not _is_pow2(n):
        raise ValueError(f"length must be a power of two, got {n}")
    m = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(m):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def bec_erasure_profile(n: int, design_z: float) -> np.ndarray:
    """Per-position erasure parameters after log2(n) splitting steps.

    Starting from a single value z, each step maps a parent value to the
    child pair (2z - z^2, z^2), children stored adjacently in natural order.
    Smaller final values mark more reliable positions.
    """
    if not _is_pow2(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if not 0.0 < design_z < 1.0:
        raise ValueError(f"design_z must be in (0, 1), got {design_z}")
    z = np.array([design_z], dtype=np.float64)
    while z.size < n:
        nxt = np.empty(2 * z.size, dtype=np.float64)
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def select_info_positions(reliability: np.ndarray, p: int) -> np.ndarray:
    """Pick the p most reliable positions (smallest values).

    Ties go to the higher index, so the returned set is deterministic.
    """
    order = sorted(range(len(reliability)), key=lambda i: (reliability[i], -i))
    return np.sort(np.array(order[:p], dtype=np.int64))


def construct_frozen_set(n: int, p: int, design_z: float = 0.5) -> np.ndarray:
    """Frozen mask (True = frozen) for an (n, p) code from the erasure recursion."""
    if not _is_pow2(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if not 1 <= p <= n:
        raise ValueError(f"p must be in [1, {n}], got {p}")
    z = bec_erasure_profile(n, design_z)
    info = select_info_positions(z, p)
    frozen = np.ones(n, dtype=bool)
    frozen[info] = False
    return frozen


def load_frozen_file(path: str | os.PathLike, n: int) -> np.ndarray:
    """Read a frozen mask from a text file: one 0-based index per line,
    ascending; lines starting with '#' are ignored."""
    frozen = np.zeros(n, dtype=bool)
    prev = -1
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                idx = int(line)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not an index: {line!r}") from None
            if not 0 <= idx < n:
                raise ValueError(f"{path}:{lineno}: index {idx} out of range for n={n}")
            if idx <= prev:
                raise ValueError(f"{path}:{lineno}: indices must be strictly ascending")
            frozen[idx] = True
            prev = idx
    return frozen


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """An (n, p) polar code: length, info-bit count and frozen mask."""

    n: int
    p: int
    frozen: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not _is_pow2(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if not 1 <= self.p <= self.n:
            raise ValueError(f"p must be in [1, {self.n}], got {self.p}")
        frozen = np.asarray(self.frozen, dtype=bool)
        if frozen.shape != (self.n,):
            raise ValueError(f"frozen mask must have shape ({self.n},)")
        if int(np.count_nonzero(frozen)) != self.n - self.p:
            raise ValueError(
                f"frozen mask has {int(np.count_nonzero(frozen))} frozen positions, "
                f"expected {self.n - self.p}")
        object.__setattr__(self, "frozen", frozen)

    @classmethod
    def construct(cls, n: int, p: int, design_z: float = 0.5) -> "CodeSpec":
        return cls(n=n, p=p, frozen=construct_frozen_set(n, p, design_z))

    @classmethod
    def from_frozen_file(cls, n: int, path: str | os.PathLike) -> "CodeSpec":
        frozen = load_frozen_file(path, n)
        return cls(n=n, p=n - int(np.count_nonzero(frozen)), frozen=frozen)

    @property
    def m(self) -> int:
        """log2 of the code length (number of butterfly stages)."""
        return self.n.bit_length() - 1

    @property
    def rate(self) -> float:
        return self.p / self.n

    @property
    def info_positions(self) -> np.ndarray:
        return np.flatnonzero(~self.frozen)


def expand_message(code: CodeSpec, info: np.ndarray) -> np.ndarray:
    """Place p info bits at the non-frozen positions (ascending), zeros elsewhere."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.p,):
        raise ValueError(f"expected {code.p} info bits, got shape {info.shape}")
    if np.any(info > 1):
        raise ValueError("info bits must be 0 or 1")
    u = np.zeros(code.n, dtype=np.uint8)
    u[~code.frozen] = info
    return u


def extract_info(code: CodeSpec, u: np.ndarray) -> np.ndarray:
    """Inverse of expand_message: read the info bits out of a full word."""
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (code.n,):
        raise ValueError(f"expected length-{code.n} word, got shape {u.shape}")
    return u[~code.frozen]


def encode(code: CodeSpec, u: np.ndarray, *, bit_reversed_output: bool = False) -> np.ndarray:
    """Codeword x = u * F^{(x)m} over GF(2).

    Rejects words carrying a 1 at a frozen position. Set bit_reversed_output
    to emit the codeword in bit-reversed symbol order for interop with
    permuted-I/O implementations.
    """
    u = np.asarray(u, dtype=np.uint8)
    if u.shape != (code.n,):
        raise ValueError(f"expected length-{code.n} word, got shape {u.shape}")
    if np.any(u > 1):
        raise ValueError("word entries must be 0 or 1")
    if np.any(u[code.frozen] != 0):
        bad = np.flatnonzero(code.frozen & (u != 0))
        raise ValueError(f"frozen positions must be 0, found 1 at {bad.tolist()}")
    x = polar_transform(u)
    if bit_reversed_output:
        x = x[bit_reversal_permutation(code.n)]
    return x


def block_transform(alpha: np.ndarray, block_exponent: int) -> np.ndarray:
    """Image of a 2^K-bit hypothesis under F^{(x)K} (the small in-block encode)."""
    alpha = np.asarray(alpha, dtype=np.uint8)
    if block_exponent < 0 or alpha.shape != (1 << block_exponent,):
        raise ValueError(
            f"expected {1 << max(block_exponent, 0)} bits for exponent {block_exponent}, "
            f"got shape {alpha.shape}")
    return polar_transform(alpha)
