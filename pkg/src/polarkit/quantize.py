"""Fixed-point arithmetic models: quantized LLRs, saturating adds, metric rebasing.

Default widths: 6-bit LLRs (1 fractional bit), 8-bit path penalties, 7-bit
sorting keys. LLRs live in a symmetric two's-complement range and saturate;
penalties are unsigned and never wrap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuantConfig:
    """Bit widths for the quantized decode path.

    q_bits/q_frac describe the LLR format (raw integers scaled by 2^-q_frac),
    m_bits the stored penalty width, s_bits the width the sorter compares
    (penalties keep full m_bits precision; only the comparison drops the
    m_bits - s_bits least significant bits). input_scale multiplies channel
    LLRs before quantization.
    """

    q_bits: int = 6
    q_frac: int = 1
    m_bits: int = 8
    s_bits: int = 7
    input_scale: float = 1.0

    def __post_init__(self):
        if self.q_bits < 2:
            raise ValueError(f"q_bits must be >= 2, got {self.q_bits}")
        if self.q_frac < 0:
            raise ValueError(f"q_frac must be >= 0, got {self.q_frac}")
        if not 1 <= self.s_bits <= self.m_bits:
            raise ValueError(
                f"need 1 <= s_bits <= m_bits, got s_bits={self.s_bits} m_bits={self.m_bits}")
        if not self.input_scale > 0:
            raise ValueError(f"input_scale must be > 0, got {self.input_scale}")

    @property
    def llr_limit(self) -> int:
        """Largest representable raw LLR magnitude (symmetric range)."""
        return (1 << (self.q_bits - 1)) - 1

    @property
    def penalty_limit(self) -> int:
        """Largest representable penalty (saturation value)."""
        return (1 << self.m_bits) - 1

    @property
    def sort_shift(self) -> int:
        """LSBs dropped from penalties when forming sort keys."""
        return self.m_bits - self.s_bits


def quantize_llr(x, cfg: QuantConfig):
    """Round x * 2^q_frac half away from zero and saturate to the raw range."""
    x = np.asarray(x, dtype=np.float64)
    scaled = x * cfg.input_scale * (1 << cfg.q_frac)
    raw = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    out = np.clip(raw, -cfg.llr_limit, cfg.llr_limit).astype(np.int64)
    return out if out.ndim else int(out)


def llr_value(raw, cfg: QuantConfig):
    """Real value represented by a raw quantized LLR."""
    return np.asarray(raw, dtype=np.float64) / (1 << cfg.q_frac)


def sat_add(a, b, lo, hi):
    """a + b clamped to [lo, hi]; works on scalars and arrays alike."""
    s = np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)
    out = np.clip(s, lo, hi)
    return out if out.ndim else int(out)


def sat_add_llr(a, b, cfg: QuantConfig):
    return sat_add(a, b, -cfg.llr_limit, cfg.llr_limit)


def sat_add_penalty(a, b, cfg: QuantConfig):
    return sat_add(a, b, 0, cfg.penalty_limit)


def normalize_penalties(penalties):
    """Rebase survivor penalties so the smallest becomes 0 (rank preserving)."""
    pen = np.asarray(penalties)
    if pen.size == 0:
        return pen.copy()
    return pen - pen.min()
