"""Multi-bit list decoding: decide 2^K bits per step directly from the
stage-(m-K) LLRs.

Each survivor expands into all 2^(2^K) block hypotheses alpha. The metric
unit scores every hypothesis in one shot from the LLR vector s:

    delta(alpha) = sum_j |s_j| * [out_j != hard_decision(s_j)],
    out = alpha * F^{(x)K},

which is the negated min-sum log-metric increment up to an offset shared by
all hypotheses of one parent. Hypotheses setting a frozen position to 1 are
zero-forced (marked dead, never selected). Survivors are the list_size
smallest total penalties across all parents; in fixed-point mode the sorter
may compare on fewer bits than the stored metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .code import CodeSpec, polar_transform
from .quantize import QuantConfig, normalize_penalties
from .sc import Arith, StageState, hard_decisions


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs of the multi-bit list decoder.

    quant = None runs in float64; a QuantConfig switches the whole decode to
    saturating fixed point (including the reduced-width sort key).
    """

    list_size: int = 1
    block_exponent: int = 0
    quant: QuantConfig | None = None

    def __post_init__(self):
        if self.list_size < 1:
            raise ValueError(f"list size must be >= 1, got {self.list_size}")
        if self.block_exponent < 0:
            raise ValueError(f"block exponent must be >= 0, got {self.block_exponent}")


@dataclass
class CandidateExtension:
    """One block hypothesis of one parent path."""

    parent: int
    alpha: np.ndarray
    out: np.ndarray
    delta: float
    penalty: float
    dead: bool = False

    @property
    def code(self) -> int:
        """Candidate code: alpha bits packed LSB-first (alpha[0] = bit 0)."""
        return int(np.dot(self.alpha, 1 << np.arange(self.alpha.size)))


def candidate_cap(cfg: DecoderConfig) -> int:
    """Worst-case candidate count per block: list_size * 2^(2^K)."""
    return cfg.list_size * (1 << (1 << cfg.block_exponent))


@lru_cache(maxsize=None)
def _tables(block_exponent: int):
    """(alpha, out) tables for all 2^(2^K) candidate codes, row = code."""
    width = 1 << block_exponent
    n_codes = 1 << width
    alpha = ((np.arange(n_codes)[:, None] >> np.arange(width)[None, :]) & 1).astype(np.uint8)
    out = np.stack([polar_transform(row) for row in alpha])
    return alpha, out


def mcu_penalties(s, block_exponent: int | None = None,
                  quant: QuantConfig | None = None) -> np.ndarray:
    """Penalty increments of all 2^(2^K) block hypotheses, indexed by code.

    The parent path metric is not included; callers add it. Fixed-point mode
    saturates each increment to the penalty range.
    """
    s = np.asarray(s)
    width = s.shape[-1] if s.ndim else 0
    if block_exponent is None:
        block_exponent = int(width).bit_length() - 1
    if s.shape != (1 << block_exponent,):
        raise ValueError(
            f"expected {1 << block_exponent} LLRs for exponent {block_exponent}, "
            f"got shape {s.shape}")
    _, out = _tables(block_exponent)
    mismatch = out != hard_decisions(s)[None, :]
    deltas = mismatch @ np.abs(s)
    if quant is not None:
        deltas = np.clip(deltas, 0, quant.penalty_limit)
    return deltas


def _mcu_deltas_batch(s: np.ndarray, block_exponent: int, arith: Arith) -> np.ndarray:
    """Per-path MCU deltas, shape (paths, 2^(2^K)).

    Uses the algebraic form delta = out . s + sum_j max(-s_j, 0), identical
    to the mismatch sum.
    """
    _, out = _tables(block_exponent)
    out_t = out.astype(s.dtype).T
    base = np.maximum(-s, 0).sum(axis=1)
    deltas = s @ out_t + base[:, None]
    if arith.fixed:
        deltas = np.clip(deltas, 0, arith.quant.penalty_limit)
    return deltas


def dead_code_mask(frozen_pattern) -> np.ndarray:
    """Which candidate codes violate the block's frozen positions."""
    frozen_pattern = np.asarray(frozen_pattern, dtype=bool)
    width = frozen_pattern.size
    packed = int(np.dot(frozen_pattern, 1 << np.arange(width)))
    codes = np.arange(1 << width)
    return (codes & packed) != 0


def expand_path(s, parent: int, parent_penalty, quant: QuantConfig | None = None):
    """All 2^(2^K) extensions of one survivor, metrics already totalled."""
    s = np.asarray(s)
    k = s.size.bit_length() - 1
    alpha, out = _tables(k)
    deltas = mcu_penalties(s, k, quant)
    arith = Arith(quant)
    totals = arith.add_penalty(np.asarray(parent_penalty), deltas)
    return [CandidateExtension(parent, alpha[c], out[c], deltas[c], totals[c])
            for c in range(alpha.shape[0])]


def zero_force(cands: list[CandidateExtension], frozen_pattern) -> list[CandidateExtension]:
    """Mark candidates whose alpha sets a frozen position; returns the list."""
    dead = dead_code_mask(frozen_pattern)
    for cand in cands:
        if dead[cand.code]:
            cand.dead = True
    return cands


def sort_select(cands: list[CandidateExtension], list_size: int,
                quant: QuantConfig | None = None) -> list[CandidateExtension]:
    """Keep the list_size best alive candidates.

    Comparison key is the full penalty, or the penalty with its lowest
    m_bits - s_bits bits dropped in fixed-point mode; stored penalties are
    never altered. Ties resolve by (parent index, candidate code).
    """
    alive = [c for c in cands if not c.dead]
    if not alive:
        raise ValueError("no alive candidate to select from")
    arith = Arith(quant)
    alive.sort(key=lambda c: (arith.sort_key(c.penalty), c.parent, c.code))
    return alive[:min(list_size, len(alive))]


def scl_decode_multibit(code: CodeSpec, channel_llrs, cfg: DecoderConfig, *,
                        bit_reversed: bool = False, return_paths: bool = False):
    """List-decode one frame deciding 2^K bits per step.

    Per block and per survivor: take the stage-(m-K) LLRs, score all
    2^(2^K) hypotheses, drop frozen violations, then select the list_size
    best across every parent and fold their encoded images back into the
    partial sums. Returns the best final history, or all survivor
    (histories, penalties) when return_paths is set.
    """
    k = cfg.block_exponent
    width = 1 << k
    if width > code.n:
        raise ValueError(
            f"block width 2^{k} = {width} does not divide code length {code.n}")
    channel_llrs = np.asarray(channel_llrs)
    if channel_llrs.ndim != 1:
        raise ValueError(f"expected a single frame, got shape {channel_llrs.shape}")
    arith = Arith(cfg.quant)
    chan = arith.prepare_channel(channel_llrs, code.n, bit_reversed)
    depth = code.m - k
    state = StageState(chan, depth, arith)
    n_blocks = code.n // width

    alpha_tab, out_tab = _tables(k)
    n_codes = alpha_tab.shape[0]
    codes = np.arange(n_codes)
    block_dead = []
    for i in range(n_blocks):
        pattern = code.frozen[i * width:(i + 1) * width]
        block_dead.append(dead_code_mask(pattern) if pattern.any() else None)

    histories = np.zeros((1, code.n), dtype=np.uint8)
    penalties = np.zeros(1, dtype=arith.pen_dtype)

    for i in range(n_blocks):
        s = state.stage_llrs(i)
        n_paths = s.shape[0]
        deltas = _mcu_deltas_batch(np.asarray(s), k, arith)
        cand_pen = arith.add_penalty(penalties[:, None], deltas)
        keys = arith.sort_key(cand_pen).ravel()
        cand_parent = np.repeat(np.arange(n_paths), n_codes)
        cand_code = np.tile(codes, n_paths)
        dead = block_dead[i]
        if dead is not None:
            alive_idx = np.flatnonzero(~np.tile(dead, n_paths))
            keys = keys[alive_idx]
            cand_parent = cand_parent[alive_idx]
            cand_code = cand_code[alive_idx]
        order = np.lexsort((cand_code, cand_parent, keys))
        keep = order[:min(cfg.list_size, keys.size)]
        parent_rows = cand_parent[keep]
        chosen = cand_code[keep]
        state.select(parent_rows)
        histories = histories[parent_rows]
        histories[:, i * width:(i + 1) * width] = alpha_tab[chosen]
        penalties = cand_pen[parent_rows, chosen]
        if arith.fixed:
            penalties = normalize_penalties(penalties)
        state.absorb_block(out_tab[chosen], i)

    if return_paths:
        return histories, penalties
    return histories[int(np.argmin(penalties))]
