"""Serial (one bit per step) successive-cancellation list decoding.

Keeps up to L survivor paths scored by a non-negative penalty: the sum of
|LLR| over the decisions that went against the hard decision. Smallest
penalty wins, which is rank-equivalent to picking the largest log-domain
path metric. Also serves as the reference the multi-bit decoder is checked
against.

Survivor paths live as parallel arrays (decided-bit histories, penalties,
and one batched StageState) rather than per-path objects; pruning gathers
rows, which deep-copies the buffers of every survivor.
"""

from __future__ import annotations

import numpy as np

from .code import CodeSpec
from .quantize import QuantConfig, normalize_penalties
from .sc import Arith, StageState


def penalty_increment_1bit(llr, bit: int):
    """|llr| when the decided bit disagrees with the hard decision, else 0."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    if (llr < 0) != bool(bit):
        return abs(llr)
    return llr * 0  # zero of the same type


def prune(penalties, parents, bits, list_size: int) -> np.ndarray:
    """Indices of the surviving candidates, best first.

    Keeps the list_size smallest penalties (all candidates when fewer exist);
    ties resolve by (parent index, appended bit), ascending.
    """
    penalties = np.asarray(penalties)
    if penalties.size == 0:
        raise ValueError("candidate set must be non-empty")
    parents = np.asarray(parents)
    bits = np.asarray(bits)
    order = np.lexsort((bits, parents, penalties))
    return order[:min(list_size, penalties.size)]


def scl_decode_serial(code: CodeSpec, channel_llrs, list_size: int, *,
                      quant: QuantConfig | None = None, bit_reversed: bool = False,
                      return_paths: bool = False):
    """List-decode one frame, deciding a single bit per step.

    Frozen positions append 0 on every path (penalised if the LLR points the
    other way); info positions fork every path both ways and keep the
    list_size best. Returns the best final history, or all survivor
    (histories, penalties) when return_paths is set.
    """
    if list_size < 1:
        raise ValueError(f"list size must be >= 1, got {list_size}")
    channel_llrs = np.asarray(channel_llrs)
    if channel_llrs.ndim != 1:
        raise ValueError(f"expected a single frame, got shape {channel_llrs.shape}")
    arith = Arith(quant)
    chan = arith.prepare_channel(channel_llrs, code.n, bit_reversed)
    state = StageState(chan, code.m, arith)
    histories = np.zeros((1, code.n), dtype=np.uint8)
    penalties = np.zeros(1, dtype=arith.pen_dtype)
    frozen = code.frozen

    for pos in range(code.n):
        s = state.stage_llrs(pos)[:, 0]
        n_paths = s.shape[0]
        if frozen[pos]:
            penalties = arith.add_penalty(penalties, np.where(s < 0, -s, 0))
            state.absorb_block(
                np.zeros((n_paths, 1), dtype=np.uint8), pos)
            continue
        # fork every path into bit 0 and bit 1
        delta0 = np.where(s < 0, -s, 0)
        delta1 = np.where(s < 0, 0, s)
        cand_pen = np.concatenate([arith.add_penalty(penalties, delta0),
                                   arith.add_penalty(penalties, delta1)])
        cand_parent = np.concatenate([np.arange(n_paths), np.arange(n_paths)])
        cand_bit = np.repeat(np.array([0, 1], dtype=np.uint8), n_paths)
        keep = prune(cand_pen, cand_parent, cand_bit, list_size)
        parent_rows = cand_parent[keep]
        new_bits = cand_bit[keep]
        state.select(parent_rows)
        histories = histories[parent_rows]
        histories[:, pos] = new_bits
        penalties = cand_pen[keep]
        if arith.fixed:
            penalties = normalize_penalties(penalties)
        state.absorb_block(new_bits.reshape(-1, 1), pos)

    if return_paths:
        return histories, penalties
    return histories[int(np.argmin(penalties))]
