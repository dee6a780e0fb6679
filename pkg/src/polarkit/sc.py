"""LLR-based successive-cancellation kernel.

Holds the f/g processing elements, the hard-decision rule, and the stage
machinery (LLR buffers plus partial-sum feedback) that every decoder in this
package drives. Buffers carry a leading path axis so a list decoder can run
all survivors through one activation; plain SC uses a single row.

Stage s (1-based from the channel) holds n/2^s LLRs. A decode at block
exponent K activates stages 1..(m-K) and decides 2^K bits per block.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .code import bit_reversal_permutation
from .quantize import QuantConfig, quantize_llr


def f_node(a, b):
    """Min-sum check update: sign(a)sign(b)min(|a|,|b|), with sign(0) = +1."""
    a = np.asarray(a)
    b = np.asarray(b)
    m = np.minimum(np.abs(a), np.abs(b))
    out = np.where((a < 0) != (b < 0), -m, m)
    return out if out.ndim else out.item()


def g_node(a, b, u_sum, quant: QuantConfig | None = None):
    """Variable update a*(-1)^u_sum + b; saturates when a QuantConfig is given."""
    a = np.asarray(a)
    b = np.asarray(b)
    u = np.asarray(u_sum)
    out = b + a * (1 - 2 * u.astype(np.int64))
    if quant is not None:
        out = np.clip(out, -quant.llr_limit, quant.llr_limit)
    return out if out.ndim else out.item()


def hard_decision(llr) -> int:
    """0 for llr >= 0 (ties included), else 1."""
    return int(np.asarray(llr) < 0)


def hard_decisions(llrs) -> np.ndarray:
    return (np.asarray(llrs) < 0).astype(np.uint8)


@njit(cache=True)
def _f_stage(par, out):
    """out[i,j] = f(par[i,j], par[i,j+h]); a single-row par broadcasts."""
    h = out.shape[1]
    npar = par.shape[0]
    for i in range(out.shape[0]):
        ip = i if npar > 1 else 0
        for j in range(h):
            x = par[ip, j]
            y = par[ip, j + h]
            ax = -x if x < 0 else x
            ay = -y if y < 0 else y
            m = ax if ax < ay else ay
            out[i, j] = -m if (x < 0) != (y < 0) else m


@njit(cache=True)
def _g_stage(par, psum, out):
    """out[i,j] = par[i,j+h] + par[i,j]*(-1)^psum[i,j]."""
    h = out.shape[1]
    npar = par.shape[0]
    for i in range(out.shape[0]):
        ip = i if npar > 1 else 0
        for j in range(h):
            a = par[ip, j]
            b = par[ip, j + h]
            out[i, j] = b - a if psum[i, j] else b + a


@njit(cache=True)
def _g_stage_sat(par, psum, out, lim):
    h = out.shape[1]
    npar = par.shape[0]
    for i in range(out.shape[0]):
        ip = i if npar > 1 else 0
        for j in range(h):
            a = par[ip, j]
            b = par[ip, j + h]
            v = b - a if psum[i, j] else b + a
            if v > lim:
                v = lim
            elif v < -lim:
                v = -lim
            out[i, j] = v


class Arith:
    """Arithmetic mode of a decode: float64, or saturating fixed-point."""

    def __init__(self, quant: QuantConfig | None = None):
        self.quant = quant
        self.fixed = quant is not None
        self.llr_dtype = np.int64 if self.fixed else np.float64
        self.pen_dtype = np.int64 if self.fixed else np.float64

    def prepare_channel(self, llrs, n: int, bit_reversed: bool = False) -> np.ndarray:
        """Validate/permute/quantize channel LLRs; accepts one frame (n,) or a
        batch (frames, n)."""
        arr = np.asarray(llrs, dtype=np.float64)
        if arr.shape[-1:] != (n,) or arr.ndim > 2:
            raise ValueError(f"expected {n} channel LLRs per frame, got shape {arr.shape}")
        if bit_reversed:
            arr = arr[..., bit_reversal_permutation(n)]
        if self.fixed:
            return quantize_llr(arr, self.quant)
        return arr.copy()

    def g_into(self, par, psum, out):
        if self.fixed:
            _g_stage_sat(par, psum, out, self.quant.llr_limit)
        else:
            _g_stage(par, psum, out)

    def add_penalty(self, pen, delta):
        s = pen + delta
        if self.fixed:
            return np.clip(s, 0, self.quant.penalty_limit)
        return s

    def sort_key(self, pen):
        if self.fixed and self.quant.sort_shift:
            return pen >> self.quant.sort_shift
        return pen


class StageState:
    """Stage-granular LLR and partial-sum buffers for one decode in progress.

    Owned exclusively by that decode; the path axis grows/reorders via
    select(). Channel LLRs (stage 0) are shared read-only across paths.
    """

    def __init__(self, chan: np.ndarray, depth: int, arith: Arith | None = None):
        self.arith = arith if arith is not None else Arith()
        chan = np.asarray(chan)
        if chan.ndim == 1:
            chan = chan.reshape(1, -1)
        self.n = chan.shape[1]
        if depth < 0 or (self.n >> depth) << depth != self.n:
            raise ValueError(f"depth {depth} invalid for n={self.n}")
        self.depth = depth
        self.chan = chan
        # stage d occupies columns off[d] : off[d] + n/2^d, d = 1..depth
        self.off = np.zeros(depth + 2, dtype=np.int64)
        for d in range(1, depth + 1):
            self.off[d + 1] = self.off[d] + (self.n >> d)
        total = int(self.off[depth + 1])
        self.llr = np.zeros((chan.shape[0], total), dtype=self.arith.llr_dtype)
        self.psum = np.zeros((chan.shape[0], total), dtype=np.uint8)
        self.next_block = 0
        self.n_blocks = 1 << depth
        self.activations = np.zeros(depth + 1, dtype=np.int64)

    @property
    def paths(self) -> int:
        return self.llr.shape[0]

    def _llr_buf(self, d: int) -> np.ndarray:
        return self.llr[:, self.off[d]:self.off[d + 1]]

    def _psum_buf(self, d: int) -> np.ndarray:
        return self.psum[:, self.off[d]:self.off[d + 1]]

    def stage_llrs(self, block_index: int) -> np.ndarray:
        """LLRs at stage (depth) for one block, shape (paths, n/2^depth).

        Activates only the stages the schedule requires. The result is a view;
        callers must not mutate it.
        """
        if block_index != self.next_block or block_index >= self.n_blocks:
            raise ValueError(
                f"blocks must be decoded in order: expected {self.next_block} "
                f"of {self.n_blocks}, got {block_index}")
        if self.depth == 0:
            return np.broadcast_to(self.chan, (self.paths, self.n))
        if block_index == 0:
            first_g_depth = 0  # all stages run f
        else:
            trailing = (block_index & -block_index).bit_length() - 1
            first_g_depth = self.depth - trailing
        start = 1 if block_index == 0 else first_g_depth
        for d in range(start, self.depth + 1):
            parent = self.chan if d == 1 else self._llr_buf(d - 1)
            out = self._llr_buf(d)
            if d == first_g_depth:
                self.arith.g_into(parent, self._psum_buf(d), out)
            else:
                _f_stage(parent, out)
            self.activations[d] += 1
        return self._llr_buf(self.depth)

    def absorb_block(self, out_bits: np.ndarray, block_index: int) -> None:
        """Fold a decided block's encoded image into the partial sums."""
        if block_index != self.next_block:
            raise ValueError(
                f"blocks must be absorbed in order: expected {self.next_block}, "
                f"got {block_index}")
        beta = np.asarray(out_bits, dtype=np.uint8)
        if beta.shape != (self.paths, self.n >> self.depth):
            raise ValueError(
                f"expected out bits of shape {(self.paths, self.n >> self.depth)}, "
                f"got {beta.shape}")
        d = self.depth
        idx = block_index
        while d >= 1 and (idx & 1):
            left = self._psum_buf(d)
            beta = np.concatenate([left ^ beta, beta], axis=1)
            d -= 1
            idx >>= 1
        if d >= 1:
            self._psum_buf(d)[:] = beta
        self.next_block += 1

    def select(self, rows: np.ndarray) -> None:
        """Keep/duplicate paths by row index (copy-on-survive for the buffers)."""
        self.llr = self.llr[rows]
        self.psum = self.psum[rows]
        if self.chan.shape[0] > 1:
            self.chan = self.chan[rows]


def sc_decode_batch(code, channel_llrs, *, quant: QuantConfig | None = None,
                    bit_reversed: bool = False) -> np.ndarray:
    """Successive-cancellation decode of a whole (frames, n) LLR batch at once.

    Frames ride the path axis of the stage buffers; there is no interaction
    between rows, so the result row-for-row equals sc_decode on each frame.
    """
    arith = Arith(quant)
    chan = arith.prepare_channel(channel_llrs, code.n, bit_reversed)
    if chan.ndim == 1:
        chan = chan.reshape(1, -1)
    state = StageState(chan, code.m, arith)
    u = np.zeros((chan.shape[0], code.n), dtype=np.uint8)
    frozen = code.frozen
    for pos in range(code.n):
        s = state.stage_llrs(pos)
        if not frozen[pos]:
            u[:, pos] = s[:, 0] < 0
        state.absorb_block(u[:, pos:pos + 1], pos)
    return u


def sc_decode(code, channel_llrs, *, quant: QuantConfig | None = None,
              bit_reversed: bool = False) -> np.ndarray:
    """Successive-cancellation decode: frozen bits forced to 0, info bits
    hard-decided from their final-stage LLR. Equals the list decoder at L=1."""
    channel_llrs = np.asarray(channel_llrs)
    if channel_llrs.ndim != 1:
        raise ValueError(f"expected a single frame, got shape {channel_llrs.shape}")
    return sc_decode_batch(code, channel_llrs.reshape(1, -1), quant=quant,
                           bit_reversed=bit_reversed)[0]
