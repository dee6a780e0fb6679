"""Shared fixtures-by-hand for the decoder test modules: noisy frame
generation and the independent brute-force oracles the engines are checked
against."""

import numpy as np

import polarkit as pk
from polarkit import Arith, StageState


def noisy_frame(code, sigma, seed, idx):
    """(transmitted word, channel LLRs) for one seeded random frame."""
    rng = pk.frame_rng(seed, idx)
    info = rng.integers(0, 2, code.p, dtype=np.uint8)
    u = pk.expand_message(code, info)
    y = pk.awgn(pk.bpsk_modulate(pk.encode(code, u)), sigma, rng)
    return u, pk.llr_demap(y, sigma)


def replay_penalty(code, llrs, history):
    """Re-accumulate a path's penalty by forcing its bits through a fresh
    stage state, one bit at a time."""
    state = StageState(np.asarray(llrs, dtype=np.float64), depth=code.m, arith=Arith())
    total = 0.0
    for pos in range(code.n):
        s = state.stage_llrs(pos)[0, 0]
        bit = int(history[pos])
        total += pk.penalty_increment_1bit(s, bit)
        state.absorb_block(np.array([[bit]], dtype=np.uint8), pos)
    return total


def block_replay_penalty(s, alpha):
    """Brute-force block oracle in plain Python: run the last K stages bit by
    bit with the scalar sign-min and signed-add rules, accumulating
    single-bit penalties along the forced path alpha."""

    def f(a, b):
        m = min(abs(a), abs(b))
        return -m if (a < 0) != (b < 0) else m

    def xor_encode(bits):
        x = list(bits)
        half = len(x) // 2
        while half >= 1:
            for start in range(0, len(x), 2 * half):
                for j in range(start, start + half):
                    x[j] ^= x[j + half]
            half //= 2
        return x

    def rec(llrs, bits):
        if len(llrs) == 1:
            llr = llrs[0]
            disagrees = (llr < 0) != bool(bits[0])
            return abs(llr) if disagrees else 0.0
        h = len(llrs) // 2
        lam_left = [f(llrs[j], llrs[j + h]) for j in range(h)]
        total = rec(lam_left, bits[:h])
        beta = xor_encode(bits[:h])
        lam_right = [llrs[j + h] - llrs[j] if beta[j] else llrs[j + h] + llrs[j]
                     for j in range(h)]
        return total + rec(lam_right, bits[h:])

    return rec([float(v) for v in s], [int(b) for b in alpha])


def eq8_metric_increment(s, out):
    """Log-domain metric increment sum_j (s_j(1 - out_j) - delta(s_j)) with
    delta(x) = x for x >= 0 else 0."""
    return float(sum(sj * (1 - int(oj)) - max(sj, 0.0) for sj, oj in zip(s, out)))
