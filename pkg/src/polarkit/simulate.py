"""Monte Carlo FER/BER harness, analytic latency model, and CSV emission.

Every frame draws its randomness from a sub-stream keyed by (seed, frame
index), and frames are scored in index order with early stopping at the exact
frame where the error budget is met. Results are therefore a pure function of
the configuration: worker count and scheduling cannot change a single byte of
the output. Frame sub-streams are reused across SNR points (common random
numbers), which lowers the variance of FER differences between points.

BER counts information-bit errors over frames * p transmitted info bits.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channel import awgn, bpsk_modulate, ebn0_to_sigma, frame_rng, llr_demap
from .code import CodeSpec, encode, expand_message
from .multibit import DecoderConfig, scl_decode_multibit
from .quantize import QuantConfig
from .sc import sc_decode, sc_decode_batch
from .scl import scl_decode_serial

DECODERS = ("sc", "scl", "scl-multibit")
DEFAULT_DECISION_CYCLES = 2
CSV_COLUMNS = ("snr_db", "frames", "frame_errors", "bit_errors",
               "fer", "ber", "fer_ci_lo", "fer_ci_hi")

_BATCH = 256   # frames scored between stopping-rule checks
_CHUNK = 32    # frames per worker task

_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SimConfig:
    """Full description of one simulation campaign."""

    n: int = 1024
    info_bits: int | None = None
    rate: float | None = None
    frozen_file: str | None = None
    design_z: float = 0.5
    decoder: str = "scl-multibit"
    list_size: int = 4
    block_exponent: int = 2
    quantize: str = "float"
    quant: QuantConfig = field(default_factory=QuantConfig)
    snr_start: float = 1.0
    snr_stop: float = 3.0
    snr_step: float = 0.5
    max_frames: int = 10000
    min_errors: int = 100
    seed: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}, got {self.decoder!r}")
        if self.quantize not in ("float", "fixed"):
            raise ValueError(f"quantize must be 'float' or 'fixed', got {self.quantize!r}")
        if self.info_bits is not None and self.rate is not None:
            raise ValueError("give info_bits or rate, not both")
        if self.snr_stop < self.snr_start:
            raise ValueError("snr_stop must be >= snr_start")
        if self.snr_step <= 0:
            raise ValueError("snr_step must be > 0")
        if self.max_frames < 1:
            raise ValueError("max_frames must be >= 1")
        if self.min_errors < 1:
            raise ValueError("min_errors must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


@dataclass(frozen=True)
class PointResult:
    """Tallies and rates for one SNR point; wall time excluded from equality."""

    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    fer_ci_lo: float
    fer_ci_hi: float
    wall_time_s: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class SimResult:
    points: tuple[PointResult, ...]


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion (valid at 0 counts)."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def latency_cycles(n: int, block_exponent: int, decision_cycles: int = DEFAULT_DECISION_CYCLES) -> int:
    """Decode latency in clock cycles for an n-bit frame deciding 2^K bits/step.

    Stage activations ahead of the decision unit contribute 2*(n/2^K) - 2
    cycles (each stage s fires 2^s times); each of the n/2^K decision steps
    adds decision_cycles for metric computation plus sorting.
    """
    if n < 1 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    if block_exponent < 0 or (1 << block_exponent) > n:
        raise ValueError(f"block exponent {block_exponent} invalid for n={n}")
    if decision_cycles < 0:
        raise ValueError(f"decision_cycles must be >= 0, got {decision_cycles}")
    blocks = n >> block_exponent
    return 2 * blocks - 2 + decision_cycles * blocks


@lru_cache(maxsize=32)
def _cached_code(n: int, info_bits: int | None, design_z: float,
                 frozen_file: str | None) -> CodeSpec:
    if frozen_file is not None:
        code = CodeSpec.from_frozen_file(n, frozen_file)
        if info_bits is not None and code.p != info_bits:
            raise ValueError(
                f"frozen file implies p={code.p}, but info_bits={info_bits}")
        return code
    return CodeSpec.construct(n, info_bits, design_z)


def build_code(cfg: SimConfig) -> CodeSpec:
    if cfg.frozen_file is not None:
        return _cached_code(cfg.n, cfg.info_bits, cfg.design_z, cfg.frozen_file)
    p = cfg.info_bits
    if p is None:
        rate = cfg.rate if cfg.rate is not None else 0.5
        p = round(rate * cfg.n)
    return _cached_code(cfg.n, p, cfg.design_z, None)


def _decode_fn(cfg: SimConfig, code: CodeSpec):
    quant = cfg.quant if cfg.quantize == "fixed" else None
    if cfg.decoder == "sc":
        return lambda llrs: sc_decode(code, llrs, quant=quant)
    if cfg.decoder == "scl":
        return lambda llrs: scl_decode_serial(code, llrs, cfg.list_size, quant=quant)
    dec_cfg = DecoderConfig(list_size=cfg.list_size,
                            block_exponent=cfg.block_exponent, quant=quant)
    return lambda llrs: scl_decode_multibit(code, llrs, dec_cfg)


def _run_frames(cfg: SimConfig, ebn0_db: float, start: int, stop: int) -> list[tuple[int, int]]:
    """Score frames [start, stop); returns (frame_error, bit_errors) per frame."""
    code = build_code(cfg)
    sigma = ebn0_to_sigma(ebn0_db, code.rate)
    count = stop - start
    sent = np.empty((count, code.n), dtype=np.uint8)
    llrs = np.empty((count, code.n), dtype=np.float64)
    for i, idx in enumerate(range(start, stop)):
        rng = frame_rng(cfg.seed, idx)
        info = rng.integers(0, 2, size=code.p, dtype=np.uint8)
        sent[i] = expand_message(code, info)
        y = awgn(bpsk_modulate(encode(code, sent[i])), sigma, rng)
        llrs[i] = llr_demap(y, sigma)
    if cfg.decoder == "sc":
        quant = cfg.quant if cfg.quantize == "fixed" else None
        decoded = sc_decode_batch(code, llrs, quant=quant)
    else:
        decode = _decode_fn(cfg, code)
        decoded = np.stack([decode(row) for row in llrs])
    out = []
    for i in range(count):
        nerr = int(np.count_nonzero(decoded[i] != sent[i]))
        out.append((1 if nerr else 0, nerr))
    return out


def _map_frames(cfg: SimConfig, ebn0_db: float, start: int, stop: int,
                pool: ProcessPoolExecutor | None) -> list[tuple[int, int]]:
    if pool is None:
        return _run_frames(cfg, ebn0_db, start, stop)
    futures = [pool.submit(_run_frames, cfg, ebn0_db, lo, min(lo + _CHUNK, stop))
               for lo in range(start, stop, _CHUNK)]
    out: list[tuple[int, int]] = []
    for fut in futures:
        out.extend(fut.result())
    return out


def run_point(cfg: SimConfig, ebn0_db: float,
              pool: ProcessPoolExecutor | None = None) -> PointResult:
    """Score one SNR point: frames in index order until max_frames or the
    min_errors-th frame error, whichever comes first."""
    code = build_code(cfg)
    t0 = time.perf_counter()
    frames = frame_errors = bit_errors = 0
    next_frame = 0
    while frames < cfg.max_frames and frame_errors < cfg.min_errors:
        stop = min(next_frame + _BATCH, cfg.max_frames)
        results = _map_frames(cfg, ebn0_db, next_frame, stop, pool)
        for fe, be in results:
            frames += 1
            frame_errors += fe
            bit_errors += be
            if frame_errors >= cfg.min_errors:
                break
        next_frame = stop
    ci_lo, ci_hi = wilson_interval(frame_errors, frames)
    return PointResult(
        snr_db=ebn0_db,
        frames=frames,
        frame_errors=frame_errors,
        bit_errors=bit_errors,
        fer=frame_errors / frames,
        ber=bit_errors / (frames * code.p),
        fer_ci_lo=ci_lo,
        fer_ci_hi=ci_hi,
        wall_time_s=time.perf_counter() - t0,
    )


def snr_grid(cfg: SimConfig) -> list[float]:
    count = int(math.floor((cfg.snr_stop - cfg.snr_start) / cfg.snr_step + 1e-9)) + 1
    return [cfg.snr_start + i * cfg.snr_step for i in range(count)]


def run_sweep(cfg: SimConfig, *, progress: bool = True) -> SimResult:
    """run_point over the SNR grid; progress goes to stderr."""
    pool = None
    points = []
    try:
        if cfg.workers > 1:
            pool = ProcessPoolExecutor(max_workers=cfg.workers)
        for snr in snr_grid(cfg):
            point = run_point(cfg, snr, pool)
            points.append(point)
            if progress:
                print(f"[polarkit] Eb/N0={snr:g} dB: frames={point.frames} "
                      f"frame_errors={point.frame_errors} fer={point.fer:.4e} "
                      f"({point.wall_time_s:.1f}s)", file=sys.stderr)
    finally:
        if pool is not None:
            pool.shutdown()
    return SimResult(points=tuple(points))


def emit_csv(result: SimResult, destination) -> None:
    """Write one header plus one row per SNR point.

    Column set and float formatting are fixed so identical results produce
    byte-identical files. destination is a path or an open text file.
    """
    if hasattr(destination, "write"):
        _write_csv(result, destination)
        return
    with open(destination, "w", newline="") as fh:
        _write_csv(result, fh)


def _write_csv(result: SimResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in result.points:
        writer.writerow([repr(float(p.snr_db)), p.frames, p.frame_errors, p.bit_errors,
                         repr(float(p.fer)), repr(float(p.ber)),
                         repr(float(p.fer_ci_lo)), repr(float(p.fer_ci_hi))])


def read_csv(source) -> SimResult:
    """Parse a file produced by emit_csv (wall times are not stored)."""
    if hasattr(source, "read"):
        rows = list(csv.reader(source))
    else:
        with open(source, newline="") as fh:
            rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"unrecognised CSV header: {rows[:1]}")
    points = [PointResult(snr_db=float(r[0]), frames=int(r[1]), frame_errors=int(r[2]),
                          bit_errors=int(r[3]), fer=float(r[4]), ber=float(r[5]),
                          fer_ci_lo=float(r[6]), fer_ci_hi=float(r[7]))
              for r in rows[1:]]
    return SimResult(points=tuple(points))
