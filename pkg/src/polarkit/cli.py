"""Command-line front door for the simulator.

Runs sweeps in-process by default; with --server it acts as a thin client
posting the same configuration to a running polarkit service.
"""

from __future__ import annotations

import argparse
import sys

from .quantize import QuantConfig
from .simulate import (DECODERS, DEFAULT_DECISION_CYCLES, PointResult, SimConfig,
                       SimResult, emit_csv, latency_cycles, run_sweep)


def _snr_range(text: str):
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR range {text!r}") from None
    if len(vals) == 1:
        return vals[0], vals[0], 1.0
    if len(vals) == 3:
        return vals[0], vals[1], vals[2]
    raise argparse.ArgumentTypeError(
        f"SNR range must be START:STOP:STEP (or a single value), got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polarkit",
        description="Polar code FER/BER Monte Carlo simulator "
                    "(SC / SCL / multi-bit SCL decoders).")
    ap.add_argument("--n", type=int, default=1024, help="code length (power of two)")
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--rate", type=float, default=None, help="code rate p/n (default 0.5)")
    group.add_argument("--info-bits", type=int, default=None, help="info bit count p")
    ap.add_argument("--frozen-file", default=None,
                    help="text file with one 0-based frozen index per line")
    ap.add_argument("--decoder", choices=DECODERS, default="scl-multibit")
    ap.add_argument("--list", dest="list_size", type=int, default=4, metavar="L",
                    help="list size")
    ap.add_argument("--kbits", type=int, default=2, metavar="K",
                    help="block exponent: decide 2^K bits per step")
    ap.add_argument("--snr", type=_snr_range, default=(1.0, 3.0, 0.5),
                    metavar="START:STOP:STEP", help="Eb/N0 sweep in dB")
    ap.add_argument("--max-frames", type=int, default=10000)
    ap.add_argument("--min-errors", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--quantize", choices=("float", "fixed"), default="float")
    ap.add_argument("--q-bits", type=int, default=6, help="LLR width (fixed mode)")
    ap.add_argument("--q-frac", type=int, default=1, help="LLR fractional bits")
    ap.add_argument("--m-bits", type=int, default=8, help="path metric width")
    ap.add_argument("--sort-width", type=int, default=7,
                    help="bits compared when sorting metrics (fixed mode)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None, metavar="FILE",
                    help="CSV destination (default: stdout)")
    ap.add_argument("--latency-model", action="store_true",
                    help="print the analytic cycle-count table for --n and exit")
    ap.add_argument("--server", default=None, metavar="URL",
                    help="POST the sweep to a running polarkit service instead "
                         "of simulating locally")
    return ap


def _print_latency_table(n: int) -> None:
    print(f"decode latency model, n={n}, {DEFAULT_DECISION_CYCLES} cycles per decision step")
    print("K\tbits/step\tsteps\tcycles")
    k = 0
    while (1 << k) <= n:
        blocks = n >> k
        print(f"{k}\t{1 << k}\t{blocks}\t{latency_cycles(n, k)}")
        k += 1


def _remote_sweep(cfg: SimConfig, server: str) -> SimResult:
    import httpx

    payload = {
        "n": cfg.n, "info_bits": cfg.info_bits, "rate": cfg.rate,
        "design_z": cfg.design_z, "decoder": cfg.decoder,
        "list_size": cfg.list_size, "block_exponent": cfg.block_exponent,
        "quantize": cfg.quantize,
        "q_bits": cfg.quant.q_bits, "q_frac": cfg.quant.q_frac,
        "m_bits": cfg.quant.m_bits, "s_bits": cfg.quant.s_bits,
        "snr_start": cfg.snr_start, "snr_stop": cfg.snr_stop, "snr_step": cfg.snr_step,
        "max_frames": cfg.max_frames, "min_errors": cfg.min_errors,
        "seed": cfg.seed, "workers": cfg.workers,
    }
    resp = httpx.post(server.rstrip("/") + "/simulate", json=payload, timeout=None)
    resp.raise_for_status()
    points = tuple(PointResult(**row) for row in resp.json()["points"])
    return SimResult(points=points)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.latency_model:
            _print_latency_table(args.n)
            return 0
        start, stop, step = args.snr
        cfg = SimConfig(
            n=args.n, info_bits=args.info_bits, rate=args.rate,
            frozen_file=args.frozen_file, decoder=args.decoder,
            list_size=args.list_size, block_exponent=args.kbits,
            quantize=args.quantize,
            quant=QuantConfig(q_bits=args.q_bits, q_frac=args.q_frac,
                              m_bits=args.m_bits, s_bits=args.sort_width),
            snr_start=start, snr_stop=stop, snr_step=step,
            max_frames=args.max_frames, min_errors=args.min_errors,
            seed=args.seed, workers=args.workers,
        )
        if args.server:
            result = _remote_sweep(cfg, args.server)
        else:
            result = run_sweep(cfg)
    except ValueError as exc:
        print(f"polarkit: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.out is None:
            emit_csv(result, sys.stdout)
        else:
            emit_csv(result, args.out)
    except OSError as exc:
        print(f"polarkit: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
