"""polarkit: polar code encoding, SC/SCL/multi-bit list decoding, and a
Monte Carlo FER/BER simulation harness."""

__version__ = "0.1.0"

from .channel import (NoisePoint, RngStream, awgn, bpsk_modulate, ebn0_to_sigma,
                      frame_rng, llr_demap)
from .code import (CodeSpec, bec_erasure_profile, bit_reversal_permutation,
                   block_transform, construct_frozen_set, encode, expand_message,
                   extract_info, load_frozen_file, polar_transform,
                   select_info_positions)
from .multibit import (CandidateExtension, DecoderConfig, candidate_cap,
                       dead_code_mask, expand_path, mcu_penalties,
                       scl_decode_multibit, sort_select, zero_force)
from .quantize import (QuantConfig, llr_value, normalize_penalties, quantize_llr,
                       sat_add, sat_add_llr, sat_add_penalty)
from .sc import (Arith, StageState, f_node, g_node, hard_decision, hard_decisions,
                 sc_decode, sc_decode_batch)
from .scl import penalty_increment_1bit, prune, scl_decode_serial
from .simulate import (PointResult, SimConfig, SimResult, build_code, emit_csv,
                       latency_cycles, read_csv, run_point, run_sweep, snr_grid,
                       wilson_interval)

__all__ = [
    "__version__",
    # code
    "CodeSpec", "construct_frozen_set", "select_info_positions",
    "bec_erasure_profile", "load_frozen_file", "expand_message", "extract_info",
    "encode", "polar_transform", "block_transform", "bit_reversal_permutation",
    # channel
    "NoisePoint", "RngStream", "frame_rng", "bpsk_modulate", "ebn0_to_sigma",
    "awgn", "llr_demap",
    # sc kernel
    "f_node", "g_node", "hard_decision", "hard_decisions", "StageState", "Arith",
    "sc_decode", "sc_decode_batch",
    # serial list
    "penalty_increment_1bit", "prune", "scl_decode_serial",
    # multi-bit list
    "DecoderConfig", "CandidateExtension", "candidate_cap", "mcu_penalties",
    "dead_code_mask", "expand_path", "zero_force", "sort_select",
    "scl_decode_multibit",
    # fixed point
    "QuantConfig", "quantize_llr", "llr_value", "sat_add", "sat_add_llr",
    "sat_add_penalty", "normalize_penalties",
    # simulator
    "SimConfig", "PointResult", "SimResult", "build_code", "run_point",
    "run_sweep", "snr_grid", "wilson_interval", "latency_cycles", "emit_csv",
    "read_csv",
]
