"""HTTP service exposing encode, decode, simulation and the latency model.

Run with:  uvicorn polarkit.service:app
"""

from __future__ import annotations

from dataclasses import asdict

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .code import CodeSpec, encode, expand_message, extract_info
from .multibit import DecoderConfig, scl_decode_multibit
from .quantize import QuantConfig
from .sc import sc_decode
from .scl import scl_decode_serial
from .simulate import (DECODERS, DEFAULT_DECISION_CYCLES, SimConfig,
                       latency_cycles, run_sweep)

app = FastAPI(title="polarkit", version=__version__,
              description="Polar coding toolbox: encoder, SC/SCL/multi-bit list "
                          "decoders, and a Monte Carlo FER/BER simulator.")


class CodeParams(BaseModel):
    n: int = Field(ge=2, description="code length, power of two")
    info_bits: int | None = Field(default=None, ge=1)
    rate: float | None = Field(default=None, gt=0.0, le=1.0)
    design_z: float = Field(default=0.5, gt=0.0, lt=1.0)
    frozen_positions: list[int] | None = Field(
        default=None, description="explicit 0-based frozen indices (overrides construction)")


def _code_from(params: CodeParams) -> CodeSpec:
    if params.frozen_positions is not None:
        frozen = np.zeros(params.n, dtype=bool)
        for idx in params.frozen_positions:
            if not 0 <= idx < params.n:
                raise ValueError(f"frozen index {idx} out of range for n={params.n}")
            frozen[idx] = True
        return CodeSpec(n=params.n, p=params.n - int(frozen.sum()), frozen=frozen)
    if params.info_bits is not None:
        p = params.info_bits
    else:
        p = round((params.rate if params.rate is not None else 0.5) * params.n)
    return CodeSpec.construct(params.n, p, params.design_z)


class QuantParams(BaseModel):
    q_bits: int = 6
    q_frac: int = 1
    m_bits: int = 8
    s_bits: int = 7
    input_scale: float = 1.0

    def to_config(self) -> QuantConfig:
        return QuantConfig(q_bits=self.q_bits, q_frac=self.q_frac,
                           m_bits=self.m_bits, s_bits=self.s_bits,
                           input_scale=self.input_scale)


class ConstructResponse(BaseModel):
    n: int
    info_bits: int
    frozen_positions: list[int]


class EncodeRequest(BaseModel):
    code: CodeParams
    info_bits: list[int]


class EncodeResponse(BaseModel):
    codeword: list[int]


class DecodeRequest(BaseModel):
    code: CodeParams
    llrs: list[float]
    decoder: str = "scl-multibit"
    list_size: int = Field(default=4, ge=1)
    block_exponent: int = Field(default=2, ge=0)
    quantize: str = "float"
    quant: QuantParams = Field(default_factory=QuantParams)


class DecodeResponse(BaseModel):
    u_hat: list[int]
    info_bits: list[int]
    penalty: float


class SimulateRequest(BaseModel):
    n: int = 1024
    info_bits: int | None = None
    rate: float | None = None
    design_z: float = 0.5
    decoder: str = "scl-multibit"
    list_size: int = 4
    block_exponent: int = 2
    quantize: str = "float"
    q_bits: int = 6
    q_frac: int = 1
    m_bits: int = 8
    s_bits: int = 7
    snr_start: float = 1.0
    snr_stop: float = 3.0
    snr_step: float = 0.5
    max_frames: int = 10000
    min_errors: int = 100
    seed: int = 1
    workers: int = 1


class PointRow(BaseModel):
    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    fer_ci_lo: float
    fer_ci_hi: float
    wall_time_s: float


class SimulateResponse(BaseModel):
    points: list[PointRow]


class LatencyRow(BaseModel):
    block_exponent: int
    bits_per_step: int
    steps: int
    cycles: int


class LatencyResponse(BaseModel):
    n: int
    decision_cycles: int
    rows: list[LatencyRow]


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/construct", response_model=ConstructResponse)
def construct(params: CodeParams):
    code = _bad_request_guard(_code_from, params)
    return ConstructResponse(n=code.n, info_bits=code.p,
                             frozen_positions=np.flatnonzero(code.frozen).tolist())


@app.post("/encode", response_model=EncodeResponse)
def encode_word(req: EncodeRequest):
    def work():
        code = _code_from(req.code)
        u = expand_message(code, np.array(req.info_bits, dtype=np.uint8))
        return encode(code, u)
    x = _bad_request_guard(work)
    return EncodeResponse(codeword=x.tolist())


@app.post("/decode", response_model=DecodeResponse)
def decode_word(req: DecodeRequest):
    def work():
        code = _code_from(req.code)
        quant = req.quant.to_config() if req.quantize == "fixed" else None
        llrs = np.array(req.llrs, dtype=np.float64)
        if req.decoder == "sc":
            u_hat = sc_decode(code, llrs, quant=quant)
            penalty = 0.0
        elif req.decoder == "scl":
            hists, pens = scl_decode_serial(code, llrs, req.list_size,
                                            quant=quant, return_paths=True)
            best = int(np.argmin(pens))
            u_hat, penalty = hists[best], float(pens[best])
        elif req.decoder == "scl-multibit":
            cfg = DecoderConfig(list_size=req.list_size,
                                block_exponent=req.block_exponent, quant=quant)
            hists, pens = scl_decode_multibit(code, llrs, cfg, return_paths=True)
            best = int(np.argmin(pens))
            u_hat, penalty = hists[best], float(pens[best])
        else:
            raise ValueError(f"decoder must be one of {DECODERS}, got {req.decoder!r}")
        return u_hat, extract_info(code, u_hat), penalty
    u_hat, info, penalty = _bad_request_guard(work)
    return DecodeResponse(u_hat=u_hat.tolist(), info_bits=info.tolist(), penalty=penalty)


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest):
    def work():
        cfg = SimConfig(
            n=req.n, info_bits=req.info_bits, rate=req.rate, design_z=req.design_z,
            decoder=req.decoder, list_size=req.list_size,
            block_exponent=req.block_exponent, quantize=req.quantize,
            quant=QuantConfig(q_bits=req.q_bits, q_frac=req.q_frac,
                              m_bits=req.m_bits, s_bits=req.s_bits),
            snr_start=req.snr_start, snr_stop=req.snr_stop, snr_step=req.snr_step,
            max_frames=req.max_frames, min_errors=req.min_errors,
            seed=req.seed, workers=req.workers,
        )
        return run_sweep(cfg, progress=False)
    result = _bad_request_guard(work)
    return SimulateResponse(points=[PointRow(**asdict(p)) for p in result.points])


@app.get("/latency", response_model=LatencyResponse)
def latency(n: int = 1024, decision_cycles: int = DEFAULT_DECISION_CYCLES):
    def work():
        rows = []
        k = 0
        while (1 << k) <= n:
            rows.append(LatencyRow(block_exponent=k, bits_per_step=1 << k,
                                   steps=n >> k,
                                   cycles=latency_cycles(n, k, decision_cycles)))
            k += 1
        return rows
    return LatencyResponse(n=n, decision_cycles=decision_cycles, rows=_bad_request_guard(work))


def _bad_request_guard(fn, *args):
    try:
        return fn(*args)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None
