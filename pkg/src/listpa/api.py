"""HTTP service exposing the pure calculators.

The endpoints cover the JSON-friendly surface: key-length bounds,
phase-error thresholds, pipeline simulation, and the desk-scale
verification suites.  File-based hashing stays on the CLI — shipping
secret material through an HTTP layer would defeat the point of keeping
the index off the key channel.

Run with: uvicorn listpa.api:app
"""

from __future__ import annotations

import math
from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import bounds, seclab
from .qkdsim import REPORT_FIELDS, PipelineConfig, simulate_round
from .rngstream import RandomStream

app = FastAPI(title="listpa", description="list privacy amplification calculators")


class BoundRequest(BaseModel):
    k: float
    eps_exp: float = Field(gt=0)
    list_size: int = Field(default=1, ge=1)


class BoundResponse(BaseModel):
    ell: float
    ell_clamped: int
    single_key_ell: float
    gain: float


@app.post("/bound", response_model=BoundResponse)
def bound(req: BoundRequest) -> BoundResponse:
    eps = 2.0**-req.eps_exp
    ell = bounds.qllhl_length(req.k, eps, req.list_size)
    single = bounds.qlhl_length(req.k, eps)
    return BoundResponse(
        ell=ell,
        ell_clamped=bounds.clamped_length(ell),
        single_key_ell=single,
        gain=math.log2(req.list_size),
    )


class ThresholdRequest(BaseModel):
    n_sift: int = Field(ge=1)
    e_b: float = Field(ge=0.0, le=0.5)
    eps_exp: float = Field(default=100.0, gt=0)
    log2_list: float = Field(default=0.0, ge=0.0)
    delta_coeff: float = 1.0


class ThresholdResponse(BaseModel):
    threshold: float
    key_length_at_zero_phase_error: float


@app.post("/threshold", response_model=ThresholdResponse)
def threshold(req: ThresholdRequest) -> ThresholdResponse:
    p = bounds.Bb84Params(
        n_sift=req.n_sift, e_b=req.e_b, epsilon=2.0**-req.eps_exp,
        L=None, alpha=req.log2_list / req.n_sift, delta_coeff=req.delta_coeff,
    )
    return ThresholdResponse(
        threshold=bounds.bb84_phase_threshold(p),
        key_length_at_zero_phase_error=bounds.bb84_key_length(p),
    )


class SimulateRequest(BaseModel):
    n_raw: int = Field(ge=4)
    channel: Literal["iid-flip", "intercept-resend"] = "iid-flip"
    e_b: float = Field(default=0.0, ge=0.0, le=0.5)
    sample_fraction: float = Field(default=0.1, gt=0.0, lt=1.0)
    eps_exp: float = Field(default=20.0, gt=0)
    list_size: int = Field(default=1, ge=1)
    delta_coeff: float = 1.0
    construction: Literal["ip", "toeplitz"] = "toeplitz"
    master_seed: int = 0


class SimulateResponse(BaseModel):
    n_raw: int
    n_sift: int
    e_b_est: float
    lambda_ec: int
    k: float
    ell: int
    L: int
    auth_bits: int
    net_len: int
    eps_pa: float
    eps_ec: float
    eps_auth: float
    eps_total: float
    status: str


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    cfg = PipelineConfig(
        n_raw=req.n_raw, channel=req.channel, e_b=req.e_b,
        sample_fraction=req.sample_fraction, epsilon=2.0**-req.eps_exp,
        L=req.list_size, delta_coeff=req.delta_coeff, construction=req.construction,
    )
    t = simulate_round(cfg, RandomStream(req.master_seed))
    return SimulateResponse(**{name: getattr(t, name) for name in REPORT_FIELDS})


class VerifyRequest(BaseModel):
    n: int = Field(ge=1, le=8)
    k: int = Field(ge=0)
    list_size: int = Field(default=1, ge=1)
    ell: int = Field(default=1, ge=1)
    eps: float = Field(default=0.5, gt=0, lt=1)
    construction: Literal["ip", "toeplitz"] = "ip"
    m: int = Field(default=1, ge=1, le=64)
    mode: Literal["exact", "monte-carlo"] = "exact"
    samples: int = Field(default=2000, ge=1)
    master_seed: int = 0


class VerifyResponse(BaseModel):
    status: str
    distance: float
    distance_exact: str  # rational, preserved losslessly as "p/q"
    bound: float
    smooth_k: float
    mode: str


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    try:
        src = seclab.make_syndrome_source(req.n, req.k)
        verdict = seclab.verify_qllhl(
            src, req.eps, req.list_size, req.ell, mode=req.mode,
            construction=req.construction, m=req.m, samples=req.samples,
            rng=RandomStream(req.master_seed),
        )
    except (seclab.SourceError, seclab.EnumerationError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return VerifyResponse(
        status=verdict.status,
        distance=float(verdict.distance.value),
        distance_exact=str(verdict.distance.value),
        bound=verdict.bound,
        smooth_k=verdict.smooth_k,
        mode=verdict.distance.mode,
    )


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok"}
