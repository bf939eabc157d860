"""HTTP front end over the transform planner and RS codec."""

import numpy as np
from fastapi import FastAPI, HTTPException

from ..cost import best_factorization, count, report_table
from ..errors import CcftError
from ..gf import make_field
from ..planner import plan, plan_to_dict, prune
from ..rs import RSCodeSpec, decode as rs_decode, encode as rs_encode
from .schemas import (CodeParams, CostBody, CostRequest, CostResponse,
                      DecodeRequest, DecodeResponse, EncodeRequest,
                      EncodeResponse, PlanRequest, PlanResponse)

app = FastAPI(title="ccft", version="0.1.0")

_codes: dict[tuple, RSCodeSpec] = {}


def _get_code(params: CodeParams) -> RSCodeSpec:
    key = (params.m, params.prim_poly, params.n, params.k, params.n_short,
           params.k_short, params.b,
           tuple(params.factors) if params.factors else None)
    spec = _codes.get(key)
    if spec is None:
        ctx = make_field(params.m, params.prim_poly)
        spec = RSCodeSpec(ctx, params.n, params.k, params.n_short,
                          params.k_short, params.b, params.factors)
        _codes[key] = spec
    return spec


def _cost_body(c) -> CostBody:
    return CostBody(mult=c.mult, add=c.add, div=c.div,
                    weighted_total=c.weighted_total)


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/plan", response_model=PlanResponse)
def make_plan(req: PlanRequest):
    try:
        ctx = make_field(req.m, req.prim_poly)
        wanted = req.wanted_outputs
        wanted = range(req.n) if wanted is None else wanted
        if req.factors:
            p = plan(ctx, req.n, req.factors)
            pruned = prune(ctx, p, req.zero_inputs, wanted)
            factors = req.factors
        else:
            factors, pruned, _ = best_factorization(
                ctx, req.n, req.zero_inputs, wanted)
        cost = count(ctx, pruned)
        doc = plan_to_dict(pruned.base, pruned)
    except (CcftError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return PlanResponse(factors=list(factors), cost=_cost_body(cost),
                        plan=doc)


@app.post("/encode", response_model=EncodeResponse)
def encode_block(req: EncodeRequest):
    try:
        spec = _get_code(req.code)
        cw = rs_encode(spec, np.array(req.message, np.int64))
    except (CcftError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return EncodeResponse(codeword=[int(x) for x in cw])


@app.post("/decode", response_model=DecodeResponse)
def decode_block(req: DecodeRequest):
    try:
        spec = _get_code(req.code)
        res = rs_decode(spec, np.array(req.received, np.int64),
                        erasures=req.erasures)
    except (CcftError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return DecodeResponse(status=res.status,
                          codeword=[int(x) for x in res.codeword],
                          positions=res.positions,
                          magnitudes=res.magnitudes,
                          divisions=res.divisions,
                          combine_additions=res.combine_additions)


@app.post("/cost", response_model=CostResponse)
def cost_table(req: CostRequest):
    try:
        spec = _get_code(req.code)
        steps = (["syndrome", "chien-forney"] if req.step == "both"
                 else [req.step])
        texts, rows = [], []
        for step in steps:
            text, step_rows = report_table([spec], step, use_cse=req.use_cse)
            texts.append(text)
            rows.extend(step_rows)
    except (CcftError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return CostResponse(step=req.step, rows=rows, table="\n".join(texts))
