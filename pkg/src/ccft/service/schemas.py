"""Request and response models for the HTTP service."""

from typing import Optional

from pydantic import BaseModel, Field


class CodeParams(BaseModel):
    m: int = Field(ge=2, le=16)
    prim_poly: Optional[int] = None
    n: int
    k: int
    n_short: Optional[int] = None
    k_short: Optional[int] = None
    b: int = 0
    factors: Optional[list[int]] = None


class PlanRequest(BaseModel):
    m: int = Field(ge=2, le=16)
    prim_poly: Optional[int] = None
    n: int
    factors: Optional[list[int]] = None
    zero_inputs: list[int] = []
    wanted_outputs: Optional[list[int]] = None


class CostBody(BaseModel):
    mult: int
    add: int
    div: int
    weighted_total: int


class PlanResponse(BaseModel):
    factors: list[int]
    cost: CostBody
    plan: dict


class EncodeRequest(BaseModel):
    code: CodeParams
    message: list[int]


class EncodeResponse(BaseModel):
    codeword: list[int]


class DecodeRequest(BaseModel):
    code: CodeParams
    received: list[int]
    erasures: list[int] = []


class DecodeResponse(BaseModel):
    status: str
    codeword: list[int]
    positions: list[int]
    magnitudes: list[int]
    divisions: int
    combine_additions: int


class CostRequest(BaseModel):
    code: CodeParams
    step: str = "syndrome"
    use_cse: bool = False


class CostResponse(BaseModel):
    step: str
    rows: list[dict]
    table: str
