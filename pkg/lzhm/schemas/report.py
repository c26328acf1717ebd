"""
CLI report schemas
"""
from pydantic import BaseModel
from typing import List, Optional


class ValidationResponse(BaseModel):
    states: int
    alphabet: List[str]
    row_stochastic: bool
    irreducible: bool
    aperiodic: bool
    period: Optional[int] = None
    visible: bool
    stationary: Optional[List[float]] = None


class MixingResponse(BaseModel):
    L: int
    deficit: float
    eps: Optional[float] = None
    mixing: Optional[bool] = None
    smallest_mixing_L: Optional[int] = None


class CompressiveResponse(BaseModel):
    L: int
    eps: float
    block_entropy: float
    rate: float
    rate_exact: bool
    bound: float
    compressive: bool
    min_length: float
    smallest_compressive_L: Optional[int] = None


class ComplexityResponse(BaseModel):
    n: int
    exact_t: Optional[int] = None
    witness: Optional[List[str]] = None
    sqrt_t: int
    lz_phrases: int
    lz_final_complete: bool
    lz_bits: int
    lz_length_bound: Optional[int] = None
