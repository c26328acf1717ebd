"""
Experiment result schemas
"""
from pydantic import BaseModel, Field
from typing import Dict, List, Optional, Tuple


class RateRow(BaseModel):
    """One (n, seed) cell of the rate experiment"""
    n: int
    seed: int
    lz_bits: int
    ih_bits: int
    lz_bps: float
    ih_bps: float
    rate_estimate: float
    rate_exact: bool
    eps_threshold: float
    lz_good: bool
    ih_good: bool
    lz_ih_ratio: Optional[float] = None   # None when IH emitted no bits
    ratio_bound: Optional[float] = None   # None when isqrt(n) < 2


class KCell(BaseModel):
    """Observed vs expected count of epochs a -> b emitting one block"""
    a: int
    b: int
    block: Tuple[int, ...]
    observed: int
    expected: float
    within_band: bool


class EpochStats(BaseModel):
    """Epoch counts of one sampled path and their expectations under the model"""
    seed: int
    L: int
    m: int
    n_a: List[int]
    n_ab: List[List[int]]
    expected_n_a: List[float]
    expected_n_ab: List[List[float]]
    k_cells: List[KCell] = Field(default_factory=list)
    k_exhaustive: bool = False
    mixing_deficit: float
    eps2: Optional[float] = None

    @property
    def max_dev_na(self) -> float:
        return max(abs(obs / self.m - exp / self.m) for obs, exp in zip(self.n_a, self.expected_n_a))

    @property
    def max_dev_nab(self) -> float:
        return max(
            abs(obs / self.m - exp / self.m)
            for row_obs, row_exp in zip(self.n_ab, self.expected_n_ab)
            for obs, exp in zip(row_obs, row_exp)
        )

    @property
    def max_dev_k(self) -> float:
        return max((abs(c.observed - c.expected) for c in self.k_cells), default=0.0)

    @property
    def k_within_band(self) -> bool:
        return all(c.within_band for c in self.k_cells)

    def k_by_cell(self) -> Dict[Tuple[int, int], int]:
        """sum_gamma K_ab(gamma) per (a, b)"""
        totals: Dict[Tuple[int, int], int] = {}
        for c in self.k_cells:
            totals[(c.a, c.b)] = totals.get((c.a, c.b), 0) + c.observed
        return totals


class EpochRow(BaseModel):
    seed: int
    L: int
    m: int
    max_dev_na: float
    max_dev_nab: float
    max_dev_k: float
    k_within_band: bool
    eps2: Optional[float] = None
