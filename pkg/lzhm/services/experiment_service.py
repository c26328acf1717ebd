"""
Experiment service - rate convergence of LZ and IH on sampled paths, and epoch statistics
"""
import csv
import logging
from math import sqrt
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np

from lzhm.core.config import settings
from lzhm.core.errors import BlockAlignmentError, ParameterError
from lzhm.models.enums import InitMode
from lzhm.schemas.experiment import EpochRow, EpochStats, KCell, RateRow
from lzhm.services.bitcodec import SymbolCodec
from lzhm.services.block_code import build_shannon_code, ih_encode_indices
from lzhm.services.entropy import (
    block_distribution,
    compressive_report,
    concentration_epsilon,
    conditioned_block_distribution,
    entropy_rate_reference,
    is_good_compression,
    joint_block_probability,
    top_blocks,
)
from lzhm.services.fst import lz_ratio_bound
from lzhm.services.lz import lz_encode_indices
from lzhm.services.markov_core import HiddenMarkovModel, joint_l_step, l_step_matrix, mixing_deficit, sample_path

logger = logging.getLogger(__name__)

RATE_COLUMNS = [
    "n", "seed", "lz_bits", "ih_bits", "lz_bps", "ih_bps",
    "rate_estimate", "rate_exact", "eps_threshold", "lz_good", "ih_good", "lz_ih_ratio", "ratio_bound",
]
EPOCH_COLUMNS = ["seed", "L", "m", "max_dev_na", "max_dev_nab", "max_dev_k", "k_within_band", "eps2"]


def _check_alignment(n: int, L: int) -> None:
    if L < 1:
        raise ParameterError("L", "must be >= 1")
    if n < 1 or n % L:
        raise BlockAlignmentError(n, L)


def _report_preconditions(hmm: HiddenMarkovModel, L: int, eps: float, rate: float, tag: str) -> None:
    deficit = mixing_deficit(hmm.chain, L)
    if deficit > eps:
        logger.warning(f"[{tag}] L={L} is not {eps}-mixing (deficit {deficit:.3g})")
    report = compressive_report(hmm, L, eps, rate)
    if not report.compressive:
        logger.warning(
            f"[{tag}] L={L} is not {eps}-compressive: H_L + 1 = {report.block_entropy + 1:.4f} > {report.bound:.4f}"
        )


# ----------------------------
# Rate experiment
# ----------------------------
def rate_experiment(
    hmm: HiddenMarkovModel,
    lengths: Sequence[int],
    seeds: Sequence[int],
    L: int,
    eps: float,
) -> List[RateRow]:
    """
    One row per (n, seed), in that order: LZ and IH_L bit counts on a stationary sample, and the
    LZ-to-IH ratio next to the ceiling LZ must stay under against any finite-state compressor
    """
    for n in lengths:
        _check_alignment(n, L)
    rate, exact = entropy_rate_reference(hmm)
    _report_preconditions(hmm, L, eps, rate, "RATE EXPERIMENT")
    code = build_shannon_code(block_distribution(hmm, L), hmm.alphabet)
    codec = SymbolCodec(hmm.alphabet)
    threshold = rate * (1.0 + eps)
    logger.info(
        f"[RATE EXPERIMENT] rate={rate:.6f} ({'exact' if exact else 'upper estimate'}), "
        f"L={L}, eps={eps}, {len(lengths)} lengths x {len(seeds)} seeds"
    )

    rows = []
    for n in lengths:
        for seed in seeds:
            _, symbols = sample_path(hmm, n, seed)
            indices = symbols.tolist()
            lz_bits = len(lz_encode_indices(indices, codec))
            ih_bits = len(ih_encode_indices(indices, code))
            rows.append(RateRow(
                n=n,
                seed=seed,
                lz_bits=lz_bits,
                ih_bits=ih_bits,
                lz_bps=lz_bits / n,
                ih_bps=ih_bits / n,
                rate_estimate=rate,
                rate_exact=exact,
                eps_threshold=threshold,
                lz_good=is_good_compression(lz_bits, n, rate, eps),
                ih_good=is_good_compression(ih_bits, n, rate, eps),
                lz_ih_ratio=lz_bits / ih_bits if ih_bits else None,
                ratio_bound=lz_ratio_bound(n),
            ))
            logger.debug(f"[RATE EXPERIMENT] n={n} seed={seed}: lz {lz_bits / n:.4f} bps, ih {ih_bits / n:.4f} bps")
    return rows


# ----------------------------
# Epoch statistics
# ----------------------------
def _tracked_cells(hmm: HiddenMarkovModel, L: int, m: int) -> Optional[dict]:
    """
    {(a, b, block): expected K_ab(block)} for every positive cell when L is small, for the most
    likely blocks otherwise, or None when the top-block search runs out of budget
    """
    k = hmm.k
    cells = {}
    if L <= settings.kgamma_track_cap:
        rho = joint_l_step(hmm.chain, L)
        steps = l_step_matrix(hmm.chain, L)
        for a in range(k):
            for b in range(k):
                if steps[a, b] <= 0:
                    continue
                for block, p in conditioned_block_distribution(hmm, L, a, b).probs.items():
                    cells[(a, b, block)] = m * rho[a, b] * p
        return cells
    top = top_blocks(hmm, L, settings.kgamma_top_blocks)
    if top is None:
        return None
    for block, _ in top:
        for a in range(k):
            for b in range(k):
                cells[(a, b, block)] = m * joint_block_probability(hmm, block, a, b)
    return cells


def _count_cells(
    expected: dict,
    rows: np.ndarray,
    pairs: np.ndarray,
    k: int,
    m: int,
    band_sigmas: float,
) -> List[KCell]:
    observed = {}
    for block in sorted({block for _, _, block in expected}):
        hits = np.all(rows == np.asarray(block, dtype=rows.dtype), axis=1)
        observed[block] = np.bincount(pairs[hits], minlength=k * k)
    cells = []
    for (a, b, block), exp in sorted(expected.items()):
        obs = int(observed[block][a * k + b])
        p_hat = exp / m
        band = band_sigmas * sqrt(max(m * p_hat * (1.0 - p_hat), 0.0)) + 1.0
        within = bool(abs(obs - exp) <= band)
        cells.append(KCell(a=a, b=b, block=block, observed=obs, expected=exp, within_band=within))
    return cells


def _epoch_stats(
    hmm: HiddenMarkovModel,
    L: int,
    states: np.ndarray,
    symbols: np.ndarray,
    seed: int,
    eps: Optional[float],
    band_sigmas: float,
    expected: Optional[dict],
) -> EpochStats:
    n = len(symbols)
    k = hmm.k
    m = n // L
    starts = states[0:n:L]
    ends = states[L::L]
    pairs = starts * k + ends
    n_a = np.bincount(starts, minlength=k)
    n_ab = np.bincount(pairs, minlength=k * k).reshape(k, k)
    rho = joint_l_step(hmm.chain, L)

    k_cells: List[KCell] = []
    if expected is not None:
        k_cells = _count_cells(expected, symbols.reshape(m, L), pairs, k, m, band_sigmas)

    stats = EpochStats(
        seed=seed,
        L=L,
        m=m,
        n_a=n_a.tolist(),
        n_ab=n_ab.tolist(),
        expected_n_a=(hmm.stationary * m).tolist(),
        expected_n_ab=(rho * m).tolist(),
        k_cells=k_cells,
        k_exhaustive=expected is not None and L <= settings.kgamma_track_cap,
        mixing_deficit=mixing_deficit(hmm.chain, L),
        eps2=None if eps is None else concentration_epsilon(rho, eps),
    )
    logger.debug(
        f"[EPOCH STATS] seed={seed}: max |n_a/m - Pi| = {stats.max_dev_na:.4g}, "
        f"max |n_ab/m - rho| = {stats.max_dev_nab:.4g}, {len(k_cells)} K cells"
    )
    return stats


def compute_epoch_stats(
    hmm: HiddenMarkovModel,
    L: int,
    states: np.ndarray,
    symbols: np.ndarray,
    seed: int,
    eps: Optional[float] = None,
    band_sigmas: Optional[float] = None,
) -> EpochStats:
    """
    Epoch i covers X_{iL}..X_{iL+L-1}; it starts in Z_{iL} and ends in Z_{(i+1)L}, so `states`
    must hold n + 1 entries.
    """
    n = len(symbols)
    _check_alignment(n, L)
    if len(states) != n + 1:
        raise ValueError(f"need {n + 1} states for {n} symbols, got {len(states)}")
    band_sigmas = settings.kgamma_band_sigmas if band_sigmas is None else band_sigmas
    expected = _tracked_cells(hmm, L, n // L)
    return _epoch_stats(hmm, L, states, symbols, seed, eps, band_sigmas, expected)


def epoch_experiment(
    hmm: HiddenMarkovModel,
    L: int,
    n: int,
    seeds: Sequence[int],
    eps: Optional[float] = None,
    band_sigmas: Optional[float] = None,
) -> List[EpochStats]:
    _check_alignment(n, L)
    if eps is not None:
        deficit = mixing_deficit(hmm.chain, L)
        if deficit > eps:
            logger.warning(f"[EPOCH STATS] L={L} is not {eps}-mixing (deficit {deficit:.3g})")
    band_sigmas = settings.kgamma_band_sigmas if band_sigmas is None else band_sigmas
    expected = _tracked_cells(hmm, L, n // L)
    if expected is None:
        logger.info(f"[EPOCH STATS] top-block search for L={L} ran out of budget; K_ab counts are not tracked")
    logger.info(f"[EPOCH STATS] L={L}, m={n // L}, {len(seeds)} seeds")
    results = []
    for seed in seeds:
        states, symbols = sample_path(hmm, n, seed, InitMode.STATIONARY, extra_state=True)
        results.append(_epoch_stats(hmm, L, states, symbols, seed, eps, band_sigmas, expected))
    return results


# ----------------------------
# CSV
# ----------------------------
def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _write_csv(columns: List[str], rows: Iterable[dict], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])


def write_rate_csv(rows: Iterable[RateRow], stream: TextIO) -> None:
    _write_csv(RATE_COLUMNS, (row.model_dump() for row in rows), stream)


def epoch_row(stats: EpochStats) -> EpochRow:
    return EpochRow(
        seed=stats.seed,
        L=stats.L,
        m=stats.m,
        max_dev_na=stats.max_dev_na,
        max_dev_nab=stats.max_dev_nab,
        max_dev_k=stats.max_dev_k,
        k_within_band=stats.k_within_band,
        eps2=stats.eps2,
    )


def write_epoch_csv(results: Iterable[EpochStats], stream: TextIO) -> None:
    _write_csv(EPOCH_COLUMNS, (epoch_row(stats).model_dump() for stats in results), stream)


class ExperimentService:
    """Rate and epoch experiments on one loaded model, exported as CSV files"""

    def __init__(self, hmm: HiddenMarkovModel):
        self.hmm = hmm

    def rate(self, lengths: Sequence[int], seeds: Sequence[int], L: int, eps: float) -> List[RateRow]:
        return rate_experiment(self.hmm, lengths, seeds, L, eps)

    def epochs(
        self,
        L: int,
        n: int,
        seeds: Sequence[int],
        eps: Optional[float] = None,
        band_sigmas: Optional[float] = None,
    ) -> List[EpochStats]:
        return epoch_experiment(self.hmm, L, n, seeds, eps, band_sigmas)

    @staticmethod
    def export_rate_csv(rows: Iterable[RateRow], path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_rate_csv(rows, f)
        logger.info(f"[RATE EXPERIMENT] wrote {path}")

    @staticmethod
    def export_epoch_csv(results: Iterable[EpochStats], path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            write_epoch_csv(results, f)
        logger.info(f"[EPOCH STATS] wrote {path}")
