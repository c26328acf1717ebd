"""
Exact block distributions of a stationary hidden Markov source, block entropies,
entropy-rate estimates and the eps-compressive predicate
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from lzhm.core.config import settings
from lzhm.core.errors import BlockCapError, ParameterError
from lzhm.services.markov_core import HiddenMarkovModel, MarkovChain, l_step_matrix

logger = logging.getLogger(__name__)

Block = Tuple[int, ...]


# ----------------------------
# Types
# ----------------------------
@dataclass(frozen=True)
class BlockDistribution:
    """P_L over Sigma^L, keyed by tuples of alphabet indices; zero-probability blocks omitted"""
    L: int
    alphabet_size: int
    probs: Mapping[Block, float]

    def __len__(self) -> int:
        return len(self.probs)

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def items_sorted(self) -> List[Tuple[Block, float]]:
        return sorted(self.probs.items())


@dataclass(frozen=True)
class RateEstimates:
    """H_L, v_L = H_L / L and d_L = H_L - H_{L-1} for L = 1..L_max (index 0 holds L = 1)"""
    block_entropies: Tuple[float, ...]

    @property
    def L_max(self) -> int:
        return len(self.block_entropies)

    def H(self, L: int) -> float:
        return self.block_entropies[L - 1]

    def v(self, L: int) -> float:
        return self.H(L) / L

    def d(self, L: int) -> float:
        return self.H(L) - (self.H(L - 1) if L > 1 else 0.0)

    @property
    def per_symbol(self) -> List[float]:
        return [self.v(L) for L in range(1, self.L_max + 1)]

    @property
    def conditional(self) -> List[float]:
        return [self.d(L) for L in range(1, self.L_max + 1)]


@dataclass(frozen=True)
class CompressiveReport:
    L: int
    block_entropy: float
    rate: float
    eps: float
    bound: float              # rate * (1 + eps) * L
    compressive: bool         # H_L + 1 <= bound
    min_length: float         # 1 / (eps * rate), implied by compressiveness


# ----------------------------
# Helpers
# ----------------------------
def _check_cap(alphabet_size: int, L: int, cap: Optional[int]) -> None:
    cap = settings.block_cap if cap is None else cap
    size = alphabet_size ** L
    if size > cap:
        raise BlockCapError(size, cap)


def fit_block_length(alphabet_size: int, L_max: int, cap: Optional[int] = None) -> int:
    """Largest L <= L_max with |Sigma|^L within the block cap (never below 1)"""
    cap = settings.block_cap if cap is None else cap
    L = L_max
    while L > 1 and alphabet_size ** L > cap:
        L -= 1
    return L


def _entropy_bits(probs: np.ndarray) -> float:
    p = probs[probs > 0]
    return float(-(p * np.log2(p)).sum())


def _walk_levels(
    hmm: HiddenMarkovModel,
    L_max: int,
    start: np.ndarray,
    keep_blocks: bool = True,
) -> Iterator[Tuple[int, Optional[np.ndarray], np.ndarray]]:
    """
    Forward recursion over the depth-L_max prefix tree, one level at a time.

    Yields (L, blocks, alpha) where blocks[i] is the i-th surviving length-L block (rows of
    alphabet indices, in lexicographic order) and alpha[i, z] = Pr[X_0..X_{L-1} = block, Z_{L-1} = z]
    under Z_0 ~ start. Prefixes of probability zero are pruned with their subtrees.
    With keep_blocks=False only alpha is carried and blocks is None.
    """
    m = hmm.chain.matrix
    emit_t = hmm.emissions.T  # (|Sigma|, k)
    S = hmm.alphabet_size

    alpha = start[None, :] * emit_t  # (S, k)
    keep = alpha.sum(axis=1) > 0
    alpha = alpha[keep]
    blocks = np.arange(S, dtype=np.int64)[keep][:, None] if keep_blocks else None
    yield 1, blocks, alpha

    for L in range(2, L_max + 1):
        pushed = alpha @ m  # (P, k)
        P = pushed.shape[0]
        alpha = (pushed[:, None, :] * emit_t[None, :, :]).reshape(P * S, hmm.k)
        del pushed
        keep = alpha.sum(axis=1) > 0
        alpha = alpha[keep]
        if keep_blocks:
            blocks = np.concatenate(
                [np.repeat(blocks, S, axis=0), np.tile(np.arange(S, dtype=np.int64), P)[:, None]],
                axis=1,
            )[keep]
        yield L, blocks, alpha


def _to_distribution(L: int, alphabet_size: int, blocks: np.ndarray, probs: np.ndarray) -> BlockDistribution:
    return BlockDistribution(
        L=L,
        alphabet_size=alphabet_size,
        probs={tuple(row): float(p) for row, p in zip(blocks.tolist(), probs.tolist())},
    )


# ----------------------------
# Operations
# ----------------------------
def block_distribution(hmm: HiddenMarkovModel, L: int, cap: Optional[int] = None) -> BlockDistribution:
    """P_L(gamma) = Pr[X_0..X_{L-1} = gamma] with Z_0 drawn from the stationary law"""
    if L < 1:
        raise ParameterError("L", "must be >= 1")
    _check_cap(hmm.alphabet_size, L, cap)
    pi = hmm.stationary
    for level, blocks, alpha in _walk_levels(hmm, L, pi):
        if level == L:
            return _to_distribution(L, hmm.alphabet_size, blocks, alpha.sum(axis=1))
    raise AssertionError("unreachable")


def block_distributions(hmm: HiddenMarkovModel, L_max: int, cap: Optional[int] = None) -> List[BlockDistribution]:
    """P_1..P_{L_max} from one walk"""
    _check_cap(hmm.alphabet_size, L_max, cap)
    pi = hmm.stationary
    return [
        _to_distribution(level, hmm.alphabet_size, blocks, alpha.sum(axis=1))
        for level, blocks, alpha in _walk_levels(hmm, L_max, pi)
    ]


def block_entropy(dist: BlockDistribution) -> float:
    """sum P log2(1/P) in bits, with 0 log(1/0) = 0"""
    return _entropy_bits(np.fromiter(dist.probs.values(), dtype=np.float64, count=len(dist.probs)))


def entropy_rate_estimates(hmm: HiddenMarkovModel, L_max: int, cap: Optional[int] = None) -> RateEstimates:
    if L_max < 1:
        raise ParameterError("L_max", "must be >= 1")
    _check_cap(hmm.alphabet_size, L_max, cap)
    pi = hmm.stationary
    entropies = []
    for _, _, alpha in _walk_levels(hmm, L_max, pi, keep_blocks=False):
        entropies.append(_entropy_bits(alpha.sum(axis=1)))
    return RateEstimates(block_entropies=tuple(entropies))


def markov_entropy_rate(chain: MarkovChain) -> float:
    """sum_a Pi(a) sum_b M[a][b] log2(1/M[a][b]); exact for models whose emissions reveal the state"""
    pi = chain.stationary
    return float(sum(pi[a] * _entropy_bits(chain.matrix[a]) for a in range(chain.k)))


def entropy_rate_reference(hmm: HiddenMarkovModel, L_max: Optional[int] = None) -> Tuple[float, bool]:
    """
    (rate, is_exact): closed form for visible chains, otherwise the conditional entropy
    d_{L_max}, which upper-bounds the true rate
    """
    if hmm.is_visible:
        return markov_entropy_rate(hmm.chain), True
    L_max = fit_block_length(hmm.alphabet_size, settings.rate_l_max if L_max is None else L_max)
    estimates = entropy_rate_estimates(hmm, L_max)
    logger.debug(f"[ENTROPY] hidden model: using d_{L_max} = {estimates.d(L_max):.6f} as an upper estimate")
    return estimates.d(L_max), False


def compressive_report(hmm: HiddenMarkovModel, L: int, eps: float, rate: float, cap: Optional[int] = None) -> CompressiveReport:
    if rate <= 0:
        raise ParameterError("rate", "must be positive")
    if eps <= 0:
        raise ParameterError("eps", "must be positive")
    h = block_entropy(block_distribution(hmm, L, cap))
    bound = rate * (1.0 + eps) * L
    return CompressiveReport(
        L=L,
        block_entropy=h,
        rate=rate,
        eps=eps,
        bound=bound,
        compressive=h + 1.0 <= bound,
        min_length=1.0 / (eps * rate),
    )


def is_compressive(hmm: HiddenMarkovModel, L: int, eps: float, rate: float, cap: Optional[int] = None) -> bool:
    """H_L + 1 <= rate * (1 + eps) * L"""
    return compressive_report(hmm, L, eps, rate, cap).compressive


def smallest_compressive_length(
    hmm: HiddenMarkovModel,
    eps: float,
    rate: float,
    L_max: int,
    cap: Optional[int] = None,
) -> Optional[int]:
    estimates = entropy_rate_estimates(hmm, L_max, cap)
    for L in range(1, L_max + 1):
        if estimates.H(L) + 1.0 <= rate * (1.0 + eps) * L:
            return L
    return None


def is_good_compression(bits: int, n: int, rate: float, eps: float) -> bool:
    """One sample of the good-compressor inequality |A(X)| <= rate * (1 + eps) * n"""
    return bits <= rate * (1.0 + eps) * n


def expected_code_length(dist: BlockDistribution, lengths: Mapping[Block, int]) -> float:
    """sum_gamma P_L(gamma) * |codeword(gamma)|"""
    return float(sum(p * lengths[block] for block, p in dist.probs.items()))


def conditioned_block_distribution(
    hmm: HiddenMarkovModel,
    L: int,
    a: int,
    b: int,
    cap: Optional[int] = None,
) -> BlockDistribution:
    """P_{ab,L}(gamma) = Pr[X_0..X_{L-1} = gamma | Z_0 = a, Z_L = b]"""
    _check_cap(hmm.alphabet_size, L, cap)
    rho = float(l_step_matrix(hmm.chain, L)[a, b])
    if rho <= 0:
        raise ValueError(f"rho_{{b|a,L}} is zero for a={a}, b={b}, L={L}")
    start = np.zeros(hmm.k)
    start[a] = 1.0
    for level, blocks, alpha in _walk_levels(hmm, L, start):
        if level == L:
            joint = alpha @ hmm.chain.matrix[:, b]
            keep = joint > 0
            return _to_distribution(L, hmm.alphabet_size, blocks[keep], joint[keep] / rho)
    raise AssertionError("unreachable")


def joint_block_probability(hmm: HiddenMarkovModel, block: Sequence[int], a: int, b: int) -> float:
    """Pr[Z_0 = a, X_0..X_{L-1} = block, Z_L = b] under the stationary start; equals rho_{ab,L} * P_{ab,L}(block)"""
    m = hmm.chain.matrix
    alpha = np.zeros(hmm.k)
    alpha[a] = hmm.stationary[a] * hmm.emissions[a, block[0]]
    for x in block[1:]:
        alpha = (alpha @ m) * hmm.emissions[:, x]
    return float(alpha @ m[:, b])


def top_blocks(
    hmm: HiddenMarkovModel,
    L: int,
    count: int,
    max_expansions: Optional[int] = None,
) -> Optional[List[Tuple[Block, float]]]:
    """
    The `count` most likely length-L blocks with their P_L, most likely first,
    found best-first down the prefix tree without enumerating Sigma^L.

    A prefix is never less likely than its extensions, so complete blocks leave the heap in
    order. Returns None when more than max_expansions prefixes have to be opened.
    """
    if L < 1:
        raise ParameterError("L", "must be >= 1")
    max_expansions = settings.kgamma_search_cap if max_expansions is None else max_expansions
    m = hmm.chain.matrix
    emissions = hmm.emissions
    pi = hmm.stationary
    heap = []
    for x in range(hmm.alphabet_size):
        alpha = pi * emissions[:, x]
        p = float(alpha.sum())
        if p > 0:
            heapq.heappush(heap, (-p, (x,), alpha))

    found: List[Tuple[Block, float]] = []
    expansions = 0
    while heap and len(found) < count:
        neg_p, prefix, alpha = heapq.heappop(heap)
        if len(prefix) == L:
            found.append((prefix, -neg_p))
            continue
        expansions += 1
        if expansions > max_expansions:
            logger.info(f"[ENTROPY] top-{count} search at L={L} gave up after {max_expansions} expansions")
            return None
        pushed = alpha @ m
        for x in range(hmm.alphabet_size):
            child = pushed * emissions[:, x]
            p = float(child.sum())
            if p > 0:
                heapq.heappush(heap, (-p, prefix + (x,), child))
    return found


def concentration_epsilon(rho_joint: np.ndarray, eps: float) -> float:
    """eps_2 = min over positive rho_{ab,L} of eps / (24 rho_{ab,L})"""
    positive = rho_joint[rho_joint > 0]
    return float(eps / (24.0 * positive.max())) if positive.size else float("inf")
