"""
Finite-state Markov chains and hidden Markov models: validation, stationary and
L-step behaviour, mixing, and reproducible sampling
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lzhm.core.config import settings
from lzhm.core.errors import ChainPropertyError, ModelValidationError, ParameterError
from lzhm.models.enums import InitMode


# ----------------------------
# Types
# ----------------------------
def _frozen_array(values, location: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ModelValidationError(f"not a numeric array ({e})", location)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """k-state chain with M[i][j] = Pr[Z_{t+1} = j | Z_t = i]"""
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.matrix, "transitions")
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ModelValidationError(f"expected a non-empty square matrix, got shape {m.shape}", "transitions")
        object.__setattr__(self, "matrix", m)

    @property
    def k(self) -> int:
        return int(self.matrix.shape[0])

    @cached_property
    def stationary(self) -> np.ndarray:
        return stationary_distribution(self)


@dataclass(frozen=True)
class ValidationReport:
    row_stochastic: bool
    irreducible: bool
    aperiodic: bool
    period: Optional[int]  # None when the chain is reducible

    @property
    def ergodic(self) -> bool:
        return self.row_stochastic and self.irreducible and self.aperiodic


@dataclass(frozen=True, eq=False)
class HiddenMarkovModel:
    """
    Chain plus per-state emission distributions over an ordered alphabet.

    pi0 is the explicit initial distribution; None means "start from the stationary law".
    """
    chain: MarkovChain
    alphabet: Tuple[str, ...]
    emissions: np.ndarray
    pi0: Optional[np.ndarray] = None

    def __post_init__(self):
        tol = settings.stochastic_tol
        alphabet = tuple(str(s) for s in self.alphabet)
        if not alphabet:
            raise ModelValidationError("alphabet is empty", "alphabet")
        seen = set()
        for i, sym in enumerate(alphabet):
            if sym == "":
                raise ModelValidationError("empty symbol", f"alphabet[{i}]")
            if sym in seen:
                raise ModelValidationError(f"duplicate symbol {sym!r}", f"alphabet[{i}]")
            seen.add(sym)
        object.__setattr__(self, "alphabet", alphabet)

        _check_stochastic_rows(self.chain.matrix, "transitions", tol)

        emissions = _frozen_array(self.emissions, "emissions")
        if emissions.shape != (self.chain.k, len(alphabet)):
            raise ModelValidationError(
                f"expected shape ({self.chain.k}, {len(alphabet)}), got {emissions.shape}", "emissions"
            )
        _check_stochastic_rows(emissions, "emissions", tol)
        object.__setattr__(self, "emissions", emissions)

        if self.pi0 is not None:
            pi0 = _frozen_array(self.pi0, "pi0")
            if pi0.shape != (self.chain.k,):
                raise ModelValidationError(f"expected length {self.chain.k}, got shape {pi0.shape}", "pi0")
            _check_distribution(pi0, "pi0", tol)
            object.__setattr__(self, "pi0", pi0)

    @property
    def k(self) -> int:
        return self.chain.k

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    @cached_property
    def symbol_index(self) -> dict:
        return {sym: i for i, sym in enumerate(self.alphabet)}

    @property
    def stationary(self) -> np.ndarray:
        return self.chain.stationary

    def initial_distribution(self, init: InitMode) -> np.ndarray:
        if init == InitMode.STATIONARY:
            return self.stationary
        if self.pi0 is None:
            raise ModelValidationError("model has no explicit initial distribution", "pi0")
        return self.pi0

    @cached_property
    def is_visible(self) -> bool:
        """True when every state emits one symbol with certainty and no two states share it"""
        owners = set()
        for row in self.emissions:
            hits = np.flatnonzero(row > 0)
            if len(hits) != 1 or int(hits[0]) in owners:
                return False
            owners.add(int(hits[0]))
        return True


# ----------------------------
# Helpers
# ----------------------------
def _check_distribution(vec: np.ndarray, location: str, tol: float) -> None:
    if not np.all(np.isfinite(vec)):
        raise ModelValidationError("non-finite entry", location)
    if np.any(vec < -tol):
        raise ModelValidationError(f"negative entry {float(vec.min())}", location)
    total = float(vec.sum())
    if abs(total - 1.0) > tol:
        raise ModelValidationError(f"sums to {total!r}, expected 1", location)


def _check_stochastic_rows(matrix: np.ndarray, name: str, tol: float) -> None:
    for i, row in enumerate(matrix):
        _check_distribution(row, f"{name}[{i}]", tol)


def _adjacency(matrix: np.ndarray, tol: float) -> List[List[int]]:
    return [list(np.flatnonzero(row > tol)) for row in matrix]


def _reachable(adj: List[List[int]], start: int) -> List[Optional[int]]:
    """BFS levels from start; None for unreachable states"""
    level: List[Optional[int]] = [None] * len(adj)
    level[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if level[v] is None:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _require_ergodic(chain: MarkovChain) -> None:
    report = validate_chain(chain)
    if not (report.irreducible and report.aperiodic):
        raise ChainPropertyError(
            f"chain must be irreducible and aperiodic "
            f"(irreducible={report.irreducible}, period={report.period})"
        )


# ----------------------------
# Operations
# ----------------------------
def validate_chain(chain: MarkovChain, tol: Optional[float] = None) -> ValidationReport:
    """
    Check the support graph {(i, j): M[i][j] > tol} for strong connectivity and compute
    its period as the gcd of level(u) + 1 - level(v) over BFS edges.
    """
    tol = settings.edge_tol if tol is None else tol
    if tol < 0:
        raise ParameterError("tol", "must be nonnegative")
    m = chain.matrix
    if not np.all(np.isfinite(m)):
        raise ModelValidationError("non-finite entry", "transitions")
    neg_tol = max(tol, settings.stochastic_tol)
    if np.any(m < -neg_tol):
        bad = np.argwhere(m < -neg_tol)[0]
        raise ModelValidationError(f"negative entry {float(m[tuple(bad)])}", f"transitions[{bad[0]}][{bad[1]}]")

    row_stochastic = bool(np.all(np.abs(m.sum(axis=1) - 1.0) <= settings.stochastic_tol))

    adj = _adjacency(m, tol)
    forward = _reachable(adj, 0)
    reverse_adj: List[List[int]] = [[] for _ in range(chain.k)]
    for u, targets in enumerate(adj):
        for v in targets:
            reverse_adj[v].append(u)
    backward = _reachable(reverse_adj, 0)
    irreducible = all(lv is not None for lv in forward) and all(lv is not None for lv in backward)

    period: Optional[int] = None
    if irreducible:
        g = 0
        for u, targets in enumerate(adj):
            for v in targets:
                g = gcd(g, abs(forward[u] + 1 - forward[v]))
        period = g if g > 0 else None

    return ValidationReport(
        row_stochastic=row_stochastic,
        irreducible=irreducible,
        aperiodic=irreducible and period == 1,
        period=period,
    )


def stationary_distribution(chain: MarkovChain) -> np.ndarray:
    """Solve Pi (M - I) = 0 together with sum(Pi) = 1 as one least-squares system"""
    _require_ergodic(chain)
    k = chain.k
    a = np.vstack([chain.matrix.T - np.eye(k), np.ones((1, k))])
    b = np.zeros(k + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    # one refinement step keeps the residual at machine precision for ill-conditioned chains
    residual = b - a @ pi
    correction, *_ = np.linalg.lstsq(a, residual, rcond=None)
    pi = pi + correction
    pi = pi / pi.sum()
    if np.any(pi <= 0):
        raise ChainPropertyError("stationary solve produced a non-positive entry")
    pi.setflags(write=False)
    return pi


def stationary_by_power_iteration(chain: MarkovChain, iterations: int = 10_000, tol: float = 1e-15) -> np.ndarray:
    """Cross-check for stationary_distribution; converges for irreducible aperiodic chains"""
    _require_ergodic(chain)
    pi = np.full(chain.k, 1.0 / chain.k)
    for _ in range(iterations):
        nxt = pi @ chain.matrix
        if np.max(np.abs(nxt - pi)) <= tol:
            return nxt / nxt.sum()
        pi = nxt
    return pi / pi.sum()


def l_step_matrix(chain: MarkovChain, L: int) -> np.ndarray:
    """M^L; entry (a, b) is rho_{b|a,L}"""
    if L < 1:
        raise ParameterError("L", "must be >= 1")
    return np.linalg.matrix_power(chain.matrix, L)


def joint_l_step(chain: MarkovChain, L: int) -> np.ndarray:
    """rho_{ab,L} = Pi(a) * rho_{b|a,L}"""
    return chain.stationary[:, None] * l_step_matrix(chain, L)


def mixing_deficit(chain: MarkovChain, L: int) -> float:
    """max_a sum_b |rho_{b|a,L} - Pi(b)|; L is eps-mixing iff this is <= eps"""
    pi = chain.stationary
    rows = l_step_matrix(chain, L)
    return float(np.max(np.sum(np.abs(rows - pi[None, :]), axis=1)))


def smallest_mixing_length(chain: MarkovChain, eps: float, L_max: int) -> Optional[int]:
    pi = chain.stationary
    power = np.eye(chain.k)
    for L in range(1, L_max + 1):
        power = power @ chain.matrix
        if float(np.max(np.sum(np.abs(power - pi[None, :]), axis=1))) <= eps:
            return L
    return None


# ----------------------------
# Sampling
# ----------------------------
_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """
    SplitMix64 stream. Output i (0-based) is mix(seed + (i + 1) * GAMMA), so a block of
    outputs can be produced with vectorized uint64 arithmetic and still match the
    one-at-a-time sequence exactly.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_uint64() >> 11) * (1.0 / (1 << 53))

    def uint64_block(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * _GAMMA) & _MASK64
        return z

    def float_block(self, count: int) -> np.ndarray:
        return (self.uint64_block(count) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _cumulative(rows: np.ndarray) -> np.ndarray:
    """Cumulative rows whose tail from the last positive entry on is +inf"""
    cum = np.atleast_2d(np.cumsum(rows, axis=-1))
    for r, row in zip(cum, np.atleast_2d(rows)):
        last = int(np.flatnonzero(row > 0)[-1])
        r[last:] = np.inf  # rounding can leave the total just below 1
    return cum.reshape(np.shape(rows))


def _categorical(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Smallest j with u < cum[j]; zero-width entries are never chosen"""
    return np.searchsorted(cum, u, side="right")


# Above this many (step, state) cells the transition scan falls back to a plain loop
_SCAN_CELL_LIMIT = 1 << 25


def _run_chain(z0: int, step_maps: np.ndarray) -> np.ndarray:
    """
    States z_1..z_T where z_{t+1} = step_maps[t, z_t].

    Uses an inclusive prefix scan over function composition so the sequential
    dependency is resolved in log2(T) vectorized rounds.
    """
    T, k = step_maps.shape
    if T == 0:
        return np.empty(0, dtype=np.int64)
    if T * k > _SCAN_CELL_LIMIT:
        out = np.empty(T, dtype=np.int64)
        z = z0
        maps = step_maps.tolist()
        for t in range(T):
            z = maps[t][z]
            out[t] = z
        return out
    scan = step_maps.copy()
    d = 1
    while d < T:
        scan[d:] = np.take_along_axis(scan[d:], scan[:-d], axis=1)
        d <<= 1
    return scan[:, z0].astype(np.int64)


def sample_path(
    hmm: HiddenMarkovModel,
    n: int,
    seed: int,
    init: InitMode = InitMode.STATIONARY,
    extra_state: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw (states, symbols) from the model; symbols are alphabet indices.

    Stream layout for one call: draw 0 picks Z_0, draws 1..T pick Z_1..Z_T, and the next n
    draws pick X_0..X_{n-1}. T = n when extra_state is True (the path then carries Z_n,
    which epoch statistics need) and n - 1 otherwise.
    """
    if n < 0:
        raise ParameterError("n", "must be nonnegative")
    if n == 0:
        states = np.empty(1 if extra_state else 0, dtype=np.int64)
        if extra_state:
            rng = SplitMix64(seed)
            states[0] = int(_categorical(_cumulative(hmm.initial_distribution(init)), rng.next_float()))
        return states, np.empty(0, dtype=np.int64)

    rng = SplitMix64(seed)
    steps = n if extra_state else n - 1
    init_cum = _cumulative(hmm.initial_distribution(init))
    z0 = int(_categorical(init_cum, rng.next_float()))

    trans_cum = _cumulative(hmm.chain.matrix)
    u_trans = rng.float_block(steps)
    step_maps = np.empty((steps, hmm.k), dtype=np.int32)
    for z in range(hmm.k):
        step_maps[:, z] = _categorical(trans_cum[z], u_trans)
    states = np.concatenate([[z0], _run_chain(z0, step_maps)]).astype(np.int64)

    emit_cum = _cumulative(hmm.emissions)
    u_emit = rng.float_block(n)
    symbols = np.empty(n, dtype=np.int64)
    emitting = states[:n]
    for z in range(hmm.k):
        mask = emitting == z
        if mask.any():
            symbols[mask] = _categorical(emit_cum[z], u_emit[mask])
    return states, symbols


def sample_symbols(hmm: HiddenMarkovModel, n: int, seed: int, init: InitMode = InitMode.STATIONARY) -> List[str]:
    """Convenience wrapper returning alphabet symbols"""
    _, symbols = sample_path(hmm, n, seed, init)
    alphabet = hmm.alphabet
    return [alphabet[i] for i in symbols.tolist()]


def flip_chain(p: float) -> MarkovChain:
    """Symmetric two-state chain [[1-p, p], [p, 1-p]]"""
    return MarkovChain(np.array([[1.0 - p, p], [p, 1.0 - p]]))


def visible_model(chain: MarkovChain, alphabet: Sequence[str], pi0: Optional[Sequence[float]] = None) -> HiddenMarkovModel:
    """Model whose state z always emits alphabet[z]"""
    return HiddenMarkovModel(
        chain=chain,
        alphabet=tuple(alphabet),
        emissions=np.eye(chain.k),
        pi0=None if pi0 is None else np.asarray(pi0, dtype=np.float64),
    )
