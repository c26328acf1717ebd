"""
String complexity C(X): the largest number of pairwise-distinct nonempty pieces X can be
cut into, with an exact small-n search and cheap lower-bound witnesses
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, isqrt, log2
from typing import List, Optional, Sequence, Tuple

from lzhm.core.config import settings
from lzhm.core.errors import ComplexityCapError


@dataclass(frozen=True)
class Decomposition:
    pieces: Tuple[Sequence, ...]

    @property
    def t(self) -> int:
        return len(self.pieces)

    def lengths(self) -> List[int]:
        return [len(p) for p in self.pieces]


def _as_hashable(symbols: Sequence):
    return symbols if isinstance(symbols, (str, tuple)) else tuple(symbols)


def is_distinct_decomposition(pieces: Sequence[Sequence], symbols: Sequence) -> bool:
    """Pieces are nonempty, pairwise distinct and concatenate to the subject"""
    x = _as_hashable(symbols)
    pieces = [_as_hashable(p) for p in pieces]
    if any(len(p) == 0 for p in pieces) or len(set(pieces)) != len(pieces):
        return False
    pos = 0
    for p in pieces:
        if x[pos:pos + len(p)] != p:
            return False
        pos += len(p)
    return pos == len(x)


def _distinct_piece_ceiling(n: int, alphabet_size: int) -> List[int]:
    """
    ceiling[r] = most distinct nonempty strings over an alphabet of the given size whose
    lengths sum to at most r (take all strings of length 1, then 2, ...)
    """
    ceiling = [0] * (n + 1)
    for r in range(n + 1):
        count, budget, length = 0, r, 1
        while budget >= length:
            available = alphabet_size ** length
            take = min(available, budget // length)
            count += take
            budget -= take * length
            if take < available:
                break
            length += 1
        ceiling[r] = count
    return ceiling


def max_distinct_parse(symbols: Sequence, n_cap: Optional[int] = None) -> Tuple[int, Decomposition]:
    """
    Exact C(X) by depth-first search over cut positions. A branch is dropped when the pieces
    used so far plus the most pieces the remaining length could still hold cannot beat the best.
    """
    n_cap = settings.complexity_n_cap if n_cap is None else n_cap
    x = _as_hashable(symbols)
    n = len(x)
    if n > n_cap:
        raise ComplexityCapError(n, n_cap)
    if n == 0:
        return 0, Decomposition(pieces=())

    ceiling = _distinct_piece_ceiling(n, len(set(x)))
    best: List = [0, ()]
    used: set = set()
    stack: List = []
    seen: set = set()

    def search(pos: int) -> None:
        if pos == n:
            if len(stack) > best[0]:
                best[0], best[1] = len(stack), tuple(stack)
            return
        if len(stack) + ceiling[n - pos] <= best[0]:
            return
        key = (pos, frozenset(used))
        if key in seen:
            return
        seen.add(key)
        for end in range(pos + 1, n + 1):
            piece = x[pos:end]
            if piece in used:
                continue
            used.add(piece)
            stack.append(piece)
            search(end)
            stack.pop()
            used.discard(piece)

    search(0)
    return best[0], Decomposition(pieces=best[1])


def sqrt_parse(symbols: Sequence) -> Decomposition:
    """Pieces of lengths 1, 2, ..., s-1 and the rest, s = floor(sqrt(n)); distinct because the lengths are"""
    x = _as_hashable(symbols)
    n = len(x)
    if n == 0:
        return Decomposition(pieces=())
    s = isqrt(n)
    pieces = []
    pos = 0
    for length in range(1, s):
        pieces.append(x[pos:pos + length])
        pos += length
    pieces.append(x[pos:])
    return Decomposition(pieces=tuple(pieces))


def lz_length_bound(m: int, alphabet: Sequence[str]) -> int:
    """m (ceil(log2(m+1)) + 2 ceil(log2(log2(m+1) + 1)) + 3 + width) bits"""
    if m < 1:
        raise ValueError("m must be >= 1")
    width = len(alphabet).bit_length()
    log_m = m.bit_length()  # ceil(log2(m + 1))
    return m * (log_m + 2 * ceil(log2(log2(m + 1) + 1)) + 3 + width)
