"""
Deterministic finite-state transducers, compilation of IH into one, and the
finite-state-compressor output-length lower bound
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, log2
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lzhm.core.errors import SymbolError
from lzhm.services.bitcodec import BitString, SymbolCodec, bits
from lzhm.services.block_code import BlockCode

BINARY_ALPHABET: Tuple[str, ...] = ("0", "1")

Word = Union[BitString, Tuple[str, ...]]


@dataclass(frozen=True, eq=False)
class Transducer:
    """
    (Q, q0, Sigma, Gamma, delta) with Q = range(state_count) and delta[(q, x)] = (q', word),
    x an input-alphabet index. Output words are BitStrings when Gamma = {0, 1} and symbol
    tuples otherwise. `sink`, when set, is the state entered on an unencodable input.
    """
    state_count: int
    initial: int
    input_alphabet: Tuple[str, ...]
    output_alphabet: Tuple[str, ...]
    delta: Dict[Tuple[int, int], Tuple[int, Word]]
    sink: Optional[int] = None

    def __post_init__(self):
        for q in range(self.state_count):
            for x in range(len(self.input_alphabet)):
                if (q, x) not in self.delta:
                    raise ValueError(f"delta undefined at state {q}, symbol {self.input_alphabet[x]!r}")

    @property
    def s(self) -> int:
        """Working states; the error sink neither emits nor leaves and is not counted"""
        return self.state_count - (1 if self.sink is not None else 0)

    @property
    def is_binary(self) -> bool:
        return self.output_alphabet == BINARY_ALPHABET


@dataclass(frozen=True)
class TransducerRun:
    output: Word
    final_state: int
    failed: bool  # the run passed through the error sink

    @property
    def output_length(self) -> int:
        return len(self.output)


def run_transducer(machine: Transducer, symbols: Sequence[str]) -> TransducerRun:
    """(q_i, Y_i) = delta(q_{i-1}, X_i); the output is Y_1 ... Y_n"""
    index = {sym: i for i, sym in enumerate(machine.input_alphabet)}
    delta = machine.delta
    q = machine.initial
    failed = False
    if machine.is_binary:
        out = bits()
        append = out.extend
    else:
        parts: List[str] = []
        append = parts.extend
    for pos, sym in enumerate(symbols):
        x = index.get(sym)
        if x is None:
            raise SymbolError(sym, pos)
        q, word = delta[(q, x)]
        if q == machine.sink:
            failed = True
        append(word)
    return TransducerRun(
        output=out if machine.is_binary else tuple(parts),
        final_state=q,
        failed=failed,
    )


# ----------------------------
# Machines
# ----------------------------
def compile_ih(code: BlockCode) -> Transducer:
    """
    States are the root plus every proper prefix of a positive-probability block; reading the
    L-th symbol of a block emits its codeword and returns to the root. Prefixes that lead to no
    codeword go to an error sink, which is only materialized when needed.
    """
    S, L = len(code.alphabet), code.L
    prefixes = {(): 0}
    for block in sorted(code.codewords):
        for cut in range(1, L):
            prefixes.setdefault(block[:cut], len(prefixes))
    delta: Dict[Tuple[int, int], Tuple[int, Word]] = {}
    sink: Optional[int] = None
    empty = bits()
    for prefix, q in prefixes.items():
        for x in range(S):
            extended = prefix + (x,)
            if len(extended) == L:
                word = code.codewords.get(extended)
                if word is not None:
                    delta[(q, x)] = (0, word)
                    continue
            elif extended in prefixes:
                delta[(q, x)] = (prefixes[extended], empty)
                continue
            if sink is None:
                sink = len(prefixes)
            delta[(q, x)] = (sink, empty)
    state_count = len(prefixes)
    if sink is not None:
        state_count += 1
        for x in range(S):
            delta[(sink, x)] = (sink, empty)
    return Transducer(
        state_count=state_count,
        initial=0,
        input_alphabet=code.alphabet,
        output_alphabet=BINARY_ALPHABET,
        delta=delta,
        sink=sink,
    )


def identity_transducer(alphabet: Sequence[str]) -> Transducer:
    alphabet = tuple(alphabet)
    return Transducer(
        state_count=1,
        initial=0,
        input_alphabet=alphabet,
        output_alphabet=alphabet,
        delta={(0, x): (0, (sym,)) for x, sym in enumerate(alphabet)},
    )


def eraser_transducer(alphabet: Sequence[str]) -> Transducer:
    alphabet = tuple(alphabet)
    return Transducer(
        state_count=1,
        initial=0,
        input_alphabet=alphabet,
        output_alphabet=BINARY_ALPHABET,
        delta={(0, x): (0, bits()) for x in range(len(alphabet))},
    )


def binary_identity_transducer(alphabet: Sequence[str]) -> Transducer:
    """One-state compressor writing bin(x) for every input symbol"""
    codec = SymbolCodec(tuple(alphabet))
    return Transducer(
        state_count=1,
        initial=0,
        input_alphabet=codec.alphabet,
        output_alphabet=BINARY_ALPHABET,
        delta={(0, x): (0, codec.code_index(x)) for x in range(len(codec.alphabet))},
    )


def fsc_length_lower_bound(t: int, s: int) -> float:
    """t log2 t - (3 + 2 log2 s) t; an injective s-state compressor emits at least this many bits on X with C(X) = t"""
    if t < 1 or s < 1:
        raise ValueError("t and s must be positive")
    return t * log2(t) - (3 + 2 * log2(s)) * t


def lz_ratio_bound(n: int) -> Optional[float]:
    """
    1 + 10 / log2(isqrt(n)): ceiling on |lz_encode(X)| / |A(X)| against a finite-state
    compressor A on a length-n input, with isqrt(n) standing in for C(X). None when isqrt(n) < 2.
    """
    root = isqrt(n) if n > 0 else 0
    if root < 2:
        return None
    return 1.0 + 10.0 / log2(root)
