"""
Lempel-Ziv (LZ78-style) parser, encoder and decoder
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log2
from typing import List, Optional, Sequence, Tuple

from lzhm.core.errors import BackReferenceError, DecodeError, LengthMismatchError
from lzhm.services.bitcodec import (
    LAMBDA,
    BitReader,
    BitString,
    BitWriter,
    SymbolCodec,
    read_uint_code,
    uint_code,
    uint_code_length,
)

Phrase = Tuple[int, Optional[str]]  # (j, b): sigma_i = sigma_j followed by b (b is LAMBDA for a bare copy)


@dataclass(frozen=True)
class LzParse:
    """sigma_1..sigma_m as back-references into the phrase list, with sigma_0 the empty string"""
    phrases: Tuple[Phrase, ...]

    @property
    def m(self) -> int:
        return len(self.phrases)

    @property
    def final_complete(self) -> bool:
        """True when the last phrase ends in a symbol (all phrases are then distinct)"""
        return self.m == 0 or self.phrases[-1][1] is not LAMBDA


def _index_parse(indices: Sequence[int]) -> List[Tuple[int, int]]:
    """Greedy parse over alphabet indices; -1 marks a lambda ending"""
    trie = {}  # (node, symbol index) -> phrase number
    phrases: List[Tuple[int, int]] = []
    node = 0
    for s in indices:
        child = trie.get((node, s))
        if child is not None:
            node = child
            continue
        phrases.append((node, s))
        trie[(node, s)] = len(phrases)
        node = 0
    if node:
        phrases.append((node, -1))
    return phrases


def lz_parse(symbols: Sequence[str], alphabet: Sequence[str]) -> LzParse:
    """Each phrase is the shortest prefix of the remaining input not seen as an earlier phrase"""
    codec = SymbolCodec(tuple(alphabet))
    raw = _index_parse(codec.indices(symbols))
    alpha = codec.alphabet
    return LzParse(phrases=tuple((j, LAMBDA if s < 0 else alpha[s]) for j, s in raw))


def lz_encode(symbols: Sequence[str], alphabet: Sequence[str]) -> BitString:
    """[j_1 + 1] bin(b_1) [j_2 + 1] bin(b_2) ..."""
    codec = SymbolCodec(tuple(alphabet))
    return lz_encode_indices(codec.indices(symbols), codec)


def lz_encode_indices(indices: Sequence[int], codec: SymbolCodec) -> BitString:
    writer = BitWriter()
    lam = codec.lambda_index
    for j, s in _index_parse(indices):
        writer.write(uint_code(j + 1))
        writer.write(codec.code_index(lam if s < 0 else s))
    return writer.value


def lz_encoded_length(parse: LzParse, alphabet: Sequence[str]) -> int:
    width = len(alphabet).bit_length()
    return sum(uint_code_length(j + 1) + width for j, _ in parse.phrases)


def lz_decode_indices(source: BitString, codec: SymbolCodec, n: int, cursor: int = 0) -> Tuple[List[int], int]:
    """Alphabet indices of the n decoded symbols and the cursor after the last phrase"""
    reader = BitReader(source, cursor)
    table: List[Tuple[int, ...]] = [()]
    out: List[int] = []
    lam = codec.lambda_index
    while len(out) < n:
        start = reader.position
        j = read_uint_code(reader) - 1
        if j >= len(table):
            raise BackReferenceError(f"phrase {len(table)} refers to phrase {j}", start)
        s = codec.read_index(reader)
        phrase = table[j] if s == lam else table[j] + (s,)
        out.extend(phrase)
        if len(out) > n:
            raise LengthMismatchError(f"decoded {len(out)} symbols, expected {n}", reader.position)
        if s == lam:
            if len(out) != n:
                raise DecodeError("lambda phrase before the end of the input", start)
            break
        table.append(phrase)
    return out, reader.position


def lz_decode(source: BitString, alphabet: Sequence[str], n: int) -> List[str]:
    codec = SymbolCodec(tuple(alphabet))
    indices, _ = lz_decode_indices(source, codec, n)
    alpha = codec.alphabet
    return [alpha[i] for i in indices]


def phrases_to_strings(parse: LzParse) -> List[Tuple[str, ...]]:
    """sigma_1..sigma_m as symbol tuples"""
    table: List[Tuple[str, ...]] = [()]
    out = []
    for j, b in parse.phrases:
        phrase = table[j] if b is LAMBDA else table[j] + (b,)
        table.append(phrase)
        out.append(phrase)
    return out


def phrase_length_bound(m: int, width: int) -> float:
    """m (log2 m + 2 log2(log2 m + 1) + 3 + width): the real-valued encoded-length ceiling"""
    if m == 0:
        return 0.0
    return m * (log2(m) + 2 * log2(log2(m) + 1) + 3 + width)
