"""
Iterated Huffman compressor IH_{L,M}: a Shannon code over Sigma^L built from the model's
block distribution, applied block by block
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import cached_property
from math import ceil, log2
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from bitarray.util import int2ba

from lzhm.core.errors import BlockAlignmentError, DecodeError, EndOfStreamError, UnencodableBlockError
from lzhm.services.bitcodec import BitReader, BitString, BitWriter, SymbolCodec, bits
from lzhm.services.entropy import Block, BlockDistribution

# Slack for comparing codeword lengths against real-valued bounds
_BOUND_TOL = 1e-9


class CodeInvariantError(AssertionError):
    """A constructed BlockCode breaks prefix-freeness, Kraft or the per-codeword bound"""


@dataclass(frozen=True, eq=False)
class BlockCode:
    """Prefix-free codeword table over Sigma^L; blocks are tuples of alphabet indices"""
    L: int
    alphabet: Tuple[str, ...]
    codewords: Mapping[Block, BitString]
    fingerprint: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "fingerprint", codebook_fingerprint(self.L, self.alphabet, self.lengths()))

    def lengths(self) -> Dict[Block, int]:
        return {block: len(word) for block, word in self.codewords.items()}

    def kraft_sum(self) -> float:
        return float(sum(2.0 ** -len(word) for word in self.codewords.values()))

    def expected_length(self, dist: BlockDistribution) -> float:
        return float(sum(p * len(self.codewords[block]) for block, p in dist.probs.items()))

    def check_invariants(self, dist: Optional[BlockDistribution] = None) -> None:
        words = sorted(word.to01() for word in self.codewords.values())
        for shorter, longer in zip(words, words[1:]):
            if longer.startswith(shorter):
                raise CodeInvariantError(f"codeword {shorter!r} is a prefix of {longer!r}")
        kraft = self.kraft_sum()
        if kraft > 1.0 + _BOUND_TOL:
            raise CodeInvariantError(f"Kraft sum {kraft} exceeds 1")
        if dist is not None:
            for block, p in dist.probs.items():
                length = len(self.codewords[block])
                if length > 1.0 + log2(1.0 / p) + _BOUND_TOL:
                    raise CodeInvariantError(f"block {block} has length {length} > 1 + log2(1/{p})")

    @cached_property
    def symbol_codec(self) -> SymbolCodec:
        return SymbolCodec(self.alphabet)

    @cached_property
    def decode_trie(self) -> list:
        """Binary trie of [child0, child1, block] nodes"""
        root: list = [None, None, None]
        for block, word in self.codewords.items():
            node = root
            for bit in word:
                if node[bit] is None:
                    node[bit] = [None, None, None]
                node = node[bit]
            node[2] = block
        return root


# ----------------------------
# Construction
# ----------------------------
def shannon_length(p: float) -> int:
    """ceil(log2(1/p))"""
    return max(0, ceil(log2(1.0 / p)))


def canonical_codewords(lengths: Mapping[Block, int]) -> Dict[Block, BitString]:
    """Sort by (length, block) and hand out lexicographically increasing codewords"""
    out: Dict[Block, BitString] = {}
    code = 0
    prev_len = 0
    for block, length in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        code <<= (length - prev_len)
        out[block] = int2ba(code, length=length, endian="big") if length else bits()
        code += 1
        prev_len = length
    return out


def codebook_fingerprint(L: int, alphabet: Sequence[str], lengths: Mapping[Block, int]) -> int:
    """CRC-32 over 'L | alphabet | (block, codeword length) pairs in canonical order'"""
    ordered = sorted(lengths.items(), key=lambda kv: (kv[1], kv[0]))
    payload = "{}|{}|{}".format(
        L,
        ",".join(alphabet),
        ";".join(f"{'.'.join(map(str, block))}:{length}" for block, length in ordered),
    )
    return zlib.crc32(payload.encode("utf-8")) & 0xFFFFFFFF


def build_shannon_code(dist: BlockDistribution, alphabet: Sequence[str]) -> BlockCode:
    if len(alphabet) != dist.alphabet_size:
        raise ValueError(f"alphabet has {len(alphabet)} symbols, distribution expects {dist.alphabet_size}")
    lengths = {block: shannon_length(p) for block, p in dist.probs.items()}
    return BlockCode(L=dist.L, alphabet=tuple(alphabet), codewords=canonical_codewords(lengths))


# ----------------------------
# Coding
# ----------------------------
def ih_encode_indices(indices: Sequence[int], code: BlockCode) -> BitString:
    n, L = len(indices), code.L
    if n % L:
        raise BlockAlignmentError(n, L)
    writer = BitWriter()
    words = code.codewords
    for block_index, start in enumerate(range(0, n, L)):
        block = tuple(indices[start:start + L])
        word = words.get(block)
        if word is None:
            raise UnencodableBlockError(block_index, tuple(code.alphabet[i] for i in block))
        writer.write(word)
    return writer.value


def ih_encode(symbols: Sequence[str], code: BlockCode) -> BitString:
    """Huff(Y_0) Huff(Y_1) ... over consecutive length-L blocks"""
    return ih_encode_indices(code.symbol_codec.indices(symbols), code)


def ih_decode_indices(source: BitString, code: BlockCode, n: int, cursor: int = 0) -> Tuple[List[int], int]:
    L = code.L
    if n % L:
        raise BlockAlignmentError(n, L)
    reader = BitReader(source, cursor)
    root = code.decode_trie
    out: List[int] = []
    for _ in range(n // L):
        start = reader.position
        node = root
        while node[2] is None:
            try:
                bit = reader.read_bit()
            except EndOfStreamError:
                raise EndOfStreamError("truncated codeword", start)
            node = node[bit]
            if node is None:
                raise DecodeError("bits match no codeword", start)
        out.extend(node[2])
    return out, reader.position


def ih_decode(source: BitString, code: BlockCode, n: int) -> List[str]:
    indices, _ = ih_decode_indices(source, code, n)
    alphabet = code.alphabet
    return [alphabet[i] for i in indices]
