"""
Bit-level primitives: MSB-first bit strings, a cursor reader, the Elias-delta code for
positive integers and the fixed-width symbol code over Sigma plus lambda
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple

from bitarray import bitarray
from bitarray.util import ba2int, int2ba

from lzhm.core.errors import DecodeError, EndOfStreamError, SymbolError

# All compressed output is a big-endian bitarray: most-significant bit first in every field
BitString = bitarray

LAMBDA = None  # the empty-string marker b_m = lambda


def bits(text: str = "") -> BitString:
    """BitString from a '0'/'1' literal"""
    return bitarray(text, endian="big")


def concat(parts: Iterable[BitString]) -> BitString:
    out = bits()
    for part in parts:
        out.extend(part)
    return out


def to_text(b: BitString) -> str:
    return b.to01()


def pad_to_bytes(b: BitString) -> bytes:
    """Zero-pad to a byte boundary and return the bytes"""
    return b.tobytes()


def from_bytes(data: bytes) -> BitString:
    out = bits()
    out.frombytes(data)
    return out


class BitReader:
    """Cursor over a BitString"""

    def __init__(self, source: BitString, position: int = 0):
        self.source = source
        self.position = position

    @property
    def remaining(self) -> int:
        return len(self.source) - self.position

    def read_bit(self) -> int:
        if self.position >= len(self.source):
            raise EndOfStreamError("unexpected end of bit stream", self.position)
        bit = self.source[self.position]
        self.position += 1
        return bit

    def read_bits(self, width: int) -> BitString:
        if width > self.remaining:
            raise EndOfStreamError(f"need {width} bits, {self.remaining} left", self.position)
        chunk = self.source[self.position:self.position + width]
        self.position += width
        return chunk

    def read_uint(self, width: int) -> int:
        if width == 0:
            return 0
        return ba2int(self.read_bits(width))


class BitWriter:
    """Appending writer; `value` holds everything written so far"""

    def __init__(self):
        self.value = bits()

    def __len__(self) -> int:
        return len(self.value)

    def write(self, chunk: BitString) -> None:
        self.value.extend(chunk)

    def write_uint(self, value: int, width: int) -> None:
        if width:
            self.value.extend(int2ba(value, length=width, endian="big"))


# ----------------------------
# Prefix-free positive integer code [i]
# ----------------------------
def uint_code(i: int) -> BitString:
    """
    Elias delta: with N = bitlen(i) and G = bitlen(N), (G - 1) zeros, N in G bits,
    then the low N - 1 bits of i
    """
    if i < 1:
        raise ValueError(f"uint_code is defined for positive integers, got {i}")
    n_bits = i.bit_length()
    g_bits = n_bits.bit_length()
    out = bitarray(g_bits - 1, endian="big")
    out.setall(0)
    out.extend(int2ba(n_bits, length=g_bits, endian="big"))
    if n_bits > 1:
        out.extend(int2ba(i & ((1 << (n_bits - 1)) - 1), length=n_bits - 1, endian="big"))
    return out


def uint_code_length(i: int) -> int:
    if i < 1:
        raise ValueError(f"uint_code is defined for positive integers, got {i}")
    n_bits = i.bit_length()
    return 2 * n_bits.bit_length() + n_bits - 2


def read_uint_code(reader: BitReader) -> int:
    start = reader.position
    zeros = 0
    try:
        while reader.read_bit() == 0:
            zeros += 1
        n_bits = (1 << zeros) | reader.read_uint(zeros)
        low = reader.read_uint(n_bits - 1)
    except EndOfStreamError:
        raise EndOfStreamError("truncated integer codeword", start)
    return (1 << (n_bits - 1)) | low


def uint_decode(source: BitString, cursor: int = 0) -> Tuple[int, int]:
    """(i, advanced cursor)"""
    reader = BitReader(source, cursor)
    value = read_uint_code(reader)
    return value, reader.position


# ----------------------------
# Fixed-width symbol code bin(.)
# ----------------------------
@dataclass(frozen=True)
class SymbolCodec:
    """Index of each symbol in alphabet order as `width` bits; lambda takes index |Sigma|"""
    alphabet: Tuple[str, ...]

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise ValueError("alphabet must be nonempty")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet has duplicate symbols")
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def width(self) -> int:
        # ceil(log2(|Sigma| + 1))
        return len(self.alphabet).bit_length()

    @property
    def lambda_index(self) -> int:
        return len(self.alphabet)

    @cached_property
    def index(self) -> Dict[str, int]:
        return {sym: i for i, sym in enumerate(self.alphabet)}

    @cached_property
    def _codewords(self) -> Tuple[BitString, ...]:
        return tuple(int2ba(i, length=self.width, endian="big") for i in range(len(self.alphabet) + 1))

    def code_index(self, i: int) -> BitString:
        return self._codewords[i]

    def read_index(self, reader: BitReader) -> int:
        start = reader.position
        i = reader.read_uint(self.width)
        if i > self.lambda_index:
            raise DecodeError(f"invalid symbol index {i}", start)
        return i

    def symbol_of(self, i: int) -> Optional[str]:
        return LAMBDA if i == self.lambda_index else self.alphabet[i]

    def indices(self, symbols: Sequence[str]) -> list:
        """Alphabet indices of a symbol sequence"""
        index = self.index
        out = []
        for pos, sym in enumerate(symbols):
            try:
                out.append(index[sym])
            except KeyError:
                raise SymbolError(sym, pos)
        return out


def symbol_code(codec: SymbolCodec, b: Optional[str]) -> BitString:
    if b is LAMBDA:
        return codec.code_index(codec.lambda_index)
    try:
        return codec.code_index(codec.index[b])
    except KeyError:
        raise SymbolError(b, 0)


def symbol_decode(codec: SymbolCodec, source: BitString, cursor: int = 0) -> Tuple[Optional[str], int]:
    """(symbol or LAMBDA, advanced cursor)"""
    reader = BitReader(source, cursor)
    i = codec.read_index(reader)
    return codec.symbol_of(i), reader.position
