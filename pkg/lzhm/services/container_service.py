"""
Container service - framing LZ and IH bit streams as self-describing files, and the symbol
text format they are read from and written back to
"""
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from lzhm.core.config import settings
from lzhm.core.errors import (
    AlphabetMismatchError,
    ContainerError,
    EndOfStreamError,
    FingerprintMismatchError,
    MagicMismatchError,
    ModelValidationError,
    SymbolTextError,
    TruncatedContainerError,
    VersionMismatchError,
)
from lzhm.models.enums import CodecId, TextMode
from lzhm.services.bitcodec import BitReader, BitString, BitWriter, SymbolCodec, bits, from_bytes, pad_to_bytes
from lzhm.services.block_code import BlockCode, build_shannon_code, ih_decode_indices, ih_encode_indices
from lzhm.services.entropy import block_distribution
from lzhm.services.lz import lz_decode_indices, lz_encode
from lzhm.services.markov_core import HiddenMarkovModel

logger = logging.getLogger(__name__)

MAGIC = b"LZHM"
CONTAINER_VERSION = 1

_HEADER = struct.Struct(">4sBBHQ")   # magic, version, codec, |alphabet|, n
_IH_FIELDS = struct.Struct(">HI")    # L, codebook fingerprint
_SYMBOL_LEN = struct.Struct(">B")


# ----------------------------
# Symbol text
# ----------------------------
def text_mode(alphabet: Sequence[str]) -> TextMode:
    """Contiguous characters when every symbol is one character, otherwise one symbol per line"""
    if all(len(sym) == 1 for sym in alphabet):
        return TextMode.CONTIGUOUS
    return TextMode.LINES


def read_symbols(text: str, alphabet: Optional[Sequence[str]] = None) -> List[str]:
    """
    Split symbol text. Without an alphabet every character is a symbol. In line mode every
    symbol is terminated by a newline.
    """
    if alphabet is None or text_mode(alphabet) == TextMode.CONTIGUOUS:
        return list(text)
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return lines


def write_symbols(symbols: Sequence[str], alphabet: Sequence[str]) -> str:
    if text_mode(alphabet) == TextMode.CONTIGUOUS:
        return "".join(symbols)
    return "".join(f"{sym}\n" for sym in symbols)


# ----------------------------
# Container
# ----------------------------
@dataclass(frozen=True)
class CompressedContainer:
    """
    Header fields plus the bit stream. For IH the stream holds the n mod L trailing symbols
    in fixed width first, then the block codewords.
    """
    codec: CodecId
    alphabet: Tuple[str, ...]
    n: int
    stream: BitString
    L: Optional[int] = None
    fingerprint: Optional[int] = None

    def pack(self) -> bytes:
        parts = [_HEADER.pack(MAGIC, CONTAINER_VERSION, int(self.codec), len(self.alphabet), self.n)]
        if self.codec == CodecId.IH:
            parts.append(_IH_FIELDS.pack(self.L, self.fingerprint))
        for i, sym in enumerate(self.alphabet):
            raw = sym.encode(settings.symbol_text_encoding)
            if len(raw) > 255:
                raise ContainerError(f"alphabet[{i}] is {len(raw)} bytes long, the container allows 255")
            parts.append(_SYMBOL_LEN.pack(len(raw)))
            parts.append(raw)
        parts.append(pad_to_bytes(self.stream))
        return b"".join(parts)

    @classmethod
    def unpack(cls, data: bytes) -> "CompressedContainer":
        if len(data) < 4 or data[:4] != MAGIC:
            raise MagicMismatchError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
        if len(data) < _HEADER.size:
            raise TruncatedContainerError(f"header needs {_HEADER.size} bytes, file has {len(data)}")
        _, version, codec_byte, alphabet_size, n = _HEADER.unpack_from(data, 0)
        if version != CONTAINER_VERSION:
            raise VersionMismatchError(f"container version {version}, this build reads {CONTAINER_VERSION}")
        try:
            codec = CodecId(codec_byte)
        except ValueError:
            raise ContainerError(f"unknown codec id {codec_byte}")
        pos = _HEADER.size

        L = fingerprint = None
        if codec == CodecId.IH:
            if len(data) < pos + _IH_FIELDS.size:
                raise TruncatedContainerError("IH header fields are cut off")
            L, fingerprint = _IH_FIELDS.unpack_from(data, pos)
            pos += _IH_FIELDS.size
            if L < 1:
                raise ContainerError("IH block length is 0")

        alphabet = []
        for i in range(alphabet_size):
            if pos >= len(data):
                raise TruncatedContainerError(f"symbol table ends before alphabet[{i}]")
            (length,) = _SYMBOL_LEN.unpack_from(data, pos)
            pos += 1
            if pos + length > len(data):
                raise TruncatedContainerError(f"alphabet[{i}] is cut off")
            try:
                alphabet.append(data[pos:pos + length].decode(settings.symbol_text_encoding))
            except UnicodeDecodeError as e:
                raise ContainerError(f"alphabet[{i}] is not valid {settings.symbol_text_encoding}: {e}")
            pos += length

        return cls(
            codec=codec,
            alphabet=tuple(alphabet),
            n=n,
            stream=from_bytes(data[pos:]),
            L=L,
            fingerprint=fingerprint,
        )


def _check_padding(stream: BitString, position: int) -> None:
    tail = stream[position:]
    if len(tail) >= 8 or tail.any():
        raise ContainerError(f"{len(tail)} unexpected bits after the payload (bit offset {position})")


def _ih_code(hmm: HiddenMarkovModel, L: int) -> BlockCode:
    return build_shannon_code(block_distribution(hmm, L), hmm.alphabet)


# ----------------------------
# Compression
# ----------------------------
def compress_symbols(
    symbols: Sequence[str],
    codec: CodecId,
    hmm: Optional[HiddenMarkovModel] = None,
    L: Optional[int] = None,
) -> CompressedContainer:
    """
    LZ uses the model alphabet when a model is given, otherwise the sorted distinct input
    symbols. IH needs the model and a block length.
    """
    n = len(symbols)
    if codec == CodecId.LZ:
        alphabet = hmm.alphabet if hmm is not None else tuple(sorted(set(symbols)))
        if n == 0:
            return CompressedContainer(codec=codec, alphabet=alphabet, n=0, stream=bits())
        return CompressedContainer(codec=codec, alphabet=alphabet, n=n, stream=lz_encode(symbols, alphabet))

    if hmm is None:
        raise ModelValidationError("IH compression needs a model file", "model")
    if L is None or L < 1:
        raise ModelValidationError("IH compression needs a block length of at least 1", "L")
    code = _ih_code(hmm, L)
    indices = code.symbol_codec.indices(symbols)
    aligned = n - n % L
    writer = BitWriter()
    for i in indices[aligned:]:
        writer.write(code.symbol_codec.code_index(i))
    writer.write(ih_encode_indices(indices[:aligned], code))
    return CompressedContainer(
        codec=codec,
        alphabet=code.alphabet,
        n=n,
        stream=writer.value,
        L=L,
        fingerprint=code.fingerprint,
    )


def decompress_container(container: CompressedContainer, hmm: Optional[HiddenMarkovModel] = None) -> List[str]:
    alphabet = container.alphabet
    if hmm is not None and hmm.alphabet != alphabet:
        raise AlphabetMismatchError(f"container alphabet {list(alphabet)} differs from model alphabet {list(hmm.alphabet)}")
    n = container.n
    if n == 0:
        _check_padding(container.stream, 0)
        return []
    try:
        if container.codec == CodecId.LZ:
            indices, pos = lz_decode_indices(container.stream, SymbolCodec(alphabet), n)
        else:
            if hmm is None:
                raise ModelValidationError("IH decompression needs the model file used to compress", "model")
            code = _ih_code(hmm, container.L)
            if code.fingerprint != container.fingerprint:
                raise FingerprintMismatchError(
                    f"codebook fingerprint {code.fingerprint:08x} differs from the container's {container.fingerprint:08x}"
                )
            L = container.L
            remainder = n % L
            reader = BitReader(container.stream)
            sym_codec = code.symbol_codec
            tail = []
            for k in range(remainder):
                start = reader.position
                i = sym_codec.read_index(reader)
                if i >= len(alphabet):
                    raise ContainerError(f"remainder symbol {k} has invalid index {i} (bit offset {start})")
                tail.append(i)
            indices, pos = ih_decode_indices(container.stream, code, n - remainder, reader.position)
            indices = indices + tail
    except EndOfStreamError as e:
        raise TruncatedContainerError(f"payload is cut off: {e}")
    _check_padding(container.stream, pos)
    return [alphabet[i] for i in indices]


def compress_file(
    in_path: Union[str, Path],
    out_path: Union[str, Path],
    codec: CodecId,
    hmm: Optional[HiddenMarkovModel] = None,
    L: Optional[int] = None,
) -> CompressedContainer:
    raw = Path(in_path).read_bytes()
    try:
        text = raw.decode(settings.symbol_text_encoding)
    except UnicodeDecodeError as e:
        raise SymbolTextError(e.start, settings.symbol_text_encoding, e.reason)
    symbols = read_symbols(text, None if hmm is None else hmm.alphabet)
    container = compress_symbols(symbols, codec, hmm, L)
    data = container.pack()
    Path(out_path).write_bytes(data)
    logger.info(
        f"[CONTAINER] {codec.name} {in_path} -> {out_path}: n={container.n}, "
        f"payload {len(container.stream)} bits, file {len(data)} bytes"
    )
    return container


def decompress_file(
    in_path: Union[str, Path],
    out_path: Union[str, Path],
    hmm: Optional[HiddenMarkovModel] = None,
) -> List[str]:
    container = CompressedContainer.unpack(Path(in_path).read_bytes())
    symbols = decompress_container(container, hmm)
    Path(out_path).write_bytes(write_symbols(symbols, container.alphabet).encode(settings.symbol_text_encoding))
    logger.info(f"[CONTAINER] {container.codec.name} {in_path} -> {out_path}: n={container.n}")
    return symbols


class ContainerService:
    """Container files for one optional model: IH needs it, LZ uses it to fix the alphabet"""

    def __init__(self, hmm: Optional[HiddenMarkovModel] = None):
        self.hmm = hmm

    def compress(
        self,
        in_path: Union[str, Path],
        out_path: Union[str, Path],
        codec: CodecId,
        L: Optional[int] = None,
    ) -> CompressedContainer:
        return compress_file(in_path, out_path, codec, self.hmm, L)

    def decompress(self, in_path: Union[str, Path], out_path: Union[str, Path]) -> List[str]:
        return decompress_file(in_path, out_path, self.hmm)
