"""
Compressed containers and the symbol text format
"""
import numpy as np
import pytest

from conftest import TEST_MODELS
from lzhm.core.errors import (
    AlphabetMismatchError,
    ContainerError,
    FingerprintMismatchError,
    MagicMismatchError,
    ModelValidationError,
    SymbolError,
    SymbolTextError,
    TruncatedContainerError,
    VersionMismatchError,
)
from lzhm.models.enums import CodecId, TextMode
from lzhm.services.container_service import (
    CompressedContainer,
    ContainerService,
    compress_file,
    compress_symbols,
    decompress_container,
    decompress_file,
    read_symbols,
    text_mode,
    write_symbols,
)
from lzhm.services.markov_core import HiddenMarkovModel, MarkovChain, sample_symbols

WORDS = HiddenMarkovModel(
    chain=MarkovChain(np.array([[1.0]])),
    alphabet=("ab", "c", "dd"),
    emissions=np.array([[0.5, 0.25, 0.25]]),
)


def _roundtrip_file(tmp_path, raw: bytes, codec, hmm=None, L=None) -> bytes:
    src, packed, out = tmp_path / "in.txt", tmp_path / "in.lzhm", tmp_path / "out.txt"
    src.write_bytes(raw)
    compress_file(src, packed, codec, hmm, L)
    decompress_file(packed, out, hmm)
    return out.read_bytes()


# ----------------------------
# Symbol text
# ----------------------------
def test_text_modes():
    assert text_mode(("0", "1")) == TextMode.CONTIGUOUS
    assert text_mode(WORDS.alphabet) == TextMode.LINES


def test_read_and_write_lines():
    symbols = read_symbols("ab\nc\ndd\n", WORDS.alphabet)
    assert symbols == ["ab", "c", "dd"]
    assert write_symbols(symbols, WORDS.alphabet) == "ab\nc\ndd\n"
    assert read_symbols("", WORDS.alphabet) == []


def test_contiguous_text_is_taken_verbatim():
    assert read_symbols("01\n") == ["0", "1", "\n"]
    assert read_symbols("0110", ("0", "1")) == ["0", "1", "1", "0"]


# ----------------------------
# Round trips
# ----------------------------
def test_lz_without_model(tmp_path):
    raw = b"hello, hello\nworld\n"
    assert _roundtrip_file(tmp_path, raw, CodecId.LZ) == raw


def test_lz_with_model(tmp_path):
    raw = "".join(sample_symbols(TEST_MODELS["flip_01"], 100_000, seed=4)).encode()
    assert _roundtrip_file(tmp_path, raw, CodecId.LZ, TEST_MODELS["flip_01"]) == raw


@pytest.mark.parametrize("n, L", [(100_000, 8), (1003, 4), (5, 8), (16, 1)])
def test_ih(tmp_path, n, L):
    hmm = TEST_MODELS["flip_01"]
    raw = "".join(sample_symbols(hmm, n, seed=n)).encode()
    assert _roundtrip_file(tmp_path, raw, CodecId.IH, hmm, L) == raw


def test_ih_quaternary(tmp_path):
    hmm = TEST_MODELS["quaternary"]
    raw = "".join(sample_symbols(hmm, 999, seed=8)).encode()
    assert _roundtrip_file(tmp_path, raw, CodecId.IH, hmm, 3) == raw


@pytest.mark.parametrize("codec, L", [(CodecId.LZ, None), (CodecId.IH, 2)])
def test_multi_character_symbols(tmp_path, codec, L):
    raw = b"ab\nc\ndd\nab\nab\n"
    assert _roundtrip_file(tmp_path, raw, codec, WORDS, L) == raw


@pytest.mark.parametrize("codec, L", [(CodecId.LZ, None), (CodecId.IH, 4)])
def test_empty_input(tmp_path, codec, L):
    hmm = TEST_MODELS["flip_01"]
    assert _roundtrip_file(tmp_path, b"", codec, hmm, L) == b""
    container = CompressedContainer.unpack((tmp_path / "in.lzhm").read_bytes())
    assert container.n == 0 and len(container.stream) == 0


def test_container_service_roundtrip(tmp_path):
    hmm = TEST_MODELS["flip_03"]
    src, packed, out = tmp_path / "in.txt", tmp_path / "in.lzhm", tmp_path / "out.txt"
    src.write_bytes("".join(sample_symbols(hmm, 4000, seed=6)).encode())
    service = ContainerService(hmm)
    container = service.compress(src, packed, CodecId.IH, 8)
    assert container.L == 8
    assert service.decompress(packed, out) == list(src.read_text())
    assert out.read_bytes() == src.read_bytes()


def test_empty_input_without_model(tmp_path):
    assert _roundtrip_file(tmp_path, b"", CodecId.LZ) == b""


def test_header_layout():
    container = compress_symbols(list("0110"), CodecId.IH, TEST_MODELS["flip_01"], 2)
    data = container.pack()
    assert data[:4] == b"LZHM"
    assert data[4] == 1 and data[5] == int(CodecId.IH)
    again = CompressedContainer.unpack(data)
    assert (again.codec, again.alphabet, again.n, again.L, again.fingerprint) == (
        CodecId.IH, ("0", "1"), 4, 2, container.fingerprint,
    )


# ----------------------------
# Errors
# ----------------------------
def test_ih_needs_model_and_block_length():
    with pytest.raises(ModelValidationError) as e:
        compress_symbols(list("01"), CodecId.IH)
    assert e.value.location == "model"
    with pytest.raises(ModelValidationError) as e:
        compress_symbols(list("01"), CodecId.IH, TEST_MODELS["flip_01"], 0)
    assert e.value.location == "L"


def test_symbol_outside_model_alphabet():
    with pytest.raises(SymbolError):
        compress_symbols(list("01\n"), CodecId.LZ, TEST_MODELS["flip_01"])


def test_symbol_file_that_is_not_text(tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"01\xff\xfe10")
    with pytest.raises(SymbolTextError) as e:
        compress_file(src, tmp_path / "out.lzhm", CodecId.LZ)
    assert isinstance(e.value, SymbolError)
    assert e.value.byte_offset == 2
    assert "byte 2" in str(e.value)
    assert not (tmp_path / "out.lzhm").exists()


def test_fingerprint_mismatch():
    x = sample_symbols(TEST_MODELS["flip_01"], 4000, seed=1)
    container = compress_symbols(x, CodecId.IH, TEST_MODELS["flip_01"], 4)
    with pytest.raises(FingerprintMismatchError):
        decompress_container(CompressedContainer.unpack(container.pack()), TEST_MODELS["flip_03"])


def test_ih_decompression_needs_model():
    container = compress_symbols(list("0110"), CodecId.IH, TEST_MODELS["flip_01"], 2)
    with pytest.raises(ModelValidationError):
        decompress_container(container)


def test_alphabet_mismatch():
    container = compress_symbols(list("0110"), CodecId.LZ, TEST_MODELS["flip_01"])
    with pytest.raises(AlphabetMismatchError):
        decompress_container(container, TEST_MODELS["quaternary"])


def test_bad_magic():
    data = compress_symbols(list("0110"), CodecId.LZ).pack()
    with pytest.raises(MagicMismatchError):
        CompressedContainer.unpack(b"ZIP!" + data[4:])
    with pytest.raises(MagicMismatchError):
        CompressedContainer.unpack(b"")


def test_version_mismatch():
    data = bytearray(compress_symbols(list("0110"), CodecId.LZ).pack())
    data[4] = 7
    with pytest.raises(VersionMismatchError):
        CompressedContainer.unpack(bytes(data))


def test_unknown_codec():
    data = bytearray(compress_symbols(list("0110"), CodecId.LZ).pack())
    data[5] = 9
    with pytest.raises(ContainerError):
        CompressedContainer.unpack(bytes(data))


@pytest.mark.parametrize("codec, L", [(CodecId.LZ, None), (CodecId.IH, 8)])
def test_truncated_payload(codec, L):
    hmm = TEST_MODELS["flip_03"]
    data = compress_symbols(sample_symbols(hmm, 800, seed=2), codec, hmm, L).pack()
    with pytest.raises(TruncatedContainerError):
        decompress_container(CompressedContainer.unpack(data[:-4]), hmm)


def test_truncated_header():
    data = compress_symbols(list("0110"), CodecId.IH, TEST_MODELS["flip_01"], 2).pack()
    for cut in (10, 18, 23):
        with pytest.raises(TruncatedContainerError):
            CompressedContainer.unpack(data[:cut])


def test_trailing_garbage():
    hmm = TEST_MODELS["flip_01"]
    data = compress_symbols(list("0110"), CodecId.LZ, hmm).pack()
    with pytest.raises(ContainerError):
        decompress_container(CompressedContainer.unpack(data + b"\x80"), hmm)
