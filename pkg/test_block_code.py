"""
Iterated Huffman: Shannon code construction, encoding and decoding
"""
import random

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from conftest import TEST_MODELS
from lzhm.core.errors import BlockAlignmentError, DecodeError, EndOfStreamError, UnencodableBlockError
from lzhm.services.bitcodec import bits, to_text
from lzhm.services.block_code import (
    BlockCode,
    build_shannon_code,
    canonical_codewords,
    codebook_fingerprint,
    ih_decode,
    ih_encode,
    shannon_length,
)
from lzhm.services.entropy import BlockDistribution, block_distribution, block_entropy
from lzhm.services.markov_core import HiddenMarkovModel, MarkovChain, sample_symbols


def _code(probs, alphabet=("a", "b", "c")):
    dist = BlockDistribution(L=1, alphabet_size=len(alphabet), probs={(i,): p for i, p in enumerate(probs)})
    return build_shannon_code(dist, alphabet), dist


def test_shannon_code_example():
    code, dist = _code([0.5, 0.25, 0.25])
    assert {b: to_text(w) for b, w in code.codewords.items()} == {(0,): "0", (1,): "10", (2,): "11"}
    code.check_invariants(dist)


def test_uniform_code_is_fixed_length():
    code, _ = _code([0.25] * 4, alphabet=("a", "b", "c", "d"))
    assert set(code.lengths().values()) == {2}
    assert code.kraft_sum() == pytest.approx(1.0)


def test_skewed_code_lengths():
    code, dist = _code([0.9, 0.1], alphabet=("a", "b"))
    assert code.lengths() == {(0,): 1, (1,): 4}
    assert code.kraft_sum() == pytest.approx(1 / 2 + 1 / 16)
    assert code.expected_length(dist) == pytest.approx(1.3)


def test_certain_block_gets_empty_codeword():
    code, _ = _code([1.0], alphabet=("a",))
    assert code.codewords[(0,)] == bits()
    assert shannon_length(1.0) == 0
    assert len(ih_encode(["a"] * 7, code)) == 0
    assert ih_decode(bits(), code, 7) == ["a"] * 7


def test_canonical_codewords_order_ties_by_block():
    words = canonical_codewords({(1,): 2, (0,): 2, (2,): 1})
    assert {b: to_text(w) for b, w in words.items()} == {(2,): "0", (0,): "10", (1,): "11"}


@pytest.mark.parametrize("name, L_max", [
    ("flip_01", 16), ("flip_03", 16), ("iid_binary", 16), ("quaternary", 8),
])
def test_codeword_bounds(name, L_max):
    hmm = TEST_MODELS[name]
    for L in sorted({1, 2, 3, 4, L_max // 2, L_max}):
        dist = block_distribution(hmm, L)
        code = build_shannon_code(dist, hmm.alphabet)
        code.check_invariants(dist)
        assert code.kraft_sum() <= 1.0 + 1e-12
        assert code.expected_length(dist) <= block_entropy(dist) + 1.0 + 1e-9


def test_fingerprint_is_stable_and_sensitive():
    dist = block_distribution(TEST_MODELS["flip_01"], 4)
    a = build_shannon_code(dist, ("0", "1"))
    b = build_shannon_code(dist, ("0", "1"))
    other = build_shannon_code(block_distribution(TEST_MODELS["flip_03"], 4), ("0", "1"))
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != other.fingerprint
    assert 0 <= a.fingerprint < 2 ** 32
    assert a.fingerprint == codebook_fingerprint(4, ("0", "1"), a.lengths())


def test_encode_repeated_block():
    code = BlockCode(L=2, alphabet=("a", "b"), codewords={(0, 1): bits("0"), (1, 0): bits("1")})
    assert to_text(ih_encode(list("ababab"), code)) == "000"


def test_encode_single_symbol_blocks():
    code, _ = _code([0.5, 0.5], alphabet=("a", "b"))
    assert to_text(ih_encode(["a", "b"], code)) == "01"


def test_encode_requires_alignment():
    code = build_shannon_code(block_distribution(TEST_MODELS["flip_01"], 4), ("0", "1"))
    with pytest.raises(BlockAlignmentError):
        ih_encode(list("010"), code)
    with pytest.raises(BlockAlignmentError):
        ih_decode(bits(), code, 3)


def test_unencodable_block_names_its_index():
    hmm = HiddenMarkovModel(
        chain=MarkovChain(np.array([[0.5, 0.5], [1.0, 0.0]])),
        alphabet=("a", "b"),
        emissions=np.eye(2),
    )
    code = build_shannon_code(block_distribution(hmm, 2), hmm.alphabet)
    assert (1, 1) not in code.codewords
    with pytest.raises(UnencodableBlockError) as e:
        ih_encode(list("aabbab"), code)
    assert e.value.block_index == 1


def test_decode_empty():
    code = build_shannon_code(block_distribution(TEST_MODELS["flip_01"], 4), ("0", "1"))
    assert ih_decode(bits(), code, 0) == []


def test_decode_dangling_codeword():
    code, _ = _code([0.5, 0.25, 0.25])
    with pytest.raises(EndOfStreamError) as e:
        ih_decode(bits("01"), code, 2)
    assert e.value.bit_offset == 1


def test_decode_bits_matching_no_codeword():
    code, _ = _code([0.9, 0.1], alphabet=("a", "b"))
    # codewords are "0" and "1000"
    with pytest.raises(DecodeError) as e:
        ih_decode(bits("011"), code, 2)
    assert e.value.bit_offset == 1


@pytest.mark.parametrize("name, L", [
    ("flip_01", 8), ("flip_01", 16), ("flip_03", 4), ("iid_binary", 8), ("quaternary", 1), ("quaternary", 4),
])
def test_roundtrip_sampled(name, L):
    hmm = TEST_MODELS[name]
    code = build_shannon_code(block_distribution(hmm, L), hmm.alphabet)
    x = sample_symbols(hmm, 4096 * L, seed=L)
    stream = ih_encode(x, code)
    assert ih_decode(stream, code, len(x)) == x


def test_iid_uniform_is_one_bit_per_symbol():
    hmm = TEST_MODELS["iid_binary"]
    code = build_shannon_code(block_distribution(hmm, 8), hmm.alphabet)
    x = sample_symbols(hmm, 8 * 1000, seed=3)
    assert len(ih_encode(x, code)) == len(x)


@pytest.mark.slow
@pytest.mark.parametrize("name, L", [("flip_01", 16), ("flip_03", 8), ("iid_binary", 8), ("quaternary", 4)])
def test_roundtrip_million_symbols(name, L):
    hmm = TEST_MODELS[name]
    code = build_shannon_code(block_distribution(hmm, L), hmm.alphabet)
    x = sample_symbols(hmm, 2 ** 20, seed=99)
    assert ih_decode(ih_encode(x, code), code, len(x)) == x


@pytest.mark.slow
@pytest.mark.parametrize("name, L", [
    ("flip_01", 8), ("flip_01", 16), ("flip_03", 8), ("iid_binary", 8), ("quaternary", 4),
])
def test_bits_per_symbol_match_expected_length(name, L):
    hmm = TEST_MODELS[name]
    dist = block_distribution(hmm, L)
    code = build_shannon_code(dist, hmm.alphabet)
    n = 10 ** 6 // L * L
    observed = len(ih_encode(sample_symbols(hmm, n, seed=L + 1), code)) / n
    assert abs(observed - code.expected_length(dist) / L) <= 0.01


@given(st.lists(st.floats(min_value=0.001, max_value=1.0), min_size=1, max_size=40))
def test_invariants_for_arbitrary_distributions(weights):
    total = sum(weights)
    probs = [w / total for w in weights]
    alphabet = tuple(f"s{i}" for i in range(len(probs)))
    code, dist = _code(probs, alphabet)
    code.check_invariants(dist)
    rng = random.Random(len(probs))
    x = [rng.choice(alphabet) for _ in range(200)]
    assert ih_decode(ih_encode(x, code), code, len(x)) == x
