"""
Markov chains, hidden Markov models and sampling
"""
import numpy as np
import pytest

from conftest import make_flip
from lzhm.core.errors import ChainPropertyError, ModelValidationError
from lzhm.models.enums import InitMode
from lzhm.services import markov_core
from lzhm.services.markov_core import (
    HiddenMarkovModel,
    MarkovChain,
    SplitMix64,
    flip_chain,
    joint_l_step,
    l_step_matrix,
    mixing_deficit,
    sample_path,
    sample_symbols,
    smallest_mixing_length,
    stationary_by_power_iteration,
    stationary_distribution,
    validate_chain,
    visible_model,
)


# ----------------------------
# Validation
# ----------------------------
def test_two_cycle_is_periodic():
    report = validate_chain(MarkovChain(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert report.irreducible
    assert report.period == 2
    assert not report.aperiodic
    assert not report.ergodic


def test_self_loops_make_chain_aperiodic():
    report = validate_chain(MarkovChain(np.array([[0.9, 0.1], [0.2, 0.8]])))
    assert report.row_stochastic
    assert report.irreducible and report.aperiodic
    assert report.period == 1


def test_unreachable_state_is_reducible():
    report = validate_chain(MarkovChain(np.array([[1.0, 0.0], [0.5, 0.5]])))
    assert not report.irreducible
    assert report.period is None


def test_three_cycle_with_chord_is_aperiodic():
    # cycles of length 3 and 2
    m = np.array([[0.0, 1.0, 0.0], [0.5, 0.0, 0.5], [1.0, 0.0, 0.0]])
    report = validate_chain(MarkovChain(m))
    assert report.irreducible and report.period == 1


def test_row_sum_violation_is_reported_not_raised():
    report = validate_chain(MarkovChain(np.array([[0.5, 0.4], [0.5, 0.5]])))
    assert not report.row_stochastic


def test_negative_entry_raises():
    with pytest.raises(ModelValidationError) as e:
        validate_chain(MarkovChain(np.array([[1.2, -0.2], [0.5, 0.5]])))
    assert e.value.location == "transitions[0][1]"


def test_non_square_matrix_raises():
    with pytest.raises(ModelValidationError):
        MarkovChain(np.array([[0.5, 0.5]]))


def test_model_row_sum_error_names_row():
    with pytest.raises(ModelValidationError) as e:
        HiddenMarkovModel(
            chain=MarkovChain(np.array([[0.9, 0.1], [0.6, 0.3]])),
            alphabet=("a", "b"),
            emissions=np.eye(2),
        )
    assert e.value.location == "transitions[1]"


def test_model_rejects_duplicate_symbols():
    with pytest.raises(ModelValidationError) as e:
        visible_model(flip_chain(0.1), ("a", "a"))
    assert e.value.location == "alphabet[1]"


def test_model_rejects_bad_emission_shape():
    with pytest.raises(ModelValidationError) as e:
        HiddenMarkovModel(chain=flip_chain(0.1), alphabet=("a", "b", "c"), emissions=np.eye(2))
    assert e.value.location == "emissions"


def test_visible_detection(flip_01, quaternary, iid_binary):
    assert flip_01.is_visible
    assert not quaternary.is_visible
    assert not iid_binary.is_visible


# ----------------------------
# Stationary and L-step behaviour
# ----------------------------
def test_stationary_of_asymmetric_chain():
    pi = stationary_distribution(MarkovChain(np.array([[0.9, 0.1], [0.2, 0.8]])))
    np.testing.assert_allclose(pi, [2 / 3, 1 / 3], atol=1e-12)


def test_stationary_of_uniform_chain():
    pi = stationary_distribution(MarkovChain(np.full((5, 5), 0.2)))
    np.testing.assert_allclose(pi, np.full(5, 0.2), atol=1e-12)


def test_stationary_of_flip_chain():
    np.testing.assert_allclose(stationary_distribution(flip_chain(0.1)), [0.5, 0.5], atol=1e-12)


@pytest.mark.parametrize("matrix", [
    [[0.9, 0.1], [0.2, 0.8]],
    [[0.5, 0.3, 0.2], [0.1, 0.1, 0.8], [0.6, 0.0, 0.4]],
    [[0.999, 0.001], [0.5, 0.5]],
])
def test_stationary_is_fixed_point_and_matches_power_iteration(matrix):
    chain = MarkovChain(np.array(matrix))
    pi = stationary_distribution(chain)
    assert np.all(pi > 0)
    np.testing.assert_allclose(pi @ chain.matrix, pi, atol=1e-12)
    np.testing.assert_allclose(pi, stationary_by_power_iteration(chain), atol=1e-10)


def test_stationary_requires_ergodic_chain():
    with pytest.raises(ChainPropertyError):
        stationary_distribution(MarkovChain(np.array([[0.0, 1.0], [1.0, 0.0]])))


def test_l_step_matrix():
    chain = MarkovChain(np.array([[0.9, 0.1], [0.2, 0.8]]))
    np.testing.assert_allclose(l_step_matrix(chain, 1), chain.matrix)
    np.testing.assert_allclose(l_step_matrix(chain, 3), chain.matrix @ chain.matrix @ chain.matrix, atol=1e-15)
    with pytest.raises(ValueError):
        l_step_matrix(chain, 0)


@pytest.mark.parametrize("L1, L2", [(1, 1), (2, 3), (5, 7), (16, 48)])
def test_l_step_matrices_compose(L1, L2):
    for chain in (flip_chain(0.1), MarkovChain(np.array([[0.8, 0.2], [0.3, 0.7]])),
                  MarkovChain(np.array([[0.0, 0.5, 0.5], [0.25, 0.5, 0.25], [1.0, 0.0, 0.0]]))):
        np.testing.assert_allclose(
            l_step_matrix(chain, L1 + L2), l_step_matrix(chain, L1) @ l_step_matrix(chain, L2), atol=1e-9,
        )


def test_joint_l_step_marginals():
    chain = MarkovChain(np.array([[0.9, 0.1], [0.2, 0.8]]))
    rho = joint_l_step(chain, 5)
    assert rho.sum() == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(rho.sum(axis=1), chain.stationary, atol=1e-12)
    np.testing.assert_allclose(rho.sum(axis=0), chain.stationary, atol=1e-12)


@pytest.mark.parametrize("p", [0.1, 0.3])
def test_mixing_deficit_closed_form(p):
    chain = flip_chain(p)
    for L in range(1, 129):
        assert mixing_deficit(chain, L) == pytest.approx((1 - 2 * p) ** L, abs=1e-12)


def test_mixing_deficit_examples():
    iid = MarkovChain(np.array([[0.3, 0.7], [0.3, 0.7]]))
    assert mixing_deficit(iid, 1) == pytest.approx(0.0, abs=1e-15)
    assert mixing_deficit(flip_chain(0.1), 64) == pytest.approx(6.277e-7, rel=1e-3)


def test_smallest_mixing_length():
    # 0.8^21 = 0.0092 <= 0.01 < 0.8^20
    assert smallest_mixing_length(flip_chain(0.1), 0.01, 100) == 21
    assert smallest_mixing_length(flip_chain(0.1), 0.01, 5) is None


# ----------------------------
# Sampling
# ----------------------------
def test_splitmix_reference_values():
    rng = SplitMix64(0)
    assert rng.next_uint64() == 0xE220A8397B1DCDAF
    assert rng.next_uint64() == 0x6E789E6AA1B965F4
    assert rng.next_uint64() == 0x06C45D188009454F


@pytest.mark.parametrize("seed", [0, 1, 2 ** 64 - 1, 123456789])
def test_splitmix_block_matches_scalar_stream(seed):
    scalar = SplitMix64(seed)
    expected = [scalar.next_uint64() for _ in range(50)]
    block = SplitMix64(seed)
    got = block.uint64_block(20).tolist() + block.uint64_block(30).tolist()
    assert got == expected
    assert block.next_uint64() == scalar.next_uint64()


def test_splitmix_floats_are_in_unit_interval():
    u = SplitMix64(7).float_block(10_000)
    assert u.min() >= 0.0 and u.max() < 1.0


def test_sample_empty(flip_01):
    states, symbols = sample_path(flip_01, 0, seed=1)
    assert len(states) == 0 and len(symbols) == 0


def test_sample_deterministic_source():
    hmm = HiddenMarkovModel(chain=MarkovChain(np.array([[1.0]])), alphabet=("a", "b"), emissions=np.array([[1.0, 0.0]]))
    assert "".join(sample_symbols(hmm, 5, seed=3)) == "aaaaa"


def test_sample_is_reproducible(quaternary):
    a = sample_path(quaternary, 1000, seed=42)
    b = sample_path(quaternary, 1000, seed=42)
    c = sample_path(quaternary, 1000, seed=43)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert not np.array_equal(a[1], c[1])


def test_sample_extra_state_length(flip_01):
    states, symbols = sample_path(flip_01, 100, seed=5, extra_state=True)
    assert len(states) == 101 and len(symbols) == 100


def test_visible_model_emits_its_states(flip_03):
    states, symbols = sample_path(flip_03, 5000, seed=9)
    assert np.array_equal(states, symbols)


def test_sample_never_emits_zero_probability_symbols(quaternary):
    states, symbols = sample_path(quaternary, 20_000, seed=11)
    a, d = 0, 3
    assert not np.any((states == 1) & (symbols == a))
    assert not np.any((states == 0) & (symbols == d))


def test_explicit_initial_distribution():
    hmm = visible_model(flip_chain(0.1), ("0", "1"), pi0=[0.0, 1.0])
    for seed in range(20):
        states, _ = sample_path(hmm, 3, seed, InitMode.EXPLICIT)
        assert states[0] == 1
    with pytest.raises(ModelValidationError):
        sample_path(make_flip(0.1), 3, 0, InitMode.EXPLICIT)


def test_flip_chain_statistics():
    states, _ = sample_path(make_flip(0.1), 10 ** 6, seed=2024)
    assert abs(np.mean(states == 0) - 0.5) <= 0.01
    assert abs(np.mean(states[1:] != states[:-1]) - 0.1) <= 0.005


def test_iid_symbol_frequencies(iid_binary):
    _, symbols = sample_path(iid_binary, 100_000, seed=8)
    assert abs(symbols.mean() - 0.5) <= 0.01


def test_sequential_fallback_matches_scan(monkeypatch, quaternary):
    scanned = sample_path(quaternary, 3000, seed=77, extra_state=True)
    monkeypatch.setattr(markov_core, "_SCAN_CELL_LIMIT", 0)
    looped = sample_path(quaternary, 3000, seed=77, extra_state=True)
    assert np.array_equal(scanned[0], looped[0])
    assert np.array_equal(scanned[1], looped[1])
