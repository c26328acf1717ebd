"""
Shared test models
"""
import numpy as np
import pytest

from lzhm.services.markov_core import HiddenMarkovModel, MarkovChain, flip_chain, visible_model

H_01 = 0.4689955935892812  # binary entropy of 0.1


def make_flip(p: float) -> HiddenMarkovModel:
    return visible_model(flip_chain(p), ("0", "1"))


def make_iid_binary() -> HiddenMarkovModel:
    return HiddenMarkovModel(chain=MarkovChain(np.array([[1.0]])), alphabet=("0", "1"), emissions=np.array([[0.5, 0.5]]))


def make_quaternary() -> HiddenMarkovModel:
    """Two hidden states over {a, b, c, d}; b and c are emitted by both"""
    return HiddenMarkovModel(
        chain=MarkovChain(np.array([[0.8, 0.2], [0.3, 0.7]])),
        alphabet=("a", "b", "c", "d"),
        emissions=np.array([[0.5, 0.3, 0.2, 0.0], [0.0, 0.2, 0.3, 0.5]]),
    )


TEST_MODELS = {
    "flip_01": make_flip(0.1),
    "flip_03": make_flip(0.3),
    "iid_binary": make_iid_binary(),
    "quaternary": make_quaternary(),
}


@pytest.fixture
def flip_01():
    return TEST_MODELS["flip_01"]


@pytest.fixture
def flip_03():
    return TEST_MODELS["flip_03"]


@pytest.fixture
def iid_binary():
    return TEST_MODELS["iid_binary"]


@pytest.fixture
def quaternary():
    return TEST_MODELS["quaternary"]
