import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mcorder import Alphabet, SymbolSequence, encode_sequence

BINARY = Alphabet.from_string("01")
QUATERNARY = Alphabet.from_string("0123")


@pytest.fixture
def binary():
    return BINARY


@pytest.fixture
def quaternary():
    return QUATERNARY


@pytest.fixture
def alternating8(binary):
    return encode_sequence(list("01010101"), binary)


@pytest.fixture
def alternating1600(binary):
    return encode_sequence(list("01" * 800), binary)


@pytest.fixture
def constant10(binary):
    return SymbolSequence(BINARY, np.zeros(10, dtype=np.int64))


def make_seq(values, alphabet=BINARY):
    return SymbolSequence(alphabet, np.asarray(values, dtype=np.int64))


@pytest.fixture
def random_sequences():
    """A small mixed bag of seeded random sequences for batch assertions."""
    rng = np.random.default_rng(20240817)
    seqs = []
    for n in (30, 57, 200, 400):
        seqs.append(make_seq(rng.integers(0, 2, n), BINARY))
    for n in (40, 120, 300):
        seqs.append(make_seq(rng.integers(0, 4, n), QUATERNARY))
    return seqs
