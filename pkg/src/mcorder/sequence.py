"""Alphabets, integer-coded symbol sequences and sliding-window word counts.

A word of length ``len`` drawn at time ``t``, ``(x_t, x_{t-1}, ..., x_{t-len+1})``,
is encoded as the base-K integer ``sum_i w_i * K**(len-1-i)`` with the most
recent symbol in the highest digit. Codes are required to fit an unsigned
64-bit integer, which gives O(1) hashing per window and a canonical,
platform-independent key. Dropping the lowest digit (``code // K``) removes
the oldest symbol; ``code % K**(len-1)`` removes the most recent one.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderTooLarge, SequenceTooShort, UnknownSymbol

CODE_WIDTH_BITS = 64
_CODE_LIMIT = 1 << CODE_WIDTH_BITS
# Dense bincount tables beat sort-based counting while they fit comfortably
# in cache-ish memory; beyond this we fall back to np.unique.
_DENSE_LIMIT = 1 << 22


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of K distinct symbol labels; index ``i`` encodes ``labels[i]``."""

    labels: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        if not labels:
            raise ValueError("alphabet needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValueError("alphabet labels must be distinct")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @classmethod
    def from_string(cls, labels: str) -> "Alphabet":
        """Alphabet of single-character labels, e.g. ``from_string("ACGT")``."""
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def __contains__(self, label) -> bool:
        return label in self._index


@dataclass(frozen=True, eq=False)
class SymbolSequence:
    """Integer-coded symbol sequence over a finite alphabet.

    ``data`` holds one alphabet index per symbol; the array is frozen after
    construction so sequences can be shared across threads or processes.
    """

    alphabet: Alphabet
    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("sequence data must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= self.alphabet.size):
            raise ValueError("symbol index outside the alphabet range")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __len__(self) -> int:
        return int(self.data.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolSequence):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.data, other.data)

    def labels(self) -> list[str]:
        """Decode back to the original labels."""
        return [self.alphabet.labels[i] for i in self.data]


@dataclass(frozen=True)
class WordCountBundle:
    """Joint and marginal word counts for one order ``m``.

    All four tables are counted over the same ``n_windows = N - m`` windows:
    ``full`` holds words ``(x_t, ..., x_{t-m})`` of length m+1, ``left`` drops
    the oldest symbol, ``right`` drops the newest, ``mid`` drops both. The
    marginals are derived by summation from ``full``, never by re-scanning,
    so they are exactly consistent with the joint table.
    """

    order: int
    alphabet_size: int
    n_windows: int
    full: dict[int, int]
    left: dict[int, int]
    right: dict[int, int]
    mid: dict[int, int]

    @property
    def distinct_full(self) -> int:
        return len(self.full)

    @property
    def distinct_left(self) -> int:
        return len(self.left)

    @property
    def distinct_right(self) -> int:
        return len(self.right)

    @property
    def distinct_mid(self) -> int:
        return len(self.mid)


def encode_sequence(raw: Sequence[str], alphabet: Alphabet) -> SymbolSequence:
    """Map raw labels to their alphabet indices.

    Raises UnknownSymbol with the offending label and position if a label
    is not part of the alphabet.
    """
    index = alphabet._index
    data = np.empty(len(raw), dtype=np.int64)
    for pos, label in enumerate(raw):
        try:
            data[pos] = index[label]
        except KeyError:
            raise UnknownSymbol(label, pos) from None
    return SymbolSequence(alphabet, data)


def check_code_width(alphabet_size: int, word_length: int) -> None:
    """Raise OrderTooLarge unless K**word_length fits the 64-bit code."""
    if alphabet_size ** word_length > _CODE_LIMIT:
        raise OrderTooLarge(
            f"words of length {word_length} over {alphabet_size} symbols "
            f"exceed the {CODE_WIDTH_BITS}-bit word code"
        )


def window_codes(data: np.ndarray, m: int, alphabet_size: int) -> np.ndarray:
    """uint64 codes of all N-m windows ``(x_t, ..., x_{t-m})``, most recent first."""
    n = data.size
    codes = data[m:n].astype(np.uint64)
    k = np.uint64(alphabet_size)
    for i in range(1, m + 1):
        codes *= k
        codes += data[m - i:n - i].astype(np.uint64)
    return codes


def count_codes(codes: np.ndarray, table_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Distinct codes and their counts, sorted by code."""
    if table_size <= _DENSE_LIMIT:
        dense = np.bincount(codes.astype(np.int64), minlength=table_size)
        nz = np.flatnonzero(dense)
        return nz.astype(np.uint64), dense[nz]
    distinct, counts = np.unique(codes, return_counts=True)
    return distinct, counts


def sum_counts_by(reduced_codes: np.ndarray, counts: np.ndarray,
                  table_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Aggregate ``counts`` over ``reduced_codes`` (marginalization step)."""
    if table_size <= _DENSE_LIMIT:
        dense = np.bincount(reduced_codes.astype(np.int64), weights=counts,
                            minlength=table_size)
        nz = np.flatnonzero(dense)
        return nz.astype(np.uint64), dense[nz].astype(np.int64)
    distinct, inverse = np.unique(reduced_codes, return_inverse=True)
    return distinct, np.bincount(inverse, weights=counts).astype(np.int64)


def count_words(seq: SymbolSequence, m: int) -> WordCountBundle:
    """Count all length-(m+1) words and their three marginals.

    Parameters
    ----------
    seq : SymbolSequence
        Input sequence of length N > m.
    m : int
        Word order (gap between the newest and oldest symbol), m >= 1.

    Returns
    -------
    WordCountBundle
        Sparse count tables keyed by word code, all over the same N - m
        windows; marginals are exact sums of the joint table.
    """
    if m < 1:
        raise ValueError("order m must be a positive integer")
    n = len(seq)
    if n <= m:
        raise SequenceTooShort(f"need more than m={m} symbols, got {n}")
    k = seq.alphabet.size
    check_code_width(k, m + 1)

    codes = window_codes(seq.data, m, k)
    full_codes, full_counts = count_codes(codes, k ** (m + 1))

    ku = np.uint64(k)
    km = np.uint64(k ** m)
    right_reduced = full_codes % km
    left_codes, left_counts = sum_counts_by(full_codes // ku, full_counts, k ** m)
    right_codes, right_counts = sum_counts_by(right_reduced, full_counts, k ** m)
    mid_codes, mid_counts = sum_counts_by(right_reduced // ku, full_counts,
                                          k ** (m - 1))

    return WordCountBundle(
        order=m,
        alphabet_size=k,
        n_windows=n - m,
        full=dict(zip(full_codes.tolist(), full_counts.tolist())),
        left=dict(zip(left_codes.tolist(), left_counts.tolist())),
        right=dict(zip(right_codes.tolist(), right_counts.tolist())),
        mid=dict(zip(mid_codes.tolist(), mid_counts.tolist())),
    )


def distinct_counts(bundle: WordCountBundle) -> tuple[int, int, int, int]:
    """Numbers of observed distinct words in (full, left, right, mid)."""
    return (bundle.distinct_full, bundle.distinct_left,
            bundle.distinct_right, bundle.distinct_mid)


def permute(seq: SymbolSequence, rng: np.random.Generator) -> SymbolSequence:
    """Uniformly random permutation of the sequence (symbol multiset preserved)."""
    return SymbolSequence(seq.alphabet, rng.permutation(seq.data))


def decode_word(code: int, length: int, alphabet_size: int) -> tuple[int, ...]:
    """Inverse of the word coding: code -> (w_1, ..., w_len), newest first."""
    word = []
    for _ in range(length):
        word.append(int(code % alphabet_size))
        code //= alphabet_size
    return tuple(reversed(word))
