"""Plug-in estimators of entropy, mutual information and conditional MI.

All quantities are in nats. Probabilities are relative frequencies over the
shared N - m windows of a word-count bundle, with the usual plug-in
convention 0*ln(0) = 0 (sums run over observed words only).

For a sequence generated by a Markov chain, the conditional mutual
information between symbols m steps apart given the m-1 symbols in between
vanishes for every m above the chain order, which is what the significance
tests exploit. The estimate is biased upward under the null; the bundle's
distinct-word counts give a closed-form estimate of that bias (the
Miller-style correction combined over the four entropy terms), and an
error-propagation argument over binomial word counts gives its variance.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTable, SequenceTooShort
from .sequence import (SymbolSequence, WordCountBundle, count_codes,
                       count_words, sum_counts_by, window_codes)


@dataclass(frozen=True)
class CmiEstimate:
    """Conditional mutual information estimate at one order.

    ``value`` is the plug-in estimate (clamped at 0 against round-off),
    ``null_mean`` the analytic mean of the estimator when the true CMI is
    zero, ``variance`` its error-propagation variance evaluated at the
    observed word frequencies. The distinct-word counts and window count
    from the underlying bundle are carried along for the parametric tests.
    """

    order: int
    value: float
    null_mean: float
    variance: float
    alphabet_size: int
    n_windows: int
    distinct_full: int
    distinct_left: int
    distinct_right: int
    distinct_mid: int


def entropy(counts, total: int) -> float:
    """Plug-in entropy in nats of a count table.

    Parameters
    ----------
    counts : mapping word -> count, or iterable of counts
        Zero counts are allowed and contribute nothing.
    total : int
        Total number of observations; must equal the sum of counts and
        be positive.
    """
    if total <= 0:
        raise EmptyTable("entropy of an empty count table is undefined")
    if isinstance(counts, Mapping):
        arr = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
    else:
        arr = np.asarray(list(counts), dtype=np.float64)
    arr = arr[arr > 0]
    p = arr / total
    return float(-(p @ np.log(p)))


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    p = counts / total
    return float(-(p @ np.log(p)))


def _table_entropies(full_codes: np.ndarray, full_counts: np.ndarray,
                     alphabet_size: int, m: int, n_windows: int) -> float:
    """Four-entropy CMI value from a distinct full-word table."""
    k = alphabet_size
    ku = np.uint64(k)
    km = np.uint64(k ** m)
    counts = full_counts.astype(np.float64)
    right_reduced = full_codes % km
    _, left_counts = sum_counts_by(full_codes // ku, counts, k ** m)
    _, right_counts = sum_counts_by(right_reduced, counts, k ** m)
    _, mid_counts = sum_counts_by(right_reduced // ku, counts, k ** (m - 1))
    h_full = _entropy_from_counts(counts, n_windows)
    h_left = _entropy_from_counts(left_counts.astype(np.float64), n_windows)
    h_right = _entropy_from_counts(right_counts.astype(np.float64), n_windows)
    h_mid = _entropy_from_counts(mid_counts.astype(np.float64), n_windows)
    value = -h_full + h_right + h_left - h_mid
    return value if value > 0.0 else 0.0


def cmi_value(data: np.ndarray, alphabet_size: int, m: int) -> float:
    """Plug-in CMI value only, skipping bias/variance bookkeeping.

    This is the hot path of the randomization test, where only the
    statistic itself is needed for each surrogate.
    """
    codes = window_codes(data, m, alphabet_size)
    full_codes, full_counts = count_codes(codes, alphabet_size ** (m + 1))
    return _table_entropies(full_codes, full_counts, alphabet_size, m, data.size - m)


def mutual_information(seq: SymbolSequence, m: int) -> float:
    """Plug-in mutual information between symbols m steps apart, in nats.

    Pair counts run over the same N - m windows as the CMI tables and the
    marginals are derived from the pair table, so the order-1 identity
    I(1) = CMI(1) holds exactly.
    """
    if m < 1:
        raise ValueError("lag m must be a positive integer")
    n = len(seq)
    if n <= m:
        raise SequenceTooShort(f"need more than m={m} symbols, got {n}")
    k = seq.alphabet.size
    data = seq.data
    n_windows = n - m
    pair = data[m:n] * k + data[:n - m]
    pair_codes, pair_counts = count_codes(pair.astype(np.uint64), k * k)
    counts = pair_counts.astype(np.float64)
    _, x_counts = sum_counts_by(pair_codes // np.uint64(k), counts, k)
    _, y_counts = sum_counts_by(pair_codes % np.uint64(k), counts, k)
    h_pair = _entropy_from_counts(counts, n_windows)
    h_x = _entropy_from_counts(x_counts.astype(np.float64), n_windows)
    h_y = _entropy_from_counts(y_counts.astype(np.float64), n_windows)
    value = -h_pair + h_y + h_x - 0.0
    return value if value > 0.0 else 0.0


def cmi_bias(distinct: tuple[int, int, int, int], n_windows: int) -> float:
    """Analytic mean of the CMI estimate under zero true CMI.

    ``distinct`` holds the observed distinct-word counts of the (full,
    left, right, mid) tables. The Miller bias of each plug-in entropy term,
    (observed words - 1) / (2 N), combines across the four terms to
    (full - left - right + mid) / (2 N); the result can be negative for
    sparse tables.
    """
    d_full, d_left, d_right, d_mid = distinct
    return (d_full - d_left - d_right + d_mid) / (2.0 * n_windows)


def cmi_variance(bundle: WordCountBundle, value: float) -> float:
    """Error-propagation variance of the CMI estimate, in nats^2.

    Each observed full-word count is treated as a binomial over the
    N - m windows; propagating through the plug-in formula gives

        V = (1/N) * sum_w (-ln q_w + ln q_left + ln q_right - ln q_mid + I)^2
                     * q_w * (1 - q_w)

    with q the observed relative frequencies and I the observed estimate.
    """
    nm = bundle.n_windows
    k = bundle.alphabet_size
    m = bundle.order
    n_full = len(bundle.full)
    codes = np.fromiter(bundle.full.keys(), dtype=np.uint64, count=n_full)
    counts = np.fromiter(bundle.full.values(), dtype=np.float64, count=n_full)

    ku = np.uint64(k)
    km = np.uint64(k ** m)
    right_reduced = codes % km
    q = counts / nm
    q_left = _lookup(bundle.left, codes // ku) / nm
    q_right = _lookup(bundle.right, right_reduced) / nm
    q_mid = _lookup(bundle.mid, right_reduced // ku) / nm

    term = -np.log(q) + np.log(q_left) + np.log(q_right) - np.log(q_mid) + value
    return float(np.sum(term * term * q * (1.0 - q)) / nm)


def _lookup(table: dict[int, int], wanted: np.ndarray) -> np.ndarray:
    """Counts for ``wanted`` codes; every code must be present in the table."""
    n = len(table)
    keys = np.fromiter(table.keys(), dtype=np.uint64, count=n)
    vals = np.fromiter(table.values(), dtype=np.float64, count=n)
    order = np.argsort(keys)
    keys = keys[order]
    vals = vals[order]
    idx = np.searchsorted(keys, wanted)
    if np.any(idx >= n) or not np.array_equal(keys[np.minimum(idx, n - 1)], wanted):
        raise ValueError("bundle marginals are inconsistent with the joint table")
    return vals[idx]


def cmi(seq: SymbolSequence, m: int) -> CmiEstimate:
    """Conditional mutual information estimate of order m.

    Computes the plug-in value via the four-entropy decomposition over one
    shared word-count bundle, together with its analytic null mean and
    error-propagation variance.
    """
    bundle = count_words(seq, m)
    nm = bundle.n_windows
    h_full = entropy(bundle.full, nm)
    h_left = entropy(bundle.left, nm)
    h_right = entropy(bundle.right, nm)
    h_mid = entropy(bundle.mid, nm)
    value = -h_full + h_right + h_left - h_mid
    if value < 0.0:
        value = 0.0
    distinct = (bundle.distinct_full, bundle.distinct_left,
                bundle.distinct_right, bundle.distinct_mid)
    return CmiEstimate(
        order=m,
        value=value,
        null_mean=cmi_bias(distinct, nm),
        variance=cmi_variance(bundle, value),
        alphabet_size=bundle.alphabet_size,
        n_windows=nm,
        distinct_full=distinct[0],
        distinct_left=distinct[1],
        distinct_right=distinct[2],
        distinct_mid=distinct[3],
    )
