"""Baseline order-selection criteria: AIC, BIC and Peres-Shields.

AIC and BIC penalize the maximized log-likelihood of a fixed-order model
with the usual K^k (K-1) free-parameter count; the Peres-Shields estimator
instead looks at the maximal fluctuation between observed extended-context
counts and their order-k predictions, which collapses once the context
covers the true memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, SequenceTooShort
from .sequence import (SymbolSequence, check_code_width, count_codes,
                       count_words)


@dataclass(frozen=True)
class CriterionResult:
    """Per-order scores of one criterion and the selected order."""

    criterion: str
    scores: tuple[tuple[int, float], ...]
    order: int
    rule: str | None = None


def log_likelihood(seq: SymbolSequence, k: int) -> float:
    """Maximized log-likelihood of an order-k model, in nats.

    Sums N(wa) * ln(N(wa) / N(w)) over the observed (context, symbol)
    pairs of the N - k windows; k = 0 scores the marginal distribution.
    """
    if k < 0:
        raise ValueError("order k must be non-negative")
    n = len(seq)
    if n <= k:
        raise SequenceTooShort(f"need more than k={k} symbols, got {n}")
    if k == 0:
        counts = np.bincount(seq.data, minlength=seq.alphabet.size)
        counts = counts[counts > 0].astype(np.float64)
        return float(counts @ np.log(counts / n))
    bundle = count_words(seq, k)
    full = np.fromiter(bundle.full.values(), np.float64, len(bundle.full))
    ctx = np.fromiter(bundle.right.values(), np.float64, len(bundle.right))
    return float(full @ np.log(full) - ctx @ np.log(ctx))


def _n_params(alphabet_size: int, k: int) -> int:
    return alphabet_size ** k * (alphabet_size - 1)


def _penalized(seq: SymbolSequence, k_max: int, name: str, penalty) -> CriterionResult:
    if k_max < 0:
        raise InvalidConfig("k_max must be non-negative")
    n = len(seq)
    if n <= k_max:
        raise SequenceTooShort(f"need more than k_max={k_max} symbols, got {n}")
    scores = []
    for k in range(k_max + 1):
        score = -2.0 * log_likelihood(seq, k) + penalty(k, n)
        scores.append((k, score))
    best = min(scores, key=lambda kv: (kv[1], kv[0]))[0]
    return CriterionResult(name, tuple(scores), best)


def aic_order(seq: SymbolSequence, k_max: int) -> CriterionResult:
    """Akaike criterion: -2 logL(k) + 2 K^k (K-1), argmin over k."""
    ksize = seq.alphabet.size
    return _penalized(seq, k_max, "AIC",
                      lambda k, n: 2.0 * _n_params(ksize, k))


def bic_order(seq: SymbolSequence, k_max: int) -> CriterionResult:
    """Bayesian criterion: -2 logL(k) + K^k (K-1) ln(N-k), argmin over k."""
    ksize = seq.alphabet.size
    return _penalized(seq, k_max, "BIC",
                      lambda k, n: _n_params(ksize, k) * np.log(n - k))


def _substring_tables(data: np.ndarray, alphabet_size: int,
                      max_len: int) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Sorted (codes, counts) of words of each length 1..max_len.

    Words are coded reading forward in time, earliest symbol in the highest
    digit, so the k-suffix of a word is its code modulo K^k. All lengths
    are counted over the same N - max_len + 1 start positions; with shared
    windows the fluctuation of a deterministic chain vanishes identically
    instead of picking up O(1) edge effects.
    """
    n_win = data.size - max_len + 1
    tables = {}
    for length in range(1, max_len + 1):
        codes = data[:n_win].astype(np.uint64)
        ku = np.uint64(alphabet_size)
        for i in range(1, length):
            codes = codes * ku + data[i:n_win + i].astype(np.uint64)
        tables[length] = count_codes(codes, alphabet_size ** length)
    return tables


def _table_get(table: tuple[np.ndarray, np.ndarray], wanted: np.ndarray) -> np.ndarray:
    """Counts for ``wanted`` codes, zero where absent."""
    codes, counts = table
    idx = np.searchsorted(codes, wanted)
    idx_c = np.minimum(idx, codes.size - 1)
    hit = codes[idx_c] == wanted
    return np.where(hit, counts[idx_c], 0).astype(np.float64)


def ps_fluctuation(seq: SymbolSequence, k: int, j_max: int) -> float:
    """Maximal order-k prediction fluctuation over words up to length j_max.

    For every observed word v with k < |v| <= j_max and every symbol b,
    compares the count of vb with its prediction from the k-suffix of v,
    N(v) * N(v^[k] b) / N(v^[k]), and returns the largest absolute
    difference. All word lengths are counted over the same N - j_max
    start positions; the empty word (k = 0 denominator) counts every
    window.
    """
    if k < 0:
        raise ValueError("order k must be non-negative")
    if j_max <= k:
        raise InvalidConfig(f"j_max={j_max} must exceed k={k}")
    n = len(seq)
    if n <= j_max:
        raise SequenceTooShort(f"need more than j_max={j_max} symbols, got {n}")
    ksize = seq.alphabet.size
    check_code_width(ksize, j_max + 1)

    tables = _substring_tables(seq.data, ksize, j_max + 1)
    n_win = n - j_max
    suffix_mod = np.uint64(ksize ** (k + 1))
    worst = 0.0
    for j in range(k + 1, j_max + 1):
        v_codes, v_counts = tables[j]
        v_counts = v_counts.astype(np.float64)
        if k == 0:
            denom = float(n_win)
        else:
            denom = _table_get(tables[k], v_codes % np.uint64(ksize ** k))
        for b in range(ksize):
            extended = v_codes * np.uint64(ksize) + np.uint64(b)
            actual = _table_get(tables[j + 1], extended)
            ref = _table_get(tables[k + 1], extended % suffix_mod)
            fluct = np.abs(actual - v_counts * ref / denom)
            worst = max(worst, float(fluct.max()))
    return worst


def ps_order(seq: SymbolSequence, k_max: int, j_max: int | None = None,
             rule: str = "threshold") -> CriterionResult:
    """Peres-Shields order selection.

    ``threshold`` picks the smallest k whose fluctuation drops below
    N^(3/4) (k_max if none does); ``knee`` picks the k >= 1 with the
    largest drop ratio fluctuation(k-1) / fluctuation(k), fluctuations
    floored at 1. ``j_max`` defaults to one past k_max or the count-table
    heuristic bound, whichever is larger.
    """
    if k_max < 0:
        raise InvalidConfig("k_max must be non-negative")
    if rule not in ("threshold", "knee"):
        raise InvalidConfig(f"unknown Peres-Shields rule {rule!r}")
    if rule == "knee" and k_max < 1:
        raise InvalidConfig("the knee rule needs k_max >= 1")
    n = len(seq)
    if j_max is None:
        from .sigtests import default_max_order
        j_max = max(k_max + 1, default_max_order(n, seq.alphabet.size))
    if j_max <= k_max:
        raise InvalidConfig(f"j_max={j_max} must exceed k_max={k_max}")

    deltas = [(k, ps_fluctuation(seq, k, j_max)) for k in range(k_max + 1)]
    if rule == "threshold":
        cutoff = n ** 0.75
        order = next((k for k, d in deltas if d < cutoff), k_max)
    else:
        ratios = [(k, max(deltas[k - 1][1], 1.0) / max(deltas[k][1], 1.0))
                  for k in range(1, k_max + 1)]
        order = max(ratios, key=lambda kv: (kv[1], -kv[0]))[0]
    return CriterionResult("PS", tuple(deltas), order, rule=rule)
