"""One-sided significance tests for zero conditional mutual information.

Four tests of H0: CMI(m) = 0 on a symbol sequence, sharing the plug-in
estimate as the statistic:

* ``ND``  - normal null with the analytic mean and variance.
* ``GD1`` - gamma null from the chi-square relation of the independence
  test, with shape K_mid * (K-1)^2 / 2 and scale 1/N (statistic in nats).
* ``GD2`` - gamma null moment-matched to the normal's mean and variance.
* ``RD``  - empirical null from permutation surrogates with a rank-based
  p-value correction.

``estimate_order`` scans m = 1, 2, ... and declares the chain order at the
first rejection followed by ``lookahead`` non-rejections.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, ndtr

from . import rng as rngmod
from .errors import InvalidConfig, InvalidParameter, SequenceTooShort
from .infotheory import CmiEstimate, cmi, cmi_value
from .sequence import _CODE_LIMIT, SymbolSequence

PARAMETRIC_METHODS = ("ND", "GD1", "GD2")
CMI_METHODS = ("ND", "GD1", "GD2", "RD")

# Floor for the clamped null mean in GD2, keeping the gamma domain valid
# when sparse tables drive the analytic mean to zero or below.
NULL_MEAN_FLOOR = 1e-12

# Rank-correction constants of the surrogate p-value.
_RANK_SHIFT = 0.326
_RANK_SCALE_SHIFT = 0.348


def surrogate_rank_pvalue(rank: int, n_surrogates: int) -> float:
    """One-sided p-value of an ascending rank among n_surrogates + 1 values."""
    if not 1 <= rank <= n_surrogates + 1:
        raise InvalidParameter(
            f"rank {rank} outside 1..{n_surrogates + 1}")
    return 1.0 - (rank - _RANK_SHIFT) / (n_surrogates + 1 + _RANK_SCALE_SHIFT)


@dataclass(frozen=True)
class TestOutcome:
    """Outcome of one significance test at one order."""

    method: str
    order: int
    statistic: float
    p_value: float
    alpha: float
    reject: bool = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        object.__setattr__(self, "reject", self.p_value < self.alpha)


@dataclass(frozen=True)
class OrderEstimate:
    """Result of an order scan: estimated order plus per-order outcomes.

    ``censored`` is set when the scan hit ``m_max`` before the stopping
    rule could complete (rejection persisting through the last order, or a
    lookahead window truncated by it).
    """

    order: int
    censored: bool
    m_max: int
    lookahead: int
    outcomes: tuple[TestOutcome, ...]


def normal_sf(z: float) -> float:
    """Upper-tail probability of the standard normal."""
    if math.isnan(z):
        raise InvalidParameter("z must be a real number")
    return float(ndtr(-z))


def gamma_sf(shape: float, scale: float, x: float) -> float:
    """Upper-tail probability of a Gamma(shape, scale) distribution."""
    if shape <= 0 or scale <= 0:
        raise InvalidParameter(
            f"gamma parameters must be positive, got shape={shape} scale={scale}"
        )
    if x <= 0:
        return 1.0
    return float(gammaincc(shape, x / scale))


def nd_pvalue(est: CmiEstimate, alpha: float = 0.05) -> TestOutcome:
    """Normal-null test: statistic against N(null_mean, variance).

    A zero variance degenerates to a point mass at the null mean: p = 1
    when the statistic does not exceed it, else p = 0.
    """
    if est.variance > 0.0:
        z = (est.value - est.null_mean) / math.sqrt(est.variance)
        p = normal_sf(z)
    else:
        p = 1.0 if est.value <= est.null_mean else 0.0
    return TestOutcome("ND", est.order, est.value, p, alpha)


def gd1_pvalue(est: CmiEstimate, alpha: float = 0.05) -> TestOutcome:
    """Gamma-null test from the chi-square relation.

    With the statistic in nats, 2 * N * CMI is asymptotically chi-square
    with K_mid * (K-1)^2 degrees of freedom under H0, i.e. the statistic is
    Gamma(K_mid * (K-1)^2 / 2, 1/N).
    """
    k = est.alphabet_size
    if k < 2:
        raise InvalidParameter("GD1 needs an alphabet of at least 2 symbols")
    if est.distinct_mid < 1:
        raise InvalidParameter("GD1 needs at least one observed context word")
    shape = est.distinct_mid * (k - 1) ** 2 / 2.0
    scale = 1.0 / est.n_windows
    p = gamma_sf(shape, scale, est.value)
    return TestOutcome("GD1", est.order, est.value, p, alpha)


def gd2_pvalue(est: CmiEstimate, alpha: float = 0.05) -> TestOutcome:
    """Gamma-null test with moments taken from the normal approximation.

    The gamma shape and scale reproduce the analytic null mean and
    variance: shape = b^2/V, scale = V/b, with the null mean floored at a
    tiny positive value so the parameters stay in the gamma domain.
    """
    b = max(est.null_mean, NULL_MEAN_FLOOR)
    v = est.variance
    if v > 0.0:
        p = gamma_sf(b * b / v, v / b, est.value)
    else:
        p = 1.0 if est.value <= b else 0.0
    return TestOutcome("GD2", est.order, est.value, p, alpha)


def rd_pvalue(seq: SymbolSequence, m: int, n_surrogates: int = 1000,
              seed=None, alpha: float = 0.05) -> TestOutcome:
    """Randomization test: empirical null from permutation surrogates.

    The observed statistic is ranked (ascending, ties broken uniformly at
    random) among the statistics of ``n_surrogates`` independent random
    permutations of the sequence, and the one-sided p-value is

        p = 1 - (rank - 0.326) / (n_surrogates + 1 + 0.348).

    Each surrogate draws from its own sub-stream of the master seed, so the
    result does not depend on evaluation order.
    """
    if n_surrogates < 1:
        raise InvalidConfig("need at least one surrogate")
    n = len(seq)
    if n <= m:
        raise SequenceTooShort(f"need more than m={m} symbols, got {n}")
    base = rngmod.resolve_seed(seed)
    k = seq.alphabet.size
    data = seq.data

    observed = cmi_value(data, k, m)
    surrogate_vals = np.empty(n_surrogates)
    for i in range(n_surrogates):
        stream = rngmod.derive(base, rngmod.TAG_SURROGATE, m, i)
        surrogate_vals[i] = cmi_value(stream.permutation(data), k, m)

    below = int(np.count_nonzero(surrogate_vals < observed))
    tied = int(np.count_nonzero(surrogate_vals == observed)) + 1
    rank = below + 1
    if tied > 1:
        tie_stream = rngmod.derive(base, rngmod.TAG_TIEBREAK, m)
        rank += int(tie_stream.integers(tied))
    p = surrogate_rank_pvalue(rank, n_surrogates)
    return TestOutcome("RD", m, observed, p, alpha)


def default_max_order(n: int, alphabet_size: int) -> int:
    """Largest order m with alphabet_size**(m+1) <= (n-m)/5, at least 1.

    The bound keeps at least five expected counts per cell of a fully
    observed word table; callers may override it up to the code width.
    """
    m = 1
    while True:
        nxt = m + 1
        if n - nxt < 1 or alphabet_size ** (nxt + 1) > (n - nxt) / 5:
            break
        if alphabet_size ** (nxt + 1) > _CODE_LIMIT:
            break
        m = nxt
    return m


def decide_order(rejects: Sequence[bool], lookahead: int,
                 exhausted: bool) -> tuple[int, bool] | None:
    """Stopping rule of the order scan on a prefix of rejection flags.

    Returns (order, censored) once the rule can decide, else None. The
    estimated order is the first m whose rejection is followed by
    ``lookahead`` consecutive non-rejections; no rejection at m = 1 means
    order 0. When the scan is ``exhausted`` without a completed
    confirmation the last rejecting order is returned as censored.
    """
    if not rejects:
        return None
    if not rejects[0]:
        return 0, False
    candidate = 0
    confirm = 0
    for m, rej in enumerate(rejects, start=1):
        if rej:
            candidate, confirm = m, 0
        else:
            confirm += 1
            if confirm >= lookahead:
                return candidate, False
    if not exhausted:
        return None
    return candidate, True


def estimate_order(seq: SymbolSequence, method: str = "GD1",
                   alpha: float = 0.05, m_max: int | None = None,
                   lookahead: int = 1, n_surrogates: int = 1000,
                   seed=None) -> OrderEstimate:
    """Estimate the Markov chain order by scanning CMI tests over m.

    Parameters
    ----------
    seq : SymbolSequence
        Input sequence; the alphabet must have at least 2 symbols.
    method : str
        One of "ND", "GD1", "GD2", "RD".
    alpha : float
        Significance level of each one-sided test.
    m_max : int, optional
        Largest order to scan; defaults to ``default_max_order``.
    lookahead : int
        Number of consecutive non-rejections required after the rejection
        at the estimated order.
    n_surrogates, seed
        Randomization-test parameters; ignored by the parametric tests.

    Orders are tested lazily, so the scan stops as soon as the stopping
    rule decides; all evaluated outcomes are recorded.
    """
    method = method.upper()
    if method not in CMI_METHODS:
        raise InvalidConfig(f"unknown method {method!r}")
    if seq.alphabet.size < 2:
        raise InvalidConfig("order estimation needs an alphabet of >= 2 symbols")
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f"alpha must be in (0, 1), got {alpha}")
    if lookahead < 1:
        raise InvalidConfig("lookahead must be at least 1")
    n = len(seq)
    if m_max is None:
        m_max = default_max_order(n, seq.alphabet.size)
    if m_max < 1:
        raise InvalidConfig("m_max must be at least 1")
    if seq.alphabet.size ** (m_max + 1) > _CODE_LIMIT:
        raise InvalidConfig(f"m_max={m_max} exceeds the word-code width")
    if n <= m_max:
        raise SequenceTooShort(f"need more than m_max={m_max} symbols, got {n}")
    if method == "RD":
        seed = rngmod.resolve_seed(seed)

    outcomes: list[TestOutcome] = []
    rejects: list[bool] = []
    for m in range(1, m_max + 1):
        outcome = _single_test(seq, m, method, alpha, n_surrogates, seed)
        outcomes.append(outcome)
        rejects.append(outcome.reject)
        decision = decide_order(rejects, lookahead, exhausted=(m == m_max))
        if decision is not None:
            order, censored = decision
            return OrderEstimate(order, censored, m_max, lookahead,
                                 tuple(outcomes))
    raise AssertionError("order scan failed to decide")  # pragma: no cover


def _single_test(seq, m, method, alpha, n_surrogates, seed) -> TestOutcome:
    if method == "RD":
        return rd_pvalue(seq, m, n_surrogates, seed, alpha)
    est = cmi(seq, m)
    if method == "ND":
        return nd_pvalue(est, alpha)
    if method == "GD1":
        return gd1_pvalue(est, alpha)
    return gd2_pvalue(est, alpha)
