"""Markov chain models, sequence generation and the evaluation harness.

Transition tables are dense (K^L rows, K columns), with contexts coded as
in the word-count machinery: most recent symbol in the highest digit. The
harness draws one chain per realization (or reuses a fitted one), generates
a sequence, runs every configured estimator and tallies how often the true
order is recovered. Sub-streams are derived per (length, realization,
purpose), so reports are identical at any parallelism level.
"""

from __future__ import annotations

import bisect
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from io import StringIO

import numpy as np

from . import rng as rngmod
from .criteria import aic_order, bic_order, ps_order
from .errors import InvalidConfig, OrderTooLarge, SequenceTooShort
from .sequence import (Alphabet, SymbolSequence, check_code_width,
                       window_codes)
from .sigtests import CMI_METHODS, estimate_order

CRITERION_METHODS = ("AIC", "BIC", "PS")
ALL_METHODS = CMI_METHODS + CRITERION_METHODS

SCHEMA_VERSION = 1

# Dense transition tables above this entry count are refused outright.
_DENSE_MODEL_LIMIT = 1 << 24

_DIGITS = "0123456789"


def _digit_alphabet(k: int) -> Alphabet:
    if k <= len(_DIGITS):
        return Alphabet.from_string(_DIGITS[:k])
    return Alphabet(tuple(f"s{i}" for i in range(k)))


@dataclass(frozen=True)
class TransitionModel:
    """Fixed-order Markov chain over K symbols.

    ``table[c, a]`` is the probability of emitting symbol ``a`` from the
    length-L context coded ``c`` (most recent symbol in the highest digit).
    """

    alphabet: Alphabet
    order: int
    table: np.ndarray
    source: str = "random"
    unseen_contexts: int = 0

    def __post_init__(self):
        k = self.alphabet.size
        if self.order < 1:
            raise InvalidConfig("model order must be at least 1")
        table = np.ascontiguousarray(self.table, dtype=np.float64)
        if table.shape != (k ** self.order, k):
            raise InvalidConfig(
                f"table shape {table.shape} != ({k ** self.order}, {k})")
        if np.any(table < 0):
            raise InvalidConfig("transition probabilities must be non-negative")
        if np.any(np.abs(table.sum(axis=1) - 1.0) > 1e-12):
            raise InvalidConfig("transition rows must sum to 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


def random_transition_model(alphabet_size: int, order: int,
                            rng: np.random.Generator) -> TransitionModel:
    """Random chain: each row is K uniform draws normalized to sum 1.

    This is deliberately the normalized-uniform construction, not a flat
    Dirichlet; the two differ in how often near-deterministic rows occur.
    """
    if alphabet_size < 2:
        raise InvalidConfig("need at least 2 symbols")
    if order < 1:
        raise InvalidConfig("model order must be at least 1")
    check_code_width(alphabet_size, order + 1)
    if alphabet_size ** (order + 1) > _DENSE_MODEL_LIMIT:
        raise OrderTooLarge(
            f"dense K^L x K table too large for K={alphabet_size}, L={order}")
    rows = rng.uniform(0.0, 1.0, size=(alphabet_size ** order, alphabet_size))
    table = rows / rows.sum(axis=1, keepdims=True)
    return TransitionModel(_digit_alphabet(alphabet_size), order, table)


def fit_transition_model(seq: SymbolSequence, order: int) -> TransitionModel:
    """Maximum-likelihood transition table of the given order.

    Rows of contexts never observed in the sequence fall back to the
    uniform distribution; their number is recorded on the model.
    """
    if order < 1:
        raise InvalidConfig("model order must be at least 1")
    n = len(seq)
    if n <= order:
        raise SequenceTooShort(f"need more than L={order} symbols, got {n}")
    k = seq.alphabet.size
    check_code_width(k, order + 1)
    if k ** (order + 1) > _DENSE_MODEL_LIMIT:
        raise OrderTooLarge(
            f"dense K^L x K table too large for K={k}, L={order}")
    codes = window_codes(seq.data, order, k)
    joint = np.bincount(codes.astype(np.int64), minlength=k ** (order + 1))
    # full code = x_t * K^L + context code, so reshape(K, K^L).T gives
    # counts[context, symbol]
    counts = joint.reshape(k, k ** order).T.astype(np.float64)
    totals = counts.sum(axis=1, keepdims=True)
    unseen = int(np.count_nonzero(totals == 0))
    table = np.where(totals > 0, counts / np.where(totals > 0, totals, 1.0),
                     1.0 / k)
    return TransitionModel(seq.alphabet, order, table, source="fitted",
                           unseen_contexts=unseen)


def generate(model: TransitionModel, n: int, rng: np.random.Generator,
             burn_in: int = 1000) -> SymbolSequence:
    """Generate n symbols from the chain.

    The initial context is drawn uniformly over all K^L contexts and
    ``burn_in`` steps are discarded to approximate stationarity before
    emission starts.
    """
    if n < 1:
        raise InvalidConfig("sequence length must be at least 1")
    if burn_in < 0:
        raise InvalidConfig("burn-in must be non-negative")
    k = model.alphabet.size
    lag = model.order
    cum_rows = np.cumsum(model.table, axis=1).tolist()
    ctx = int(rng.integers(k ** lag))
    uniforms = rng.random(burn_in + n).tolist()
    shift = k ** (lag - 1)
    out = np.empty(n, dtype=np.int64)
    for i in range(burn_in + n):
        row = cum_rows[ctx]
        sym = bisect.bisect_right(row, uniforms[i])
        if sym >= k:  # guard against cumulative round-off at the top
            sym = k - 1
        if i >= burn_in:
            out[i - burn_in] = sym
        ctx = sym * shift + ctx // k
    return SymbolSequence(model.alphabet, out)


@dataclass(frozen=True)
class EvalConfig:
    """Parameters of one Monte Carlo evaluation run."""

    methods: tuple[str, ...]
    alphabet_size: int
    true_order: int
    lengths: tuple[int, ...]
    realizations: int
    seed: int
    matrix_source: str = "random"
    fitted_sequence: str | None = None
    alpha: float = 0.05
    n_surrogates: int = 1000
    m_max: int | None = None
    lookahead: int = 1
    burn_in: int = 1000
    # the knee rule is the variant that tracks the other criteria in
    # practice; the raw N^(3/4) threshold is far too conservative here
    ps_rule: str = "knee"

    def __post_init__(self):
        object.__setattr__(self, "methods",
                           tuple(m.upper() for m in self.methods))
        object.__setattr__(self, "lengths", tuple(int(n) for n in self.lengths))
        for m in self.methods:
            if m not in ALL_METHODS:
                raise InvalidConfig(f"unknown method {m!r}")
        if self.matrix_source not in ("random", "fitted"):
            raise InvalidConfig(
                f"matrix_source must be 'random' or 'fitted', "
                f"got {self.matrix_source!r}")
        if self.matrix_source == "fitted" and not self.fitted_sequence:
            raise InvalidConfig("fitted matrix_source needs fitted_sequence")
        if self.alphabet_size < 2:
            raise InvalidConfig("need at least 2 symbols")
        if self.true_order < 1:
            raise InvalidConfig("true order must be at least 1")
        if self.realizations < 0:
            raise InvalidConfig("realizations must be non-negative")
        if self.seed < 0:
            raise InvalidConfig("seed must be non-negative")
        if self.ps_rule not in ("threshold", "knee"):
            raise InvalidConfig(f"unknown Peres-Shields rule {self.ps_rule!r}")

    @property
    def scan_m_max(self) -> int:
        # the order is sought in 1..L+1 unless overridden
        return self.m_max if self.m_max is not None else self.true_order + 1

    @classmethod
    def from_file(cls, path: str) -> "EvalConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise InvalidConfig("evaluation config must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        missing = {"methods", "alphabet_size", "true_order", "lengths",
                   "realizations", "seed"} - set(raw)
        if missing:
            raise InvalidConfig(f"missing config keys: {sorted(missing)}")
        raw["methods"] = tuple(raw["methods"])
        raw["lengths"] = tuple(raw["lengths"])
        return cls(**raw)


@dataclass(frozen=True)
class EvalRow:
    """One (method, realization) result of the harness."""

    method: str
    alphabet_size: int
    true_order: int
    length: int
    realization: int
    estimated_order: int
    censored: bool
    runtime_ms: float


@dataclass
class EvalReport:
    """Harness output: per-realization rows plus failure records.

    The CSV serialization is fully determined by config + seed; wall-clock
    timings live only in the JSON summary's ``timing`` block.
    """

    config: EvalConfig
    rows: list[EvalRow] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    wall_s: float = 0.0

    def success_counts(self) -> dict[str, dict[int, int]]:
        """Per method and length: number of realizations with the true order."""
        out: dict[str, dict[int, int]] = {
            m: {n: 0 for n in self.config.lengths} for m in self.config.methods}
        for row in self.rows:
            if row.estimated_order == self.config.true_order and not row.censored:
                out[row.method][row.length] += 1
        return out

    def to_csv(self) -> str:
        """Deterministic per-realization table (no timing columns)."""
        buf = StringIO()
        buf.write("method,K,L_true,N,realization,L_hat,censored\n")
        for r in self.rows:
            buf.write(f"{r.method},{r.alphabet_size},{r.true_order},"
                      f"{r.length},{r.realization},{r.estimated_order},"
                      f"{str(r.censored).lower()}\n")
        return buf.getvalue()

    def summary(self, include_timing: bool = True) -> dict:
        cfg = self.config
        body = {
            "schema_version": SCHEMA_VERSION,
            "config": {
                "methods": list(cfg.methods),
                "alphabet_size": cfg.alphabet_size,
                "true_order": cfg.true_order,
                "lengths": list(cfg.lengths),
                "realizations": cfg.realizations,
                "seed": cfg.seed,
                "matrix_source": cfg.matrix_source,
                "fitted_sequence": cfg.fitted_sequence,
                "alpha": cfg.alpha,
                "n_surrogates": cfg.n_surrogates,
                "m_max": cfg.scan_m_max,
                "lookahead": cfg.lookahead,
                "burn_in": cfg.burn_in,
                "ps_rule": cfg.ps_rule,
            },
            "success_counts": {
                method: {str(n): c for n, c in per_n.items()}
                for method, per_n in self.success_counts().items()
            },
            "errors": self.errors,
        }
        if include_timing:
            # wall-clock: informational only, varies run to run
            per_method: dict[str, list[float]] = {}
            for row in self.rows:
                per_method.setdefault(row.method, []).append(row.runtime_ms)
            body["timing"] = {
                "total_s": self.wall_s,
                "mean_ms_per_realization": {
                    m: sum(v) / len(v) for m, v in per_method.items() if v},
            }
        return body

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.summary(include_timing), indent=2,
                          sort_keys=True) + "\n"


def _estimate_with_method(seq, method, config, rd_seed) -> tuple[int, bool]:
    m_max = config.scan_m_max
    if method in CMI_METHODS:
        est = estimate_order(seq, method, alpha=config.alpha, m_max=m_max,
                             lookahead=config.lookahead,
                             n_surrogates=config.n_surrogates,
                             seed=rd_seed if method == "RD" else None)
        return est.order, est.censored
    if method == "AIC":
        return aic_order(seq, m_max).order, False
    if method == "BIC":
        return bic_order(seq, m_max).order, False
    return ps_order(seq, m_max, rule=config.ps_rule).order, False


def _run_realization(args) -> tuple[int, int, list[EvalRow], str | None]:
    config, fitted, length, realization = args
    rows: list[EvalRow] = []
    try:
        if fitted is not None:
            model = fitted
        else:
            model_rng = rngmod.derive(config.seed, rngmod.TAG_MODEL,
                                      length, realization)
            model = random_transition_model(config.alphabet_size,
                                            config.true_order, model_rng)
        gen_rng = rngmod.derive(config.seed, rngmod.TAG_GENERATE,
                                length, realization)
        seq = generate(model, length, gen_rng, burn_in=config.burn_in)
        for method in config.methods:
            rd_seed = (config.seed, rngmod.TAG_TEST, length, realization)
            start = time.perf_counter()
            order, censored = _estimate_with_method(seq, method, config, rd_seed)
            elapsed_ms = (time.perf_counter() - start) * 1e3
            rows.append(EvalRow(method, config.alphabet_size,
                                config.true_order, length, realization,
                                order, censored, elapsed_ms))
    except Exception as exc:  # noqa: BLE001 - recorded, never silent
        return length, realization, rows, f"{type(exc).__name__}: {exc}"
    return length, realization, rows, None


def evaluate(config: EvalConfig, n_jobs: int = 1) -> EvalReport:
    """Run the Monte Carlo evaluation described by ``config``.

    Every (length, realization) cell is independent with its own derived
    random streams, so the report is identical for any ``n_jobs``.
    """
    if n_jobs < 1:
        raise InvalidConfig("n_jobs must be at least 1")
    fitted = None
    if config.matrix_source == "fitted":
        from .ingest import read_symbol_file
        base = read_symbol_file(config.fitted_sequence)
        fitted = fit_transition_model(base, config.true_order)

    tasks = [(config, fitted, n, r)
             for n in config.lengths for r in range(config.realizations)]
    start = time.perf_counter()
    if n_jobs == 1 or len(tasks) <= 1:
        results = [_run_realization(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_run_realization, tasks, chunksize=1))
    wall = time.perf_counter() - start

    results.sort(key=lambda item: (item[0], item[1]))
    report = EvalReport(config=config, wall_s=wall)
    for length, realization, rows, error in results:
        report.rows.extend(rows)
        if error is not None:
            report.errors.append({"length": length,
                                  "realization": realization,
                                  "error": error})
    return report
