"""Order-scan and null-diagnostic reports with CSV/JSON serialization.

``scan`` evaluates every requested method at every order 1..m_max and
derives each method's estimated order with the shared stopping rule, so a
single report carries both the decisions and the full per-order evidence.
``diagnose`` dumps everything needed to replot the null-distribution
comparison at one order: the observed statistic, the surrogate statistics
and the parametric null parameters.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from io import StringIO

from . import rng as rngmod
from .criteria import aic_order, bic_order, ps_order
from .errors import InvalidConfig
from .infotheory import cmi, cmi_value
from .sequence import _CODE_LIMIT, SymbolSequence
from .sigtests import (CMI_METHODS, NULL_MEAN_FLOOR, TestOutcome,
                       decide_order, default_max_order, gd1_pvalue,
                       gd2_pvalue, nd_pvalue, rd_pvalue)
from .simulate import ALL_METHODS, CRITERION_METHODS, SCHEMA_VERSION


@dataclass(frozen=True)
class ScanRow:
    """Per-order evidence for one method.

    CMI methods fill all fields; criteria fill only ``value`` (their score
    at order ``order``).
    """

    method: str
    order: int
    value: float
    null_mean: float | None = None
    variance: float | None = None
    p_value: float | None = None
    reject: bool | None = None


@dataclass(frozen=True)
class MethodScan:
    """One method's scan: decision plus its per-order rows."""

    method: str
    estimated_order: int
    censored: bool
    rows: tuple[ScanRow, ...]
    wall_ms: float


@dataclass(frozen=True)
class ScanReport:
    """Full order-scan report for one input sequence."""

    source: str
    n: int
    alphabet: tuple[str, ...]
    scheme: str | None
    alpha: float
    m_max: int
    lookahead: int
    n_surrogates: int
    seed: tuple[int, ...] | None
    methods: tuple[MethodScan, ...]
    schema_version: int = SCHEMA_VERSION

    def estimated_orders(self) -> dict[str, int]:
        return {m.method: m.estimated_order for m in self.methods}

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("method,m,value,null_mean,variance,p_value,reject\n")
        for scan in self.methods:
            for r in scan.rows:
                cells = [r.method, str(r.order), repr(r.value)]
                cells.append("" if r.null_mean is None else repr(r.null_mean))
                cells.append("" if r.variance is None else repr(r.variance))
                cells.append("" if r.p_value is None else repr(r.p_value))
                cells.append("" if r.reject is None else str(r.reject).lower())
                buf.write(",".join(cells) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ScanReport":
        raw = json.loads(text)
        methods = tuple(
            MethodScan(method=m["method"],
                       estimated_order=m["estimated_order"],
                       censored=m["censored"],
                       rows=tuple(ScanRow(**r) for r in m["rows"]),
                       wall_ms=m["wall_ms"])
            for m in raw["methods"])
        return cls(source=raw["source"], n=raw["n"],
                   alphabet=tuple(raw["alphabet"]), scheme=raw["scheme"],
                   alpha=raw["alpha"], m_max=raw["m_max"],
                   lookahead=raw["lookahead"],
                   n_surrogates=raw["n_surrogates"],
                   seed=None if raw["seed"] is None else tuple(raw["seed"]),
                   methods=methods,
                   schema_version=raw["schema_version"])


def scan(seq: SymbolSequence, methods=("GD1",), alpha: float = 0.05,
         m_max: int | None = None, lookahead: int = 1,
         n_surrogates: int = 1000, seed=None, source: str = "<memory>",
         scheme: str | None = None, ps_rule: str = "knee") -> ScanReport:
    """Run order scans for several methods over one sequence.

    The conditional-MI estimates are computed once per order and shared by
    the parametric tests; only the randomization test touches the random
    streams, so parametric-only scans are reproducible without a seed.
    """
    methods = tuple(m.upper() for m in methods)
    for m in methods:
        if m not in ALL_METHODS:
            raise InvalidConfig(f"unknown method {m!r}")
    if seq.alphabet.size < 2:
        raise InvalidConfig("order scans need an alphabet of >= 2 symbols")
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f"alpha must be in (0, 1), got {alpha}")
    if lookahead < 1:
        raise InvalidConfig("lookahead must be at least 1")
    n = len(seq)
    if m_max is None:
        m_max = default_max_order(n, seq.alphabet.size)
    if m_max < 1 or n <= m_max:
        raise InvalidConfig(f"m_max={m_max} invalid for a sequence of {n} symbols")
    if seq.alphabet.size ** (m_max + 1) > _CODE_LIMIT:
        raise InvalidConfig(f"m_max={m_max} exceeds the word-code width")
    resolved = rngmod.resolve_seed(seed) if "RD" in methods else None

    estimates = None
    if any(m in ("ND", "GD1", "GD2") for m in methods):
        estimates = [cmi(seq, m) for m in range(1, m_max + 1)]

    scans = []
    for method in methods:
        start = time.perf_counter()
        if method in CMI_METHODS:
            scans.append(_scan_cmi_method(seq, method, estimates, alpha,
                                          m_max, lookahead, n_surrogates,
                                          resolved, start))
        else:
            scans.append(_scan_criterion(seq, method, m_max, ps_rule, start))
    return ScanReport(source=source, n=n, alphabet=seq.alphabet.labels,
                      scheme=scheme, alpha=alpha, m_max=m_max,
                      lookahead=lookahead, n_surrogates=n_surrogates,
                      seed=resolved, methods=tuple(scans))


def _scan_cmi_method(seq, method, estimates, alpha, m_max, lookahead,
                     n_surrogates, seed, start) -> MethodScan:
    outcomes: list[TestOutcome] = []
    rows: list[ScanRow] = []
    for m in range(1, m_max + 1):
        if method == "RD":
            outcome = rd_pvalue(seq, m, n_surrogates, seed, alpha)
            rows.append(ScanRow(method, m, outcome.statistic, None, None,
                                outcome.p_value, outcome.reject))
        else:
            est = estimates[m - 1]
            test = {"ND": nd_pvalue, "GD1": gd1_pvalue, "GD2": gd2_pvalue}[method]
            outcome = test(est, alpha)
            rows.append(ScanRow(method, m, outcome.statistic, est.null_mean,
                                est.variance, outcome.p_value, outcome.reject))
        outcomes.append(outcome)
    order, censored = decide_order([o.reject for o in outcomes], lookahead,
                                   exhausted=True)
    wall_ms = (time.perf_counter() - start) * 1e3
    return MethodScan(method, order, censored, tuple(rows), wall_ms)


def _scan_criterion(seq, method, m_max, ps_rule, start) -> MethodScan:
    if method == "AIC":
        result = aic_order(seq, m_max)
    elif method == "BIC":
        result = bic_order(seq, m_max)
    else:
        result = ps_order(seq, m_max, rule=ps_rule)
    rows = tuple(ScanRow(method, k, score) for k, score in result.scores)
    wall_ms = (time.perf_counter() - start) * 1e3
    return MethodScan(method, result.order, False, rows, wall_ms)


@dataclass(frozen=True)
class DiagnosticDump:
    """Observed statistic, surrogate statistics and null parameters at one order."""

    order: int
    n: int
    observed: float
    surrogates: tuple[float, ...]
    null_mean: float
    variance: float
    gd1_shape: float
    gd1_scale: float
    gd2_shape: float | None
    gd2_scale: float | None
    degenerate: bool
    seed: tuple[int, ...]

    def to_csv(self) -> str:
        buf = StringIO()
        buf.write("record,index,value\n")
        buf.write(f"observed,0,{self.observed!r}\n")
        for i, v in enumerate(self.surrogates):
            buf.write(f"surrogate,{i},{v!r}\n")
        for name in ("null_mean", "variance", "gd1_shape", "gd1_scale",
                     "gd2_shape", "gd2_scale"):
            value = getattr(self, name)
            buf.write(f"param,{name},{'' if value is None else repr(value)}\n")
        buf.write(f"param,degenerate,{int(self.degenerate)}\n")
        return buf.getvalue()


def diagnose(seq: SymbolSequence, m: int, n_surrogates: int = 1000,
             seed=None) -> DiagnosticDump:
    """Null-distribution diagnostics for CMI at one order.

    Emits the observed estimate, the surrogate estimates forming the
    empirical null, and the parametric null parameters, which is enough to
    replot the distribution comparison externally. Degenerate nulls (zero
    variance) are flagged.
    """
    if n_surrogates < 1:
        raise InvalidConfig("need at least one surrogate")
    base = rngmod.resolve_seed(seed)
    est = cmi(seq, m)
    k = seq.alphabet.size
    data = seq.data
    values = []
    for i in range(n_surrogates):
        stream = rngmod.derive(base, rngmod.TAG_SURROGATE, m, i)
        values.append(cmi_value(stream.permutation(data), k, m))

    b = max(est.null_mean, NULL_MEAN_FLOOR)
    v = est.variance
    degenerate = v <= 0.0 or len(set(values)) <= 1
    gd2_shape = b * b / v if v > 0.0 else None
    gd2_scale = v / b if v > 0.0 else None
    return DiagnosticDump(
        order=m, n=len(seq), observed=est.value, surrogates=tuple(values),
        null_mean=est.null_mean, variance=v,
        gd1_shape=est.distinct_mid * (k - 1) ** 2 / 2.0,
        gd1_scale=1.0 / est.n_windows,
        gd2_shape=gd2_shape, gd2_scale=gd2_scale,
        degenerate=degenerate, seed=base)
