"""Markov chain order estimation from symbol sequences.

Estimates the order of the Markov chain underlying a symbol sequence by
testing conditional mutual information at increasing orders, with three
parametric null approximations (normal and two gamma variants), a
permutation randomization test, classic baselines (AIC, BIC,
Peres-Shields), a Monte Carlo evaluation harness and a DNA ingestion path.
"""

from . import errors
from .criteria import (CriterionResult, aic_order, bic_order, log_likelihood,
                       ps_fluctuation, ps_order)
from .infotheory import (CmiEstimate, cmi, cmi_bias, cmi_variance, entropy,
                         mutual_information)
from .ingest import (NUCLEOTIDES, PURINE_PYRIMIDINE, SCHEMES, RecodeResult,
                     RecodingScheme, parse_fasta, read_symbol_file, recode,
                     write_symbol_file)
from .scanning import DiagnosticDump, MethodScan, ScanReport, ScanRow, diagnose, scan
from .sequence import (Alphabet, SymbolSequence, WordCountBundle, count_words,
                       decode_word, distinct_counts, encode_sequence, permute)
from .sigtests import (OrderEstimate, TestOutcome, default_max_order,
                       estimate_order, gamma_sf, gd1_pvalue, gd2_pvalue,
                       nd_pvalue, normal_sf, rd_pvalue,
                       surrogate_rank_pvalue)
from .simulate import (EvalConfig, EvalReport, EvalRow, TransitionModel,
                       evaluate, fit_transition_model, generate,
                       random_transition_model)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "SymbolSequence", "WordCountBundle", "encode_sequence",
    "count_words", "distinct_counts", "permute", "decode_word",
    "entropy", "mutual_information", "cmi", "cmi_bias", "cmi_variance",
    "CmiEstimate",
    "normal_sf", "gamma_sf", "nd_pvalue", "gd1_pvalue", "gd2_pvalue",
    "rd_pvalue", "surrogate_rank_pvalue", "estimate_order",
    "default_max_order", "TestOutcome", "OrderEstimate",
    "log_likelihood", "aic_order", "bic_order", "ps_fluctuation", "ps_order",
    "CriterionResult",
    "TransitionModel", "random_transition_model", "fit_transition_model",
    "generate", "EvalConfig", "EvalReport", "EvalRow", "evaluate",
    "parse_fasta", "recode", "RecodingScheme", "RecodeResult", "SCHEMES",
    "NUCLEOTIDES", "PURINE_PYRIMIDINE", "read_symbol_file",
    "write_symbol_file",
    "scan", "diagnose", "ScanReport", "ScanRow", "MethodScan",
    "DiagnosticDump",
    "errors",
]
