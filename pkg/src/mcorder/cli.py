"""Command-line interface.

Subcommands: ``ingest`` (FASTA to symbol file), ``scan``/``estimate``
(order scan on a symbol file), ``simulate`` (emit a synthetic sequence),
``eval`` (Monte Carlo harness from a JSON config) and ``diagnose``
(null-distribution dump at one order).

Exit codes: 0 success, 2 invalid configuration, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import rng as rngmod
from .errors import (EmptyTable, InvalidConfig, InvalidParameter,
                     MalformedFasta, OrderTooLarge, SequenceTooShort,
                     UnknownSymbol)
from .ingest import (SCHEMES, Alphabet, parse_fasta, read_symbol_file,
                     recode, write_symbol_file)
from .scanning import diagnose, scan
from .simulate import (ALL_METHODS, EvalConfig, evaluate,
                       fit_transition_model, generate,
                       random_transition_model)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3

_CONFIG_ERRORS = (InvalidConfig, InvalidParameter, OrderTooLarge)
_INPUT_ERRORS = (MalformedFasta, UnknownSymbol, SequenceTooShort,
                 EmptyTable, OSError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcorder",
        description="Markov chain order estimation from symbol sequences "
                    "via significance tests of conditional mutual information.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="recode a FASTA file into a symbol file")
    p.add_argument("--in", dest="infile", required=True, help="FASTA input")
    p.add_argument("--out", required=True, help="symbol file output")
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="nucl4")
    p.add_argument("--on-other", choices=["skip", "error"], default="skip",
                   help="how to treat residues outside the scheme")

    for name in ("scan", "estimate"):
        p = sub.add_parser(name, help="order scan on a symbol file")
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--alphabet", default=None,
                       help="labels for headerless symbol files, e.g. ACGT")
        p.add_argument("--method", action="append", choices=list(ALL_METHODS),
                       help="repeatable; default GD1")
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--mmax", type=int, default=None)
        p.add_argument("--lookahead", type=int, default=1)
        p.add_argument("--surrogates", type=int, default=1000, metavar="M")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--ps-rule", choices=["threshold", "knee"],
                       default="knee")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("simulate", help="generate a synthetic Markov sequence")
    p.add_argument("--K", type=int, default=2, help="alphabet size")
    p.add_argument("--L", type=int, required=True, help="chain order")
    p.add_argument("--N", type=int, required=True, help="sequence length")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--fit-from", default=None,
                   help="fit the transition table on this symbol file "
                        "instead of drawing it at random")
    p.add_argument("--out", required=True, help="symbol file output")

    p = sub.add_parser("eval", help="Monte Carlo evaluation from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-json", default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("diagnose", help="null-distribution dump at one order")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--alphabet", default=None)
    p.add_argument("--order", type=int, required=True, metavar="M")
    p.add_argument("--surrogates", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")
    return parser


def _write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_sequence(path: str, alphabet_labels: str | None):
    alphabet = Alphabet.from_string(alphabet_labels) if alphabet_labels else None
    return read_symbol_file(path, alphabet)


def _cmd_ingest(args) -> int:
    records = parse_fasta(args.infile)
    result = recode(records, SCHEMES[args.scheme], concat=True,
                    on_other=args.on_other)
    write_symbol_file(result.sequence, args.out)
    print(f"wrote {len(result.sequence)} symbols from {len(records)} "
          f"record(s), skipped {result.skipped} residue(s)", file=sys.stderr)
    return EXIT_OK


def _cmd_scan(args) -> int:
    seq = _load_sequence(args.infile, args.alphabet)
    methods = tuple(args.method) if args.method else ("GD1",)
    report = scan(seq, methods=methods, alpha=args.alpha, m_max=args.mmax,
                  lookahead=args.lookahead, n_surrogates=args.surrogates,
                  seed=args.seed, source=args.infile, ps_rule=args.ps_rule)
    _write_output(report.to_json() if args.format == "json" else report.to_csv(),
                  args.out)
    for name, order in report.estimated_orders().items():
        print(f"{name}: estimated order {order}", file=sys.stderr)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if args.fit_from is not None:
        base = read_symbol_file(args.fit_from)
        model = fit_transition_model(base, args.L)
    else:
        model_rng = rngmod.derive(args.seed, rngmod.TAG_MODEL)
        model = random_transition_model(args.K, args.L, model_rng)
    gen_rng = rngmod.derive(args.seed, rngmod.TAG_GENERATE)
    seq = generate(model, args.N, gen_rng, burn_in=args.burn_in)
    write_symbol_file(seq, args.out)
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = EvalConfig.from_file(args.config)
    report = evaluate(config, n_jobs=args.jobs)
    _write_output(report.to_csv(), args.out_csv)
    if args.out_json is not None:
        _write_output(report.to_json(), args.out_json)
    counts = report.success_counts()
    for method in config.methods:
        per_n = " ".join(f"N={n}:{counts[method][n]}/{config.realizations}"
                         for n in config.lengths)
        print(f"{method}: {per_n}", file=sys.stderr)
    if report.errors:
        print(f"{len(report.errors)} realization(s) failed; see JSON summary",
              file=sys.stderr)
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    seq = _load_sequence(args.infile, args.alphabet)
    dump = diagnose(seq, args.order, n_surrogates=args.surrogates,
                    seed=args.seed)
    _write_output(dump.to_csv(), args.out)
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "scan": _cmd_scan,
    "estimate": _cmd_scan,
    "simulate": _cmd_simulate,
    "eval": _cmd_eval,
    "diagnose": _cmd_diagnose,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _CONFIG_ERRORS as exc:
        print(f"mcorder: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"mcorder: invalid JSON config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _INPUT_ERRORS as exc:
        print(f"mcorder: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
