"""FASTA ingestion, nucleotide recoding and the plain-text symbol format.

Symbol files carry an optional self-describing header line
``#alphabet=...`` followed by either a single line of contiguous
single-character symbols (alphabets of up to 10 labels) or one label per
line. Both forms round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, MalformedFasta, UnknownSymbol
from .sequence import Alphabet, SymbolSequence, encode_sequence

NUCLEOTIDES = Alphabet.from_string("ACGT")
# purine (A, G) / pyrimidine (C, T) binary alphabet
PURINE_PYRIMIDINE = Alphabet.from_string("RY")

_MAX_SINGLE_LINE_ALPHABET = 10


@dataclass(frozen=True)
class RecodingScheme:
    """Residue-to-index mapping used when turning DNA into symbols."""

    name: str
    alphabet: Alphabet
    mapping: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.mapping)


SCHEMES = {
    "nucl4": RecodingScheme("nucl4", NUCLEOTIDES,
                            (("A", 0), ("C", 1), ("G", 2), ("T", 3))),
    "rr2": RecodingScheme("rr2", PURINE_PYRIMIDINE,
                          (("A", 0), ("G", 0), ("C", 1), ("T", 1))),
}


@dataclass(frozen=True)
class RecodeResult:
    """Recoded sequences plus the number of residues skipped."""

    sequences: tuple[SymbolSequence, ...]
    skipped: int

    @property
    def sequence(self) -> SymbolSequence:
        if len(self.sequences) != 1:
            raise ValueError(
                f"expected a single sequence, got {len(self.sequences)}")
        return self.sequences[0]


def parse_fasta(path) -> list[tuple[str, str]]:
    """Parse a FASTA file into (header, residues) records.

    Residue lines are concatenated per record; CRLF line endings and blank
    lines are tolerated. Residues before any header raise MalformedFasta.
    """
    records: list[tuple[str, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith(">"):
                records.append((line[1:].strip(), []))
            elif not records:
                raise MalformedFasta("residues before the first '>' header")
            else:
                records[-1][1].append(line)
    return [(header, "".join(parts)) for header, parts in records]


def recode(records, scheme: RecodingScheme, concat: bool = True,
           on_other: str = "skip") -> RecodeResult:
    """Recode FASTA records into integer symbol sequences.

    Residues are case-insensitive. Residues outside the scheme (N and the
    other IUPAC ambiguity codes) are counted and skipped, or raise
    UnknownSymbol, depending on ``on_other``. With ``concat`` the records
    are joined in file order into one sequence.
    """
    if on_other not in ("skip", "error"):
        raise InvalidConfig(f"on_other must be 'skip' or 'error', got {on_other!r}")
    mapping = scheme.as_dict()
    skipped = 0
    pieces: list[list[int]] = []
    position = 0
    for _, residues in records:
        piece: list[int] = []
        for residue in residues:
            code = mapping.get(residue.upper())
            if code is None:
                if on_other == "error":
                    raise UnknownSymbol(residue, position)
                skipped += 1
            else:
                piece.append(code)
            position += 1
        pieces.append(piece)
    if concat:
        flat = [sym for piece in pieces for sym in piece]
        seqs = (SymbolSequence(scheme.alphabet, np.array(flat, dtype=np.int64)),)
    else:
        seqs = tuple(SymbolSequence(scheme.alphabet,
                                    np.array(piece, dtype=np.int64))
                     for piece in pieces)
    return RecodeResult(seqs, skipped)


def write_symbol_file(seq: SymbolSequence, path) -> None:
    """Write a sequence in the self-describing plain-text symbol format."""
    labels = seq.alphabet.labels
    single = all(len(lab) == 1 for lab in labels)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if single and len(labels) <= _MAX_SINGLE_LINE_ALPHABET:
            fh.write(f"#alphabet={''.join(labels)}\n")
            fh.write("".join(labels[i] for i in seq.data))
            fh.write("\n")
        else:
            fh.write(f"#alphabet={','.join(labels)}\n")
            for i in seq.data:
                fh.write(labels[i] + "\n")


def read_symbol_file(path, alphabet: Alphabet | None = None) -> SymbolSequence:
    """Read a plain-text symbol file.

    The ``#alphabet=`` header takes precedence; without it an alphabet must
    be supplied. A single content line is read as contiguous
    single-character symbols, multiple lines as one label per line.
    """
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh]
    content = []
    for ln in lines:
        if ln.startswith("#alphabet="):
            value = ln[len("#alphabet="):]
            parsed = tuple(value.split(",")) if "," in value else tuple(value)
            alphabet = Alphabet(parsed)
        elif ln.startswith("#") or not ln:
            continue
        else:
            content.append(ln)
    if alphabet is None:
        raise InvalidConfig(
            "symbol file has no #alphabet= header; pass an alphabet explicitly")
    if len(content) == 1:
        return encode_sequence(list(content[0]), alphabet)
    return encode_sequence(content, alphabet)
