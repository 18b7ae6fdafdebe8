import pytest

from mcorder import (Alphabet, SCHEMES, parse_fasta, read_symbol_file, recode,
                     write_symbol_file)
from mcorder.errors import InvalidConfig, MalformedFasta, UnknownSymbol


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestParseFasta:
    def test_single_record(self, tmp_path):
        path = write(tmp_path, "a.fasta", ">h\nACGT\n")
        assert parse_fasta(path) == [("h", "ACGT")]

    def test_multiline_and_multirecord(self, tmp_path):
        path = write(tmp_path, "a.fasta", ">a\nAC\nGT\n>b\nTT\n")
        assert parse_fasta(path) == [("a", "ACGT"), ("b", "TT")]

    def test_crlf_and_blank_lines(self, tmp_path):
        path = write(tmp_path, "a.fasta", ">h desc\r\nAC\r\n\r\nGT\r\n")
        assert parse_fasta(path) == [("h desc", "ACGT")]

    def test_residues_before_header(self, tmp_path):
        path = write(tmp_path, "a.fasta", "ACGT\n")
        with pytest.raises(MalformedFasta):
            parse_fasta(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            parse_fasta(str(tmp_path / "nope.fasta"))


class TestRecode:
    def test_nucl4(self):
        result = recode([("h", "ACGT")], SCHEMES["nucl4"])
        assert result.sequence.data.tolist() == [0, 1, 2, 3]
        assert result.skipped == 0

    def test_rr2_concat(self):
        result = recode([("a", "AG"), ("b", "CT")], SCHEMES["rr2"])
        assert result.sequence.data.tolist() == [0, 0, 1, 1]
        assert result.sequence.alphabet.labels == ("R", "Y")

    def test_case_insensitive(self):
        result = recode([("h", "acgt")], SCHEMES["nucl4"])
        assert result.sequence.data.tolist() == [0, 1, 2, 3]

    def test_skip_counts_other(self):
        result = recode([("h", "ANG")], SCHEMES["nucl4"], on_other="skip")
        assert result.sequence.data.tolist() == [0, 2]
        assert result.skipped == 1

    def test_error_mode(self):
        with pytest.raises(UnknownSymbol) as exc:
            recode([("h", "ANG")], SCHEMES["nucl4"], on_other="error")
        assert exc.value.label == "N"

    def test_per_record(self):
        result = recode([("a", "AG"), ("b", "CT")], SCHEMES["rr2"],
                        concat=False)
        assert [s.data.tolist() for s in result.sequences] == [[0, 0], [1, 1]]
        with pytest.raises(ValueError):
            result.sequence

    def test_invalid_on_other(self):
        with pytest.raises(InvalidConfig):
            recode([("h", "A")], SCHEMES["nucl4"], on_other="ignore")


class TestSymbolFile:
    def test_round_trip_single_line(self, tmp_path, alternating8):
        path = str(tmp_path / "seq.sym")
        write_symbol_file(alternating8, path)
        text = open(path).read()
        assert text == "#alphabet=01\n01010101\n"
        assert read_symbol_file(path) == alternating8

    def test_round_trip_multichar_labels(self, tmp_path):
        from mcorder import encode_sequence
        alpha = Alphabet(("aa", "bb"))
        seq = encode_sequence(["aa", "bb", "aa"], alpha)
        path = str(tmp_path / "seq.sym")
        write_symbol_file(seq, path)
        assert read_symbol_file(path) == seq

    def test_headerless_needs_alphabet(self, tmp_path):
        path = write(tmp_path, "seq.sym", "0101\n")
        with pytest.raises(InvalidConfig):
            read_symbol_file(path)
        seq = read_symbol_file(path, Alphabet.from_string("01"))
        assert seq.data.tolist() == [0, 1, 0, 1]

    def test_one_label_per_line(self, tmp_path):
        path = write(tmp_path, "seq.sym", "#alphabet=01\n0\n1\n1\n")
        assert read_symbol_file(path).data.tolist() == [0, 1, 1]

    def test_empty_sequence(self, tmp_path, binary):
        from mcorder import SymbolSequence
        import numpy as np
        seq = SymbolSequence(binary, np.array([], dtype=np.int64))
        path = str(tmp_path / "empty.sym")
        write_symbol_file(seq, path)
        assert len(read_symbol_file(path)) == 0

    def test_ingest_is_idempotent_under_reserialization(self, tmp_path):
        fasta = write(tmp_path, "a.fasta", ">x\nAGGA\n>y\nCTTC\n")
        result = recode(parse_fasta(fasta), SCHEMES["rr2"])
        p1 = str(tmp_path / "one.sym")
        p2 = str(tmp_path / "two.sym")
        write_symbol_file(result.sequence, p1)
        write_symbol_file(read_symbol_file(p1), p2)
        assert open(p1).read() == open(p2).read()
        assert read_symbol_file(p2) == result.sequence
