import csv
import io
import json
import math

import pytest

from qubit_remainder import cli

import oracles
from qubit_remainder.automaton import BitString
from qubit_remainder.bitfile import BitFile, parse_bitstring_file
from qubit_remainder.errors import BitstringParseError, EmptyInputError


@pytest.fixture
def bits_file(tmp_path):
    p = tmp_path / "s.bits"
    p.write_text("1,1,0,0,1,0,1")
    return p


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(out):
    lines = [json.loads(l) for l in out.splitlines()]
    assert lines[0]["record"] == "header"
    return lines[0], lines[1:]


def csv_rows(out):
    first, rest = out.split("\n", 1)
    assert first.startswith("# ")
    return json.loads(first[2:]), list(csv.DictReader(io.StringIO(rest)))


class TestBitFile:
    def test_paper_format(self, bits_file):
        assert parse_bitstring_file(bits_file).bits.tolist() == [1, 1, 0, 0, 1, 0, 1]

    def test_whitespace(self, tmp_path):
        p = tmp_path / "a"
        p.write_text("0\n1\n")
        assert parse_bitstring_file(p).bits.tolist() == [0, 1]

    def test_tabs_spaces_crlf(self, tmp_path):
        p = tmp_path / "a"
        p.write_bytes(b"1 0\t1\r\n1,")
        assert parse_bitstring_file(p).bits.tolist() == [1, 0, 1, 1]

    def test_illegal_byte(self, tmp_path):
        p = tmp_path / "a"
        p.write_text("01x")
        with pytest.raises(BitstringParseError) as e:
            parse_bitstring_file(p)
        assert e.value.offset == 2

    def test_offset_across_chunks(self, tmp_path):
        p = tmp_path / "a"
        p.write_text("0101010101,2")
        with pytest.raises(BitstringParseError) as e:
            list(BitFile(p, chunk_bytes=4))
        assert e.value.offset == 11

    def test_empty(self, tmp_path):
        p = tmp_path / "a"
        p.write_text(" ,\n")
        with pytest.raises(EmptyInputError):
            parse_bitstring_file(p)

    def test_missing(self, tmp_path):
        with pytest.raises(OSError):
            parse_bitstring_file(tmp_path / "none")

    def test_chunks_preserve_order(self, tmp_path):
        text = "".join("01"[(i * 7) % 3 == 0] for i in range(1000))
        p = tmp_path / "a"
        p.write_text(text)
        whole = parse_bitstring_file(p).bits.tolist()
        chunked = [b for c in BitFile(p, chunk_bytes=33) for b in c.tolist()]
        assert whole == chunked == [int(c) for c in text]


class TestRun:
    def test_smoke(self, capsys, bits_file):
        code, out, err = run_cli(capsys, "run", "--n", "2", "--input", str(bits_file), "--seed", "7")
        assert code == 0 and err == ""
        header, (rec,) = jsonl(out)
        assert header["seed"] == 7
        assert {"remainder_true", "outcome_x", "answer", "won_if_roulette"} <= rec.keys()
        assert rec["remainder_true"] == 0 and rec["answer"] == 2 and rec["won_if_roulette"] is True

    @pytest.mark.parametrize("scheme", ["tmr", "ghz"])
    def test_schemes(self, capsys, bits_file, scheme):
        code, out, _ = run_cli(capsys, "run", "--n", "2", "--input", str(bits_file), "--seed", "1", "--scheme", scheme)
        assert code == 0
        _, (rec,) = jsonl(out)
        assert rec["answer"] == 2 and rec["outcome_x"] == 1

    def test_parse_error_exit(self, capsys, tmp_path):
        p = tmp_path / "bad"
        p.write_text("01x")
        code, out, err = run_cli(capsys, "run", "--n", "2", "--input", str(p), "--seed", "1")
        assert code == 1 and out == "" and "offset 2" in err

    def test_io_error_exit(self, capsys, tmp_path):
        code, out, err = run_cli(capsys, "run", "--n", "2", "--input", str(tmp_path / "x"), "--seed", "1")
        assert code == 2 and out == ""

    def test_seed_required(self, capsys, bits_file):
        code, out, err = run_cli(capsys, "run", "--n", "2", "--input", str(bits_file))
        assert code == 1 and out == "" and "--seed" in err

    def test_bad_parameter(self, capsys, bits_file):
        code, out, _ = run_cli(capsys, "run", "--n", "1", "--input", str(bits_file), "--seed", "1")
        assert code == 1 and out == ""


class TestEnergy:
    def test_table(self, capsys):
        code, out, _ = run_cli(capsys, "energy", "--n", "10", "--N", "10000", "--tau", "1", "--S", "100")
        assert code == 0
        _, recs = jsonl(out)
        ledger = {r["scheme"]: r for r in recs if r["record"] == "ledger"}
        summary = [r for r in recs if r["record"] == "ledger-summary"][0]
        assert ledger["single-qubit"]["ratio_vs_classical"] == pytest.approx(10)
        assert ledger["classical-rotator"]["slowdown_vs_qubit"] == pytest.approx(200)
        assert summary["speedup_factor"] == 10 and summary["rotator_time_factor"] == 200

    def test_exclusive_units(self, capsys):
        code, _, err = run_cli(capsys, "energy", "--n", "2", "--N", "5", "--tau", "1", "--h", "2", "--si")
        assert code == 1

    def test_scientific_notation(self, capsys):
        code, out, _ = run_cli(capsys, "energy", "--n", "2", "--N", "1e4", "--tau", "2.5e-3", "--si")
        assert code == 0
        _, recs = jsonl(out)
        assert recs[0]["N"] == 10000


class TestMonteCarlo:
    ARGS = ("montecarlo", "--scheme", "tmr", "--phi0", "0.1", "--n1", "100", "--trials", "2000", "--seed", "1")

    def test_stats_row(self, capsys):
        code, out, _ = run_cli(capsys, *self.ARGS)
        assert code == 0
        header, (rec,) = jsonl(out)
        assert header["seed"] == 1
        p = (1 - math.exp(-2.0)) / 2
        assert rec["per_qubit_predicted"] == pytest.approx(p)
        assert rec["predicted"] == pytest.approx(oracles.tmr_fail_enumerated(p))
        assert abs(rec["p_hat"] - rec["predicted"]) <= 3 * (rec["predicted"] * (1 - rec["predicted"]) / 2000) ** 0.5

    def test_deterministic_bytes(self, capsys):
        _, a, _ = run_cli(capsys, *self.ARGS)
        _, b, _ = run_cli(capsys, *self.ARGS)
        assert a == b

    def test_csv_jsonl_agree(self, capsys):
        _, j, _ = run_cli(capsys, *self.ARGS)
        _, c, _ = run_cli(capsys, *self.ARGS, "--format", "csv")
        jh, (jrec,) = jsonl(j)
        ch, (crec,) = csv_rows(c)
        assert jh == ch
        for key, value in jrec.items():
            got = crec[key]
            if value is None:
                assert got == ""
            elif isinstance(value, bool):
                assert got == str(value).lower()
            elif isinstance(value, float):
                assert float(got) == value
            else:
                assert got == str(value)

    def test_output_file_and_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "env"))
        code, out, _ = run_cli(capsys, *self.ARGS)
        assert code == 0 and out == ""
        env_file = tmp_path / "env" / "montecarlo.jsonl"
        assert env_file.exists()
        code, _, _ = run_cli(capsys, *self.ARGS, "--output", str(tmp_path / "x.jsonl"))
        assert (tmp_path / "x.jsonl").read_text() == env_file.read_text()

    def test_exclusive_flags(self, capsys):
        code, _, _ = run_cli(capsys, "montecarlo", "--n1", "8", "--conditioning", "unconditioned", "--seed", "1")
        assert code == 1


class TestSweepAndRoulette:
    def test_sweep_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--axis", "n_q", "--values", "1,2,3", "--scheme", "ghz", "--N", "40",
            "--trials", "50", "--seed", "2", "--format", "csv",
        )
        assert code == 0
        _, rows = csv_rows(out)
        assert [r["record"] for r in rows] == ["sweep", "sweep-error", "sweep"]
        assert rows[1]["error"]

    def test_roulette(self, capsys):
        code, out, _ = run_cli(capsys, "roulette", "--n", "2", "--N", "100", "--games", "500", "--seed", "3")
        assert code == 0
        _, recs = jsonl(out)
        assert recs[0]["record"] == "roulette" and recs[0]["win_rate"] == 1.0
        assert any(r["record"] == "ledger" for r in recs)
