import json

import pytest

from mirrorint.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class TestConstantsCommand:
    def test_xi_special_case(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "--which", "xi", "--N", "7")
        assert code == 0
        doc = json.loads(out)
        assert doc["format_version"] == 1
        assert doc["status"] == "pass"
        assert doc["payload"]["value"] == "1/140"
        assert doc["payload"]["breakdown"]["special_case"] is True

    def test_theta_one(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "--which", "theta", "--N", "1")
        assert code == 0
        assert json.loads(out)["payload"]["value"] == "1"

    def test_u_two(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "--which", "u", "--N", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["payload"] == {"value": "1", "integral": True}

    def test_u_one_degenerate(self, capsys):
        code, out, _ = run_cli(capsys, "constants", "--which", "u", "--N", "1")
        assert code == 0
        assert json.loads(out)["status"] == "degenerate"

    def test_table_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, "constants", "--which", "theta", "--N", "7", "--table"
        )
        assert code == 0 and "140" in out and "{" not in out.splitlines()[0]

    def test_deterministic_output(self, capsys):
        _, out1, _ = run_cli(capsys, "constants", "--which", "xi", "--N", "20")
        _, out2, _ = run_cli(capsys, "constants", "--which", "xi", "--N", "20")
        assert out1 == out2

    def test_usage_error(self, capsys):
        code, _, _ = run_cli(capsys, "constants", "--which", "zeta", "--N", "7")
        assert code == 2


class TestCertifyCommand:
    def test_theorem_pass(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "certify", "--map", "qLN", "--L", "5", "--N", "5", "--k", "1",
            "--order", "25", "--root", "auto",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["status"] == "pass"
        assert doc["payload"]["root"] == "2"

    def test_degenerate_n1(self, capsys):
        code, out, _ = run_cli(
            capsys, "certify", "--map", "qN", "--N", "1", "--k", "1", "--order", "10"
        )
        assert code == 0
        assert json.loads(out)["status"] == "degenerate"

    def test_scaled_root_violation(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "certify", "--map", "qLN", "--L", "5", "--N", "5", "--k", "1",
            "--order", "25", "--root", "auto", "--root-scale", "3",
        )
        assert code == 1
        doc = json.loads(out)
        assert doc["status"] == "violation"
        assert doc["payload"]["root"] == "6"
        assert isinstance(doc["payload"]["witness_index"], int)

    def test_explicit_root(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "certify", "--map", "qtilde", "--N", "6", "--order", "20", "--root", "36",
        )
        assert code == 0

    def test_order_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("MIRRORINT_ORDER", "10")
        code, out, _ = run_cli(
            capsys, "certify", "--map", "qLN", "--L", "2", "--N", "2", "--root", "auto"
        )
        assert code == 0
        assert json.loads(out)["params"]["order"] == 10

    def test_bad_root(self, capsys):
        code, _, err = run_cli(
            capsys, "certify", "--map", "qN", "--N", "2", "--root", "zero"
        )
        assert code == 2 and "error" in err


class TestSieveCommand:
    def test_boyd_hits(self, capsys):
        code, out, err = run_cli(
            capsys, "sieve", "--p", "11", "--max", "20000", "--target", "H"
        )
        assert code == 0
        records = parse_jsonl(out)
        assert [r["N"] for r in records if r["v"] == 3] == [848, 9338, 10583]
        assert all(not r["v_at_least"] for r in records)
        assert "sieve complete" in err

    def test_p2_modular_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "sieve", "--p", "2", "--max", "1000")
        assert code == 2

    def test_p2_exact_empty(self, capsys):
        code, out, _ = run_cli(
            capsys, "sieve", "--p", "2", "--max", "1000", "--backend", "exact"
        )
        assert code == 0 and parse_jsonl(out) == []

    def test_shifted_records(self, capsys):
        code, out, _ = run_cli(
            capsys, "sieve", "--p", "3", "--max", "100", "--target", "H1"
        )
        assert code == 0
        assert [r["N"] for r in parse_jsonl(out)] == [66, 68]

    def test_out_file_and_checkpoint_resume(self, capsys, tmp_path):
        out1 = tmp_path / "a.jsonl"
        ckpt = tmp_path / "sieve.ckpt"
        code, _, _ = run_cli(
            capsys,
            "sieve", "--p", "3", "--max", "500", "--target", "H",
            "--out", str(out1), "--checkpoint", str(ckpt),
        )
        assert code == 0 and ckpt.exists()
        out2 = tmp_path / "b.jsonl"
        code, _, _ = run_cli(
            capsys,
            "sieve", "--p", "3", "--max", "1000", "--target", "H",
            "--out", str(out2), "--checkpoint", str(ckpt),
        )
        assert code == 0
        resumed = parse_jsonl(out1.read_text()) + parse_jsonl(out2.read_text())

        out3 = tmp_path / "c.jsonl"
        code, _, _ = run_cli(
            capsys, "sieve", "--p", "3", "--max", "1000", "--out", str(out3)
        )
        direct = parse_jsonl(out3.read_text())
        assert resumed == direct
        # the checkpoint now sits at 1000 and reloads cleanly
        code, out, _ = run_cli(
            capsys,
            "sieve", "--p", "3", "--max", "1000", "--out", "-",
            "--checkpoint", str(ckpt),
        )
        assert code == 0 and parse_jsonl(out) == []

    def test_corrupt_checkpoint_io_error(self, capsys, tmp_path):
        ckpt = tmp_path / "bad.ckpt"
        ckpt.write_text('{"format_version": 1, "p": 3}')
        code, _, err = run_cli(
            capsys,
            "sieve", "--p", "3", "--max", "100", "--checkpoint", str(ckpt),
        )
        assert code == 3 and "error" in err


class TestSweepCommand:
    def test_dwork_sweep(self, capsys):
        code, out, err = run_cli(
            capsys,
            "sweep", "--check", "dworkS", "--p", "2,3", "--Nmax", "3",
            "--kmax", "1", "--Kmax", "4", "--smax", "1",
        )
        assert code == 0
        rows = parse_jsonl(out)
        assert rows and all(row["holds"] for row in rows)
        assert all(set(row) == {"check", "params", "holds", "margin"} for row in rows)
        assert "0 failures" in err

    def test_theorem_congruence_sweep(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--check", "theorem-congruence", "--which", "Xi",
            "--Nmax", "3", "--kmax", "1", "--summax", "10", "--p", "2,3",
        )
        assert code == 0
        assert all(row["holds"] for row in parse_jsonl(out))

    def test_decomposition_single_K(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--check", "decomposition", "--p", "3", "--K", "2",
            "--Nmax", "2", "--kmax", "1",
        )
        assert code == 0
        rows = parse_jsonl(out)
        assert rows and all(r["params"]["K"] == 2 for r in rows)

    def test_witness_sweep(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--check", "witness", "--Nmax", "4", "--pmax", "13"
        )
        assert code == 0
        assert all(row["holds"] for row in parse_jsonl(out))

    def test_vp3_probe(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--check", "vp3-probe", "--p", "11", "--N", "848"
        )
        assert code == 0
        (row,) = parse_jsonl(out)
        assert row["holds"] and row["margin"] == -1

    def test_wolstenholme_sweep(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--check", "wolstenholme", "--pmax", "100"
        )
        assert code == 0
        rows = parse_jsonl(out)
        assert all(row["holds"] and row["margin"] == 0 for row in rows)

    def test_unknown_check(self, capsys):
        code, _, _ = run_cli(capsys, "sweep", "--check", "nonsense")
        assert code == 2

    def test_infinite_margin_serialization(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep", "--check", "yms", "--p", "3", "--Nmax", "1",
            "--kmax", "1", "--Kmax", "1", "--smax", "0",
        )
        assert code == 0
        rows = parse_jsonl(out)
        assert any(row["margin"] == "inf" for row in rows)


class TestExitCodes:
    def test_no_command(self, capsys):
        assert run_cli(capsys)[0] == 2

    def test_bad_flag(self, capsys):
        assert run_cli(capsys, "constants", "--bogus")[0] == 2
