import csv
import io
from fractions import Fraction as F

import pytest

from l2approx.cli import (CSV_HEADER, config_from_args, main, parse_config_file,
                          parse_matrix_file, random_matrix)
from l2approx.exactalg import QQ


def run_csv(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    rc = main(args + ["--out", str(out)])
    return rc, out.read_text(), out.with_suffix(out.suffix + ".summary.txt").read_text()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestModes:
    def test_homology_figure_eight(self, tmp_path):
        rc, text, summary = run_csv(["--mode", "homology", "--entry", "figure-eight",
                                     "--weights", "2:2"], tmp_path)
        assert rc == 0
        assert text.splitlines()[0] == CSV_HEADER
        rows = rows_of(text)
        dims = {r["mode"]: int(r["value_num"]) for r in rows}
        assert (dims["homology:h0"], dims["homology:h1"], dims["homology:h2"]) == (0, 1, 1)
        assert all(r["target"] != "" and r["error_dec"] == "0" for r in rows)

    def test_limit_sanov_all_errors_zero(self, tmp_path):
        rc, text, summary = run_csv(["--mode", "limit", "--entry", "sanov-f2",
                                     "--weights", "1:12", "--degree", "1"], tmp_path)
        assert rc == 0
        rows = rows_of(text)
        assert len(rows) == 12
        assert all(r["error_dec"] == "0" for r in rows)
        assert all(F(int(r["value_num"]), int(r["value_den"])) == 1 for r in rows)

    def test_harris_unipotent_values(self, tmp_path):
        rc, text, summary = run_csv(["--mode", "harris", "--p", "3",
                                     "--levels", "1:3"], tmp_path)
        assert rc == 0
        rows = rows_of(text)
        vals = [F(int(r["value_num"]), int(r["value_den"])) for r in rows]
        assert vals == [0, F(2, 3), F(8, 9)]
        assert "envelope" in summary

    def test_luck_chain(self, tmp_path):
        rc, text, _ = run_csv(["--mode", "luck", "--entry", "z-unipotent",
                               "--quotients", "2,4,8", "--target", "1"], tmp_path)
        assert rc == 0
        vals = [F(int(r["value_num"]), int(r["value_den"])) for r in rows_of(text)]
        assert vals == [F(1, 2), F(3, 4), F(7, 8)]

    def test_rank_mode_fox_jacobian(self, tmp_path):
        rc, text, summary = run_csv(["--mode", "rank", "--entry", "figure-eight",
                                     "--matrix", "fox-jacobian", "--weights", "2:8:2"],
                                    tmp_path)
        assert rc == 0
        vals = [F(int(r["value_num"]), int(r["value_den"])) for r in rows_of(text)]
        assert vals == [F(2, 3), F(4, 5), F(6, 7), F(8, 9)]

    def test_fractions_accompany_decimals(self, tmp_path):
        _, text, _ = run_csv(["--mode", "harris", "--p", "3", "--levels", "2:2"], tmp_path)
        row = rows_of(text)[0]
        assert (row["value_num"], row["value_den"]) == ("2", "3")
        assert row["value_dec"].startswith("0.6666")


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        args = ["--mode", "limit", "--entry", "figure-eight",
                "--weights", "2:10:2", "--degree", "1"]
        _, text1, sum1 = run_csv(args, tmp_path, "a.csv")
        _, text2, sum2 = run_csv(args, tmp_path, "b.csv")
        assert text1 == text2
        assert sum1 == sum2

    def test_random_matrix_deterministic_for_fixed_seed(self):
        a = random_matrix(("a", "b"), QQ, 2, 2, 4, seed=99)
        b = random_matrix(("a", "b"), QQ, 2, 2, 4, seed=99)
        c = random_matrix(("a", "b"), QQ, 2, 2, 4, seed=100)
        assert a == b
        assert a != c

    def test_random_mode_requires_seed(self, tmp_path):
        rc = main(["--mode", "rank", "--entry", "sanov-f2", "--weights", "1:4",
                   "--matrix", "random", "--out", str(tmp_path / "x.csv")])
        assert rc != 0

    def test_random_mode_byte_identical_with_seed(self, tmp_path):
        args = ["--mode", "rank", "--entry", "sanov-f2", "--weights", "1:4",
                "--matrix", "random", "--seed", "7"]
        _, text1, _ = run_csv(args, tmp_path, "r1.csv")
        _, text2, _ = run_csv(args, tmp_path, "r2.csv")
        assert text1 == text2


class TestConfigFile:
    def test_flags_win_over_config(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("mode=limit\nentry=sanov-f2\nweights=1:6\ndegree=1\n")
        cfg = config_from_args(["--config", str(cfgfile), "--entry", "z-unipotent"])
        assert cfg.entry == "z-unipotent"
        assert cfg.mode == "limit"
        assert cfg.degree == 1

    def test_config_only_run(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        out = tmp_path / "cfg.csv"
        cfgfile.write_text(f"mode=harris\np=3\nlevels=1:2\nout={out}\n")
        rc = main(["--config", str(cfgfile)])
        assert rc == 0
        assert out.exists()

    def test_unknown_key_rejected(self, tmp_path):
        cfgfile = tmp_path / "exp.cfg"
        cfgfile.write_text("fnord=1\n")
        with pytest.raises(Exception):
            parse_config_file(str(cfgfile))


class TestErrors:
    def test_unknown_entry_exits_nonzero_with_one_line_error(self, tmp_path, capsys):
        rc = main(["--mode", "homology", "--entry", "nope", "--weights", "2:4:2",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        err = capsys.readouterr().err
        assert err.startswith("error: ")
        assert len(err.strip().splitlines()) == 1

    def test_parity_violation_surfaces(self, tmp_path, capsys):
        rc = main(["--mode", "limit", "--entry", "c2-central", "--weights", "3:3",
                   "--degree", "1", "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_mode(self, tmp_path, capsys):
        rc = main(["--entry", "figure-eight", "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_harris_needs_odd_prime(self, tmp_path, capsys):
        rc = main(["--mode", "harris", "--p", "2", "--levels", "1:2",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestMatrixSources:
    def test_matrix_file_parsing(self, tmp_path):
        mf = tmp_path / "m.txt"
        mf.write_text("t - 1 ; 2\n0 ; 3/2*t\n")
        m = parse_matrix_file(str(mf), ("t",), QQ)
        assert (m.rows, m.cols) == (2, 2)
        from l2approx.groupcore import IDENTITY_WORD, word_from_string
        t = word_from_string("t", ("t",))
        e00 = m.entry(0, 0).as_dict()
        assert e00[t].coeffs[0] == 1 and e00[IDENTITY_WORD].coeffs[0] == -1
        assert m.entry(1, 1).as_dict()[t].coeffs[0] == F(3, 2)

    def test_matrix_file_through_cli(self, tmp_path):
        mf = tmp_path / "m.txt"
        mf.write_text("t - 1\n")
        rc, text, _ = run_csv(["--mode", "rank", "--entry", "z-unipotent",
                               "--matrix", "file", "--matrix-file", str(mf),
                               "--weights", "1:4"], tmp_path)
        assert rc == 0
        vals = [F(int(r["value_num"]), int(r["value_den"])) for r in rows_of(text)]
        assert vals == [F(1, 2), F(2, 3), F(3, 4), F(4, 5)]

    def test_boundary_stack_default(self, tmp_path):
        rc, text, _ = run_csv(["--mode", "rank", "--entry", "z-unipotent",
                               "--weights", "1:4"], tmp_path)
        vals = [F(int(r["value_num"]), int(r["value_den"])) for r in rows_of(text)]
        assert vals == [F(1, 2), F(2, 3), F(3, 4), F(4, 5)]


class TestFilePairEntry:
    def test_presentation_representation_files(self, tmp_path):
        pres = tmp_path / "z.pres"
        rep = tmp_path / "z.rep"
        pres.write_text("name: my-z\ngenerators: t\naspherical: true\ntargets: 0 0 0\n")
        rep.write_text("field: 0 1\nfactors: 1\nimage: t 1 : 1 ; 1 ; 0 ; 1\n")
        rc, text, _ = run_csv(["--mode", "limit", "--presentation", str(pres),
                               "--representation", str(rep), "--weights", "1:6",
                               "--degree", "1"], tmp_path)
        assert rc == 0
        rows = rows_of(text)
        assert rows[0]["entry"] == "my-z"
        assert [r["error_dec"] for r in rows] == [
            f"{1.0 / (l + 1):.12g}" for l in range(1, 7)]

    def test_entry_and_file_pair_conflict(self, tmp_path, capsys):
        rc = main(["--mode", "limit", "--entry", "sanov-f2", "--presentation", "x",
                   "--representation", "y", "--weights", "1:6", "--degree", "1",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2
