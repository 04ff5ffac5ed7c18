import json

import pytest

from modalweave import corpus
from modalweave.algebra import complex_algebra
from modalweave.cli import split_worlds
from modalweave.file_formats import algebra_to_document, load_frame

FIVE_2 = "<d><d>p0 -> [d]<d>p0"


def test_split_worlds_keeps_pair_names():
    assert split_worlds("(0,1), (1,1),a") == ["(0,1)", "(1,1)", "a"]
    assert split_worlds("") == []


class TestParseCommand:
    def test_normalises(self, run_cli):
        code, out, _ = run_cli("parse", "(p0 -> (p1 -> p2))")
        assert code == 0
        assert out == "p0 -> p1 -> p2\n"

    def test_parse_error(self, run_cli):
        code, out, err = run_cli("parse", "p0 &")
        assert code == 2
        assert out == ""
        assert err.startswith("E_PARSE: ")


class TestModelAndFrameCommands:
    def test_check_at_a_world(self, run_cli, write_json):
        path = write_json("model.json", corpus.lawn_rake(2), {0: frozenset({"0"})})
        assert run_cli("check", "-m", path, "-f", "<d>p0", "-w", "a")[:2] == (0, "TRUE\n")
        assert run_cli("check", "-m", path, "-f", "[d]p0", "-w", "a")[:2] == (1, "FALSE\n")

    def test_check_whole_model(self, run_cli, write_json):
        path = write_json("model.json", corpus.lawn_rake(2), {0: frozenset({"0"})})
        code, out, _ = run_cli("check", "-m", path, "-f", "<d>p0")
        assert code == 1
        assert out == "NOT VERIFIED\ntrue at: a,0\n"

    def test_valid(self, run_cli, write_json):
        path = write_json("d1.json", corpus.d_frame(1))
        assert run_cli("valid", "-F", path, "-f", FIVE_2)[:2] == (0, "VALID\n")
        code, out, _ = run_cli("valid", "-F", path, "-f", "p0 -> [d]p0")
        assert code == 1
        assert out.startswith("INVALID: world 2 under p0=")

    def test_valid_budget(self, run_cli, write_json):
        path = write_json("rake.json", corpus.lawn_rake(3))
        code, _, err = run_cli("valid", "-F", path, "-f", str(corpus.axiom_U(2)), "--budget", "100")
        assert code == 1
        assert err.startswith("E_BUDGET: ")

    def test_missing_file(self, run_cli, tmp_path):
        code, _, err = run_cli("valid", "-F", str(tmp_path / "nope.json"), "-f", "p0")
        assert code == 2
        assert err.startswith("E_IO: ")

    def test_unknown_modality_in_formula(self, run_cli, write_json):
        path = write_json("d1.json", corpus.d_frame(1))
        code, _, err = run_cli("valid", "-F", path, "-f", "<e>p0")
        assert code == 2
        assert err.startswith("E_PARAM: unknown modality 'e'")


class TestConditionCommands:
    def test_un_counterexample(self, run_cli, write_json):
        path = write_json("rake.json", corpus.lawn_rake(3))
        code, out, _ = run_cli("corr", "-F", path, "--cond", "un", "--n", "2")
        assert code == 1
        assert out == "FAILS x=a y0=0 y1=1 y2=2\n"
        assert run_cli("corr", "-F", path, "--cond", "un", "--n", "3")[:2] == (0, "HOLDS\n")

    def test_props(self, run_cli, write_json):
        path = write_json("tri.json", corpus.k5_triangle())
        code, out, _ = run_cli("corr", "-F", path, "--cond", "props")
        assert code == 0
        assert "euclidean=true" in out.splitlines()
        assert "transitive=false" in out.splitlines()

    def test_segerberg(self, run_cli, write_json):
        path = write_json("tri.json", corpus.k5_triangle())
        assert run_cli("corr", "-F", path, "--cond", "segerberg")[:2] == (0, "ReflexiveCofinal\n")

    def test_missing_n(self, run_cli, write_json):
        path = write_json("rake.json", corpus.lawn_rake(3))
        code, _, err = run_cli("corr", "-F", path, "--cond", "in")
        assert code == 2
        assert "--n" in err

    def test_widths(self, run_cli, write_json):
        path = write_json("two.json", corpus.two_step(3))
        achronal = run_cli("width", "-F", path, "--set", "(0,1),(1,1),(2,1)", "--achronal")
        assert achronal[:2] == (0, "3\n")
        assert run_cli("width", "-F", path, "--set", "(0,0),(1,0),(2,0)", "--achronal")[1] == "1\n"


class TestGenerators:
    def test_gen_frame_to_file(self, run_cli, tmp_path):
        out_path = tmp_path / "rake.json"
        code, out, _ = run_cli("gen", "--family", "LawnRake", "--params", "2", "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert load_frame(out_path) == corpus.lawn_rake(2)

    def test_gen_frame_to_stdout(self, run_cli):
        code, out, _ = run_cli("gen", "--family", "SuccN", "--params", "2")
        assert code == 0
        assert json.loads(out)["relations"] == {"d": [["0", "1"]]}

    def test_gen_formula(self, run_cli):
        assert run_cli("gen", "--formula", "5n", "--params", "2")[:2] == (0, FIVE_2 + "\n")

    def test_gen_two_step_family_by_name(self, run_cli, tmp_path):
        out_path = tmp_path / "two.json"
        code, _, _ = run_cli("gen", "--family", "SternbergEx71N", "--params", "3", "--out", str(out_path))
        assert code == 0
        assert load_frame(out_path) == corpus.two_step(3)

    def test_unknown_family(self, run_cli):
        code, _, err = run_cli("gen", "--family", "Nope")
        assert code == 2
        assert err.startswith("E_PARAM: unknown frame family 'Nope'")


class TestDuality:
    def test_complex_algebra(self, run_cli, write_json):
        path = write_json("succ.json", corpus.successor(2))
        code, out, _ = run_cli("dual", "-F", path, "complex")
        assert code == 0
        assert json.loads(out)["op"] == {"d": {"0": [], "1": ["0"]}}

    def test_roundtrip(self, run_cli, write_json):
        path = write_json("d1.json", corpus.d_frame(1))
        assert run_cli("dual", "-F", path, "roundtrip")[:2] == (0, "ISOMORPHIC\n")

    def test_equation(self, run_cli, write_json):
        path = write_json("alg.json", algebra_to_document(complex_algebra(corpus.d_frame(1))))
        assert run_cli("dual", "-A", path, "eq", "<d>v0 = v0")[:2] == (1, "REFUTED v0={2}\n")
        assert run_cli("dual", "-A", path, "eq", "<d>0 = 0")[:2] == (0, "VALID\n")

    def test_algebra_to_frame(self, run_cli, write_json):
        path = write_json("alg.json", algebra_to_document(complex_algebra(corpus.successor(2))))
        code, out, _ = run_cli("dual", "-A", path, "frame")
        assert code == 0
        assert json.loads(out)["relations"] == {"d": [["0", "1"]]}

    def test_wrong_action_for_source(self, run_cli, write_json):
        path = write_json("d1.json", corpus.d_frame(1))
        assert run_cli("dual", "-F", path, "eq")[0] == 2


class TestReproduce:
    def test_json_subset(self, run_cli):
        code, out, _ = run_cli("reproduce", "--only", "Dj-validates-52", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 4
        assert {row["status"] for row in rows} == {"PASS"}

    def test_budget_failure_exit_code(self, run_cli):
        code, out, _ = run_cli("reproduce", "--only", "lawnrake-brute-U/n=1", "--budget", "10")
        assert code == 1
        assert "E_BUDGET" in out.splitlines()[1]

    def test_records_the_run(self, run_cli, tmp_path, monkeypatch):
        log = tmp_path / "runs.md"
        monkeypatch.setenv("MODALWEAVE_EXPERIMENT_LOG", str(log))
        assert run_cli("reproduce", "--only", "k5triangle")[0] == 0
        text = log.read_text(encoding="utf-8")
        assert "Claim ledger" in text
        assert "claims=1" in text


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("corr",),
        ("valid", "-F", "x.json"),
        ("parse", "p0", "--bogus"),
        ("valid", "-F", "x.json", "-f", "p0", "--budget", "0"),
    ],
)
def test_usage_errors(run_cli, argv):
    code, _, err = run_cli(*argv)
    assert code == 2
    assert "usage:" in err


def test_help_exits_cleanly(run_cli):
    code, out, _ = run_cli("--help")
    assert code == 0
    assert "reproduce" in out
