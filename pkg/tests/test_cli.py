import json

import pytest

from nmsem.cli import EXIT_FAILS, EXIT_HOLDS, EXIT_INPUT, main, run
from tests.conftest import DATA_DIR


def data(name):
    return str(DATA_DIR / name)


def invoke(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_birds_entail(capsys):
    code, report, _ = invoke(capsys, [
        "entail", "--universe", data("birds.json"), "--choice", data("rank.json"),
        "--premises", "b", "--query", "f",
    ])
    assert code == EXIT_HOLDS
    assert report["verb"] == "entail"
    assert report["entails"] is True
    assert report["inputs"]["premises"] == ["b"]


def test_birds_do_not_entail_not_flying(capsys):
    code, report, _ = invoke(capsys, [
        "entail", "--universe", data("birds.json"), "--choice", data("rank.json"),
        "--premises", "b", "--query", "~f",
    ])
    assert code == EXIT_FAILS
    assert report["entails"] is False
    assert report["results"][0]["witness"] == {"premises": ["b"], "query": "~f"}


def test_sec71_breaks_monotonicity(capsys):
    code, report, _ = invoke(capsys, [
        "check-operator", "--operator", data("sec71.json"), "--postulate", "monotonicity",
    ])
    assert code == EXIT_FAILS
    (result,) = report["results"]
    assert result["property"] == "monotonicity"
    assert result["witness"] == {"A": [], "B": ["b"]}


def test_identity_is_coherent(capsys):
    code, report, _ = invoke(capsys, [
        "check-choice", "--universe", data("u1.json"), "--choice", data("id.json"),
        "--property", "coherence",
    ])
    assert code == EXIT_HOLDS
    assert report["results"] == [{"property": "coherence", "holds": True, "witness": None}]


def test_reports_are_deterministic(capsys):
    argv = ["check-operator", "--operator", data("sec71.json")]
    _, _, first = invoke(capsys, argv)
    _, _, second = invoke(capsys, argv)
    assert first == second


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, out = invoke(capsys, ["parse", "--formula", "p & q -> r", "--output", str(target)])
    assert code == EXIT_HOLDS
    assert target.read_text(encoding="utf-8") == out
    assert json.loads(out)["atoms"] == ["p", "q", "r"]


class TestInputErrors:
    def test_missing_file(self, capsys):
        code, report, _ = invoke(capsys, ["check-operator", "--operator", data("missing.json")])
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "FileNotFoundError"

    def test_syntax_error(self, capsys):
        code, report, _ = invoke(capsys, ["parse", "--formula", "p & "])
        assert code == EXIT_INPUT
        assert report["verb"] == "parse"
        assert report["error"]["offset"] == 4

    def test_unknown_verb(self, capsys):
        code, report, _ = invoke(capsys, ["frobnicate"])
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "InputError"

    def test_missing_required_argument(self, capsys):
        code, _, _ = invoke(capsys, ["entail", "--choice", data("rank.json")])
        assert code == EXIT_INPUT

    def test_sampled_search_needs_seed(self, capsys):
        code, report, _ = invoke(capsys, [
            "search", "--kind", "arrow_failure", "--universe", data("m3.json"), "--family", "sampled",
        ])
        assert code == EXIT_INPUT
        assert "seed" in report["error"]["message"]

    def test_classical_needs_semantic_operator(self, capsys):
        code, report, _ = invoke(capsys, [
            "represent", "--operator", data("sec71.json"), "--classical",
        ])
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "LanguageError"

    @pytest.mark.parametrize("grade", ["\"x\"", "0.5", "true"])
    def test_rank_grades_must_be_integers(self, capsys, tmp_path, grade):
        doc = tmp_path / "rank.json"
        doc.write_text(
            '{"universe": {"mode": "propositional", "atoms": ["b", "f"]}, "rank": '
            '{"b=1,f=1": 0, "b=0,f=1": 1, "b=0,f=0": 1, "b=1,f=0": ' + grade + "}}",
            encoding="utf-8",
        )
        code, report, _ = invoke(capsys, ["check-choice", "--choice", str(doc)])
        assert code == EXIT_INPUT
        assert report["error"]["type"] == "InputError"

    def test_non_utf8_document(self, capsys, tmp_path):
        doc = tmp_path / "universe.json"
        doc.write_bytes(b'{"worlds": ["\xff"]}')
        code, report, _ = invoke(capsys, [
            "check-choice", "--universe", str(doc), "--choice", data("id.json"),
        ])
        assert code == EXIT_INPUT
        assert "byte 13" in report["error"]["message"]


class TestVerbs:
    def test_check_choice_all_properties(self, capsys):
        code, report, _ = invoke(capsys, [
            "check-choice", "--choice", data("expansion_witness.json"),
        ])
        assert code == EXIT_FAILS
        failing = [r["property"] for r in report["results"] if not r["holds"]]
        assert failing == ["expansion", "arrow"]

    def test_check_measure_from_choice(self, capsys):
        code, report, _ = invoke(capsys, [
            "check-measure", "--choice", data("partial_order.json"), "--property", "modularity",
        ])
        assert code == EXIT_FAILS
        assert report["results"][0]["witness"] == {"X": ["w1"], "Y": ["w2"], "Z": ["w3"]}

    def test_check_rules(self, capsys):
        code, report, _ = invoke(capsys, [
            "check-rules", "--universe", data("birds.json"), "--choice", data("rank.json"),
        ])
        assert code == EXIT_HOLDS
        assert len(report["results"]) == 7

    def test_check_klm_with_lift(self, capsys):
        code, report, _ = invoke(capsys, [
            "check-klm", "--relation", data("birds_relation.json"), "--lift",
        ])
        assert code == EXIT_HOLDS
        assert len(report["results"]) == 11

    def test_convert_to_measure(self, capsys):
        code, report, _ = invoke(capsys, [
            "convert", "--choice", data("partial_order.json"), "--to", "measure",
        ])
        assert code == EXIT_HOLDS
        assert {"greater": ["w1"], "than": ["w2"]} in report["measure"]["pairs"]

    def test_represent_round_trip(self, capsys):
        code, report, _ = invoke(capsys, ["represent", "--operator", data("sec71.json")])
        assert code == EXIT_HOLDS
        assert [w["name"] for w in report["universe"]["worlds"]] == ["{a}", "{b}", "{a,b}"]
        assert report["inputs"]["variant"] == "theories"

    def test_represent_conservative(self, capsys):
        code, report, _ = invoke(capsys, [
            "represent", "--operator", data("sec71.json"), "--conservative",
        ])
        assert code == EXIT_HOLDS
        assert report["universe"] == {"mode": "propositional", "atoms": ["a", "b"]}

    def test_search(self, capsys):
        code, report, _ = invoke(capsys, [
            "search", "--kind", "expansion_failure", "--universe", data("m3.json"),
        ])
        assert code == EXIT_HOLDS
        assert report["search"]["found"] is True
        assert report["results"][0]["property"] == "expansion"

    def test_search_without_result(self, capsys):
        code, report, _ = invoke(capsys, [
            "search", "--kind", "arrow_failure", "--universe", data("m3.json"), "--family", "rank",
        ])
        assert code == EXIT_FAILS
        assert report["search"]["candidates_checked"] == 13


def test_main_uses_given_argv(capsys):
    assert main(["parse", "--formula", "p"]) == EXIT_HOLDS
    assert json.loads(capsys.readouterr().out)["formula"] == "p"


@pytest.mark.parametrize("argv", [["parse", "--formula", "p", "--log-level", "debug"]])
def test_log_level_is_plumbing(capsys, argv):
    code, report, _ = invoke(capsys, argv)
    assert code == EXIT_HOLDS
    assert "log_level" not in report["inputs"]
