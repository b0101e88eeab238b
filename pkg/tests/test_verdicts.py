from nmsem.formula import parse
from nmsem.universe import Theory
from nmsem.verdicts import Verdict, all_hold, first_failure, render_value, verdict_frame


def test_passed_and_failed():
    ok = Verdict.passed("inclusion")
    bad = Verdict.failed("monotonicity", A=frozenset(), B=frozenset({"b"}))
    assert ok and not bad
    assert bad.to_dict() == {"property": "monotonicity", "holds": False, "witness": {"A": [], "B": ["b"]}}
    assert all_hold([ok]) and not all_hold([ok, bad])
    assert first_failure([ok, bad]) is bad
    assert first_failure([ok]) is None


def test_render_values(u1, pq):
    X = u1.world_set(["w1", "w3"])
    assert render_value(X) == ["w1", "w3"]
    assert render_value(Theory(X)) == {"models": ["w1", "w3"], "sentences": ["a"]}
    assert render_value(Theory(pq.world_set(["p=1,q=1"]))) == {"models": ["p=1,q=1"]}
    assert render_value(parse("p & q")) == "p & q"
    assert render_value({"z": 3, "a": [True, None]}) == {"z": 3, "a": [True, None]}


def test_verdict_frame():
    frame = verdict_frame([Verdict.passed("a"), Verdict.failed("b", z="w1")])
    assert list(frame["holds"]) == [True, False]
    assert frame.loc[1, "witness"] == '{"z": "w1"}'
    assert frame.loc[0, "witness"] == ""
