import pytest
from hypothesis import given, settings

from nmsem.errors import FormulaSyntaxError, UnboundAtomError
from nmsem.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Implies,
    Not,
    Or,
    as_formula,
    conjoin,
    disjoin,
    evaluate,
    parse,
    render,
)
from nmsem.universe import Universe
from tests.strategies import formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")

VALUATIONS = [{"p": a, "q": b} for a in (False, True) for b in (False, True)]
LEAVES = [
    (p, (False, False, True, True)),
    (q, (False, True, False, True)),
]
CONSTANTS = [(TRUE, (True,) * 4), (FALSE, (False,) * 4)]


def _connect(pairs):
    """Every formula one connective above ``pairs``, with its truth table."""
    for f, t in pairs:
        yield Not(f), tuple(not x for x in t)
    for f, s in pairs:
        for g, t in pairs:
            yield And(f, g), tuple(x and y for x, y in zip(s, t))
            yield Or(f, g), tuple(x or y for x, y in zip(s, t))
            yield Implies(f, g), tuple((not x) or y for x, y in zip(s, t))


def tabled_formulas(depth, leaves):
    """Formulas of depth at most ``depth`` over ``leaves``, each with its truth table."""
    found = list(leaves)
    for _ in range(depth):
        found = list(leaves) + list(_connect(found))
    return found


class TestParse:
    def test_precedence(self):
        assert parse("~p & q | r -> p") == Implies(Or(And(Not(p), q), r), p)

    def test_implication_is_right_associative(self):
        assert parse("p -> q -> r") == Implies(p, Implies(q, r))

    def test_conjunction_is_left_associative(self):
        assert parse("p & q & r") == And(And(p, q), r)

    def test_constants_and_parentheses(self):
        assert parse("(true | false) & ~~p") == And(Or(TRUE, FALSE), Not(Not(p)))

    def test_missing_operand_reports_offset_and_expected(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse("p & ")
        assert info.value.offset == 4
        assert info.value.expected == {"~", "(", "atom", "true", "false"}

    def test_trailing_garbage(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse("(p) ∧ q")
        assert info.value.offset == 4
        assert "end of input" in info.value.expected
        assert "&" in info.value.expected

    def test_offsets_count_utf8_bytes(self):
        # the no-break space is whitespace taking two bytes
        with pytest.raises(FormulaSyntaxError) as info:
            parse("\u00a0p &")
        assert info.value.offset == 5

    def test_unclosed_parenthesis(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse("(p | q")
        assert ")" in info.value.expected

    def test_error_details(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse("")
        assert info.value.details() == {"offset": 0, "expected": sorted(["(", "atom", "false", "true", "~"])}


class TestRender:
    @pytest.mark.parametrize(
        "formula, text",
        [
            (Implies(Implies(p, q), r), "(p -> q) -> r"),
            (Implies(p, Implies(q, r)), "p -> q -> r"),
            (And(p, And(q, r)), "p & (q & r)"),
            (Or(And(p, q), r), "p & q | r"),
            (And(Or(p, q), r), "(p | q) & r"),
            (Not(And(p, q)), "~(p & q)"),
            (Not(Not(p)), "~~p"),
        ],
    )
    def test_minimal_parentheses(self, formula, text):
        assert render(formula) == text
        assert str(formula) == text

    @given(formulas())
    @settings(max_examples=200, deadline=None)
    def test_parse_inverts_render(self, f):
        assert parse(render(f)) == f


class TestEvaluate:
    def test_truth_table_of_implication(self):
        f = parse("p -> q")
        assert [evaluate(f, {"p": a, "q": b}) for a in (False, True) for b in (False, True)] == [True, True, False, True]

    def test_unbound_atom(self):
        with pytest.raises(UnboundAtomError) as info:
            evaluate(parse("p & q"), {"p": True})
        assert info.value.atom == "q"
        assert isinstance(info.value, KeyError)

    def test_method_matches_function(self):
        f = parse("~p | q")
        assert f.evaluate({"p": True, "q": False}) is False

    def test_truth_tables_up_to_depth_two(self):
        for f, table in tabled_formulas(2, LEAVES + CONSTANTS):
            assert tuple(evaluate(f, v) for v in VALUATIONS) == table

    @pytest.mark.slow
    def test_truth_tables_at_depth_three(self):
        below = tabled_formulas(2, LEAVES)
        count = 0
        for f, table in _connect(below):
            count += 1
            assert tuple(evaluate(f, v) for v in VALUATIONS) == table
        assert len(below) == 786
        assert count == len(below) + 3 * len(below) ** 2

    def test_world_sets_follow_the_connectives(self):
        u = Universe.propositional(["p", "q"])
        full = u.full_mask
        for f, _ in tabled_formulas(2, LEAVES + CONSTANTS):
            mask = u.sentence_mask(f)
            if isinstance(f, Not):
                assert mask == full & ~u.sentence_mask(f.child)
            elif isinstance(f, And):
                assert mask == u.sentence_mask(f.left) & u.sentence_mask(f.right)
            elif isinstance(f, Or):
                assert mask == u.sentence_mask(f.left) | u.sentence_mask(f.right)
            elif isinstance(f, Implies):
                assert mask == full & (~u.sentence_mask(f.left) | u.sentence_mask(f.right))
            assert parse(render(f)) == f


def test_conjoin_and_disjoin():
    assert conjoin([]) == TRUE
    assert disjoin([]) == FALSE
    assert conjoin([p, q, r]) == And(And(p, q), r)
    assert disjoin([p, q]) == Or(p, q)


def test_atoms():
    assert parse("p & (q -> ~p) | true").atoms() == {"p", "q"}


def test_as_formula():
    assert as_formula("p | q") == Or(p, q)
    assert as_formula(p) is p
    with pytest.raises(TypeError):
        as_formula(3)


def test_reserved_words_are_not_atoms():
    with pytest.raises(ValueError):
        Atom("true")
    with pytest.raises(ValueError):
        Atom("P")
