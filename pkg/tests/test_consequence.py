import pytest

from nmsem.choice import identity_choice
from nmsem.consequence import (
    FIVE_POSTULATES,
    SemanticOperator,
    TabulatedOperator,
    check_postulate,
    check_postulates,
    close,
    cn,
    entails,
    enumerate_semantic,
    enumerate_tabulated,
    intersect,
    monotone_operator,
    operators_equal,
    regenerate,
    represent,
    same_theories,
    theories,
    validate_postulates,
    with_background,
)
from nmsem.errors import InputError, LanguageError, PreconditionError, SearchSpaceError
from nmsem.universe import Theory, Universe
from nmsem.verdicts import all_hold

THREE_WORLDS = Universe.abstract(["a", "b"], [("w1", ["a"]), ("w2", ["b"]), ("w3", ["a", "b"])])
SMALL_UNIVERSES = [
    Universe.propositional(["p"]),
    Universe.discrete(2),
    pytest.param(THREE_WORLDS, marks=pytest.mark.slow),
]


def premise_sets(u: Universe) -> list[list]:
    if u.is_propositional:
        return [[u.characteristic_formula(m)] for m in range(u.full_mask + 1)]
    return [
        [s for j, s in enumerate(u.sentences) if m >> j & 1] for m in range(1 << len(u.sentences))
    ]


def as_premises(T: Theory) -> list:
    """Finitely many sentences with the same models as T."""
    u = T.universe
    if u.is_propositional:
        return [u.characteristic_formula(T.models().mask)]
    return sorted(T.sentences())


@pytest.fixture(scope="module")
def admissible_tables():
    return [op for op in enumerate_tabulated(["a", "b"]) if all_hold(check_postulates(op))]


@pytest.fixture
def birds_op(birds):
    _, f = birds
    return SemanticOperator(f)


class TestTabulated:
    def test_close_and_entails(self, sec71):
        assert close(sec71, []) == {"a"}
        assert close(sec71, ["b"]) == {"b"}
        assert not entails(sec71, ["b"], "a")
        assert entails(sec71, [], "a")

    def test_consistency(self, sec71):
        assert sec71.is_consistent(["a"])
        assert not sec71.is_consistent(["a", "b"])

    def test_table_must_be_total(self):
        with pytest.raises(InputError):
            TabulatedOperator(["a"], {(): ["a"]})

    def test_foreign_sentence(self, sec71):
        with pytest.raises(LanguageError):
            sec71.close(["c"])

    def test_to_dict(self, sec71):
        doc = sec71.to_dict()
        assert doc["language"] == ["a", "b"]
        assert doc["table"][0] == {"A": [], "C": ["a"]}

    def test_five_postulates_hold_but_not_monotonicity(self, sec71):
        assert all_hold(check_postulates(sec71))
        verdict = check_postulate(sec71, "monotonicity")
        assert verdict.to_dict()["witness"] == {"A": [], "B": ["b"]}
        with pytest.raises(PreconditionError) as err:
            validate_postulates(sec71, ("monotonicity",))
        assert err.value.precondition == "monotonicity"

    def test_unknown_postulate(self, sec71):
        with pytest.raises(InputError):
            check_postulate(sec71, "reflexivity")

    def test_theories(self, sec71):
        assert theories(sec71) == [{"a"}, {"b"}, {"a", "b"}]

    def test_cn_is_empty_at_empty_premises(self, sec71):
        assert cn(sec71, []) == frozenset()
        assert cn(sec71, ["a"]) == {"a"}
        assert cn(sec71, ["a"], method="intersection") == {"a"}

    def test_cn_direct_needs_models(self, sec71):
        with pytest.raises(InputError):
            cn(sec71, [], method="direct")

    def test_meet_of_theories_is_not_a_theory(self, sec71):
        meet = close(sec71, ["a"]) & close(sec71, ["b"])
        assert meet == frozenset()
        assert meet not in theories(sec71)

    def test_twin_shares_theories_only(self, sec71, twin):
        assert same_theories(sec71, twin)
        assert not operators_equal(sec71, twin)
        assert operators_equal(sec71, sec71)

    def test_with_background(self, sec71):
        op = with_background(sec71, ["b"])
        assert op.close([]) == {"b"}
        assert op.close(["a"]) == {"a", "b"}

    def test_enumeration(self):
        assert sum(1 for _ in enumerate_tabulated(["a"])) == 4
        with pytest.raises(SearchSpaceError):
            next(enumerate_tabulated(["a", "b", "c"]))


class TestSemantic:
    def test_birds(self, birds_op):
        assert birds_op.entails(["b"], "f")
        assert not birds_op.entails(["b", "~f"], "f")
        assert birds_op.close(["b"]).contains("f")
        assert not birds_op.is_consistent(["b & ~b"])

    def test_abstract_closure(self, u1):
        op = monotone_operator(u1)
        assert op.close([]).sentences() == frozenset()
        assert op.close(["a", "b"]).sentences() == {"a", "b"}
        assert not op.is_consistent(["a", "b"])
        assert check_postulate(op, "monotonicity").holds

    def test_cn_methods_agree_for_birds(self, birds_op):
        direct = cn(birds_op, ["b"])
        assert isinstance(direct, Theory)
        assert direct == cn(birds_op, ["b"], method="intersection")
        assert not direct.contains("f")
        with pytest.raises(InputError):
            cn(birds_op, ["b"], method="closest")

    def test_with_background(self, birds_op):
        assert with_background(birds_op, ["~f"]).entails([], "~b")

    def test_regenerate_checks_universe(self, birds, u1):
        _, f = birds
        with pytest.raises(ValueError):
            regenerate(u1, f)

    @pytest.mark.parametrize("build", [lambda: Universe.discrete(3), lambda: Universe.abstract(
        ["a", "b"], [("w1", ["a"]), ("w2", ["b"]), ("w3", ["a", "b"])]
    )])
    @pytest.mark.slow
    def test_cclm_operators_satisfy_the_five_postulates(self, build):
        for op in enumerate_semantic(build()):
            assert all_hold(check_postulates(op, FIVE_POSTULATES))


class TestRepresentation:
    def test_sec71_worlds_are_its_theories(self, sec71):
        u, f = represent(sec71)
        assert u.worlds == ("{a}", "{b}", "{a,b}")
        assert operators_equal(regenerate(u, f), sec71)

    def test_rational_variant_drops_the_language(self, sec71):
        u, f = represent(sec71, variant="rational")
        assert u.worlds == ("{a}", "{b}")
        assert operators_equal(regenerate(u, f), sec71)

    def test_unknown_variant(self, sec71):
        with pytest.raises(InputError):
            represent(sec71, variant="ranked")

    def test_postulates_are_required(self):
        op = TabulatedOperator.from_function(["a", "b"], lambda A: set())
        with pytest.raises(PreconditionError) as err:
            represent(op)
        assert err.value.precondition == "inclusion"

    def test_every_admissible_table_is_represented(self):
        survivors = 0
        for op in enumerate_tabulated(["a", "b"]):
            if not all_hold(check_postulates(op)):
                continue
            survivors += 1
            assert operators_equal(regenerate(*represent(op)), op)
        assert survivors > 0


class TestIntersection:
    def test_sec71_and_twin(self, sec71, twin):
        op = intersect([sec71, twin])
        assert op.close([]).sentences() == frozenset()
        assert op.close(["a"]).sentences() == {"a"}

    def test_propositional(self, birds, birds_op):
        u, _ = birds
        op = intersect([birds_op, monotone_operator(u)])
        assert not op.entails(["b"], "f")
        assert op.choice == identity_choice(u)

    def test_languages_must_match(self, sec71):
        other = TabulatedOperator.from_function(["a", "c"], lambda A: A)
        with pytest.raises(LanguageError):
            intersect([sec71, other])

    def test_needs_an_operator(self):
        with pytest.raises(InputError):
            intersect([])


class TestMonotoneCore:
    @pytest.mark.parametrize("u", SMALL_UNIVERSES)
    def test_semantic_absorption_and_sandwich(self, u):
        family = premise_sets(u)
        for op in enumerate_semantic(u):
            for A in family:
                C = close(op, A)
                core = cn(op, A)
                assert all(core.contains(a) for a in A)
                assert core <= C
                assert close(op, as_premises(core)) == C
                assert cn(op, as_premises(C)) == C

    @pytest.mark.parametrize("u", SMALL_UNIVERSES)
    def test_semantic_conditional_threshold_interplay(self, u):
        family = premise_sets(u)
        for op in enumerate_semantic(u):
            for A in family:
                C = as_premises(close(op, A))
                for B in family:
                    assert close(op, A + B) <= cn(op, C + B)

    def test_tabulated_absorption_and_sandwich(self, admissible_tables):
        for op in admissible_tables:
            for m in range(op.full_mask + 1):
                A = op.sentences_of(m)
                C = close(op, A)
                core = cn(op, A)
                assert A <= core <= C
                assert close(op, core) == C
                assert cn(op, C) == C

    def test_tabulated_conditional_threshold_interplay(self, admissible_tables):
        for op in admissible_tables:
            for a in range(op.full_mask + 1):
                C = close(op, op.sentences_of(a))
                for b in range(op.full_mask + 1):
                    B = op.sentences_of(b)
                    assert close(op, op.sentences_of(a) | B) <= cn(op, C | B)


class TestCombinatorPostulates:
    def test_intersect_every_pair_on_two_worlds(self):
        u = Universe.discrete(2)
        ops = list(enumerate_semantic(u))
        family = premise_sets(u)
        for first in ops:
            for second in ops:
                op = intersect([first, second])
                assert all_hold(check_postulates(op))
                for A in family:
                    expected = close(first, A).sentences() & close(second, A).sentences()
                    assert close(op, A).sentences() == expected

    def test_intersect_single_operator(self, sec71):
        assert operators_equal(intersect([sec71]), sec71)

    def test_with_background_on_birds(self, birds_op):
        u = birds_op.universe
        for B in premise_sets(u):
            op = with_background(birds_op, B)
            assert all_hold(check_postulates(op))
        assert operators_equal(with_background(birds_op, []), birds_op)

    @pytest.mark.slow
    def test_with_background_on_admissible_tables(self, admissible_tables):
        for op in admissible_tables:
            for b in range(op.full_mask + 1):
                assert all_hold(check_postulates(with_background(op, op.sentences_of(b))))
