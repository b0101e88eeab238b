import numpy as np
import pytest
from hypothesis import given, settings

from nmsem.choice import from_rank, identity_choice
from nmsem.consequence import SemanticOperator, enumerate_semantic, monotone_operator
from nmsem.errors import InputError, LanguageError, PreconditionError, SearchSpaceError
from nmsem.klm import (
    KLM_AXIOMS,
    PreferentialRelation,
    check_klm,
    check_klm_axioms,
    classical_relation,
    lift,
    relation_from_operator,
    relation_pairs,
)
from nmsem.search import family_functions
from nmsem.universe import Universe
from nmsem.verdicts import all_hold
from tests.strategies import grade_maps

BF = Universe.propositional(["b", "f"])
P = Universe.propositional(["p"])
PQ = Universe.propositional(["p", "q"])


def small_operators() -> list[SemanticOperator]:
    """Every CCLM operator over one atom, then the ranked and sampled ones over two."""
    ops = list(enumerate_semantic(P))
    ops += [SemanticOperator(f) for f in family_functions(PQ, "rank")]
    ops += [SemanticOperator(f) for f in family_functions(PQ, "sampled", seed=7, samples=60)]
    return ops


@pytest.fixture
def birds_relation(birds):
    _, f = birds
    return relation_from_operator(SemanticOperator(f))


@pytest.fixture
def non_cumulative(pq):
    """Rows are the supersets of g(x); g is the identity except g(true) = {p=1,q=1}."""
    idx = np.arange(16)
    chosen = idx.copy()
    chosen[15] = 0b1000
    return PreferentialRelation(pq, (chosen[:, None] & ~idx[None, :]) == 0)


class TestRelation:
    def test_birds(self, birds_relation):
        assert birds_relation.holds("b", "f")
        assert birds_relation.holds("true", "b")
        assert not birds_relation.holds("~f", "b")
        assert birds_relation.holds("b & f", "f & b")

    def test_classical_relation(self, pq):
        rel = classical_relation(pq)
        assert len(relation_pairs(rel)) == 81
        assert len(rel.to_dict()["pairs"]) == 81
        assert all_hold(check_klm_axioms(rel))
        assert rel == PreferentialRelation.from_pairs(pq, relation_pairs(rel))

    def test_shape(self, pq):
        with pytest.raises(InputError):
            PreferentialRelation(pq, np.zeros((4, 4), dtype=bool))

    def test_bounds(self, m3):
        with pytest.raises(LanguageError):
            classical_relation(m3)
        with pytest.raises(SearchSpaceError):
            classical_relation(Universe.propositional(["p", "q", "r", "s"]))

    def test_needs_semantic_operator(self, sec71):
        with pytest.raises(LanguageError):
            relation_from_operator(sec71)

    def test_unknown_axiom(self, birds_relation):
        with pytest.raises(InputError):
            check_klm(birds_relation, "transitivity")


class TestAxioms:
    def test_birds_pass(self, birds_relation):
        verdicts = check_klm_axioms(birds_relation)
        assert [v.property for v in verdicts] == list(KLM_AXIOMS)
        assert all_hold(verdicts)

    def test_cautious_monotonicity_failure(self, non_cumulative):
        assert check_klm(non_cumulative, "reflexivity").holds
        verdict = check_klm(non_cumulative, "cautious_monotonicity")
        assert not verdict.holds
        assert verdict.to_dict()["witness"]["a"] == "true"

    def test_reflexivity_failure(self, pq):
        rel = PreferentialRelation.from_pairs(pq, [("p", "p")])
        verdict = check_klm(rel, "reflexivity")
        assert verdict.to_dict()["witness"] == {"a": "false"}

    @given(grade_maps(BF))
    @settings(max_examples=40, deadline=None)
    def test_ranked_relations_are_preferential(self, grade):
        rel = relation_from_operator(SemanticOperator(from_rank(BF, grade)))
        assert all_hold(check_klm_axioms(rel))


class TestLift:
    def test_lift_recovers_the_choice_function(self, birds, birds_relation):
        _, f = birds
        lifted = lift(birds_relation)
        assert lifted.choice == f
        assert lifted.entails(["b"], "f")

    def test_classical_lifts_to_monotone(self, pq):
        lifted = lift(classical_relation(pq))
        assert lifted.choice == identity_choice(pq)
        assert lifted.choice == monotone_operator(pq).choice

    def test_lift_requires_the_axioms(self, non_cumulative):
        with pytest.raises(PreconditionError) as err:
            lift(non_cumulative)
        assert err.value.precondition == "cautious_monotonicity"

    def test_lift_bound(self):
        rel = classical_relation(Universe.propositional(["p", "q", "r"]))
        with pytest.raises(SearchSpaceError):
            lift(rel)
        assert lift(rel, allow_large=True).choice.value(0b1111_1111) == 0b1111_1111

    @given(grade_maps(BF))
    @settings(max_examples=25, deadline=None)
    def test_lift_agrees_on_single_premises(self, grade):
        rel = relation_from_operator(SemanticOperator(from_rank(BF, grade)))
        lifted = lift(rel)
        for x in range(BF.full_mask + 1):
            a = BF.characteristic_formula(x)
            for y in range(BF.full_mask + 1):
                b = BF.characteristic_formula(y)
                assert lifted.entails([a], b) == rel.holds(a, b)


class TestLeftLogicalEquivalence:
    def test_equivalent_antecedents_share_a_row(self, pq):
        rel = PreferentialRelation.from_pairs(pq, [("~~p", "q")])
        assert rel.holds("p", "q")
        assert rel.holds("p & (q | ~q)", "q")

    def test_never_carries_a_witness(self, non_cumulative):
        verdict = check_klm(non_cumulative, "left_logical_equivalence")
        assert verdict.holds
        assert verdict.witness is None


@pytest.mark.slow
class TestExtractedRelations:
    @pytest.mark.parametrize("op", small_operators())
    def test_extracted_relations_are_preferential(self, op):
        rel = relation_from_operator(op)
        verdicts = check_klm_axioms(rel)
        assert [v.property for v in verdicts] == list(KLM_AXIOMS)
        assert all_hold(verdicts)

    @pytest.mark.parametrize("op", small_operators())
    def test_lift_round_trip(self, op):
        rel = relation_from_operator(op)
        lifted = lift(rel)
        assert lifted.choice == op.choice
        assert relation_from_operator(lifted) == rel
