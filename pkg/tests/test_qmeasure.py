import numpy as np
import pytest

from nmsem import data_loader
from nmsem.choice import (
    ChoiceFunction,
    check_choice_property,
    empty_choice,
    enumerate_cclm,
    from_order,
    from_order_family,
    from_rank,
    identity_choice,
    is_cclm,
)
from nmsem.consequence import SemanticOperator, check_postulate
from nmsem.errors import DefinabilityError, InputError, PreconditionError
from nmsem.qmeasure import (
    MEASURE_PROPERTIES,
    QUALITATIVE,
    QualMeasure,
    check_measure_properties,
    check_entailment_agreement,
    check_measure_property,
    choice_from_measure,
    consequence_by_measure,
    empty_measure,
    heavy,
    is_negligible,
    measure_entails,
    measure_from_choice,
    tarski_measure,
)
from nmsem.universe import Universe, WorldSet
from nmsem.verdicts import all_hold


def test_tarski_measure(m3):
    m = tarski_measure(m3)
    assert all_hold(check_measure_properties(m))
    assert m.greater(m3.world_set(["w1"]), m3.empty())
    assert not m.greater(m3.all_worlds(), m3.world_set(["w1"]))
    assert choice_from_measure(m) == identity_choice(m3)


def test_empty_measure_chooses_everything(m3):
    m = empty_measure(m3)
    assert all(is_negligible(m, X) for X in m3.subsets())
    assert choice_from_measure(m) == identity_choice(m3)


def test_measures_need_full_definability(u1):
    with pytest.raises(DefinabilityError):
        tarski_measure(u1)


def test_irreflexivity_is_enforced(m3):
    with pytest.raises(PreconditionError) as err:
        QualMeasure.from_pairs(m3, [(["w1"], ["w1"])])
    assert err.value.precondition == "irreflexivity"


def test_shape_is_checked(m3):
    with pytest.raises(InputError):
        QualMeasure(m3, np.zeros((4, 4), dtype=bool))


def test_unknown_property(m3):
    with pytest.raises(InputError):
        check_measure_property(empty_measure(m3), "additivity")


def test_transitivity_witness(m3):
    m = QualMeasure.from_pairs(m3, [(["w1"], ["w2"]), (["w2"], ["w3"])])
    verdict = check_measure_property(m, "strict_order")
    assert verdict.to_dict()["witness"] == {"X": ["w1"], "Y": ["w2"], "Z": ["w3"]}


def test_heavy(m3):
    m = measure_from_choice(ChoiceFunction.from_masks(m3, {x: x & 0b001 or x for x in range(8)}))
    X = m3.world_set(["w1", "w2"])
    assert heavy(m, "w1", X)
    assert not heavy(m, "w2", X)
    with pytest.raises(PreconditionError):
        heavy(m, "w3", X)


def test_partial_order_measure_is_not_modular(partial_order):
    m = measure_from_choice(partial_order)
    assert all_hold(check_measure_properties(m, QUALITATIVE))
    verdict = check_measure_property(m, "modularity")
    assert verdict.to_dict()["witness"] == {"X": ["w1"], "Y": ["w2"], "Z": ["w3"]}


def test_measure_from_non_cclm_choice(m3):
    table = {m: m for m in range(8)}
    table[0b111] = 0
    with pytest.raises(PreconditionError):
        measure_from_choice(ChoiceFunction.from_masks(m3, table))


def test_birds_by_measure(birds):
    _, f = birds
    m = measure_from_choice(f)
    assert consequence_by_measure(m, ["b"], "f")
    assert consequence_by_measure(m, ["~f"], "~b")
    assert not consequence_by_measure(m, ["b"], "~f")


def test_entailment_agreement_witness(m3):
    verdict = check_entailment_agreement(tarski_measure(m3), empty_choice(m3))
    assert not verdict.holds
    assert verdict.witness["X"].mask == 1
    assert verdict.witness["Y"].mask == 0


HAND_FIXTURES = {
    "birds": lambda: data_loader.load_sample_birds()[1],
    "partial_order": data_loader.load_sample_partial_order,
    "expansion_witness": data_loader.load_sample_expansion_witness,
    "identity": lambda: identity_choice(Universe.discrete(3)),
    "rank": lambda: from_rank(Universe.discrete(3), {"w1": 0, "w2": 1, "w3": 1}),
    "order_family": lambda: from_order_family(Universe.discrete(3), [[("w1", "w2")], [("w2", "w3")]]),
    "two_chains": lambda: from_order(Universe.discrete(4), [("w1", "w3"), ("w2", "w4")]),
}


@pytest.mark.parametrize("build", list(HAND_FIXTURES.values()), ids=list(HAND_FIXTURES))
def test_heavy_elements_recover_the_choice_function(build):
    f = build()
    back = choice_from_measure(measure_from_choice(f))
    assert is_cclm(back)
    assert back == f


def test_negligible_premises_are_not_compared(m3):
    f = ChoiceFunction.from_masks(m3, {x: x & ~0b001 for x in range(8)})
    m = measure_from_choice(f)
    w1 = m3.world_set(["w1"])
    assert is_negligible(m, w1)
    back = choice_from_measure(m)
    assert back.value(w1.mask) == w1.mask
    # a negligible set entails everything, its heavy elements do not
    assert measure_entails(m, w1, m3.empty())
    assert check_entailment_agreement(m, back).holds
    assert check_entailment_agreement(m, f).holds


def test_property_names():
    assert QUALITATIVE == MEASURE_PROPERTIES[:5]


@pytest.mark.slow
class TestCorrespondence:
    @pytest.fixture(scope="class")
    def functions(self):
        return list(enumerate_cclm(Universe.discrete(3)))

    def test_measures_of_cclm_functions_are_qualitative(self, functions):
        for f in functions:
            assert all_hold(check_measure_properties(measure_from_choice(f), QUALITATIVE))

    def test_round_trip_keeps_nonempty_values(self, functions):
        for f in functions:
            u = f.universe
            back = choice_from_measure(measure_from_choice(f))
            for x in range(u.full_mask + 1):
                assert back.value(x) == (f.value(x) or x)

    def test_entailment_agrees_with_choice(self, functions):
        for f in functions:
            u = f.universe
            m = measure_from_choice(f)
            for x in range(u.full_mask + 1):
                for y in range(u.full_mask + 1):
                    expected = f.value(x) & ~y == 0
                    assert measure_entails(m, WorldSet(u, x), WorldSet(u, y)) == expected

    def test_heavy_elements_agree_on_non_negligible_premises(self, functions):
        for f in functions:
            m = measure_from_choice(f)
            assert check_entailment_agreement(m, choice_from_measure(m)).holds

    def test_modularity_matches_arrow_and_rational_monotonicity(self, functions):
        for f in functions:
            arrow = check_choice_property(f, "arrow").holds
            assert check_measure_property(measure_from_choice(f), "modularity").holds == arrow
            assert check_postulate(SemanticOperator(f), "rational_monotonicity").holds == arrow
