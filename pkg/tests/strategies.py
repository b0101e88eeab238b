"""Hypothesis strategies for formulas, universes, orders and grades."""

from hypothesis import strategies as st

from nmsem.formula import FALSE, TRUE, And, Atom, Implies, Not, Or
from nmsem.universe import Universe


def formulas(atoms=("p", "q", "r"), max_leaves=12):
    leaves = st.sampled_from([Atom(a) for a in atoms]) | st.just(TRUE) | st.just(FALSE)
    return st.recursive(
        leaves,
        lambda children: st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def abstract_universes(draw, max_worlds=4, max_sentences=3):
    n_sentences = draw(st.integers(0, max_sentences))
    sentences = [f"s{j}" for j in range(n_sentences)]
    n_worlds = draw(st.integers(1, max_worlds))
    worlds = [
        (f"w{i}", draw(st.sets(st.sampled_from(sentences))) if sentences else set())
        for i in range(1, n_worlds + 1)
    ]
    return Universe.abstract(sentences, worlds)


@st.composite
def strict_partial_orders(draw, u):
    """Pairs along a drawn permutation, closed transitively."""
    perm = draw(st.permutations(list(u.worlds)))
    pairs = set()
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if draw(st.booleans()):
                pairs.add((perm[i], perm[j]))
    changed = True
    while changed:
        changed = False
        for a, b in list(pairs):
            for c, d in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return sorted(pairs)


def grade_maps(u):
    return st.fixed_dictionaries({w: st.integers(0, max(u.size - 1, 0)) for w in u.worlds})
