"""
Qualitative measures: a strict relation ``>`` between sets of worlds.

``X > Y`` reads "X is an order of magnitude larger than Y". The relation is
held as a square boolean numpy matrix indexed by world masks, so it only
exists over fully definable universes.
"""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np

from nmsem.choice import ChoiceFunction, require_cclm
from nmsem.errors import DefinabilityError, InputError, PreconditionError
from nmsem.universe import Sentence, Universe, WorldSet, iter_bits
from nmsem.verdicts import PropertyVerdict, Verdict

logger = logging.getLogger(__name__)

MEASURE_PROPERTIES = (
    "strict_order",
    "respects_inclusion",
    "negligible_union",
    "left_difference",
    "union_bound",
    "modularity",
    "union_split",
)
# the five properties equivalent to contraction, coherence and local monotonicity
QUALITATIVE = MEASURE_PROPERTIES[:5]

WorldSetLike = WorldSet | Iterable[str | int]


def _require_fully_definable(u: Universe) -> None:
    if not u.is_fully_definable:
        raise DefinabilityError("qualitative measures need a universe where every set is definable")


class QualMeasure:
    """
    A relation over all subsets of a fully definable universe.

    Irreflexivity is enforced; the other properties are checked on demand
    with :func:`check_measure_property`.
    """

    __slots__ = ("universe", "matrix")

    def __init__(self, universe: Universe, matrix: np.ndarray):
        _require_fully_definable(universe)
        n = universe.full_mask + 1
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.shape != (n, n):
            raise InputError(f"measure matrix must be {n}x{n}, got {matrix.shape}")
        loops = np.flatnonzero(np.diagonal(matrix))
        if loops.size:
            X = WorldSet(universe, int(loops[0]))
            raise PreconditionError(
                "irreflexivity",
                f"{X!r} > {X!r}",
                Verdict.failed("strict_order", X=X),
            )
        matrix = matrix.copy()
        matrix.setflags(write=False)
        self.universe = universe
        self.matrix = matrix

    @classmethod
    def from_pairs(cls, u: Universe, pairs: Iterable[tuple[WorldSetLike, WorldSetLike]]) -> "QualMeasure":
        """Build a measure from the (greater, than) pairs that hold."""
        n = u.full_mask + 1
        matrix = np.zeros((n, n), dtype=bool)
        for greater, than in pairs:
            matrix[_mask(u, greater), _mask(u, than)] = True
        return cls(u, matrix)

    def greater(self, X: WorldSet, Y: WorldSet) -> bool:
        return bool(self.matrix[X.mask, Y.mask])

    def pairs(self) -> list[tuple[WorldSet, WorldSet]]:
        rows, cols = np.nonzero(self.matrix)
        return [(WorldSet(self.universe, int(x)), WorldSet(self.universe, int(y))) for x, y in zip(rows, cols)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QualMeasure):
            return NotImplemented
        return self.universe is other.universe and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((id(self.universe), self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"QualMeasure({len(self.pairs())} pairs over {self.universe.size} worlds)"

    def to_dict(self) -> dict:
        return {"pairs": [{"greater": X.names(), "than": Y.names()} for X, Y in self.pairs()]}


def _mask(u: Universe, X: WorldSetLike) -> int:
    if isinstance(X, WorldSet):
        if X.universe is not u:
            raise ValueError("world set belongs to another universe")
        return X.mask
    return u.world_set(X).mask


def tarski_measure(u: Universe) -> QualMeasure:
    """X > Y iff X is nonempty and Y is empty."""
    _require_fully_definable(u)
    n = u.full_mask + 1
    matrix = np.zeros((n, n), dtype=bool)
    matrix[1:, 0] = True
    return QualMeasure(u, matrix)


def empty_measure(u: Universe) -> QualMeasure:
    _require_fully_definable(u)
    n = u.full_mask + 1
    return QualMeasure(u, np.zeros((n, n), dtype=bool))


def greater(m: QualMeasure, X: WorldSet, Y: WorldSet) -> bool:
    return m.greater(X, Y)


def is_negligible(m: QualMeasure, X: WorldSet) -> bool:
    """X is not greater than the empty set."""
    return not m.matrix[X.mask, 0]


def heavy(m: QualMeasure, x: str | int, X: WorldSet) -> bool:
    """
    True iff X is not greater than {x}.

    Raises:
        PreconditionError: x is not a member of X
    """
    i = m.universe.world_index(x)
    if not X.mask >> i & 1:
        raise PreconditionError("membership", f"{m.universe.worlds[i]!r} is not in {X!r}")
    return not m.matrix[X.mask, 1 << i]


# --- property checkers ------------------------------------------------------

def _subset_matrix(n: int) -> np.ndarray:
    """S[W, X] is True when X ⊆ W."""
    idx = np.arange(n)
    return (idx[None, :] & ~idx[:, None]) == 0


def _check_strict_order(u: Universe, R: np.ndarray) -> Verdict:
    loops = np.flatnonzero(np.diagonal(R))
    if loops.size:
        return Verdict.failed("strict_order", X=WorldSet(u, int(loops[0])))
    chained = (R.astype(np.int64) @ R.astype(np.int64)) > 0
    broken = np.argwhere(chained & ~R)
    if broken.size:
        x, z = (int(v) for v in broken[0])
        y = int(np.flatnonzero(R[x] & R[:, z])[0])
        return Verdict.failed(
            "strict_order", X=WorldSet(u, x), Y=WorldSet(u, y), Z=WorldSet(u, z)
        )
    return Verdict.passed("strict_order")


def _check_respects_inclusion(u: Universe, R: np.ndarray) -> Verdict:
    S = _subset_matrix(R.shape[0]).astype(np.int64)
    reach = (S @ R.astype(np.int64) @ S) > 0
    broken = np.argwhere(reach & ~R)
    if broken.size == 0:
        return Verdict.passed("respects_inclusion")
    w, z = (int(v) for v in broken[0])
    for x in range(R.shape[0]):
        if x & ~w:
            continue
        for y in np.flatnonzero(R[x]):
            if z & ~int(y) == 0:
                return Verdict.failed(
                    "respects_inclusion",
                    W=WorldSet(u, w), X=WorldSet(u, x), Y=WorldSet(u, int(y)), Z=WorldSet(u, z),
                )
    raise AssertionError("unreachable")


def _check_negligible_union(u: Universe, R: np.ndarray) -> Verdict:
    n = R.shape[0]
    for x in range(n):
        if R[x, 0]:
            continue
        for y in range(n):
            if not R[y, 0] and R[x | y, 0]:
                return Verdict.failed("negligible_union", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("negligible_union")


def _check_left_difference(u: Universe, R: np.ndarray) -> Verdict:
    n = R.shape[0]
    for x in range(n):
        for y in range(n):
            if R[x | y, y] and not R[x, y]:
                return Verdict.failed("left_difference", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("left_difference")


def _check_union_bound(u: Universe, R: np.ndarray) -> Verdict:
    n = R.shape[0]
    for x in range(n):
        above = np.flatnonzero(R[x])
        for y in above:
            for z in above:
                if not R[x, int(y) | int(z)]:
                    return Verdict.failed(
                        "union_bound", X=WorldSet(u, x), Y=WorldSet(u, int(y)), Z=WorldSet(u, int(z))
                    )
    return Verdict.passed("union_bound")


def _check_modularity(u: Universe, R: np.ndarray) -> Verdict:
    n = R.shape[0]
    for x in range(n):
        for y in np.flatnonzero(R[x]):
            for z in range(n):
                if not R[x, z] and not R[z, int(y)]:
                    return Verdict.failed(
                        "modularity", X=WorldSet(u, x), Y=WorldSet(u, int(y)), Z=WorldSet(u, z)
                    )
    return Verdict.passed("modularity")


def _check_union_split(u: Universe, R: np.ndarray) -> Verdict:
    n = R.shape[0]
    for x in range(n):
        for y in range(n):
            for z in np.flatnonzero(R[x | y]):
                if not R[x, int(z)] and not R[y, int(z)]:
                    return Verdict.failed(
                        "union_split", X=WorldSet(u, x), Y=WorldSet(u, y), Z=WorldSet(u, int(z))
                    )
    return Verdict.passed("union_split")


_CHECKERS = {
    "strict_order": _check_strict_order,
    "respects_inclusion": _check_respects_inclusion,
    "negligible_union": _check_negligible_union,
    "left_difference": _check_left_difference,
    "union_bound": _check_union_bound,
    "modularity": _check_modularity,
    "union_split": _check_union_split,
}


def check_measure_property(m: QualMeasure, prop: str) -> PropertyVerdict:
    """
    Check one measure property over every subset.

    The union properties are checked for pairs of sets, which covers every
    finite family by induction.

    Args:
        m: the measure
        prop: one of MEASURE_PROPERTIES

    Returns:
        PropertyVerdict: with witness keys among W, X, Y, Z
    """
    try:
        checker = _CHECKERS[prop]
    except KeyError:
        raise InputError(f"unknown measure property {prop!r}") from None
    return checker(m.universe, m.matrix)


def check_measure_properties(m: QualMeasure, props: Sequence[str] = MEASURE_PROPERTIES) -> list[PropertyVerdict]:
    return [check_measure_property(m, p) for p in props]


def require_qualitative(m: QualMeasure) -> None:
    for prop in QUALITATIVE:
        verdict = check_measure_property(m, prop)
        if not verdict.holds:
            raise PreconditionError(prop, f"measure fails {prop}", verdict)


# --- conversions ------------------------------------------------------------

def measure_from_choice(f: ChoiceFunction) -> QualMeasure:
    """
    The measure of a choice function: X > Y iff f(X) ≠ ∅ and Y ∩ f(X ∪ Y) = ∅.

    Raises:
        DefinabilityError: the universe is not fully definable
        PreconditionError: f fails contraction, coherence or local monotonicity
    """
    u = f.universe
    _require_fully_definable(u)
    require_cclm(f)
    n = u.full_mask + 1
    values = np.array([f.value(m) for m in range(n)], dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    union_values = values[idx[:, None] | idx[None, :]]
    matrix = (values[:, None] != 0) & ((idx[None, :] & union_values) == 0)
    logger.debug("measure from choice: %d pairs", int(matrix.sum()))
    return QualMeasure(u, matrix)


def choice_from_measure(m: QualMeasure) -> ChoiceFunction:
    """
    The heavy elements: f(X) = {x ∈ X : X ≯ {x}}.

    Raises:
        PreconditionError: m fails one of the five qualitative properties
    """
    require_qualitative(m)
    u = m.universe
    table = {}
    for X in range(u.full_mask + 1):
        table[X] = sum(1 << i for i in iter_bits(X) if not m.matrix[X, 1 << i])
    return ChoiceFunction.from_masks(u, table)


def measure_entails(m: QualMeasure, X: WorldSet, Y: WorldSet) -> bool:
    """(X ∩ Y) > (X − Y), or X is negligible."""
    return bool(m.matrix[X.mask & Y.mask, X.mask & ~Y.mask]) or is_negligible(m, X)


def consequence_by_measure(m: QualMeasure, A: Iterable[Sentence], a: Sentence) -> bool:
    """Whether ``a`` follows from the premises ``A`` under the measure."""
    u = m.universe
    return measure_entails(m, WorldSet(u, u.mod_mask(A)), WorldSet(u, u.sentence_mask(a)))


def check_entailment_agreement(m: QualMeasure, f: ChoiceFunction) -> Verdict:
    """
    Compare measure entailment with ``f(X) ⊆ Y``.

    Only premise sets that are not negligible are compared; a negligible X
    entails everything under the measure whatever ``f`` chooses.
    """
    u = m.universe
    if f.universe is not u:
        raise ValueError("choice function belongs to another universe")
    for x in range(u.full_mask + 1):
        if not m.matrix[x, 0]:
            continue
        chosen = f.value(x)
        for y in range(u.full_mask + 1):
            if measure_entails(m, WorldSet(u, x), WorldSet(u, y)) != (chosen & ~y == 0):
                return Verdict.failed("entailment_agreement", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("entailment_agreement")
