"""
Finitary preferential relations ``a |~ b`` over a propositional universe.

Formulas are identified with their semantic class, the set of worlds they
hold in, so a relation is a square boolean matrix indexed by world masks:
``matrix[X, Y]`` is ``a |~ b`` for any ``a`` with models X and ``b`` with
models Y.
"""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np

from nmsem.choice import ChoiceFunction
from nmsem.config import load_settings
from nmsem.connectives import validate_classical
from nmsem.consequence import ConsequenceOperator, SemanticOperator
from nmsem.errors import InputError, LanguageError, PreconditionError, SearchSpaceError
from nmsem.formula import Formula, render
from nmsem.universe import Sentence, Universe, iter_bits, submasks
from nmsem.verdicts import PropertyVerdict, Verdict

logger = logging.getLogger(__name__)

KLM_AXIOMS = (
    "reflexivity",
    "left_logical_equivalence",
    "right_weakening",
    "and_rule",
    "or_rule",
    "cautious_monotonicity",
)


def _require_size(u: Universe) -> None:
    if not u.is_propositional:
        raise LanguageError("preferential relations need a propositional universe")
    limit = load_settings().max_klm_atoms
    if len(u.atoms) > limit:
        raise SearchSpaceError(f"preferential relations are bounded to {limit} atoms, got {len(u.atoms)}")


class PreferentialRelation:
    """A relation between formula classes of a propositional universe."""

    __slots__ = ("universe", "matrix")

    def __init__(self, universe: Universe, matrix: np.ndarray):
        _require_size(universe)
        n = universe.full_mask + 1
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.shape != (n, n):
            raise InputError(f"relation matrix must be {n}x{n}, got {matrix.shape}")
        matrix = matrix.copy()
        matrix.setflags(write=False)
        self.universe = universe
        self.matrix = matrix

    @classmethod
    def from_pairs(cls, u: Universe, pairs: Iterable[tuple[Sentence, Sentence]]) -> "PreferentialRelation":
        _require_size(u)
        n = u.full_mask + 1
        matrix = np.zeros((n, n), dtype=bool)
        for lhs, rhs in pairs:
            matrix[u.sentence_mask(lhs), u.sentence_mask(rhs)] = True
        return cls(u, matrix)

    def holds(self, a: Sentence, b: Sentence) -> bool:
        """a |~ b."""
        return bool(self.matrix[self.universe.sentence_mask(a), self.universe.sentence_mask(b)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreferentialRelation):
            return NotImplemented
        return self.universe.atoms == other.universe.atoms and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.universe.atoms, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"PreferentialRelation({int(self.matrix.sum())} pairs over {list(self.universe.atoms)})"

    def to_dict(self) -> dict:
        return {"pairs": [{"lhs": render(a), "rhs": render(b)} for a, b in relation_pairs(self)]}


def relation_pairs(rel: PreferentialRelation) -> list[tuple[Formula, Formula]]:
    """The pairs of the relation as characteristic formulas, in mask order."""
    u = rel.universe
    rows, cols = np.nonzero(rel.matrix)
    return [(u.characteristic_formula(int(x)), u.characteristic_formula(int(y))) for x, y in zip(rows, cols)]


def classical_relation(u: Universe) -> PreferentialRelation:
    """a |~ b iff a classically entails b."""
    _require_size(u)
    idx = np.arange(u.full_mask + 1)
    return PreferentialRelation(u, (idx[:, None] & ~idx[None, :]) == 0)


def relation_from_operator(op: ConsequenceOperator, validate: bool = True) -> PreferentialRelation:
    """
    a |~ b iff b ∈ C({a}).

    Raises:
        LanguageError: op is not a propositional semantic operator
        PreconditionError: op fails the postulates, weak compactness or a rule
    """
    if not isinstance(op, SemanticOperator) or not op.universe.is_propositional:
        raise LanguageError("relations are extracted from propositional semantic operators")
    u = op.universe
    _require_size(u)
    if validate:
        validate_classical(op)
    idx = np.arange(u.full_mask + 1, dtype=np.int64)
    chosen = np.array([op.choice.value(int(x)) for x in idx], dtype=np.int64)
    return PreferentialRelation(u, (chosen[:, None] & ~idx[None, :]) == 0)


# --- axioms -----------------------------------------------------------------

def _witness(name: str, u: Universe, **masks: int) -> Verdict:
    return Verdict.failed(name, **{k: u.characteristic_formula(int(v)) for k, v in masks.items()})


def _first(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0])


def _reflexivity(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    missing = np.flatnonzero(~np.diagonal(R))
    if missing.size:
        return _witness("reflexivity", u, a=missing[0])
    return Verdict.passed("reflexivity")


def _left_logical_equivalence(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    # rows are indexed by semantic class, so equivalent antecedents share a row
    return Verdict.passed("left_logical_equivalence")


def _right_weakening(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    # S[Y, Z]: Y ⊆ Z
    S = ((idx[:, None] & ~idx[None, :]) == 0).astype(np.int64)
    reach = (R.astype(np.int64) @ S) > 0
    broken = np.argwhere(reach & ~R)
    if broken.size:
        x, z = (int(v) for v in broken[0])
        y = _first(R[x] & (S[:, z] > 0))
        return _witness("right_weakening", u, a=x, b=y, c=z)
    return Verdict.passed("right_weakening")


def _and_rule(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    meet = np.bitwise_and.outer(idx, idx)
    for x in idx:
        row = R[x]
        broken = row[:, None] & row[None, :] & ~row[meet]
        if broken.any():
            y, z = (int(v) for v in np.argwhere(broken)[0])
            return _witness("and_rule", u, a=x, b=y, c=z)
    return Verdict.passed("and_rule")


def _or_rule(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    join = np.bitwise_or.outer(idx, idx)
    for z in idx:
        col = R[:, z]
        broken = col[:, None] & col[None, :] & ~col[join]
        if broken.any():
            x, y = (int(v) for v in np.argwhere(broken)[0])
            return _witness("or_rule", u, a=x, b=y, c=z)
    return Verdict.passed("or_rule")


def _cautious_monotonicity(u: Universe, R: np.ndarray, idx: np.ndarray) -> Verdict:
    meet = np.bitwise_and.outer(idx, idx)
    for x in idx:
        row = R[x]
        ys = np.flatnonzero(row)
        if ys.size == 0:
            continue
        # rows of a ∧ b for every b with a |~ b, restricted to the c with a |~ c
        strengthened = R[meet[x, ys]][:, row]
        if not strengthened.all():
            i, j = (int(v) for v in np.argwhere(~strengthened)[0])
            z = np.flatnonzero(row)[j]
            return _witness("cautious_monotonicity", u, a=x, b=ys[i], c=z)
    return Verdict.passed("cautious_monotonicity")


_CHECKERS = {
    "reflexivity": _reflexivity,
    "left_logical_equivalence": _left_logical_equivalence,
    "right_weakening": _right_weakening,
    "and_rule": _and_rule,
    "or_rule": _or_rule,
    "cautious_monotonicity": _cautious_monotonicity,
}


def check_klm(rel: PreferentialRelation, axiom: str) -> PropertyVerdict:
    """
    Check one rule of preferential reasoning over every class.

    Args:
        rel: the relation
        axiom: one of KLM_AXIOMS

    Left logical equivalence holds for every relation: formulas are stored
    by semantic class, so it never carries a witness.

    Returns:
        PropertyVerdict: witness formulas a, b, c of the first violation
    """
    try:
        checker = _CHECKERS[axiom]
    except KeyError:
        raise InputError(f"unknown axiom {axiom!r}") from None
    idx = np.arange(rel.universe.full_mask + 1, dtype=np.int64)
    return checker(rel.universe, rel.matrix, idx)


def check_klm_axioms(rel: PreferentialRelation, axioms: Sequence[str] = KLM_AXIOMS) -> list[PropertyVerdict]:
    return [check_klm(rel, a) for a in axioms]


# --- lifting ----------------------------------------------------------------

def _entailed_classes(R: np.ndarray, full: int) -> np.ndarray:
    """
    Row S: the classes b with some a ⊇ S such that every a' between S and a
    has a' |~ b.
    """
    n = full + 1
    ent = np.zeros((n, n), dtype=bool)
    for s in range(n):
        interval: dict[int, np.ndarray] = {}
        for extra in submasks(full & ~s):
            t = s | extra
            row = R[t].copy()
            for i in iter_bits(extra):
                row &= interval[t ^ (1 << i)]
            interval[t] = row
            ent[s] |= row
    return ent


def lift(rel: PreferentialRelation, allow_large: bool = False) -> SemanticOperator:
    """
    Extend the relation to arbitrary premise sets.

    ``b ∈ C(A)`` iff some ``a`` entailed by A is such that every ``a'``
    entailed by A and entailing ``a`` has ``a' |~ b``.

    Raises:
        PreconditionError: rel fails a preferential rule, or a lifted
            consequence set is not the theory of one set of worlds
        SearchSpaceError: more atoms than the lifting bound without
            ``allow_large``
    """
    u = rel.universe
    limit = load_settings().max_lift_atoms
    if len(u.atoms) > limit and not allow_large:
        raise SearchSpaceError(f"lifting is bounded to {limit} atoms; pass allow_large to go further")
    for verdict in check_klm_axioms(rel):
        if not verdict.holds:
            raise PreconditionError(verdict.property, f"relation fails {verdict.property}", verdict)
    full = u.full_mask
    ent = _entailed_classes(rel.matrix, full)
    idx = np.arange(full + 1, dtype=np.int64)
    table = {}
    for s in range(full + 1):
        members = idx[ent[s]]
        core = int(np.bitwise_and.reduce(members)) if members.size else full
        expected = (core & ~idx) == 0
        if not np.array_equal(ent[s], expected):
            raise PreconditionError("filter", f"lifted consequences of class {s} are not deductively closed")
        table[s] = core
    logger.debug("lifted relation over %d classes", full + 1)
    return SemanticOperator(ChoiceFunction.from_masks(u, table))
