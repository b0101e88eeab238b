"""
Introduction and elimination rules for the classical connectives.

Rules are checked on semantic operators over a full propositional universe.
Premise sets range over closed sets Th(S) and the formulas ``a`` and ``b``
over one representative per semantic class (the characteristic formula of
a set of worlds), since every rule only depends on models.
"""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

from nmsem.choice import ChoiceFunction, is_cclm
from nmsem.consequence import (
    FIVE_POSTULATES,
    ConsequenceOperator,
    SemanticOperator,
    TabulatedOperator,
    check_postulates,
    represent,
)
from nmsem.errors import InputError, LanguageError, PreconditionError
from nmsem.formula import And, Formula, Implies, Not, Or, evaluate, render
from nmsem.universe import Theory, Universe, WorldSet, iter_bits, submasks
from nmsem.verdicts import RuleVerdict, Verdict

logger = logging.getLogger(__name__)

RULES = (
    "and_both_sides",
    "neg_left_intro",
    "neg_left_elim",
    "or_left_intro",
    "or_right_intro",
    "imp_right_intro",
    "imp_left_intro",
)
MAXIMAL_CONSISTENT_CLAUSES = ("theory", "conjunction", "negation", "disjunction", "implication")
CHAIN_ITEMS = (
    "classical_entailment",
    "entailment_soundness",
    "entailment_completeness",
    "contradiction_soundness",
    "contradiction_completeness",
    "contradiction_implies_entailment",
)


def _require_propositional(op: ConsequenceOperator) -> SemanticOperator:
    if not isinstance(op, SemanticOperator) or not op.universe.is_propositional:
        raise LanguageError("connective rules need a semantic operator over a propositional universe")
    return op


class _Classes:
    """Representatives and connective tables over a pool of formula classes."""

    def __init__(self, u: Universe, formulas: Iterable[Formula] | None = None):
        self.u = u
        if formulas is None:
            self.reps = {m: u.characteristic_formula(m) for m in range(u.full_mask + 1)}
        else:
            self.reps = {}
            for f in formulas:
                self.reps.setdefault(u.sentence_mask(f), f)
        self.masks = sorted(self.reps)

    def neg(self, a: int) -> int:
        return self.u.sentence_mask(Not(self.reps[a]))

    def conj(self, a: int, b: int) -> int:
        return self.u.sentence_mask(And(self.reps[a], self.reps[b]))

    def disj(self, a: int, b: int) -> int:
        return self.u.sentence_mask(Or(self.reps[a], self.reps[b]))

    def imp(self, a: int, b: int) -> int:
        return self.u.sentence_mask(Implies(self.reps[a], self.reps[b]))


def _rule_verdict(name: str, u: Universe, s: int, classes: _Classes, a: int, b: int | None) -> Verdict:
    witness = {"A": Theory(WorldSet(u, s)), "a": classes.reps[a]}
    if b is not None:
        witness["b"] = classes.reps[b]
    return Verdict.failed(name, **witness)


def check_rule(op: ConsequenceOperator, rule: str, formulas: Iterable[Formula] | None = None) -> RuleVerdict:
    """
    Check one introduction or elimination rule.

    Args:
        op: semantic operator over a propositional universe
        rule: one of RULES
        formulas: pool of formulas for ``a`` and ``b``; defaults to one
            characteristic formula per set of worlds

    Returns:
        RuleVerdict: first violation with witness keys A, a and b

    Raises:
        LanguageError: op is not propositional
    """
    op = _require_propositional(op)
    if rule not in RULES:
        raise InputError(f"unknown rule {rule!r}")
    u = op.universe
    f = op.choice
    classes = _Classes(u, formulas)
    full = u.full_mask

    # closure is the identity on propositional world sets
    def C(x: int) -> int:
        return f.value(x)

    for s in range(full + 1):
        for a in classes.masks:
            sa = s & a
            if rule == "neg_left_intro":
                if C(sa & classes.neg(a)) != 0:
                    return _rule_verdict(rule, u, s, classes, a, None)
                continue
            if rule == "neg_left_elim":
                if C(s & classes.neg(a)) == 0 and C(s) & ~a:
                    return _rule_verdict(rule, u, s, classes, a, None)
                continue
            for b in classes.masks:
                if rule == "and_both_sides":
                    broken = C(s & classes.conj(a, b)) != C(sa & b)
                elif rule == "or_left_intro":
                    broken = C(s & classes.disj(a, b)) & ~(C(sa) | C(s & b)) != 0
                elif rule == "or_right_intro":
                    ab = classes.disj(a, b)
                    broken = (C(s) & ~a == 0 or C(s) & ~b == 0) and C(s) & ~ab != 0
                elif rule == "imp_right_intro":
                    broken = C(sa) & ~b == 0 and C(s) & ~classes.imp(a, b) != 0
                else:
                    broken = C(sa & classes.imp(a, b)) & ~b != 0
                if broken:
                    return _rule_verdict(rule, u, s, classes, a, b)
    return Verdict.passed(rule)


def check_rules(op: ConsequenceOperator, rules: Sequence[str] = RULES, formulas: Iterable[Formula] | None = None) -> list[RuleVerdict]:
    pool = None if formulas is None else list(formulas)
    return [check_rule(op, r, pool) for r in rules]


def validate_classical(op: ConsequenceOperator) -> None:
    """
    Require the five postulates, weak compactness and every rule.

    Raises:
        PreconditionError: named after the first failing condition
    """
    for verdict in check_postulates(op, FIVE_POSTULATES + ("weak_compactness",)):
        if not verdict.holds:
            raise PreconditionError(verdict.property, f"operator fails {verdict.property}", verdict)
    for verdict in check_rules(op):
        if not verdict.holds:
            raise PreconditionError(verdict.property, f"operator fails {verdict.property}", verdict)


# --- consistency ------------------------------------------------------------

def is_consistent(op: ConsequenceOperator, A) -> bool:
    """Whether C(A) differs from the whole language."""
    return op.is_consistent(A)


def _language_sentences(op: ConsequenceOperator) -> tuple[str, ...]:
    if isinstance(op, TabulatedOperator):
        return op.language
    return op.universe.sentences


def maximal_consistent_extensions(op: ConsequenceOperator, A) -> list:
    """
    The maximal consistent sets including ``A``.

    Returns:
        Theory objects Th({w}) for propositional semantic operators, else
        frozensets of sentences, in canonical order

    Raises:
        PreconditionError: A is inconsistent
    """
    if not op.is_consistent(A):
        raise PreconditionError("consistent", "premises are inconsistent")
    if isinstance(op, SemanticOperator) and op.universe.is_propositional:
        u = op.universe
        premises = u.mod_mask(A if not isinstance(A, (str, Formula)) else [A])
        return [
            Theory(WorldSet(u, 1 << w))
            for w in iter_bits(premises)
            if op.choice.value(1 << w)
        ]
    language = _language_sentences(op)
    base = frozenset([A] if isinstance(A, str) else A)
    index = {s: i for i, s in enumerate(language)}
    unknown = base - set(language)
    if unknown:
        raise LanguageError(f"premises outside the language: {sorted(unknown)}")
    start = sum(1 << index[s] for s in base)
    free = ((1 << len(language)) - 1) & ~start
    consistent = []
    for extra in submasks(free):
        mask = start | extra
        sentences = frozenset(language[i] for i in iter_bits(mask))
        if op.is_consistent(sentences):
            consistent.append(mask)
    maximal = [
        m for m in consistent
        if not any(other != m and other & m == m for other in consistent)
    ]
    return [frozenset(language[i] for i in iter_bits(m)) for m in maximal]


def check_maximal_consistent(op: ConsequenceOperator, T: Theory, formulas: Iterable[Formula] | None = None) -> list[Verdict]:
    """
    Check the closure clauses of one maximal consistent set.

    ``T`` must be a theory, contain a ∧ b iff it contains both, contain ¬a
    iff it omits a, contain a ∨ b iff it contains one of them, and omit
    a → b iff it contains a and omits b.
    """
    op = _require_propositional(op)
    u = op.universe
    classes = _Classes(u, formulas)
    w = T.models().mask
    found: dict[str, Verdict] = {}

    def has(mask: int) -> bool:
        return w & ~mask == 0

    if op.choice.value(w) != w:
        found["theory"] = Verdict.failed("theory", T=T)
    for a in classes.masks:
        ra = classes.reps[a]
        if "negation" not in found and has(classes.neg(a)) == has(a):
            found["negation"] = Verdict.failed("negation", T=T, a=ra)
        for b in classes.masks:
            rb = classes.reps[b]
            if "conjunction" not in found and has(classes.conj(a, b)) != (has(a) and has(b)):
                found["conjunction"] = Verdict.failed("conjunction", T=T, a=ra, b=rb)
            if "disjunction" not in found and has(classes.disj(a, b)) != (has(a) or has(b)):
                found["disjunction"] = Verdict.failed("disjunction", T=T, a=ra, b=rb)
            if "implication" not in found and (not has(classes.imp(a, b))) != (has(a) and not has(b)):
                found["implication"] = Verdict.failed("implication", T=T, a=ra, b=rb)
    return [found.get(name, Verdict.passed(name)) for name in MAXIMAL_CONSISTENT_CLAUSES]


# --- classical representation ------------------------------------------------

def representative_sentence(u: Universe, a: Formula | str) -> str:
    """Name of the sentence standing for the class of ``a``."""
    return render(u.characteristic_formula(u.sentence_mask(a)))


def represent_classical(op: ConsequenceOperator) -> tuple[Universe, ChoiceFunction]:
    """
    Represent a classical operator over its maximal consistent sets.

    Sentences are the representative formulas, one per class; worlds are the
    maximal consistent sets Th({w}), named after ``w``, each satisfying the
    representatives of the classes it belongs to.

    Raises:
        PreconditionError: op fails the postulates, weak compactness or a rule
    """
    op = _require_propositional(op)
    validate_classical(op)
    u = op.universe
    f = op.choice
    sentences = [render(u.characteristic_formula(m)) for m in range(u.full_mask + 1)]
    maximal = [w for w in range(u.size) if f.value(1 << w)]
    worlds = [
        (u.worlds[w], [sentences[m] for m in range(u.full_mask + 1) if m >> w & 1])
        for w in maximal
    ]
    rep = Universe.abstract(sentences, worlds)

    def embed(mask: int) -> int:
        return sum(1 << maximal[i] for i in iter_bits(mask))

    def restrict(mask: int) -> int:
        return sum(1 << i for i, w in enumerate(maximal) if mask >> w & 1)

    table = {y: restrict(f.value(embed(y))) for y in rep.definable_masks}
    logger.info("classical representation: %d of %d worlds kept", len(maximal), u.size)
    return rep, ChoiceFunction.from_masks(rep, table)


def check_classical_representation(op: ConsequenceOperator, rep: Universe, g: ChoiceFunction) -> Verdict:
    """Whether ``g`` on ``rep`` regenerates ``op`` on every single-formula premise."""
    op = _require_propositional(op)
    u = op.universe
    regenerated = SemanticOperator(g)
    for x in range(u.full_mask + 1):
        name = render(u.characteristic_formula(x))
        expected = {
            render(u.characteristic_formula(y))
            for y in range(u.full_mask + 1)
            if op.choice.value(x) & ~y == 0
        }
        if regenerated.close([name]).sentences() != expected:
            return Verdict.failed("classical_representation", a=u.characteristic_formula(x))
    return Verdict.passed("classical_representation")


def witness_operators(u: Universe) -> list[SemanticOperator]:
    """
    One operator per world ``m``: C(A) = Th({m}) when m satisfies A, else
    the whole language. Together they separate every non-entailment.
    """
    ops = []
    for m in range(u.size):
        table = {x: x & (1 << m) for x in u.definable_masks}
        ops.append(SemanticOperator(ChoiceFunction.from_masks(u, table)))
    return ops


def check_classical_chain(ops: Sequence[ConsequenceOperator], u: Universe, formulas: Iterable[Formula] | None = None) -> list[Verdict]:
    """
    Relate classical entailment to entailment by a family of operators.

    Over every pair of classes ``a``, ``b``:

    * ``classical_entailment``: the truth table of a → b agrees with
      Mod(a) ⊆ Mod(b);
    * ``entailment_soundness`` / ``entailment_completeness``: a ⊨ b implies,
      and is implied by, b ∈ C({a}) for every operator of the family;
    * ``contradiction_soundness`` / ``contradiction_completeness``: the same
      for C({a, ¬b}) being the whole language;
    * ``contradiction_implies_entailment``: for each operator, C({a, ¬b}) = L
      gives b ∈ C(A ∪ {a}) for every closed A.

    The completeness directions need a family as rich as
    :func:`witness_operators`.
    """
    ops = list(ops)
    for op in ops:
        _require_propositional(op)
        if op.universe.atoms != u.atoms:
            raise LanguageError("operators must share the universe's atoms")
    classes = _Classes(u, formulas)
    valuations = [u.valuation(i) for i in range(u.size)]
    found: dict[str, Verdict] = {}

    def fail(name: str, ra: Formula, rb: Formula, **extra) -> None:
        found.setdefault(name, Verdict.failed(name, a=ra, b=rb, **extra))

    for a in classes.masks:
        ra = classes.reps[a]
        for b in classes.masks:
            rb = classes.reps[b]
            by_models = a & ~b == 0
            by_table = all(evaluate(Implies(ra, rb), v) for v in valuations)
            if by_models != by_table:
                fail("classical_entailment", ra, rb)
            entailed = all(op.entails([ra], rb) for op in ops)
            refuted = all(not op.is_consistent([ra, Not(rb)]) for op in ops)
            if by_models and not entailed:
                fail("entailment_soundness", ra, rb)
            if entailed and not by_models:
                fail("entailment_completeness", ra, rb)
            if by_models and not refuted:
                fail("contradiction_soundness", ra, rb)
            if refuted and not by_models:
                fail("contradiction_completeness", ra, rb)
            for op in ops:
                if op.is_consistent([ra, Not(rb)]):
                    continue
                f = op.choice
                for s in range(u.full_mask + 1):
                    if f.value(s & a) & ~b:
                        fail("contradiction_implies_entailment", ra, rb, A=Theory(WorldSet(u, s)))
                        break
    return [found.get(name, Verdict.passed(name)) for name in CHAIN_ITEMS]


# --- conservative extension --------------------------------------------------

def conservative_extension(op: TabulatedOperator) -> SemanticOperator:
    """
    Extend an operator on finitely many atoms to all formulas over them.

    The language sentences become atoms; every theory of ``op`` becomes the
    valuation making exactly its sentences true, and the choice function of
    the theory representation is carried over to those valuations.

    Raises:
        LanguageError: a sentence is not a valid atom name
        PreconditionError: op fails a postulate, or the carried choice
            function fails contraction, coherence or local monotonicity
    """
    if not isinstance(op, TabulatedOperator):
        raise LanguageError("conservative extension starts from a tabulated operator")
    theories_u, g = represent(op)
    u = Universe.propositional(op.language)
    # theory world i sits at the valuation of its sentences
    position = [
        u.index_of_valuation({p: p in theories_u.satisfied_sentences(i) for p in op.language})
        for i in range(theories_u.size)
    ]
    carried = sum(1 << p for p in position)

    def to_theories(mask: int) -> int:
        return sum(1 << i for i, p in enumerate(position) if mask >> p & 1)

    def from_theories(mask: int) -> int:
        return sum(1 << position[i] for i in iter_bits(mask))

    table = {}
    for x in range(u.full_mask + 1):
        z = to_theories(x & carried)
        table[x] = from_theories(z & g.value(theories_u.closure_mask(z)))
    f = ChoiceFunction.from_masks(u, table)
    if not is_cclm(f):
        raise PreconditionError("cclm", "carried choice function is not coherent and locally monotonic")
    return SemanticOperator(f)


def check_conservative(op: TabulatedOperator, extension: SemanticOperator) -> Verdict:
    """Whether the extension agrees with ``op`` on the atoms for every A."""
    for a in range(op.full_mask + 1):
        A = sorted(op.sentences_of(a))
        closed = extension.close(A)
        kept = frozenset(p for p in op.language if closed.contains(p))
        if kept != op.close(A):
            return Verdict.failed("conservative", A=op.sentences_of(a))
    return Verdict.passed("conservative")
