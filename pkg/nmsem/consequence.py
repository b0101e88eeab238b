"""
Consequence operators and the postulates for nonmonotonic deduction.

Two kinds of operator share one interface:

* :class:`SemanticOperator` computes ``C(A) = Th(f(Mod(A)))`` from a
  choice function on a universe;
* :class:`TabulatedOperator` lists ``C(A)`` for every subset ``A`` of a
  finite language.

Postulates are checked exactly over every subset for tabulated operators
and over the closed sets ``Th(S)``, ``S`` definable, for semantic ones.
"""

from __future__ import annotations

import itertools
import logging
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from nmsem.choice import ChoiceFunction, enumerate_cclm, identity_choice
from nmsem.errors import InputError, LanguageError, PreconditionError, SearchSpaceError
from nmsem.formula import Formula
from nmsem.universe import Sentence, Theory, Universe, WorldSet, iter_bits, submasks
from nmsem.verdicts import PostulateVerdict, Verdict

logger = logging.getLogger(__name__)

FIVE_POSTULATES = (
    "inclusion",
    "idempotence",
    "cautious_monotonicity",
    "conditional_monotonicity",
    "threshold_monotonicity",
)
POSTULATES = FIVE_POSTULATES + (
    "cumulativity",
    "rational_monotonicity",
    "monotonicity",
    "weak_compactness",
)

SEMANTIC = "semantic"
TABULATED = "tabulated"


def _premises(A: Iterable[Sentence] | Sentence) -> list[Sentence]:
    if isinstance(A, (str, Formula)):
        return [A]
    return list(A)


class ConsequenceOperator:
    """Common interface of semantic and tabulated operators."""

    kind: str = ""

    def close(self, A):
        raise NotImplementedError

    def entails(self, A, a) -> bool:
        raise NotImplementedError

    def is_consistent(self, A) -> bool:
        raise NotImplementedError


class SemanticOperator(ConsequenceOperator):
    """``C(A) = Th(f(Mod(A)))`` for a choice function ``f``."""

    kind = SEMANTIC

    def __init__(self, choice: ChoiceFunction):
        self.choice = choice

    @property
    def universe(self) -> Universe:
        return self.choice.universe

    def chosen_mask(self, A) -> int:
        """f(Mod(A)) as a mask."""
        u = self.universe
        return self.choice.value(u.mod_mask(_premises(A)))

    def close(self, A) -> Theory:
        return Theory(WorldSet(self.universe, self.chosen_mask(A)))

    def entails(self, A, a) -> bool:
        u = self.universe
        return self.chosen_mask(A) & ~u.sentence_mask(a) == 0

    def is_consistent(self, A) -> bool:
        return self.chosen_mask(A) & ~self.universe.inconsistent_mask != 0

    def __repr__(self) -> str:
        return f"SemanticOperator({self.universe!r})"


class TabulatedOperator(ConsequenceOperator):
    """
    An operator given by its value on every subset of a finite language.

    Subsets are masks over ``language``: bit ``i`` stands for
    ``language[i]``.
    """

    kind = TABULATED

    def __init__(self, language: Sequence[str], table: Mapping[Iterable[str], Iterable[str]]):
        self.language = tuple(language)
        if len(set(self.language)) != len(self.language):
            raise LanguageError("duplicate sentences in language")
        self._bits = {s: i for i, s in enumerate(self.language)}
        masks = {}
        for A, C in table.items():
            key = self.mask_of(A)
            if key in masks:
                raise InputError(f"duplicate table entry for {sorted(self.sentences_of(key))}")
            masks[key] = self.mask_of(C)
        missing = [m for m in range(self.full_mask + 1) if m not in masks]
        if missing:
            raise InputError(f"table is not total; missing {sorted(self.sentences_of(missing[0]))}")
        self._table = masks

    @classmethod
    def from_masks(cls, language: Sequence[str], table: Mapping[int, int]) -> "TabulatedOperator":
        op = cls.__new__(cls)
        op.language = tuple(language)
        op._bits = {s: i for i, s in enumerate(op.language)}
        if set(table) != set(range(op.full_mask + 1)):
            raise InputError("table is not total")
        op._table = dict(table)
        return op

    @classmethod
    def from_function(
        cls, language: Sequence[str], fn: Callable[[frozenset[str]], Iterable[str]]
    ) -> "TabulatedOperator":
        """Tabulate ``fn`` over every subset of the language."""
        op = cls.from_masks(language, {m: 0 for m in range(1 << len(language))})
        op._table = {m: op.mask_of(fn(op.sentences_of(m))) for m in range(op.full_mask + 1)}
        return op

    @property
    def full_mask(self) -> int:
        return (1 << len(self.language)) - 1

    def mask_of(self, sentences: Iterable[str]) -> int:
        mask = 0
        for s in _premises(sentences):
            try:
                mask |= 1 << self._bits[s]
            except (KeyError, TypeError):
                raise LanguageError(f"sentence {s!r} is not in the language") from None
        return mask

    def sentences_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.language[i] for i in iter_bits(mask))

    def value(self, mask: int) -> int:
        return self._table[mask]

    def table(self) -> dict[int, int]:
        return dict(self._table)

    def close(self, A) -> frozenset[str]:
        return self.sentences_of(self._table[self.mask_of(A)])

    def entails(self, A, a) -> bool:
        return bool(self._table[self.mask_of(A)] & self.mask_of([a]))

    def is_consistent(self, A) -> bool:
        return self._table[self.mask_of(A)] != self.full_mask

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TabulatedOperator):
            return NotImplemented
        return self.language == other.language and self._table == other._table

    def __hash__(self) -> int:
        return hash((self.language, tuple(sorted(self._table.items()))))

    def __repr__(self) -> str:
        return f"TabulatedOperator(language={list(self.language)})"

    def to_dict(self) -> dict:
        order = {s: i for i, s in enumerate(self.language)}
        rows = []
        for m in range(self.full_mask + 1):
            rows.append({
                "A": sorted(self.sentences_of(m), key=order.__getitem__),
                "C": sorted(self.sentences_of(self._table[m]), key=order.__getitem__),
            })
        return {"language": list(self.language), "table": rows}


# --- core operations --------------------------------------------------------

def close(op: ConsequenceOperator, A):
    """
    The consequences of the premises ``A``.

    Returns:
        Theory for semantic operators, a frozenset of sentences for
        tabulated ones

    Raises:
        LanguageError: a premise lies outside the operator's language
    """
    return op.close(A)


def entails(op: ConsequenceOperator, A, a) -> bool:
    return op.entails(A, a)


def monotone_operator(u: Universe) -> SemanticOperator:
    """The classical consequence ``Th(Mod(A))``."""
    return SemanticOperator(identity_choice(u))


def regenerate(u: Universe, f: ChoiceFunction) -> SemanticOperator:
    if f.universe is not u:
        raise ValueError("choice function belongs to another universe")
    return SemanticOperator(f)


def cn(op: ConsequenceOperator, A, method: str | None = None):
    """
    The monotone core of ``op`` at ``A``.

    Args:
        op: the operator
        A: premises
        method: "direct" (Th(Mod(A)), semantic operators only) or
            "intersection" (the intersection of C(A ∪ B) over all B);
            None picks "direct" for semantic operators and "intersection"
            for tabulated ones

    Returns:
        Theory or frozenset of sentences, as :func:`close`

    Raises:
        InputError: unknown method, or "direct" on a tabulated operator
    """
    if method not in (None, "direct", "intersection"):
        raise InputError(f"unknown cn method {method!r}")
    if isinstance(op, TabulatedOperator):
        if method == "direct":
            raise InputError("tabulated operators have no models; use method='intersection'")
        a = op.mask_of(A)
        core = op.full_mask
        for b in range(op.full_mask + 1):
            core &= op.value(a | b)
        return op.sentences_of(core)
    u = op.universe
    s = u.mod_mask(_premises(A))
    if method in (None, "direct"):
        return Theory(WorldSet(u, s))
    chosen = 0
    for z in u.definable_masks:
        if z & ~s == 0:
            chosen |= op.choice.value(z)
    return Theory(WorldSet(u, chosen))


# --- postulates: semantic operators -----------------------------------------

class _Semantic:
    """Closed-set view of a semantic operator: S ranges over definable masks."""

    def __init__(self, op: SemanticOperator):
        self.u = op.universe
        self.domain = self.u.definable_masks
        self.cf = {s: self.u.closure_mask(op.choice.value(s)) for s in self.domain}
        self.bottom = self.u.inconsistent_mask

    def theory(self, mask: int) -> Theory:
        return Theory(WorldSet(self.u, mask))


def _semantic_inclusion(v: _Semantic) -> Verdict:
    for s in v.domain:
        if v.cf[s] & ~s:
            return Verdict.failed("inclusion", A=v.theory(s))
    return Verdict.passed("inclusion")


def _semantic_idempotence(v: _Semantic) -> Verdict:
    for s in v.domain:
        if v.cf[v.cf[s]] != v.cf[s]:
            return Verdict.failed("idempotence", A=v.theory(s))
    return Verdict.passed("idempotence")


def _semantic_cautious(v: _Semantic, name: str, equal: bool) -> Verdict:
    for s in v.domain:
        t = v.cf[s]
        for r in v.domain:
            if r & ~s or t & ~r:
                continue
            broken = v.cf[r] != t if equal else v.cf[r] & ~t
            if broken:
                return Verdict.failed(name, A=v.theory(s), B=v.theory(r))
    return Verdict.passed(name)


def _semantic_conditional(v: _Semantic) -> Verdict:
    for s in v.domain:
        for r in v.domain:
            if v.cf[v.cf[s] & r] & ~v.cf[s & r]:
                return Verdict.failed("conditional_monotonicity", A=v.theory(s), B=v.theory(r))
    return Verdict.passed("conditional_monotonicity")


def _semantic_threshold(v: _Semantic) -> Verdict:
    seen = set()
    for s in v.domain:
        t = v.cf[s]
        if t in seen:
            continue
        seen.add(t)
        for r in v.domain:
            if r & ~t:
                continue
            for q in v.domain:
                if q & ~r == 0 and v.cf[q] & ~v.cf[r]:
                    return Verdict.failed(
                        "threshold_monotonicity", A=v.theory(s), B=v.theory(r), C=v.theory(q)
                    )
    return Verdict.passed("threshold_monotonicity")


def _semantic_monotonicity(v: _Semantic) -> Verdict:
    for s in v.domain:
        for r in v.domain:
            if r & ~s == 0 and v.cf[r] & ~v.cf[s]:
                return Verdict.failed("monotonicity", A=v.theory(s), B=v.theory(r))
    return Verdict.passed("monotonicity")


def _semantic_rational(v: _Semantic) -> Verdict:
    for s in v.domain:
        t = v.cf[s]
        for r in v.domain:
            if v.cf[t & r] & ~v.bottom and v.cf[s & r] & ~t:
                return Verdict.failed("rational_monotonicity", A=v.theory(s), B=v.theory(r))
    return Verdict.passed("rational_monotonicity")


def _semantic_weak_compactness(v: _Semantic) -> Verdict:
    u = v.u
    for s in v.domain:
        if v.cf[s] & ~v.bottom:
            continue
        if u.is_propositional:
            # each superset of S is the model set of a finite subset of Th(S)
            found = any(z & s == s and v.cf[z] & ~v.bottom == 0 for z in v.domain)
        else:
            found = False
            for sub in submasks(u.theory_mask(s)):
                z = u.mod_mask(u.sentences[j] for j in iter_bits(sub))
                if v.cf[z] & ~v.bottom == 0:
                    found = True
                    break
        if not found:
            return Verdict.failed("weak_compactness", A=v.theory(s))
    return Verdict.passed("weak_compactness")


_SEMANTIC_CHECKERS: dict[str, Callable[[_Semantic], Verdict]] = {
    "inclusion": _semantic_inclusion,
    "idempotence": _semantic_idempotence,
    "cautious_monotonicity": lambda v: _semantic_cautious(v, "cautious_monotonicity", False),
    "conditional_monotonicity": _semantic_conditional,
    "threshold_monotonicity": _semantic_threshold,
    "cumulativity": lambda v: _semantic_cautious(v, "cumulativity", True),
    "rational_monotonicity": _semantic_rational,
    "monotonicity": _semantic_monotonicity,
    "weak_compactness": _semantic_weak_compactness,
}


# --- postulates: tabulated operators ----------------------------------------

class _Tabulated:
    def __init__(self, op: TabulatedOperator):
        self.op = op
        self.full = op.full_mask
        self.C = op.table()
        self.domain = range(self.full + 1)

    def supersets(self, mask: int) -> list[int]:
        return [mask | sub for sub in submasks(self.full & ~mask)]

    def sentences(self, mask: int) -> frozenset[str]:
        return self.op.sentences_of(mask)


def _tabulated_inclusion(t: _Tabulated) -> Verdict:
    for a in t.domain:
        if a & ~t.C[a]:
            return Verdict.failed("inclusion", A=t.sentences(a))
    return Verdict.passed("inclusion")


def _tabulated_idempotence(t: _Tabulated) -> Verdict:
    for a in t.domain:
        if t.C[t.C[a]] != t.C[a]:
            return Verdict.failed("idempotence", A=t.sentences(a))
    return Verdict.passed("idempotence")


def _tabulated_cautious(t: _Tabulated, name: str, equal: bool) -> Verdict:
    for a in t.domain:
        ca = t.C[a]
        for b in t.supersets(a):
            if b & ~ca:
                continue
            broken = t.C[b] != ca if equal else ca & ~t.C[b]
            if broken:
                return Verdict.failed(name, A=t.sentences(a), B=t.sentences(b))
    return Verdict.passed(name)


def _tabulated_conditional(t: _Tabulated) -> Verdict:
    for a in t.domain:
        for b in t.domain:
            if t.C[a | b] & ~t.C[t.C[a] | b]:
                return Verdict.failed("conditional_monotonicity", A=t.sentences(a), B=t.sentences(b))
    return Verdict.passed("conditional_monotonicity")


def _tabulated_threshold(t: _Tabulated) -> Verdict:
    # A only matters through C(A): one pass per distinct value
    seen = set()
    for a in t.domain:
        ca = t.C[a]
        if ca in seen:
            continue
        seen.add(ca)
        for b in t.supersets(ca):
            for c in t.supersets(b):
                if t.C[b] & ~t.C[c]:
                    return Verdict.failed(
                        "threshold_monotonicity",
                        A=t.sentences(a), B=t.sentences(b), C=t.sentences(c),
                    )
    return Verdict.passed("threshold_monotonicity")


def _tabulated_monotonicity(t: _Tabulated) -> Verdict:
    for a in t.domain:
        for b in t.supersets(a):
            if t.C[a] & ~t.C[b]:
                return Verdict.failed("monotonicity", A=t.sentences(a), B=t.sentences(b))
    return Verdict.passed("monotonicity")


def _tabulated_rational(t: _Tabulated) -> Verdict:
    for a in t.domain:
        for b in t.domain:
            if t.C[t.C[a] | b] != t.full and t.C[a] & ~t.C[a | b]:
                return Verdict.failed("rational_monotonicity", A=t.sentences(a), B=t.sentences(b))
    return Verdict.passed("rational_monotonicity")


def _tabulated_weak_compactness(t: _Tabulated) -> Verdict:
    for a in t.domain:
        if t.C[a] != t.full:
            continue
        if not any(t.C[b] == t.full for b in submasks(a)):
            return Verdict.failed("weak_compactness", A=t.sentences(a))
    return Verdict.passed("weak_compactness")


_TABULATED_CHECKERS: dict[str, Callable[[_Tabulated], Verdict]] = {
    "inclusion": _tabulated_inclusion,
    "idempotence": _tabulated_idempotence,
    "cautious_monotonicity": lambda t: _tabulated_cautious(t, "cautious_monotonicity", False),
    "conditional_monotonicity": _tabulated_conditional,
    "threshold_monotonicity": _tabulated_threshold,
    "cumulativity": lambda t: _tabulated_cautious(t, "cumulativity", True),
    "rational_monotonicity": _tabulated_rational,
    "monotonicity": _tabulated_monotonicity,
    "weak_compactness": _tabulated_weak_compactness,
}


def _view(op: ConsequenceOperator):
    if isinstance(op, TabulatedOperator):
        return _Tabulated(op), _TABULATED_CHECKERS
    if isinstance(op, SemanticOperator):
        return _Semantic(op), _SEMANTIC_CHECKERS
    raise TypeError(f"not a consequence operator: {op!r}")


def check_postulate(op: ConsequenceOperator, p: str) -> PostulateVerdict:
    """
    Check one postulate exhaustively.

    Args:
        op: the operator
        p: one of POSTULATES

    Returns:
        PostulateVerdict: first violation with witness keys A, B and C
    """
    if p not in POSTULATES:
        raise InputError(f"unknown postulate {p!r}")
    view, checkers = _view(op)
    return checkers[p](view)


def check_postulates(op: ConsequenceOperator, names: Sequence[str] = FIVE_POSTULATES) -> list[PostulateVerdict]:
    if any(p not in POSTULATES for p in names):
        raise InputError(f"unknown postulate in {list(names)}")
    view, checkers = _view(op)
    return [checkers[p](view) for p in names]


def validate_postulates(op: ConsequenceOperator, names: Sequence[str] = FIVE_POSTULATES) -> None:
    """
    Raises:
        PreconditionError: named after the first failing postulate
    """
    for verdict in check_postulates(op, names):
        if not verdict.holds:
            raise PreconditionError(verdict.property, f"operator fails {verdict.property}", verdict)


# --- theories and comparison ------------------------------------------------

def theories(op: ConsequenceOperator) -> list:
    """
    The fixed points T = C(T).

    Returns:
        list of frozensets (tabulated) or Theory objects (semantic), in
        increasing mask order
    """
    if isinstance(op, TabulatedOperator):
        return [op.sentences_of(m) for m in range(op.full_mask + 1) if op.value(m) == m]
    view = _Semantic(op)
    return [view.theory(y) for y in view.domain if view.cf[y] == y]


def _normal_key(op: ConsequenceOperator, closed) -> object:
    if isinstance(op, TabulatedOperator):
        return frozenset(closed)
    u = op.universe
    if u.is_propositional:
        return closed.models().mask
    return closed.sentences()


def _premise_family(op: ConsequenceOperator) -> tuple[object, list]:
    """Language signature and the finite premise sets to compare on."""
    if isinstance(op, TabulatedOperator):
        return (TABULATED, op.language), [op.sentences_of(m) for m in range(op.full_mask + 1)]
    u = op.universe
    if u.is_propositional:
        return (u.atoms,), [[u.characteristic_formula(m)] for m in range(u.full_mask + 1)]
    family = [
        frozenset(u.sentences[j] for j in iter_bits(m)) for m in range(1 << len(u.sentences))
    ]
    return (TABULATED, u.sentences), family


def operators_equal(a: ConsequenceOperator, b: ConsequenceOperator) -> bool:
    """Extensional equality on every finite premise set of a shared language."""
    sig_a, family = _premise_family(a)
    sig_b, _ = _premise_family(b)
    if sig_a != sig_b:
        return False
    return all(_normal_key(a, a.close(A)) == _normal_key(b, b.close(A)) for A in family)


def _theory_keys(op: ConsequenceOperator) -> frozenset:
    if isinstance(op, TabulatedOperator):
        return frozenset(theories(op))
    return frozenset(_normal_key(op, T) for T in theories(op))


def same_theories(a: ConsequenceOperator, b: ConsequenceOperator) -> bool:
    """Whether two operators over one language have the same fixed points."""
    if _premise_family(a)[0] != _premise_family(b)[0]:
        return False
    return _theory_keys(a) == _theory_keys(b)


# --- representation ---------------------------------------------------------

REPRESENT_VARIANTS = ("theories", "rational")


def theory_name(op: TabulatedOperator, mask: int) -> str:
    return "{" + ",".join(op.language[i] for i in iter_bits(mask)) + "}"


def represent(op: TabulatedOperator, variant: str = "theories") -> tuple[Universe, ChoiceFunction]:
    """
    Build a universe of theories and a choice function generating ``op``.

    Worlds are the theories T = C(T), each satisfying its own sentences;
    the choice function sends Mod(A) to Mod(C(A)).

    Args:
        op: a tabulated operator passing the five postulates
        variant: "theories" keeps every theory, "rational" leaves out the
            whole language

    Raises:
        PreconditionError: op fails a postulate, or Mod(A) does not
            determine C(A)
    """
    if variant not in REPRESENT_VARIANTS:
        raise InputError(f"unknown representation variant {variant!r}")
    validate_postulates(op)
    kept = [m for m in range(op.full_mask + 1) if op.value(m) == m]
    if variant == "rational":
        kept = [m for m in kept if m != op.full_mask]
    u = Universe.abstract(
        op.language,
        [(theory_name(op, m), op.sentences_of(m)) for m in kept],
    )
    table: dict[int, int] = {}
    for a in range(op.full_mask + 1):
        x = u.mod_mask(op.sentences_of(a))
        y = u.mod_mask(op.sentences_of(op.value(a)))
        previous = table.setdefault(x, y)
        if previous != y:
            raise PreconditionError(
                "well_defined",
                f"premise sets with the same models have different consequences at {sorted(op.sentences_of(a))}",
            )
    logger.info("represented operator over %d sentences with %d worlds", len(op.language), u.size)
    return u, ChoiceFunction.from_masks(u, table)


# --- combinators ------------------------------------------------------------

def _as_semantic(op: ConsequenceOperator) -> SemanticOperator:
    if isinstance(op, TabulatedOperator):
        return regenerate(*represent(op))
    return op


def intersect(ops: Sequence[ConsequenceOperator]) -> SemanticOperator:
    """
    The operator whose consequences are the common consequences of ``ops``.

    Tabulated operators are represented first; abstract universes are put
    side by side in a disjoint union, propositional ones over the same atoms
    share one universe.

    Raises:
        LanguageError: the operators do not share a language
        PreconditionError: an operator fails the five postulates
    """
    ops = list(ops)
    if not ops:
        raise InputError("intersect needs at least one operator")
    for op in ops:
        validate_postulates(op)
    semantic = [_as_semantic(op) for op in ops]
    universes = [op.universe for op in semantic]
    first = universes[0]
    if all(u.is_propositional and u.atoms == first.atoms for u in universes):
        table = {}
        for m in first.definable_masks:
            table[m] = 0
            for op in semantic:
                table[m] |= op.choice.value(m)
        return SemanticOperator(ChoiceFunction.from_masks(first, table))
    if any(u.is_propositional or u.sentences != first.sentences for u in universes):
        raise LanguageError("operators must share one language")
    union = Universe.disjoint_union(universes)
    offsets = list(itertools.accumulate((u.size for u in universes), initial=0))
    table = {}
    for x in union.definable_masks:
        chosen = 0
        for op, u, offset in zip(semantic, universes, offsets):
            part = (x >> offset) & u.full_mask
            chosen |= op.choice.value(part) << offset
        table[x] = chosen
    return SemanticOperator(ChoiceFunction.from_masks(union, table))


def with_background(op: ConsequenceOperator, B) -> ConsequenceOperator:
    """The operator A ↦ C(A ∪ B)."""
    if isinstance(op, TabulatedOperator):
        b = op.mask_of(B)
        return TabulatedOperator.from_masks(
            op.language, {a: op.value(a | b) for a in range(op.full_mask + 1)}
        )
    u = op.universe
    background = u.mod_mask(_premises(B))
    table = {x: op.choice.value(x & background) for x in u.definable_masks}
    return SemanticOperator(ChoiceFunction.from_masks(u, table))


# --- enumeration ------------------------------------------------------------

def enumerate_tabulated(language: Sequence[str], max_sentences: int = 2) -> Iterator[TabulatedOperator]:
    """
    Every table over a language, in lexicographic order of values.

    Raises:
        SearchSpaceError: the language has more than ``max_sentences``
    """
    language = tuple(language)
    if len(language) > max_sentences:
        raise SearchSpaceError(
            f"tabulated enumeration is bounded to {max_sentences} sentences, got {len(language)}"
        )
    size = 1 << len(language)
    for values in itertools.product(range(size), repeat=size):
        yield TabulatedOperator.from_masks(language, dict(enumerate(values)))


def enumerate_semantic(u: Universe, max_worlds: int | None = None) -> Iterator[SemanticOperator]:
    """A semantic operator for every CCLM choice function on ``u``."""
    for f in enumerate_cclm(u, max_worlds=max_worlds):
        yield SemanticOperator(f)
