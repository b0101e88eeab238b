"""
Finite model universes, the satisfaction relation, Mod/Th and definability.

A universe is either propositional (one world per valuation of a list of
atoms, formulas as sentences) or abstract (named worlds, each satisfying an
explicit subset of a finite sentence list). Sets of worlds are carried as
integer bit masks; bit ``i`` stands for the ``i``-th world in canonical order.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from nmsem.errors import DefinabilityError, InputError, LanguageError
from nmsem.formula import (
    FALSE,
    TRUE,
    Atom,
    Formula,
    Not,
    as_formula,
    conjoin,
    disjoin,
    evaluate,
    is_atom_name,
)
from nmsem.verdicts import Verdict

logger = logging.getLogger(__name__)

PROPOSITIONAL = "propositional"
ABSTRACT = "abstract"

Sentence = Union[Formula, str]


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> list[int]:
    """All submasks of ``mask`` in increasing order."""
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    out.reverse()
    return out


class Universe:
    """
    A finite set of worlds with a satisfaction relation.

    Build instances with :meth:`propositional`, :meth:`abstract`,
    :meth:`discrete` or :meth:`disjoint_union`. Universes compare by
    identity.
    """

    def __init__(
        self,
        mode: str,
        world_names: Sequence[str],
        *,
        atoms: Sequence[str] = (),
        sentences: Sequence[str] = (),
        satisfied: Sequence[frozenset[str]] = (),
    ):
        self.mode = mode
        self.worlds: tuple[str, ...] = tuple(world_names)
        self.atoms: tuple[str, ...] = tuple(atoms)
        self.sentences: tuple[str, ...] = tuple(sentences)
        self._satisfied = tuple(satisfied)
        self._index = {name: i for i, name in enumerate(self.worlds)}
        self._masks: dict[Sentence, int] = {}
        if mode == ABSTRACT:
            for s in self.sentences:
                self._masks[s] = sum(1 << i for i, sat in enumerate(self._satisfied) if s in sat)

    # --- construction -------------------------------------------------------

    @classmethod
    def propositional(cls, atoms: Iterable[str]) -> "Universe":
        atoms = tuple(atoms)
        for name in atoms:
            if not is_atom_name(name):
                raise LanguageError(f"invalid atom name {name!r}")
        if len(set(atoms)) != len(atoms):
            raise LanguageError("duplicate atoms")
        n = len(atoms)
        names = [
            ",".join(f"{a}={(i >> (n - 1 - j)) & 1}" for j, a in enumerate(atoms))
            for i in range(1 << n)
        ]
        return cls(PROPOSITIONAL, names, atoms=atoms)

    @classmethod
    def abstract(
        cls,
        sentences: Iterable[str],
        worlds: Mapping[str, Iterable[str]] | Iterable[tuple[str, Iterable[str]]],
    ) -> "Universe":
        sentences = tuple(sentences)
        if len(set(sentences)) != len(sentences):
            raise LanguageError("duplicate sentences")
        pairs = list(worlds.items()) if isinstance(worlds, Mapping) else list(worlds)
        names = [name for name, _ in pairs]
        if len(set(names)) != len(names):
            raise InputError("duplicate world names")
        known = set(sentences)
        satisfied = []
        for name, sat in pairs:
            sat = frozenset(sat)
            unknown = sat - known
            if unknown:
                raise LanguageError(f"world {name!r} satisfies unknown sentences {sorted(unknown)}")
            satisfied.append(sat)
        return cls(ABSTRACT, names, sentences=sentences, satisfied=satisfied)

    @classmethod
    def discrete(cls, k: int) -> "Universe":
        """
        Abstract universe of ``k`` worlds in which every subset is definable.

        World ``wi`` satisfies ``not_wj`` for every ``j != i``; no world
        satisfies the whole language.
        """
        names = [f"w{i}" for i in range(1, k + 1)]
        sentences = [f"not_{w}" for w in names]
        worlds = [(w, [f"not_{v}" for v in names if v != w]) for w in names]
        return cls.abstract(sentences, worlds)

    @classmethod
    def disjoint_union(cls, universes: Sequence["Universe"]) -> "Universe":
        """Abstract universes over one sentence list, side by side.

        Component ``i`` (from 1) keeps its world order; names get a ``ci.`` prefix.
        """
        if not universes:
            raise ValueError("at least one universe is required")
        sentences = universes[0].sentences
        pairs = []
        for i, u in enumerate(universes, start=1):
            if u.is_propositional or u.sentences != sentences:
                raise LanguageError("disjoint union needs abstract universes over one sentence list")
            pairs.extend((f"c{i}.{name}", u._satisfied[j]) for j, name in enumerate(u.worlds))
        return cls.abstract(sentences, pairs)

    # --- basic structure ----------------------------------------------------

    @property
    def is_propositional(self) -> bool:
        return self.mode == PROPOSITIONAL

    @property
    def size(self) -> int:
        return len(self.worlds)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __repr__(self) -> str:
        if self.is_propositional:
            return f"Universe.propositional({list(self.atoms)})"
        return f"Universe.abstract({len(self.sentences)} sentences, worlds={list(self.worlds)})"

    def world_index(self, world: str | int) -> int:
        if isinstance(world, int):
            if not 0 <= world < self.size:
                raise InputError(f"world index {world} out of range")
            return world
        if world in self._index:
            return self._index[world]
        if self.is_propositional:
            return self._index_of_assignment(world)
        raise InputError(f"unknown world {world!r}")

    def _index_of_assignment(self, text: str) -> int:
        values = {}
        for part in text.split(","):
            atom, sep, bit = part.strip().partition("=")
            atom, bit = atom.strip(), bit.strip()
            if not sep or atom not in self.atoms or bit not in ("0", "1") or atom in values:
                raise InputError(f"bad world assignment {text!r}")
            values[atom] = bit == "1"
        if set(values) != set(self.atoms):
            raise InputError(f"world {text!r} must assign every atom of {list(self.atoms)}")
        return self.index_of_valuation(values)

    def index_of_valuation(self, valuation: Mapping[str, bool]) -> int:
        n = len(self.atoms)
        return sum(1 << (n - 1 - j) for j, a in enumerate(self.atoms) if valuation[a])

    def valuation(self, index: int) -> dict[str, bool]:
        n = len(self.atoms)
        return {a: bool((index >> (n - 1 - j)) & 1) for j, a in enumerate(self.atoms)}

    def satisfied_sentences(self, index: int) -> frozenset[str]:
        if self.is_propositional:
            raise LanguageError("propositional worlds satisfy infinitely many formulas")
        return self._satisfied[index]

    # --- world sets ---------------------------------------------------------

    def world_set(self, worlds: Iterable[str | int] = ()) -> "WorldSet":
        mask = 0
        for w in worlds:
            mask |= 1 << self.world_index(w)
        return WorldSet(self, mask)

    def from_mask(self, mask: int) -> "WorldSet":
        if mask < 0 or mask > self.full_mask:
            raise InputError(f"mask {mask} does not fit {self.size} worlds")
        return WorldSet(self, mask)

    def all_worlds(self) -> "WorldSet":
        return WorldSet(self, self.full_mask)

    def empty(self) -> "WorldSet":
        return WorldSet(self, 0)

    def subsets(self) -> Iterator["WorldSet"]:
        for mask in range(self.full_mask + 1):
            yield WorldSet(self, mask)

    # --- satisfaction -------------------------------------------------------

    def coerce_sentence(self, s: Sentence) -> Sentence:
        """Validate ``s`` against this universe's language."""
        if self.is_propositional:
            f = as_formula(s)
            extra = f.atoms() - set(self.atoms)
            if extra:
                raise LanguageError(f"formula uses atoms outside the universe: {sorted(extra)}")
            return f
        if not isinstance(s, str) or s not in self._masks:
            raise LanguageError(f"sentence {s!r} is not in the language")
        return s

    def sentence_mask(self, s: Sentence) -> int:
        """Worlds satisfying ``s``."""
        cached = self._masks.get(s)
        if cached is not None:
            return cached
        f = self.coerce_sentence(s)
        mask = self._masks.get(f)
        if mask is None:
            mask = sum(1 << i for i in range(self.size) if evaluate(f, self.valuation(i)))
            self._masks[f] = mask
        if isinstance(s, str):
            self._masks[s] = mask
        return mask

    def satisfies(self, world: str | int, s: Sentence) -> bool:
        return bool(self.sentence_mask(s) >> self.world_index(world) & 1)

    def mod_mask(self, sentences: Iterable[Sentence]) -> int:
        mask = self.full_mask
        for s in sentences:
            mask &= self.sentence_mask(s)
        return mask

    @cached_property
    def inconsistent_mask(self) -> int:
        """Mod of the whole language: the worlds satisfying every sentence."""
        if self.is_propositional:
            return 0
        return self.mod_mask(self.sentences)

    def theory_mask(self, mask: int) -> int:
        """Explicit theory of a world set as a bit mask over ``sentences``."""
        out = 0
        for j, s in enumerate(self.sentences):
            if mask & ~self._masks[s] == 0:
                out |= 1 << j
        return out

    def explicit_theory(self, mask: int) -> frozenset[str]:
        if self.is_propositional:
            raise LanguageError("propositional theories are infinite; use Theory.contains")
        th = self.theory_mask(mask)
        return frozenset(s for j, s in enumerate(self.sentences) if th >> j & 1)

    @cached_property
    def _closure_table(self) -> tuple[int, ...]:
        if self.is_propositional:
            return tuple(range(self.full_mask + 1))
        table = []
        for mask in range(self.full_mask + 1):
            closed = self.full_mask
            for j in iter_bits(self.theory_mask(mask)):
                closed &= self._masks[self.sentences[j]]
            table.append(closed)
        logger.debug("closure table built for %d worlds", self.size)
        return tuple(table)

    def closure_mask(self, mask: int) -> int:
        """Mod(Th(X)) as a mask."""
        return self._closure_table[mask]

    @cached_property
    def definable_masks(self) -> tuple[int, ...]:
        """Definable sets in increasing mask order."""
        return tuple(m for m in range(self.full_mask + 1) if self._closure_table[m] == m)

    @cached_property
    def _definable_lookup(self) -> frozenset[int]:
        return frozenset(self.definable_masks)

    def is_definable_mask(self, mask: int) -> bool:
        return mask in self._definable_lookup

    @property
    def is_fully_definable(self) -> bool:
        return len(self.definable_masks) == self.full_mask + 1

    def characteristic_formula(self, mask: int) -> Formula:
        """
        The canonical formula whose models are exactly ``mask``.

        A disjunction of one conjunction of literals per world; ``true``
        for all worlds and ``false`` for none.
        """
        if not self.is_propositional:
            raise LanguageError("characteristic formulas exist only in propositional universes")
        if mask == self.full_mask:
            return TRUE
        if mask == 0:
            return FALSE
        terms = []
        for i in iter_bits(mask):
            values = self.valuation(i)
            terms.append(conjoin(Atom(a) if values[a] else Not(Atom(a)) for a in self.atoms))
        return disjoin(terms)


@dataclass(frozen=True)
class WorldSet:
    """A subset of one universe's worlds."""

    universe: Universe
    mask: int

    def _same(self, other: "WorldSet") -> None:
        if not isinstance(other, WorldSet) or other.universe is not self.universe:
            raise ValueError("world sets belong to different universes")

    def __and__(self, other: "WorldSet") -> "WorldSet":
        self._same(other)
        return WorldSet(self.universe, self.mask & other.mask)

    def __or__(self, other: "WorldSet") -> "WorldSet":
        self._same(other)
        return WorldSet(self.universe, self.mask | other.mask)

    def __sub__(self, other: "WorldSet") -> "WorldSet":
        self._same(other)
        return WorldSet(self.universe, self.mask & ~other.mask)

    def __le__(self, other: "WorldSet") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "WorldSet") -> bool:
        return self <= other and self.mask != other.mask

    def issubset(self, other: "WorldSet") -> bool:
        return self <= other

    def complement(self) -> "WorldSet":
        return WorldSet(self.universe, self.universe.full_mask & ~self.mask)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, world: str | int) -> bool:
        return bool(self.mask >> self.universe.world_index(world) & 1)

    def names(self) -> list[str]:
        return [self.universe.worlds[i] for i in iter_bits(self.mask)]

    def __repr__(self) -> str:
        return "WorldSet({" + ", ".join(self.names()) + "})"


class Theory:
    """
    The set of sentences true in every world of ``worlds``.

    Represented by its worlds; two theories are equal when their closed
    model sets coincide.
    """

    __slots__ = ("worlds",)

    def __init__(self, worlds: WorldSet):
        self.worlds = worlds

    @property
    def universe(self) -> Universe:
        return self.worlds.universe

    def contains(self, s: Sentence) -> bool:
        return self.worlds.mask & ~self.universe.sentence_mask(s) == 0

    def __contains__(self, s: Sentence) -> bool:
        return self.contains(s)

    def models(self) -> WorldSet:
        """Mod of this theory."""
        return WorldSet(self.universe, self.universe.closure_mask(self.worlds.mask))

    def sentences(self) -> frozenset[str]:
        return self.universe.explicit_theory(self.worlds.mask)

    def is_inconsistent(self) -> bool:
        """True when the theory is the whole language."""
        return self.worlds.mask & ~self.universe.inconsistent_mask == 0

    def __le__(self, other: "Theory") -> bool:
        return other.models() <= self.models()

    def __and__(self, other: "Theory") -> "Theory":
        return Theory(self.worlds | other.worlds)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Theory):
            return NotImplemented
        return self.universe is other.universe and self.models().mask == other.models().mask

    def __hash__(self) -> int:
        return hash((id(self.universe), self.models().mask))

    def __repr__(self) -> str:
        if self.universe.is_propositional:
            return f"Theory(models={self.models().names()})"
        return f"Theory({sorted(self.sentences())})"


# --- module-level operations ------------------------------------------------

def mod_set(u: Universe, A: Iterable[Sentence]) -> WorldSet:
    """
    Worlds satisfying every sentence of ``A``.

    Raises:
        LanguageError: a sentence lies outside u's language
    """
    return WorldSet(u, u.mod_mask(A))


def theory_of(u: Universe, X: WorldSet) -> Theory:
    if X.universe is not u:
        raise ValueError("world set belongs to another universe")
    return Theory(X)


def closure(u: Universe, X: WorldSet) -> WorldSet:
    """Mod(Th(X))."""
    return WorldSet(u, u.closure_mask(X.mask))


def is_definable(u: Universe, X: WorldSet) -> bool:
    """True iff X = Mod(Th(X))."""
    if u.is_propositional:
        return u.mod_mask([u.characteristic_formula(X.mask)]) == X.mask
    return u.closure_mask(X.mask) == X.mask


def require_definable(u: Universe, X: WorldSet) -> None:
    if not u.is_definable_mask(X.mask):
        raise DefinabilityError(f"{X!r} is not definable")


def definable_sets(u: Universe) -> list[WorldSet]:
    return [WorldSet(u, m) for m in u.definable_masks]


def characteristic_formula(u: Universe, X: WorldSet) -> Formula:
    return u.characteristic_formula(X.mask)


# --- Galois connection ------------------------------------------------------

GALOIS_LAWS = (
    "sentences_in_theory_of_models",
    "worlds_in_models_of_theory",
    "models_of_union",
    "models_antitone",
    "closure_monotone",
    "models_fixpoint",
    "theory_of_union",
    "theory_fixpoint",
)


def _sentence_pool(u: Universe) -> list[Sentence]:
    if not u.is_propositional:
        return list(u.sentences)
    pool: list[Sentence] = [TRUE, FALSE]
    for a in u.atoms:
        pool += [Atom(a), Not(Atom(a))]
    return pool


def check_galois_laws(u: Universe) -> list[Verdict]:
    """
    Check the Mod/Th laws exhaustively.

    Sentence sets range over all subsets of the language (abstract mode) or
    of a pool of constants and literals (propositional mode); world sets
    range over all subsets.
    """
    pool = _sentence_pool(u)
    families = [
        frozenset(combo)
        for r in range(len(pool) + 1)
        for combo in itertools.combinations(pool, r)
    ]
    masks = range(u.full_mask + 1)
    found: dict[str, Verdict] = {}

    def fail(name: str, **witness) -> None:
        found.setdefault(name, Verdict.failed(name, **witness))

    for A in families:
        mod_a = u.mod_mask(A)
        theory = Theory(WorldSet(u, mod_a))
        if not all(theory.contains(s) for s in A):
            fail("sentences_in_theory_of_models", A=set(A))
        if u.closure_mask(mod_a) != mod_a:
            fail("models_fixpoint", A=set(A))
        for B in families:
            mod_b = u.mod_mask(B)
            if u.mod_mask(A | B) != mod_a & mod_b:
                fail("models_of_union", A=set(A), B=set(B))
            if A <= B and mod_b & ~mod_a:
                fail("models_antitone", A=set(A), B=set(B))

    for x in masks:
        cx = u.closure_mask(x)
        if x & ~cx:
            fail("worlds_in_models_of_theory", X=WorldSet(u, x))
        if u.closure_mask(cx) != cx:
            fail("theory_fixpoint", X=WorldSet(u, x))
        for y in masks:
            cy = u.closure_mask(y)
            if x & ~y == 0 and cx & ~cy:
                fail("closure_monotone", X=WorldSet(u, x), Y=WorldSet(u, y))
            if not _theory_of_union_holds(u, pool, x, y):
                fail("theory_of_union", X=WorldSet(u, x), Y=WorldSet(u, y))

    return [found.get(name, Verdict.passed(name)) for name in GALOIS_LAWS]


def _theory_of_union_holds(u: Universe, pool: list[Sentence], x: int, y: int) -> bool:
    if not u.is_propositional:
        return u.theory_mask(x | y) == u.theory_mask(x) & u.theory_mask(y)
    union, tx, ty = Theory(WorldSet(u, x | y)), Theory(WorldSet(u, x)), Theory(WorldSet(u, y))
    return all(union.contains(s) == (tx.contains(s) and ty.contains(s)) for s in pool)
