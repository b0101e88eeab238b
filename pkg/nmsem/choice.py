"""
Choice functions on definable sets of worlds.

A choice function ``f`` picks, for every definable set ``X``, a subset
``f(X)`` of preferred worlds. Tables are stored as ``{mask: mask}`` over
the universe's definable masks; all property checkers quantify over
definable sets in increasing mask order and report the first violation.
"""

from __future__ import annotations

import itertools
import logging
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from nmsem.config import load_settings
from nmsem.errors import DefinabilityError, InputError, PreconditionError, SearchSpaceError
from nmsem.universe import Universe, WorldSet, iter_bits, require_definable, submasks
from nmsem.verdicts import PropertyVerdict, Verdict

logger = logging.getLogger(__name__)

CHOICE_PROPERTIES = (
    "contraction",
    "coherence",
    "local_monotonicity",
    "expansion",
    "arrow",
    "path_independence",
    "definability_preservation",
)
CCLM = ("contraction", "coherence", "local_monotonicity")

Table = Mapping[int, int]


class ChoiceFunction:
    """
    A total map from the definable sets of a universe to sets of worlds.

    Contraction (``f(X) ⊆ X``) is enforced when the table is built.
    """

    __slots__ = ("universe", "_table")

    def __init__(self, universe: Universe, table: Mapping[WorldSet | int, WorldSet | int]):
        masks = {}
        for key, value in table.items():
            k = key.mask if isinstance(key, WorldSet) else int(key)
            v = value.mask if isinstance(value, WorldSet) else int(value)
            masks[k] = v
        _validate_table(universe, masks)
        self.universe = universe
        self._table = masks

    @classmethod
    def from_masks(cls, universe: Universe, table: Table) -> "ChoiceFunction":
        return cls(universe, table)

    @classmethod
    def _trusted(cls, universe: Universe, table: dict[int, int]) -> "ChoiceFunction":
        f = cls.__new__(cls)
        f.universe = universe
        f._table = table
        return f

    def value(self, mask: int) -> int:
        try:
            return self._table[mask]
        except KeyError:
            raise DefinabilityError(
                f"{WorldSet(self.universe, mask)!r} is not definable"
            ) from None

    def apply(self, X: WorldSet) -> WorldSet:
        if X.universe is not self.universe:
            raise ValueError("world set belongs to another universe")
        return WorldSet(self.universe, self.value(X.mask))

    __call__ = apply

    def items(self) -> Iterator[tuple[WorldSet, WorldSet]]:
        for key in sorted(self._table):
            yield WorldSet(self.universe, key), WorldSet(self.universe, self._table[key])

    def table(self) -> dict[int, int]:
        return dict(self._table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChoiceFunction):
            return NotImplemented
        return self.universe is other.universe and self._table == other._table

    def __hash__(self) -> int:
        return hash((id(self.universe), tuple(sorted(self._table.items()))))

    def __repr__(self) -> str:
        entries = ", ".join(f"{X.names()}->{Y.names()}" for X, Y in self.items())
        return f"ChoiceFunction({entries})"

    def to_dict(self) -> dict:
        return {
            "table": [{"set": X.names(), "chosen": Y.names()} for X, Y in self.items()]
        }


def _validate_table(u: Universe, table: Mapping[int, int]) -> None:
    domain = set(u.definable_masks)
    keys = set(table)
    missing = domain - keys
    if missing:
        first = WorldSet(u, min(missing))
        raise DefinabilityError(f"table must be total over definable sets; missing {first!r}")
    extra = keys - domain
    if extra:
        first = WorldSet(u, min(extra))
        raise DefinabilityError(f"table entry for non-definable set {first!r}")
    for key in sorted(table):
        value = table[key]
        if value & ~key:
            raise PreconditionError(
                "contraction",
                f"f({WorldSet(u, key)!r}) = {WorldSet(u, value)!r} is not a subset",
                Verdict.failed("contraction", X=WorldSet(u, key)),
            )


def apply(f: ChoiceFunction, X: WorldSet) -> WorldSet:
    """
    Value of ``f`` at ``X``.

    Raises:
        DefinabilityError: X is not definable
    """
    return f.apply(X)


def identity_choice(u: Universe) -> ChoiceFunction:
    return ChoiceFunction._trusted(u, {m: m for m in u.definable_masks})


def empty_choice(u: Universe) -> ChoiceFunction:
    return ChoiceFunction._trusted(u, {m: 0 for m in u.definable_masks})


def extended_choice(f: ChoiceFunction, X: WorldSet) -> WorldSet:
    """X ∩ f(Mod(Th(X))), defined for every set of worlds."""
    u = f.universe
    return WorldSet(u, X.mask & f.value(u.closure_mask(X.mask)))


# --- property checkers ------------------------------------------------------

def _check_contraction(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        if f[x] & ~x:
            return Verdict.failed("contraction", X=WorldSet(u, x))
    return Verdict.passed("contraction")


def _check_coherence(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        for y in domain:
            if x & ~y == 0 and (x & f[y]) & ~f[x]:
                return Verdict.failed("coherence", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("coherence")


def _check_local_monotonicity(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        fx = f[x]
        for y in domain:
            if fx & ~y == 0 and y & ~x == 0 and f[y] & ~fx:
                return Verdict.failed("local_monotonicity", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("local_monotonicity")


def _check_expansion(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        for y in domain:
            union = x | y
            if union not in f:
                continue
            lost = f[x] & f[y] & ~f[union]
            if lost:
                z = next(iter_bits(lost))
                return Verdict.failed(
                    "expansion", X=WorldSet(u, x), Y=WorldSet(u, y), z=u.worlds[z]
                )
    return Verdict.passed("expansion")


def _check_arrow(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        for y in domain:
            if x & ~y == 0 and x & f[y]:
                extra = f[x] & ~f[y]
                if extra:
                    z = next(iter_bits(extra))
                    return Verdict.failed(
                        "arrow", X=WorldSet(u, x), Y=WorldSet(u, y), z=u.worlds[z]
                    )
    return Verdict.passed("arrow")


def _check_path_independence(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        for y in domain:
            union, shortcut = x | y, f[x] | y
            if union not in f or shortcut not in f:
                continue
            if f[union] != f[shortcut]:
                return Verdict.failed("path_independence", X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed("path_independence")


def _check_definability_preservation(u: Universe, domain: Sequence[int], f: Table) -> Verdict:
    for x in domain:
        if not u.is_definable_mask(f[x]):
            return Verdict.failed("definability_preservation", X=WorldSet(u, x))
    return Verdict.passed("definability_preservation")


_CHECKERS: dict[str, Callable[[Universe, Sequence[int], Table], Verdict]] = {
    "contraction": _check_contraction,
    "coherence": _check_coherence,
    "local_monotonicity": _check_local_monotonicity,
    "expansion": _check_expansion,
    "arrow": _check_arrow,
    "path_independence": _check_path_independence,
    "definability_preservation": _check_definability_preservation,
}


def check_choice_property(f: ChoiceFunction, prop: str) -> PropertyVerdict:
    """
    Check one choice-function property over every definable set.

    Args:
        f: the choice function
        prop: one of CHOICE_PROPERTIES

    Returns:
        PropertyVerdict: holds, or the first violation in canonical order.
            Witness keys are X, Y and, for expansion and arrow, the world z.
    """
    try:
        checker = _CHECKERS[prop]
    except KeyError:
        raise InputError(f"unknown choice property {prop!r}") from None
    return checker(f.universe, f.universe.definable_masks, f._table)


def check_choice_properties(f: ChoiceFunction, props: Iterable[str] = CHOICE_PROPERTIES) -> list[PropertyVerdict]:
    return [check_choice_property(f, p) for p in props]


def is_cclm(f: ChoiceFunction) -> bool:
    return all(check_choice_property(f, p).holds for p in CCLM)


def require_cclm(f: ChoiceFunction) -> None:
    for prop in CCLM:
        verdict = check_choice_property(f, prop)
        if not verdict.holds:
            raise PreconditionError(prop, f"choice function fails {prop}", verdict)


# --- extension to arbitrary sets ----------------------------------------------

EXTENDED_PROPERTIES = ("contraction", "coherence", "local_monotonicity", "weak_local_monotonicity")


def check_extended_property(f: ChoiceFunction, prop: str) -> PropertyVerdict:
    """
    Check a property of ``X ↦ X ∩ f(Mod(Th(X)))`` over all subsets.

    ``weak_local_monotonicity`` is f(Mod(Th(X))) ⊆ Y ⊆ X ⇒ ext(Y) ⊆ ext(X).
    """
    if prop not in EXTENDED_PROPERTIES:
        raise InputError(f"unknown extended property {prop!r}")
    u = f.universe
    ext = {m: m & f.value(u.closure_mask(m)) for m in range(u.full_mask + 1)}
    masks = range(u.full_mask + 1)
    if prop == "contraction":
        return _check_contraction(u, masks, ext)
    if prop == "coherence":
        return _check_coherence(u, masks, ext)
    if prop == "local_monotonicity":
        return _check_local_monotonicity(u, masks, ext)
    for x in masks:
        bound = f.value(u.closure_mask(x))
        for y in masks:
            if bound & ~y == 0 and y & ~x == 0 and ext[y] & ~ext[x]:
                return Verdict.failed(prop, X=WorldSet(u, x), Y=WorldSet(u, y))
    return Verdict.passed(prop)


# --- constructors -----------------------------------------------------------

def _order_graph(u: Universe, rel: Iterable[tuple[str | int, str | int]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(u.size))
    for better, worse in rel:
        graph.add_edge(u.world_index(better), u.world_index(worse))
    return graph


def transitive_closure(u: Universe, rel: Iterable[tuple[str | int, str | int]]) -> list[tuple[str, str]]:
    """Transitive closure of a relation on worlds, as name pairs."""
    closed = nx.transitive_closure(_order_graph(u, rel), reflexive=False)
    return sorted((u.worlds[a], u.worlds[b]) for a, b in closed.edges())


def _validated_order(u: Universe, rel: Iterable[tuple[str | int, str | int]]) -> list[int]:
    """Dominator masks: bit y of entry x is set when y rel x."""
    graph = _order_graph(u, rel)
    loops = list(nx.selfloop_edges(graph))
    if loops:
        world = u.worlds[loops[0][0]]
        raise PreconditionError("strict_partial_order", f"relation is not irreflexive at {world!r}")
    closed = nx.transitive_closure(graph, reflexive=False)
    missing = set(closed.edges()) - set(graph.edges())
    if missing:
        a, b = min(missing)
        raise PreconditionError(
            "strict_partial_order",
            f"relation is not transitive: missing ({u.worlds[a]!r}, {u.worlds[b]!r})",
        )
    dominators = [0] * u.size
    for better, worse in graph.edges():
        dominators[worse] |= 1 << better
    return dominators


def _minima(mask: int, dominators: Sequence[int]) -> int:
    return sum(1 << x for x in iter_bits(mask) if dominators[x] & mask == 0)


def from_order(u: Universe, rel: Iterable[tuple[str | int, str | int]]) -> ChoiceFunction:
    """
    Choose the minimal worlds of a strict partial order.

    Args:
        u: the universe
        rel: pairs (y, x) meaning y is preferred to x

    Returns:
        ChoiceFunction: f(X) = {x in X : no y in X with y rel x}

    Raises:
        PreconditionError: rel is not irreflexive and transitive
    """
    dominators = _validated_order(u, rel)
    return ChoiceFunction._trusted(u, {m: _minima(m, dominators) for m in u.definable_masks})


def from_order_family(u: Universe, rels: Sequence[Iterable[tuple[str | int, str | int]]]) -> ChoiceFunction:
    """Union over a nonempty family of orders of the minimal worlds."""
    rels = list(rels)
    if not rels:
        raise InputError("order family must be nonempty")
    families = [_validated_order(u, rel) for rel in rels]
    table = {}
    for m in u.definable_masks:
        chosen = 0
        for dominators in families:
            chosen |= _minima(m, dominators)
        table[m] = chosen
    return ChoiceFunction._trusted(u, table)


def from_rank(u: Universe, grade: Mapping[str | int, int]) -> ChoiceFunction:
    """
    Choose the worlds of lowest grade.

    Raises:
        InputError: grade is not total, or an entry is not a non-negative integer
    """
    grades = [None] * u.size
    for world, g in grade.items():
        if not isinstance(g, int) or isinstance(g, bool):
            raise InputError(f"grade of {world!r} must be an integer, got {g!r}")
        if g < 0:
            raise InputError(f"grade of {world!r} is negative")
        grades[u.world_index(world)] = g
    if any(g is None for g in grades):
        missing = [u.worlds[i] for i, g in enumerate(grades) if g is None]
        raise InputError(f"grade is not total; missing {missing}")
    table = {}
    for m in u.definable_masks:
        if m == 0:
            table[m] = 0
            continue
        low = min(grades[i] for i in iter_bits(m))
        table[m] = sum(1 << i for i in iter_bits(m) if grades[i] == low)
    return ChoiceFunction._trusted(u, table)


def grade_maps(u: Universe) -> Iterator[dict[str, int]]:
    """Every grade map with values in range(|M|), in lexicographic order."""
    for values in itertools.product(range(max(u.size, 1)), repeat=u.size):
        yield dict(zip(u.worlds, values))


# --- enumeration ------------------------------------------------------------

def enumerate_choice_functions(
    u: Universe,
    properties: Sequence[str] = CCLM,
    max_worlds: int | None = None,
) -> Iterator[ChoiceFunction]:
    """
    Yield every contraction function passing ``properties``.

    Candidates are ordered by itertools.product over the definable sets in
    increasing mask order, each ranging over its submasks in increasing
    order.

    Raises:
        SearchSpaceError: the universe exceeds the exhaustive bound
    """
    limit = load_settings().max_exhaustive_worlds if max_worlds is None else max_worlds
    if u.size > limit:
        raise SearchSpaceError(f"exhaustive enumeration is bounded to {limit} worlds, got {u.size}")
    for prop in properties:
        if prop not in _CHECKERS:
            raise InputError(f"unknown choice property {prop!r}")
    domain = u.definable_masks
    checkers = [_CHECKERS[p] for p in properties if p != "contraction"]
    candidates = 0
    accepted = 0
    for values in itertools.product(*(submasks(m) for m in domain)):
        candidates += 1
        table = dict(zip(domain, values))
        if all(check(u, domain, table).holds for check in checkers):
            accepted += 1
            yield ChoiceFunction._trusted(u, table)
    logger.debug("enumerated %d candidates, %d accepted", candidates, accepted)


def enumerate_cclm(u: Universe, max_worlds: int | None = None) -> Iterator[ChoiceFunction]:
    """Every choice function passing contraction, coherence and local monotonicity."""
    return enumerate_choice_functions(u, CCLM, max_worlds=max_worlds)
