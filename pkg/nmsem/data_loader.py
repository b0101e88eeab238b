"""
JSON documents and sample fixtures.

Documents follow the shared file formats: universes, choice functions,
measures, tabulated operators and preferential relations. A document may
name its universe inline or by a path relative to the document's own
directory. Universes compare by identity, so callers that combine several
documents should load the universe once and pass it in.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import pandas as pd

from nmsem.choice import ChoiceFunction, from_order, from_order_family, from_rank, identity_choice
from nmsem.consequence import SemanticOperator, TabulatedOperator
from nmsem.errors import InputError
from nmsem.formula import parse, render
from nmsem.klm import PreferentialRelation, relation_from_operator
from nmsem.qmeasure import QualMeasure
from nmsem.search import random_order
from nmsem.universe import Universe, WorldSet

logger = logging.getLogger(__name__)

PathLike = str | Path


def read_document(path: PathLike) -> dict:
    """
    Read one JSON object.

    Raises:
        OSError: the file cannot be read
        json.JSONDecodeError: the file is not JSON
        InputError: the file is not UTF-8, or the top level is not an object
    """
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 at byte {exc.start}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    logger.debug("read %s", path)
    return doc


def _field(doc: Mapping[str, Any], key: str, kind: type | tuple[type, ...]) -> Any:
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise InputError(f"field {key!r} has the wrong type")
    return value


def _names(value: Any, what: str) -> list:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InputError(f"{what} must be a list of names")
    return value


# --- universes --------------------------------------------------------------

def universe_from_dict(doc: Mapping[str, Any]) -> Universe:
    """
    Build a universe from its document.

    ``{"mode":"propositional","atoms":[...]}`` or
    ``{"mode":"abstract","sentences":[...],"worlds":[{"name":...,"satisfies":[...]}]}``
    """
    mode = _field(doc, "mode", str)
    if mode == "propositional":
        return Universe.propositional(_names(_field(doc, "atoms", list), "atoms"))
    if mode == "abstract":
        sentences = _names(_field(doc, "sentences", list), "sentences")
        worlds = []
        for entry in _field(doc, "worlds", list):
            if not isinstance(entry, dict):
                raise InputError("each world must be an object")
            worlds.append((_field(entry, "name", str), _names(entry.get("satisfies", []), "satisfies")))
        return Universe.abstract(sentences, worlds)
    raise InputError(f"unknown universe mode {mode!r}")


def universe_to_dict(u: Universe) -> dict:
    if u.is_propositional:
        return {"mode": "propositional", "atoms": list(u.atoms)}
    return {
        "mode": "abstract",
        "sentences": list(u.sentences),
        "worlds": [
            {"name": name, "satisfies": [s for s in u.sentences if s in u.satisfied_sentences(i)]}
            for i, name in enumerate(u.worlds)
        ],
    }


def load_universe(path: PathLike) -> Universe:
    return universe_from_dict(read_document(path))


def _universe_of(doc: Mapping[str, Any], base: Path | None, universe: Universe | None) -> Universe:
    if universe is not None:
        return universe
    ref = doc.get("universe")
    if isinstance(ref, dict):
        return universe_from_dict(ref)
    if isinstance(ref, str):
        return load_universe((base or Path(".")) / ref)
    raise InputError("document needs a universe (inline object or relative path)")


def world_set(u: Universe, names: Any) -> WorldSet:
    """World names (abstract) or assignments like ``"p=1,q=0"`` (propositional)."""
    return u.world_set(_names(names, "world set"))


# --- choice functions -------------------------------------------------------

def choice_from_dict(doc: Mapping[str, Any], universe: Universe | None = None, base: Path | None = None) -> ChoiceFunction:
    """
    Build a choice function from one of its document forms.

    * ``"table"``: ``[{"set": [...], "chosen": [...]}, ...]`` total over
      the definable sets;
    * ``"rank"``: ``{world: grade}``, the worlds of lowest grade;
    * ``"order"``: ``[[better, worse], ...]``, a strict partial order;
    * ``"orders"``: a list of such orders, the union of their minima;
    * ``"identity": true``.
    """
    u = _universe_of(doc, base, universe)
    if "table" in doc:
        table = {}
        for row in _field(doc, "table", list):
            if not isinstance(row, dict):
                raise InputError("each table row must be an object")
            X = world_set(u, _field(row, "set", list))
            if X.mask in table:
                raise InputError(f"duplicate table row for {X.names()}")
            table[X.mask] = world_set(u, _field(row, "chosen", list)).mask
        return ChoiceFunction.from_masks(u, table)
    if "rank" in doc:
        return from_rank(u, _field(doc, "rank", dict))
    if "order" in doc:
        return from_order(u, _pairs(_field(doc, "order", list)))
    if "orders" in doc:
        return from_order_family(u, [_pairs(rel) for rel in _field(doc, "orders", list)])
    if doc.get("identity") is True:
        return identity_choice(u)
    raise InputError("choice document needs one of table, rank, order, orders, identity")


def _pairs(value: Any) -> list[tuple[str, str]]:
    if not isinstance(value, list):
        raise InputError("an order must be a list of pairs")
    out = []
    for pair in value:
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(w, str) for w in pair):
            raise InputError("order pairs are two-element lists of world names")
        out.append((pair[0], pair[1]))
    return out


def load_choice(path: PathLike, universe: Universe | None = None) -> ChoiceFunction:
    path = Path(path)
    return choice_from_dict(read_document(path), universe, path.parent)


# --- measures ---------------------------------------------------------------

def measure_from_dict(doc: Mapping[str, Any], universe: Universe | None = None, base: Path | None = None) -> QualMeasure:
    """``{"pairs":[{"greater":[...],"than":[...]}]}``, listing exactly the true entries."""
    u = _universe_of(doc, base, universe)
    pairs = []
    for row in _field(doc, "pairs", list):
        if not isinstance(row, dict):
            raise InputError("each measure pair must be an object")
        pairs.append((world_set(u, _field(row, "greater", list)), world_set(u, _field(row, "than", list))))
    return QualMeasure.from_pairs(u, pairs)


def load_measure(path: PathLike, universe: Universe | None = None) -> QualMeasure:
    path = Path(path)
    return measure_from_dict(read_document(path), universe, path.parent)


# --- tabulated operators ----------------------------------------------------

def operator_from_dict(doc: Mapping[str, Any]) -> TabulatedOperator:
    """``{"language":[...],"table":[{"A":[...],"C":[...]}, ...]}``"""
    language = _names(_field(doc, "language", list), "language")
    table = {}
    for row in _field(doc, "table", list):
        if not isinstance(row, dict):
            raise InputError("each operator row must be an object")
        A = frozenset(_names(_field(row, "A", list), "A"))
        if A in table:
            raise InputError(f"duplicate operator row for {sorted(A)}")
        table[A] = _names(_field(row, "C", list), "C")
    return TabulatedOperator(language, table)


def load_operator(path: PathLike) -> TabulatedOperator:
    return operator_from_dict(read_document(path))


# --- preferential relations -------------------------------------------------

def relation_from_dict(
    doc: Mapping[str, Any], universe: Universe | None = None, base: Path | None = None
) -> PreferentialRelation:
    """
    Build a relation from listed pairs or from a choice function.

    ``{"pairs":[{"lhs":"b","rhs":"f"}]}`` lists formulas, normalized to
    their classes; ``{"choice": <choice document or path>}`` extracts the
    relation of the semantic operator of that function.
    """
    u = _universe_of(doc, base, universe)
    if "pairs" in doc:
        pairs = []
        for row in _field(doc, "pairs", list):
            if not isinstance(row, dict):
                raise InputError("each relation pair must be an object")
            pairs.append((parse(_field(row, "lhs", str)), parse(_field(row, "rhs", str))))
        return PreferentialRelation.from_pairs(u, pairs)
    ref = doc.get("choice")
    if isinstance(ref, dict):
        f = choice_from_dict(ref, u, base)
    elif isinstance(ref, str):
        f = load_choice((base or Path(".")) / ref, u)
    else:
        raise InputError("relation document needs pairs or a choice")
    return relation_from_operator(SemanticOperator(f))


def load_relation(path: PathLike, universe: Universe | None = None) -> PreferentialRelation:
    path = Path(path)
    return relation_from_dict(read_document(path), universe, path.parent)


# --- sample fixtures --------------------------------------------------------

BIRD_GRADES = {"b=1,f=1": 0, "b=0,f=1": 1, "b=0,f=0": 1, "b=1,f=0": 2}


def load_sample_birds() -> tuple[Universe, ChoiceFunction]:
    """
    Birds normally fly: atoms b and f, flying birds most normal.

    Returns:
        tuple: the propositional universe and its ranked choice function
    """
    u = Universe.propositional(["b", "f"])
    return u, from_rank(u, BIRD_GRADES)


def load_sample_sec71() -> TabulatedOperator:
    """C(A) = A for nonempty A over {a, b}, and C(∅) = {a}."""
    return TabulatedOperator.from_function(["a", "b"], lambda A: A or {"a"})


def load_sample_sec71_twin() -> TabulatedOperator:
    """Same as :func:`load_sample_sec71` except C(∅) = {b}."""
    return TabulatedOperator.from_function(["a", "b"], lambda A: A or {"b"})


def load_sample_u1() -> Universe:
    """Three worlds over {a, b}; the empty set is not definable."""
    return Universe.abstract(["a", "b"], [("w1", ["a"]), ("w2", ["b"]), ("w3", ["a", "b"])])


def load_sample_discrete(k: int = 3) -> Universe:
    return Universe.discrete(k)


def load_sample_expansion_witness() -> ChoiceFunction:
    """
    A CCLM function on three worlds that fails expansion.

    Every pair is kept whole, the full set drops w3, singletons are kept.
    """
    u = Universe.discrete(3)
    table = {m: m for m in range(8)}
    table[0b111] = 0b011
    return ChoiceFunction.from_masks(u, table)


def load_sample_partial_order() -> ChoiceFunction:
    """Minima of w1 < w2 on three worlds, with w3 incomparable."""
    u = Universe.discrete(3)
    return from_order(u, [("w1", "w2")])


def load_sample_order_family(u: Universe, size: int = 2, seed: int = 42) -> ChoiceFunction:
    """
    Union of the minima of ``size`` random strict partial orders.

    Returns:
        ChoiceFunction: a CCLM function, reproducible for a given seed
    """
    rng = np.random.default_rng(seed)
    return from_order_family(u, [random_order(u, rng) for _ in range(size)])


# --- tables -----------------------------------------------------------------

def choice_frame(f: ChoiceFunction) -> pd.DataFrame:
    """
    Tabulate a choice function.

    Returns:
        pandas.DataFrame: one row per definable set with its chosen worlds
    """
    rows = [
        {"set": ", ".join(X.names()) or "∅", "chosen": ", ".join(Y.names()) or "∅", "size": len(X)}
        for X, Y in f.items()
    ]
    return pd.DataFrame(rows, columns=["set", "chosen", "size"])


def operator_frame(op: TabulatedOperator) -> pd.DataFrame:
    rows = [{"A": "{" + ",".join(r["A"]) + "}", "C(A)": "{" + ",".join(r["C"]) + "}"} for r in op.to_dict()["table"]]
    return pd.DataFrame(rows, columns=["A", "C(A)"])


def measure_frame(m: QualMeasure) -> pd.DataFrame:
    """
    The measure as a square frame.

    Returns:
        pandas.DataFrame: rows and columns labelled by world sets; True
            where the row set is greater than the column set
    """
    u = m.universe
    labels = ["{" + ",".join(WorldSet(u, x).names()) + "}" for x in range(u.full_mask + 1)]
    return pd.DataFrame(np.asarray(m.matrix), index=labels, columns=labels)


def relation_frame(rel: PreferentialRelation) -> pd.DataFrame:
    u = rel.universe
    labels = [render(u.characteristic_formula(x)) for x in range(u.full_mask + 1)]
    return pd.DataFrame(np.asarray(rel.matrix), index=labels, columns=labels)
