"""Verdicts returned by every property, postulate, rule and axiom checker."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of one exhaustive check.

    Attributes:
        property: name of the checked property
        holds: whether no violation was found
        witness: the first violating instance in canonical order, None when
            the property holds
    """

    property: str
    holds: bool
    witness: Mapping[str, Any] | None = None

    @classmethod
    def passed(cls, name: str) -> "Verdict":
        return cls(name, True, None)

    @classmethod
    def failed(cls, name: str, **witness: Any) -> "Verdict":
        return cls(name, False, dict(witness))

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.property,
            "holds": self.holds,
            "witness": None if self.witness is None else render_value(self.witness),
        }


# Same record under the names used by each module.
PropertyVerdict = Verdict
PostulateVerdict = Verdict
RuleVerdict = Verdict


def render_value(value: Any) -> Any:
    """Turn library values into JSON-ready data."""
    # local imports keep this module free of cycles
    from nmsem.formula import Formula, render
    from nmsem.universe import Theory, WorldSet

    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, WorldSet):
        return value.names()
    if isinstance(value, Theory):
        out: dict[str, Any] = {"models": value.worlds.names()}
        if not value.universe.is_propositional:
            out["sentences"] = sorted(value.sentences())
        return out
    if isinstance(value, Formula):
        return render(value)
    if isinstance(value, Verdict):
        return value.to_dict()
    if isinstance(value, Mapping):
        return {str(k): render_value(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted((render_value(v) for v in value), key=_sort_key)
    if isinstance(value, (list, tuple)):
        return [render_value(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


def _sort_key(item: Any) -> str:
    return item if isinstance(item, str) else json.dumps(item, sort_keys=True)


def all_hold(verdicts: Iterable[Verdict]) -> bool:
    return all(v.holds for v in verdicts)


def first_failure(verdicts: Iterable[Verdict]) -> Verdict | None:
    for verdict in verdicts:
        if not verdict.holds:
            return verdict
    return None


def verdict_frame(verdicts: Iterable[Verdict]) -> pd.DataFrame:
    """
    Tabulate verdicts.

    Returns:
        pandas.DataFrame: one row per verdict with the witness as JSON text
    """
    rows = []
    for verdict in verdicts:
        data = verdict.to_dict()
        rows.append({
            "property": data["property"],
            "holds": data["holds"],
            "witness": "" if data["witness"] is None else json.dumps(data["witness"]),
        })
    return pd.DataFrame(rows, columns=["property", "holds", "witness"])
