"""
Counterexample search over families of choice functions.

Each kind names a property that a CCLM choice function may fail; the
search walks a family in its canonical order and stops at the first
function that fails it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
import pandas as pd

from nmsem.choice import (
    ChoiceFunction,
    check_choice_property,
    enumerate_cclm,
    from_order_family,
    from_rank,
    grade_maps,
    transitive_closure,
)
from nmsem.config import load_settings
from nmsem.errors import InputError, SearchSpaceError
from nmsem.qmeasure import check_measure_property, measure_from_choice
from nmsem.universe import Universe
from nmsem.verdicts import Verdict

logger = logging.getLogger(__name__)

SEARCH_KINDS = ("expansion_failure", "non_modular_measure", "arrow_failure")
FAMILIES = ("cclm", "rank", "sampled")

# most orders in one sampled family
MAX_FAMILY_SIZE = 3
MAX_GRADE_MAPS = 4096


@dataclass(frozen=True)
class SearchReport:
    """
    Outcome of one search.

    Attributes:
        kind: the failure searched for
        family: the family of choice functions walked
        found: whether a failing function was met
        candidates_checked: functions examined, the witness included
        choice: the first failing function, None when nothing was found
        verdict: the failing verdict of that function
    """

    kind: str
    family: str
    found: bool
    candidates_checked: int
    choice: ChoiceFunction | None = None
    verdict: Verdict | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "family": self.family,
            "found": self.found,
            "candidates_checked": self.candidates_checked,
            "choice": None if self.choice is None else self.choice.to_dict(),
            "verdict": None if self.verdict is None else self.verdict.to_dict(),
        }


def _expansion(f: ChoiceFunction) -> Verdict:
    return check_choice_property(f, "expansion")


def _arrow(f: ChoiceFunction) -> Verdict:
    return check_choice_property(f, "arrow")


def _modularity(f: ChoiceFunction) -> Verdict:
    return check_measure_property(measure_from_choice(f), "modularity")


_DETECTORS: dict[str, Callable[[ChoiceFunction], Verdict]] = {
    "expansion_failure": _expansion,
    "non_modular_measure": _modularity,
    "arrow_failure": _arrow,
}


def _rank_family(u: Universe) -> Iterator[ChoiceFunction]:
    if max(u.size, 1) ** u.size > MAX_GRADE_MAPS:
        raise SearchSpaceError(f"grade enumeration is bounded to {MAX_GRADE_MAPS} grade maps, got {u.size}**{u.size}")
    seen = set()
    for grade in grade_maps(u):
        f = from_rank(u, grade)
        key = tuple(sorted(f.table().items()))
        if key in seen:
            continue
        seen.add(key)
        yield f


def random_order(u: Universe, rng: np.random.Generator) -> list[tuple[str, str]]:
    """
    A random strict partial order on the worlds.

    Pairs are drawn along a random permutation, so the relation is acyclic
    before its transitive closure is taken.
    """
    perm = rng.permutation(u.size)
    pairs = []
    for i in range(u.size):
        for j in range(i + 1, u.size):
            if rng.random() < 0.5:
                pairs.append((u.worlds[perm[i]], u.worlds[perm[j]]))
    return transitive_closure(u, pairs)


def _sampled_family(u: Universe, seed: int | None, samples: int | None) -> Iterator[ChoiceFunction]:
    if seed is None:
        raise InputError("sampled search needs an explicit seed")
    count = load_settings().default_samples if samples is None else int(samples)
    if count < 1:
        raise InputError(f"sample count must be positive, got {count}")
    rng = np.random.default_rng(seed)
    for _ in range(count):
        size = int(rng.integers(1, MAX_FAMILY_SIZE + 1))
        yield from_order_family(u, [random_order(u, rng) for _ in range(size)])


def family_functions(
    u: Universe,
    family: str = "cclm",
    seed: int | None = None,
    samples: int | None = None,
) -> Iterator[ChoiceFunction]:
    """
    The choice functions of a search family, in canonical order.

    Args:
        u: the universe
        family: "cclm" (full enumeration), "rank" (distinct grade-map
            functions) or "sampled" (unions of random orders)
        seed: required for "sampled"
        samples: number of sampled functions; settings default when None

    Raises:
        InputError: unknown family, or a sampled family without a seed
        SearchSpaceError: an exhaustive family beyond its bound
    """
    if family == "cclm":
        return enumerate_cclm(u)
    if family == "rank":
        return _rank_family(u)
    if family == "sampled":
        return _sampled_family(u, seed, samples)
    raise InputError(f"unknown search family {family!r}")


def search(
    kind: str,
    u: Universe,
    family: str = "cclm",
    seed: int | None = None,
    samples: int | None = None,
) -> SearchReport:
    """
    Find the first function of a family exhibiting a failure.

    Args:
        kind: one of SEARCH_KINDS
        u: the universe; non_modular_measure needs a fully definable one
        family: one of FAMILIES
        seed: random seed for the sampled family
        samples: sample count for the sampled family

    Returns:
        SearchReport: found is False when the whole family was checked
            without meeting the failure
    """
    try:
        detect = _DETECTORS[kind]
    except KeyError:
        raise InputError(f"unknown search kind {kind!r}") from None
    checked = 0
    for f in family_functions(u, family, seed=seed, samples=samples):
        checked += 1
        verdict = detect(f)
        if not verdict.holds:
            logger.info("%s found in family %s after %d candidates", kind, family, checked)
            return SearchReport(kind, family, True, checked, f, verdict)
    logger.info("no %s in family %s (%d candidates)", kind, family, checked)
    return SearchReport(kind, family, False, checked)


def sweep_frame(u: Universe, family: str = "cclm", seed: int | None = None, samples: int | None = None) -> pd.DataFrame:
    """
    Tabulate every detector over a family.

    Returns:
        pandas.DataFrame: one row per function with a boolean column per
            search kind, True where the function exhibits that failure
    """
    rows = []
    for index, f in enumerate(family_functions(u, family, seed=seed, samples=samples)):
        row = {"index": index}
        for kind, detect in _DETECTORS.items():
            if kind == "non_modular_measure" and not u.is_fully_definable:
                continue
            row[kind] = not detect(f).holds
        rows.append(row)
    logger.debug("sweep over %s: %d functions", family, len(rows))
    return pd.DataFrame(rows)
