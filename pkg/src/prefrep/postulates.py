"""Postulate checks for the two preferred-repair families.

* P1: the family is non-empty.
* P2: under the empty priority the family is the set of all repairs.
* P3: extending the priority never adds preferred repairs.
* P4: under a total priority there is exactly one preferred repair.

P3 and P4 quantify over priority extensions.  Each unoriented conflict
edge can stay unoriented or take one of two directions, so there are
``3**e`` extensions; they are enumerated when ``e`` is below
``exhaustive_below`` and sampled otherwise.  Cyclic extensions are skipped.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .core import FD, Instance, TupleId
from .graph import DEFAULT_BUDGET, Budget, ConflictGraph, RepairSet, build_conflict_graph, enumerate_repairs
from .grepair import enumerate_grepairs
from .lrepair import enumerate_lrepairs
from .priority import EMPTY, Priority, is_acyclic, require_acyclic, unoriented_edges

FAMILIES: dict[str, Callable[..., list[RepairSet]]] = {
    "l": enumerate_lrepairs,
    "g": enumerate_grepairs,
}

EXHAUSTIVE_BELOW = 10
DEFAULT_SAMPLES = 200


@dataclass
class PostulateResult:
    name: str
    passed: bool
    checked: int = 0
    witness: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"postulate": self.name, "passed": self.passed, "checked": self.checked}
        if self.note:
            out["note"] = self.note
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class PostulateReport:
    family: str
    results: list[PostulateResult] = field(default_factory=list)
    exhaustive: bool = True

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "passed": self.passed,
            "p3_mode": "exhaustive" if self.exhaustive else "sampled",
            "results": [r.to_json() for r in self.results],
        }


def _ids(r: Iterable[TupleId]) -> list[str]:
    return sorted(str(t) for t in r)


def _pairs(pri: Priority) -> list[list[str]]:
    return [[str(x), str(y)] for x, y in pri]


def iter_extensions(
    pri: Priority,
    edges: list[tuple[TupleId, TupleId]],
    exhaustive: bool,
    samples: int,
    rng: random.Random,
) -> Iterator[Priority]:
    """Proper acyclic extensions of ``pri`` over the given unoriented edges."""
    if exhaustive:
        choices = itertools.product((0, 1, 2), repeat=len(edges))
    else:
        choices = (tuple(rng.randrange(3) for _ in edges) for _ in range(samples))
    for choice in choices:
        added = [(a, b) if c == 1 else (b, a) for (a, b), c in zip(edges, choice) if c]
        if not added:
            continue
        ext = pri.union(added)
        if is_acyclic(ext):
            yield ext


def check_postulates(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    family: str,
    budget: Budget = DEFAULT_BUDGET,
    exhaustive_below: int = EXHAUSTIVE_BELOW,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    graph: ConflictGraph | None = None,
) -> PostulateReport:
    require_acyclic(pri)
    fds = tuple(fds)
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    enum = FAMILIES[family]

    def run(p: Priority) -> set[RepairSet]:
        return set(enum(inst, fds, p, budget=budget, graph=g))

    base = run(pri)
    edges = [tuple(sorted(e)) for e in unoriented_edges(pri, inst, fds, g)]
    edges.sort()
    report = PostulateReport(family, exhaustive=len(edges) < exhaustive_below)

    p1 = PostulateResult("P1", bool(base), 1)
    if not base:
        p1.witness = {"priority": _pairs(pri)}
    report.results.append(p1)

    all_reps = set(enumerate_repairs(inst, fds, budget))
    unprioritized = run(EMPTY)
    p2 = PostulateResult("P2", unprioritized == all_reps, 1)
    if not p2.passed:
        p2.witness = {
            "missing": [_ids(r) for r in sorted(all_reps - unprioritized, key=_ids)],
            "extra": [_ids(r) for r in sorted(unprioritized - all_reps, key=_ids)],
        }
    report.results.append(p2)

    p3 = PostulateResult("P3", True)
    p4 = PostulateResult("P4", True)
    if not edges:
        p4.checked = 1
        if len(base) != 1:
            p4.passed = False
            p4.witness = {"priority": _pairs(pri), "repairs": [_ids(r) for r in sorted(base, key=_ids)]}
    rng = random.Random(seed)
    for ext in iter_extensions(pri, edges, report.exhaustive, samples, rng):
        reps = run(ext)
        p3.checked += 1
        if p3.passed and not reps <= base:
            p3.passed = False
            p3.witness = {
                "extension": _pairs(ext),
                "new_repairs": [_ids(r) for r in sorted(reps - base, key=_ids)],
            }
        if len(ext) - len(pri) == len(edges):
            p4.checked += 1
            if p4.passed and len(reps) != 1:
                p4.passed = False
                p4.witness = {"priority": _pairs(ext), "repairs": [_ids(r) for r in sorted(reps, key=_ids)]}
    if not report.exhaustive:
        p3.note = f"{samples} random orientations of {len(edges)} unoriented edges, seed {seed}"
        p4.note = p3.note
    report.results += [p3, p4]
    return report
