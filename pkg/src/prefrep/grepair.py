"""Globally preferred repairs.

``r1 << r2`` holds when every tuple of ``r1 - r2`` is dominated by some tuple
of ``r2 - r1``.  A g-repair is a repair with no distinct repair above it.
The relation need not be transitive, so maximality is checked pairwise.

A dominating tuple always conflicts with the dominated one, so ``<<``
factors over connected components of the conflict graph: ``r1 << r2`` iff
it holds on every component, and a repair is maximal iff each of its
component slices is maximal among that component's repairs.
"""

from __future__ import annotations

from typing import Iterable

from .core import FD, Instance, TupleId
from .errors import NotARepair
from .graph import (
    DEFAULT_BUDGET,
    Budget,
    ConflictGraph,
    RepairSet,
    build_conflict_graph,
    component_mis,
    product_repairs,
)
from .priority import Priority, require_acyclic


def _prefers(r1: frozenset, r2: frozenset, doms) -> bool:
    gained = r2 - r1
    return all(doms.get(x, frozenset()) & gained for x in r1 - r2)


def prefers(
    r1: Iterable[TupleId],
    r2: Iterable[TupleId],
    pri: Priority,
    graph: ConflictGraph | None = None,
) -> bool:
    """``r1 << r2``.  Pass ``graph`` to have both sides checked as repairs."""
    r1, r2 = frozenset(r1), frozenset(r2)
    if graph is not None:
        for r in (r1, r2):
            if not graph.is_maximal_independent(r):
                raise NotARepair(f"{sorted(map(str, r))} is not a repair")
    return _prefers(r1, r2, pri.dominators())


def _maximal(repairs: list[RepairSet], doms) -> list[RepairSet]:
    return [
        r for r in repairs
        if not any(o != r and _prefers(r, o, doms) for o in repairs)
    ]


def enumerate_grepairs(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    budget: Budget = DEFAULT_BUDGET,
    graph: ConflictGraph | None = None,
) -> list[RepairSet]:
    require_acyclic(pri)
    budget.check_vertices(len(inst))
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    doms = pri.dominators()
    parts = []
    for comp in g.components():
        reps = component_mis(g, comp)
        budget.check_repairs(len(reps))
        parts.append(_maximal(reps, doms))
    return product_repairs(parts, budget)


def is_grepair(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    cand: Iterable[TupleId],
    budget: Budget = DEFAULT_BUDGET,
    graph: ConflictGraph | None = None,
) -> bool:
    """Brute-force membership: look for a distinct repair preferred over ``cand``."""
    require_acyclic(pri)
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    cand = frozenset(cand)
    for t in cand:
        inst.row(t)
    if not g.is_maximal_independent(cand):
        raise NotARepair("candidate is not a repair")
    budget.check_vertices(len(inst))
    doms = pri.dominators()
    for comp in g.components():
        mine = cand & comp
        reps = component_mis(g, comp)
        budget.check_repairs(len(reps))
        if any(o != mine and _prefers(mine, o, doms) for o in reps):
            return False
    return True
