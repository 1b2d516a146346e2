"""Locally preferred repairs.

The construction keeps a set ``s`` of undecided tuples; at each step it
picks a tuple that no other tuple of ``s`` dominates, keeps it and drops it
together with everything it conflicts with.  Chosen tuples are mutually
non-conflicting, so what can happen next depends only on ``s``; the
enumeration memoizes on ``s``.  Domination and conflicts never cross
connected components of the conflict graph, so components are explored
separately and their results combined.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .core import FD, Instance, TupleId
from .errors import NotARepair, PriorityNotTotal
from .graph import (
    DEFAULT_BUDGET,
    Budget,
    ConflictGraph,
    RepairSet,
    build_conflict_graph,
    product_repairs,
)
from .priority import Priority, is_total, require_acyclic


def _undominated(s: frozenset, doms) -> list[TupleId]:
    return [t for t in s if not doms.get(t, frozenset()) & s]


def _component_lrepairs(graph: ConflictGraph, doms, comp: frozenset, budget: Budget) -> list[RepairSet]:
    memo: dict[frozenset, frozenset[RepairSet]] = {}

    def explore(s: frozenset) -> frozenset[RepairSet]:
        hit = memo.get(s)
        if hit is not None:
            return hit
        choices = _undominated(s, doms)
        if not choices:
            out = frozenset([frozenset()])
        else:
            acc: set[RepairSet] = set()
            for x in choices:
                rest = explore(s - graph.neighborhood(x))
                acc.update(r | {x} for r in rest)
            budget.check_repairs(len(acc))
            out = frozenset(acc)
        memo[s] = out
        return out

    return list(explore(comp))


def enumerate_lrepairs(
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
    parts = [_component_lrepairs(g, doms, comp, budget) for comp in g.components()]
    return product_repairs(parts, budget)


def is_lrepair(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    cand: Iterable[TupleId],
    graph: ConflictGraph | None = None,
) -> bool:
    """Polynomial membership test.

    Replays the construction, only ever choosing tuples of ``cand``.  Any
    choice order reaches the same state, so a greedy replay decides it.
    Raises ``NotARepair`` when ``cand`` is not a repair at all.
    """
    require_acyclic(pri)
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    cand = frozenset(cand)
    for t in cand:
        inst.row(t)
    if not g.is_maximal_independent(cand):
        raise NotARepair("candidate is not a repair")
    doms = pri.dominators()
    s = frozenset(inst.tuples)
    left = set(cand)
    while True:
        choices = _undominated(s, doms)
        if not choices:
            return not left
        pick = next((x for x in choices if x in left), None)
        if pick is None:
            return False
        left.discard(pick)
        s -= g.neighborhood(pick)


def construct(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    choose: Callable[[list[TupleId]], TupleId] = min,
    graph: ConflictGraph | None = None,
) -> RepairSet:
    """One run of the construction with a fixed choice function."""
    require_acyclic(pri)
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    doms = pri.dominators()
    s = set(inst.tuples)
    kept = set()
    while s:
        choices = [t for t in s if not doms.get(t, frozenset()) & s]
        x = choose(choices)
        kept.add(x)
        s -= g.neighborhood(x)
    return frozenset(kept)


def clean(inst: Instance, fds: Iterable[FD], pri: Priority, graph: ConflictGraph | None = None) -> RepairSet:
    """The unique preferred repair under a total acyclic priority."""
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    require_acyclic(pri)
    if not is_total(pri, inst, fds, g):
        raise PriorityNotTotal("cleaning needs every conflict to be prioritized")
    return construct(inst, fds, pri, graph=g)
