"""Conflict graphs and repair enumeration.

Repairs are exactly the maximal independent sets of the conflict graph.
Enumeration splits the graph into connected components, enumerates the
maximal independent sets of each component by branching on a vertex of
highest remaining degree, and takes the cartesian product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .core import FD, Instance, TupleId, iter_conflicts
from .errors import InstanceTooLarge

RepairSet = frozenset  # frozenset[TupleId]

DEFAULT_MAX_REPAIRS = 20_000
DEFAULT_MAX_VERTICES = 64


@dataclass(frozen=True)
class Budget:
    max_repairs: int = DEFAULT_MAX_REPAIRS
    max_vertices: int = DEFAULT_MAX_VERTICES

    def check_vertices(self, n: int) -> None:
        if n > self.max_vertices:
            raise InstanceTooLarge(f"{n} tuples exceeds the vertex budget of {self.max_vertices}")

    def check_repairs(self, n: int) -> None:
        if n > self.max_repairs:
            raise InstanceTooLarge(f"more than {self.max_repairs} repairs")


DEFAULT_BUDGET = Budget()


class ConflictGraph:
    def __init__(self, vertices: Iterable[TupleId], edges: Iterable[tuple[TupleId, TupleId]]):
        adj: dict[TupleId, set[TupleId]] = {v: set() for v in vertices}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        self._adj = MappingProxyType({v: frozenset(n) for v, n in adj.items()})

    @property
    def vertices(self) -> frozenset[TupleId]:
        return frozenset(self._adj)

    @property
    def adj(self) -> Mapping[TupleId, frozenset[TupleId]]:
        return self._adj

    @property
    def edges(self) -> frozenset[frozenset[TupleId]]:
        return frozenset(frozenset((a, b)) for a, ns in self._adj.items() for b in ns)

    def edge_list(self) -> list[tuple[TupleId, TupleId]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def neighbors(self, x: TupleId) -> frozenset[TupleId]:
        return self._adj[x]

    def neighborhood(self, x: TupleId) -> frozenset[TupleId]:
        """``{x}`` plus every tuple conflicting with ``x``."""
        return self._adj[x] | {x}

    def adjacent(self, a: TupleId, b: TupleId) -> bool:
        return b in self._adj[a]

    def is_independent(self, s: Iterable[TupleId]) -> bool:
        s = set(s)
        return all(not (self._adj[x] & s) for x in s)

    def is_maximal_independent(self, s: Iterable[TupleId]) -> bool:
        s = set(s)
        if not s <= self._adj.keys() or not self.is_independent(s):
            return False
        return all(self._adj[x] & s for x in self._adj if x not in s)

    def components(self) -> list[frozenset[TupleId]]:
        seen: set[TupleId] = set()
        comps = []
        for v in sorted(self._adj):
            if v in seen:
                continue
            comp, stack = {v}, [v]
            while stack:
                for w in self._adj[stack.pop()]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def to_dot(self, priority: Iterable[tuple[TupleId, TupleId]] = ()) -> str:
        """DOT text; prioritized pairs ``x < y`` are drawn as ``x -> y``."""
        oriented = {frozenset(p): p for p in priority}
        lines = ["digraph conflicts {"]
        for v in sorted(self._adj):
            lines.append(f'  "{v}";')
        for a, b in self.edge_list():
            p = oriented.get(frozenset((a, b)))
            if p is None:
                lines.append(f'  "{a}" -> "{b}" [dir=none];')
            else:
                lines.append(f'  "{p[0]}" -> "{p[1]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_conflict_graph(inst: Instance, fds: Iterable[FD]) -> ConflictGraph:
    return ConflictGraph(inst.tuples, iter_conflicts(inst, fds))


def conflict_pairs(inst: Instance, fds: Iterable[FD]) -> frozenset[frozenset[TupleId]]:
    return frozenset(frozenset(p) for p in iter_conflicts(inst, fds))


def canonical(repairs: Iterable[Iterable[TupleId]]) -> list[RepairSet]:
    """Deduplicate and sort repairs by their sorted id lists."""
    uniq = {frozenset(r) for r in repairs}
    return sorted(uniq, key=sorted)


def component_mis(graph: ConflictGraph, comp: frozenset[TupleId]) -> list[RepairSet]:
    """Maximal independent sets of the subgraph induced by ``comp``."""
    adj = {v: graph.adj[v] & comp for v in comp}
    found: set[frozenset[TupleId]] = set()

    def rec(cand: frozenset, chosen: frozenset, pending: frozenset) -> None:
        # pending: excluded vertices not yet covered by a chosen neighbour
        still = set()
        for x in pending:
            if adj[x] & chosen:
                continue
            if not adj[x] & cand:
                return
            still.add(x)
        if not cand:
            found.add(chosen)
            return
        v = max(cand, key=lambda u: (len(adj[u] & cand), u))
        rec(cand - adj[v] - {v}, chosen | {v}, frozenset(still))
        rec(cand - {v}, chosen, frozenset(still | {v}))

    rec(frozenset(comp), frozenset(), frozenset())
    return [s for s in found if all(adj[x] & s for x in comp - s)]


def product_repairs(parts: Sequence[Sequence[RepairSet]], budget: Budget = DEFAULT_BUDGET) -> list[RepairSet]:
    total = 1
    for p in parts:
        total *= len(p)
        budget.check_repairs(total)
    return canonical(frozenset().union(*combo) for combo in itertools.product(*parts))


def enumerate_repairs(inst: Instance, fds: Iterable[FD], budget: Budget = DEFAULT_BUDGET) -> list[RepairSet]:
    budget.check_vertices(len(inst))
    graph = build_conflict_graph(inst, fds)
    return repairs_of_graph(graph, budget)


def repairs_of_graph(graph: ConflictGraph, budget: Budget = DEFAULT_BUDGET) -> list[RepairSet]:
    parts = []
    for comp in graph.components():
        mis = component_mis(graph, comp)
        budget.check_repairs(len(mis))
        parts.append(mis)
    return product_repairs(parts, budget)

