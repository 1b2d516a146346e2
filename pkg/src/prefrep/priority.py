"""Priorities: validation, winnow, acyclicity, totality and extensions.

A pair ``(x, y)`` in a priority means ``x < y``: ``y`` dominates ``x``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .core import FD, Instance, TupleId
from .errors import AsymmetryViolation, CyclicInput, CyclicPriority, NonConflictingPair, SchemaError
from .graph import ConflictGraph, build_conflict_graph

Pair = tuple[TupleId, TupleId]


@dataclass(frozen=True)
class Priority:
    pairs: frozenset[Pair] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", frozenset(self.pairs))

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def dominators(self) -> Mapping[TupleId, frozenset[TupleId]]:
        """``x -> {y | x < y}``."""
        out: dict[TupleId, set[TupleId]] = defaultdict(set)
        for x, y in self.pairs:
            out[x].add(y)
        return {x: frozenset(ys) for x, ys in out.items()}

    def union(self, pairs: Iterable[Pair]) -> Priority:
        return Priority(self.pairs | frozenset(pairs))

    def oriented_edges(self) -> frozenset[frozenset[TupleId]]:
        return frozenset(frozenset(p) for p in self.pairs)


EMPTY = Priority()


def _graph(inst: Instance, fds: Iterable[FD], graph: ConflictGraph | None) -> ConflictGraph:
    return graph if graph is not None else build_conflict_graph(inst, fds)


def validate_priority(
    pairs: Iterable[Pair],
    inst: Instance,
    fds: Iterable[FD],
    strict: bool = True,
    graph: ConflictGraph | None = None,
) -> Priority:
    """Check asymmetry and conflict scoping.

    With ``strict=False`` pairs outside the conflict relation are dropped
    instead of rejected.  Cycles are allowed here; the repair operations
    refuse them.
    """
    pairs = frozenset(pairs)
    for x, y in pairs:
        inst.row(x)
        inst.row(y)
        if (y, x) in pairs:
            raise AsymmetryViolation(f"both {x} < {y} and {y} < {x}")
    g = _graph(inst, fds, graph)
    bad = sorted(p for p in pairs if not g.adjacent(*p))
    if bad and strict:
        x, y = bad[0]
        raise NonConflictingPair(f"{x} and {y} are not conflicting")
    return Priority(pairs.difference(bad))


def restrict_to_conflicts(pairs: Iterable[Pair], inst: Instance, fds: Iterable[FD]) -> Priority:
    return validate_priority(pairs, inst, fds, strict=False)


def winnow(pri: Priority, s: Iterable[TupleId]) -> frozenset[TupleId]:
    """Elements of ``s`` not dominated by another element of ``s``."""
    s = frozenset(s)
    doms = pri.dominators()
    return frozenset(t for t in s if not (doms.get(t, frozenset()) & s))


def _find_cycle(succ: Mapping[TupleId, Iterable[TupleId]]) -> list[TupleId] | None:
    color: dict[TupleId, int] = {}
    for root in sorted(succ):
        if root in color:
            continue
        path = [root]
        stack = [iter(sorted(succ.get(root, ())))]
        color[root] = 1
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                color[path.pop()] = 2
                stack.pop()
                continue
            c = color.get(nxt, 0)
            if c == 1:
                return path[path.index(nxt):]
            if c == 0:
                color[nxt] = 1
                path.append(nxt)
                stack.append(iter(sorted(succ.get(nxt, ()))))
    return None


def find_cycle(pri: Priority) -> list[TupleId] | None:
    """A list ``x1 < x2 < ... < xk < x1`` if the priority is cyclic."""
    return _find_cycle(pri.dominators())


def is_acyclic(pri: Priority) -> bool:
    return find_cycle(pri) is None


def require_acyclic(pri: Priority) -> None:
    cycle = find_cycle(pri)
    if cycle is not None:
        shown = " < ".join(str(t) for t in cycle + cycle[:1])
        raise CyclicPriority(f"priority is cyclic: {shown}")


def unoriented_edges(
    pri: Priority, inst: Instance, fds: Iterable[FD], graph: ConflictGraph | None = None
) -> list[Pair]:
    g = _graph(inst, fds, graph)
    oriented = pri.oriented_edges()
    return [e for e in g.edge_list() if frozenset(e) not in oriented]


def is_total(pri: Priority, inst: Instance, fds: Iterable[FD], graph: ConflictGraph | None = None) -> bool:
    return not unoriented_edges(pri, inst, fds, graph)


def extends(p2: Priority, p1: Priority) -> bool:
    """True iff ``p2`` is an extension of ``p1``."""
    return p1.pairs <= p2.pairs


def has_only_acyclic_extensions(
    pri: Priority, inst: Instance, fds: Iterable[FD], graph: ConflictGraph | None = None
) -> bool:
    """True iff no way of orienting further conflict edges creates a cycle.

    Any cycle of an extension must use some newly oriented edge, in one of
    its two directions; call it ``u -> v``.  The rest of that cycle is a simple path from ``v`` back to ``u`` that
    follows priority pairs forward and unoriented edges in either direction.
    Conversely such a path plus the edge is a simple cycle, and orienting
    its unoriented edges along it gives a cyclic extension.
    """
    require_acyclic_input(pri)
    g = _graph(inst, fds, graph)
    free = unoriented_edges(pri, inst, fds, g)
    succ: dict[TupleId, set[TupleId]] = defaultdict(set)
    for x, y in pri.pairs:
        succ[x].add(y)
    for a, b in free:
        succ[a].add(b)
        succ[b].add(a)
    for a, b in free:
        if _reaches(succ, b, a) or _reaches(succ, a, b):
            return False
    return True


def _reaches(succ: Mapping[TupleId, Iterable[TupleId]], v: TupleId, u: TupleId) -> bool:
    """Is there a path ``v ~> u`` avoiding the edge ``{u, v}`` itself?"""
    seen, stack = {v}, [v]
    while stack:
        x = stack.pop()
        for y in succ[x]:
            if {x, y} == {u, v} or y in seen:
                continue
            if y == u:
                return True
            seen.add(y)
            stack.append(y)
    return False


def require_acyclic_input(pri: Priority) -> None:
    if not is_acyclic(pri):
        raise CyclicInput("has_only_acyclic_extensions needs an acyclic priority")


def rule_pairs(inst: Instance, fds: Iterable[FD], rel: str, attr: str, direction: str,
               graph: ConflictGraph | None = None) -> set[Pair]:
    """Pairs produced by ``prefer <rel> max|min <attr>``.

    ``max`` orients each conflict inside ``rel`` from the lower to the higher
    value; ``min`` the other way.  Ties stay unoriented.
    """
    if direction not in ("max", "min"):
        raise SchemaError(f"rule direction must be max or min, not {direction!r}")
    pos = inst.schema.position(rel, attr)
    if inst.schema.attributes(rel)[pos].type != "nat":
        raise SchemaError(f"rule attribute {rel}.{attr} must be of type nat")
    g = _graph(inst, fds, graph)
    out = set()
    for a, b in g.edge_list():
        if a.rel != rel:
            continue
        va, vb = inst.tuples[a][pos], inst.tuples[b][pos]
        if va == vb:
            continue
        lo, hi = (a, b) if va < vb else (b, a)
        out.add((lo, hi) if direction == "max" else (hi, lo))
    return out

