"""Brute-force reference implementations and random instance generators.

Everything here follows the definitions literally and is exponential on
purpose; the library code must agree with it on small inputs.
"""

from __future__ import annotations

import itertools
import random

from prefrep.core import FD, Attribute, Instance, Schema, make_fds
from prefrep.graph import build_conflict_graph
from prefrep.priority import Priority


def consistent(ids, g) -> bool:
    return all(not g.adjacent(a, b) for a, b in itertools.combinations(ids, 2))


def brute_repairs(inst, fds) -> set[frozenset]:
    """All maximal consistent subsets, found among all ``2**n`` subsets."""
    g = build_conflict_graph(inst, fds)
    ids = inst.ids
    subsets = [
        frozenset(c)
        for k in range(len(ids) + 1)
        for c in itertools.combinations(ids, k)
        if consistent(c, g)
    ]
    return {s for s in subsets if not any(s < o for o in subsets)}


def omega(pairs, s) -> set:
    return {t for t in s if not any((t, u) in pairs for u in s)}


def naive_lrepairs(inst, fds, pri) -> set[frozenset]:
    """Every outcome of every choice sequence of the construction, no memo."""
    g = build_conflict_graph(inst, fds)
    pairs = set(pri.pairs)
    out: set[frozenset] = set()

    def run(s: frozenset, kept: frozenset) -> None:
        w = omega(pairs, s)
        if not w:
            out.add(kept)
            return
        for x in w:
            run(s - g.neighborhood(x), kept | {x})

    run(frozenset(inst.ids), frozenset())
    return out


def lrepair_by_ordering(inst, fds, pri, cand) -> bool:
    """Search for an ordering of ``cand`` driving the construction to ``cand``."""
    g = build_conflict_graph(inst, fds)
    pairs = set(pri.pairs)
    full = frozenset(inst.ids)
    for order in itertools.permutations(sorted(cand)):
        s = full
        ok = True
        for x in order:
            if x not in omega(pairs, s):
                ok = False
                break
            s = s - g.neighborhood(x)
        if ok and not omega(pairs, s):
            return True
    return False


def brute_prefers(r1, r2, pairs) -> bool:
    return all(any((x, y) in pairs for y in r2 - r1) for x in r1 - r2)


def brute_grepairs(inst, fds, pri) -> set[frozenset]:
    reps = brute_repairs(inst, fds)
    pairs = set(pri.pairs)
    return {r for r in reps if not any(o != r and brute_prefers(r, o, pairs) for o in reps)}


def has_cycle(pairs) -> bool:
    succ: dict = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    state: dict = {}

    def visit(x) -> bool:
        state[x] = 1
        for y in succ.get(x, ()):
            if state.get(y) == 1 or (y not in state and visit(y)):
                return True
        state[x] = 2
        return False

    return any(x not in state and visit(x) for x in list(succ))


def brute_only_acyclic_extensions(inst, fds, pri) -> bool:
    """No total extension is cyclic (every extension sits below a total one)."""
    g = build_conflict_graph(inst, fds)
    oriented = {frozenset(p) for p in pri.pairs}
    free = [e for e in g.edge_list() if frozenset(e) not in oriented]
    for bits in itertools.product((False, True), repeat=len(free)):
        ext = set(pri.pairs) | {(a, b) if bit else (b, a) for (a, b), bit in zip(free, bits)}
        if has_cycle(ext):
            return False
    return True


def random_instance(rng: random.Random, max_tuples: int = 12, max_fds: int = 3, domain: int = 3):
    """A one- or two-relation instance over small numeric domains."""
    rels = {"R": [Attribute(a, "nat") for a in "ABC"]}
    if rng.random() < 0.3:
        rels["S"] = [Attribute("D", "nat"), Attribute("E", "name")]
    schema = Schema(rels)
    n = rng.randint(0, max_tuples)
    rows: dict[str, set] = {r: set() for r in rels}
    for _ in range(n * 3):
        if sum(map(len, rows.values())) >= n:
            break
        rel = rng.choice(sorted(rels))
        if rel == "R":
            rows[rel].add(tuple(rng.randrange(domain) for _ in range(3)))
        else:
            rows[rel].add((rng.randrange(domain), rng.choice("xyz")))
    fds = []
    for _ in range(rng.randint(1, max_fds)):
        rel = rng.choice(sorted(rels))
        names = [a.name for a in rels[rel]]
        lhs = rng.sample(names, rng.randint(1, len(names) - 1))
        rhs = [rng.choice([a for a in names if a not in lhs])]
        fds.append(FD(rel, tuple(lhs), tuple(rhs)))
    inst = Instance.from_rows(schema, {r: sorted(v) for r, v in rows.items()})
    return inst, make_fds(schema, fds)


def random_priority(rng: random.Random, inst, fds, density: float | None = None) -> Priority:
    """Acyclic: orient a random subset of conflicts along a random ranking."""
    g = build_conflict_graph(inst, fds)
    ids = inst.ids
    rank = {t: i for i, t in enumerate(rng.sample(ids, len(ids)))}
    p = rng.random() if density is None else density
    pairs = set()
    for a, b in g.edge_list():
        if rng.random() < p:
            pairs.add((a, b) if rank[a] < rank[b] else (b, a))
    return Priority(pairs)


def random_total_priority(rng: random.Random, inst, fds) -> Priority:
    return random_priority(rng, inst, fds, density=1.0)


def random_cnf(rng: random.Random, n: int, k: int):
    from prefrep.reductions import CnfFormula

    return CnfFormula(
        n, tuple(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3)) for _ in range(k))
    )


def random_qbf(rng: random.Random, max_vars: int = 6, max_clauses: int = 8):
    from prefrep.reductions import CnfFormula, Qbf2Formula

    n = rng.randint(1, max_vars - 1)
    m = rng.randint(1, max_vars - n)
    k = rng.randint(1, max_clauses)
    clauses = tuple(
        tuple(rng.choice((1, -1)) * rng.randint(1, n + m) for _ in range(3)) for _ in range(k)
    )
    return Qbf2Formula(n, m, CnfFormula(n + m, clauses))
