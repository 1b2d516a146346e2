"""Instance generators for the three hardness gadgets, with brute-force oracles.

* ``reduce_3sat_lcqa``: a 3CNF ``phi`` is unsatisfiable iff ``!R(b)`` is
  true in every l-repair.
* ``reduce_3sat_gcheck``: ``phi`` is unsatisfiable iff the returned
  candidate repair is a g-repair.
* ``reduce_qbf_gcqa``: ``forall x exists y . phi`` is true iff ``R(Y)`` is
  true in every g-repair.

Literals are signed variable indices, DIMACS style.  A clause tuple carries
literal ``p`` of its clause in column pair ``p``.

The two g-gadgets come in two encodings.  ``"table"`` stores a literal as
``(var, sign)``, so two clause tuples with opposite literals at one position
conflict with each other; the candidate then stops being a repair (for
every unsatisfiable ``phi``: if no position had such a clash, making every
first literal true would satisfy ``phi``).  ``"keyed"``, the default, stores
a literal as ``(2 * var + (lit < 0), 1)`` and the variable tuples as
``(2 * var, 0)`` / ``(2 * var + 1, 0)``; clause tuples never conflict and the
complementary variable tuples are paired through a separate column.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import FD, Attribute, Instance, Schema, TupleId, make_fds
from .errors import DataError, MalformedFormula, TooManyVariables
from .priority import Priority
from .query import Query, parse_query

DEFAULT_MAX_VARS = 20

Clause = tuple[int, int, int]


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 0:
            raise MalformedFormula("negative variable count")
        for j, c in enumerate(self.clauses, 1):
            if len(c) != 3:
                raise MalformedFormula(f"clause {j} has {len(c)} literals, expected 3")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise MalformedFormula(f"clause {j}: bad literal {lit!r}")

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[i - 1]`` is the value of variable ``i``."""
        return all(any((lit > 0) == assignment[abs(lit) - 1] for lit in c) for c in self.clauses)


@dataclass(frozen=True)
class Qbf2Formula:
    """``forall x_1..x_n exists y_1..y_m . matrix``; ``y_j`` is variable ``n + j``."""

    n_universal: int
    n_existential: int
    matrix: CnfFormula

    def __post_init__(self) -> None:
        if self.n_universal < 0 or self.n_existential < 0:
            raise MalformedFormula("negative variable count")
        if self.matrix.num_vars != self.n_universal + self.n_existential:
            raise MalformedFormula("matrix variable count must equal n + m")


def sat_bruteforce(phi: CnfFormula, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    if phi.num_vars > max_vars:
        raise TooManyVariables(f"{phi.num_vars} variables exceeds the cap of {max_vars}")
    return any(
        phi.satisfied_by(bits) for bits in itertools.product((False, True), repeat=phi.num_vars)
    )


def qbf_bruteforce(psi: Qbf2Formula, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    if psi.matrix.num_vars > max_vars:
        raise TooManyVariables(f"{psi.matrix.num_vars} variables exceeds the cap of {max_vars}")
    inner = list(itertools.product((False, True), repeat=psi.n_existential))
    return all(
        any(psi.matrix.satisfied_by(xs + ys) for ys in inner)
        for xs in itertools.product((False, True), repeat=psi.n_universal)
    )


def _dedupe(clauses: Iterable[Clause]) -> list[Clause]:
    out: list[Clause] = []
    for c in clauses:
        if c not in out:
            out.append(c)
    return out


def _var(lit: int) -> int:
    return abs(lit)


def _sgn(lit: int) -> int:
    return 1 if lit > 0 else -1


@dataclass(frozen=True)
class Reduction:
    instance: Instance
    fds: tuple[FD, ...]
    priority: Priority
    labels: dict[str, TupleId]
    query: Query | None = None
    query_text: str | None = None
    candidate: frozenset[TupleId] | None = None
    clauses: tuple[Clause, ...] = field(default=())

    def ids(self, *names: str) -> frozenset[TupleId]:
        return frozenset(self.labels[n] for n in names)

    def label_of(self) -> dict[TupleId, str]:
        return {t: n for n, t in self.labels.items()}


class _Builder:
    def __init__(self, pairs: int):
        attrs = []
        for i in range(1, pairs + 1):
            attrs += [Attribute(f"A{i}", "nat"), Attribute(f"B{i}", "nat")]
        self.schema = Schema({"R": attrs})
        self.fds = make_fds(self.schema, [FD("R", (f"A{i}",), (f"B{i}",)) for i in range(1, pairs + 1)])
        self.rows: list[tuple[int, ...]] = []
        self.labels: dict[str, TupleId] = {}
        self.pairs: set[tuple[TupleId, TupleId]] = set()

    def add(self, label: str, row: Sequence[int]) -> TupleId:
        tid = TupleId("R", len(self.rows))
        self.rows.append(tuple(row))
        self.labels[label] = tid
        return tid

    def prefer(self, lower: str, higher: str) -> None:
        self.pairs.add((self.labels[lower], self.labels[higher]))

    def instance(self) -> Instance:
        return Instance.from_rows(self.schema, {"R": self.rows})


def _ground_atom(row: Sequence[int]) -> str:
    return "R(" + ", ".join(str(v) for v in row) + ")"


def reduce_3sat_lcqa(phi: CnfFormula, positive_query: bool = False) -> Reduction:
    """Gadget for l-preferred consistent answers of a single ground atom.

    The query is ``!R(b)``.  With ``positive_query`` an extra tuple ``b'``
    dominated by ``b`` is added and the query becomes ``R(b')``.
    """
    n = phi.num_vars
    clauses = _dedupe(phi.clauses)
    bld = _Builder(4)
    for i in range(1, n + 1):
        bld.add(f"v{i}", (i, 1, i, -1, i, -1, i, -1))
        bld.add(f"vbar{i}", (i, 2, i, 1, i, 1, i, 1))
    for j, c in enumerate(clauses, 1):
        row = [0, 1]
        for lit in c:
            row += [_var(lit), _sgn(lit)]
        bld.add(f"d{j}", row)
    b_row = (0,) * 8
    bld.add("b", b_row)
    for j, c in enumerate(clauses, 1):
        for lit in c:
            bld.prefer(f"d{j}", f"v{_var(lit)}" if lit > 0 else f"vbar{_var(lit)}")
        bld.prefer("b", f"d{j}")
    if positive_query:
        bprime = (0, 1, 0, 1, 0, 1, 0, 1)
        bld.add("bprime", bprime)
        bld.prefer("bprime", "b")
        text = _ground_atom(bprime)
    else:
        text = "!" + _ground_atom(b_row)
    inst = bld.instance()
    return Reduction(
        inst, bld.fds, Priority(bld.pairs), dict(bld.labels),
        query=parse_query(text, inst.schema), query_text=text, clauses=tuple(clauses),
    )


ENCODINGS = ("keyed", "table")


def _key(lit: int) -> int:
    return 2 * abs(lit) + (lit < 0)


def _check_encoding(encoding: str) -> None:
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}; expected one of {ENCODINGS}")


def _literal_cols(c: Clause, encoding: str) -> list[int]:
    out: list[int] = []
    for lit in c:
        out += [_key(lit), 1] if encoding == "keyed" else [_var(lit), _sgn(lit)]
    return out


def _var_cols(var: int, positive: bool, encoding: str) -> list[int]:
    if encoding == "keyed":
        return [_key(var if positive else -var), 0] * 3
    return [var, -1 if positive else 1] * 3


def _literal_tuple(lit: int, pos: str, neg: str) -> str:
    return pos if lit > 0 else neg


def _build(bld: _Builder) -> Instance:
    try:
        return bld.instance()
    except DataError as exc:
        raise MalformedFormula(f"gadget tuples collide: {exc}") from None


def reduce_3sat_gcheck(phi: CnfFormula, encoding: str = "keyed") -> Reduction:
    """Gadget for g-repair checking; ``candidate`` is the repair to check."""
    _check_encoding(encoding)
    n = phi.num_vars
    clauses = _dedupe(phi.clauses)
    bld = _Builder(5)
    for i in range(1, n + 1):
        bld.add(f"v{i}", [1, 1, i, 1] + _var_cols(i, True, encoding))
        bld.add(f"vbar{i}", [1, 1, i, 2] + _var_cols(i, False, encoding))
    for i in range(1, n + 1):
        bld.add(f"w{i}", (2, 2, i, 3, 0, 0, 0, 0, 0, 0))
    bld.add("s", (1, 2, n + 1, 1, 0, 0, 0, 0, 0, 0))
    bld.add("t", (2, 1, n + 1, 2, 0, 0, 0, 0, 0, 0))
    for j, c in enumerate(clauses, 1):
        bld.add(f"d{j}", [2, 2, 0, 0] + _literal_cols(c, encoding))
    bld.prefer("s", "t")
    for i in range(1, n + 1):
        bld.prefer(f"w{i}", f"v{i}")
        bld.prefer(f"w{i}", f"vbar{i}")
    for j, c in enumerate(clauses, 1):
        for lit in c:
            bld.prefer(f"d{j}", _literal_tuple(lit, f"v{_var(lit)}", f"vbar{_var(lit)}"))
    cand = [f"w{i}" for i in range(1, n + 1)] + [f"d{j}" for j in range(1, len(clauses) + 1)] + ["s"]
    inst = _build(bld)
    return Reduction(
        inst, bld.fds, Priority(bld.pairs), dict(bld.labels),
        candidate=frozenset(bld.labels[x] for x in cand), clauses=tuple(clauses),
    )


def reduce_qbf_gcqa(psi: Qbf2Formula, negated_x_query: bool = False, encoding: str = "keyed") -> Reduction:
    """Gadget for g-preferred consistent answers; the query is ``R(Y)``.

    With ``negated_x_query`` the query is ``!R(X)`` instead.  The keyed
    encoding uses one more column pair than the table encoding, to pair
    complementary variable tuples.
    """
    _check_encoding(encoding)
    n, m = psi.n_universal, psi.n_existential
    clauses = _dedupe(psi.matrix.clauses)
    keyed = encoding == "keyed"
    bld = _Builder(5 if keyed else 4)

    def var_row(split: int, var: int, positive: bool) -> list[int]:
        pair = [var, 1 if positive else 2] if keyed else []
        return [1, split] + pair + _var_cols(var, positive, encoding)

    pad = [0, 0] if keyed else []
    for j in range(1, m + 1):
        bld.add(f"q{j}", var_row(1, n + j, True))
        bld.add(f"qbar{j}", var_row(1, n + j, False))
    y_row = tuple([1, 1] + pad + [0] * 6)
    x_row = tuple([1, 2] + pad + [0] * 6)
    bld.add("Y", y_row)
    bld.add("X", x_row)
    for i in range(1, n + 1):
        bld.add(f"p{i}", var_row(2, i, True))
        bld.add(f"pbar{i}", var_row(2, i, False))
    for k, c in enumerate(clauses, 1):
        bld.add(f"d{k}", [1, 2] + pad + _literal_cols(c, encoding))
    for k, c in enumerate(clauses, 1):
        for lit in c:
            v = _var(lit)
            if v <= n:
                bld.prefer(f"d{k}", _literal_tuple(lit, f"p{v}", f"pbar{v}"))
            else:
                bld.prefer(f"d{k}", _literal_tuple(lit, f"q{v - n}", f"qbar{v - n}"))
    for i in range(1, n + 1):
        bld.prefer(f"p{i}", "Y")
        bld.prefer(f"pbar{i}", "Y")
    bld.prefer("X", "Y")
    text = "!" + _ground_atom(x_row) if negated_x_query else _ground_atom(y_row)
    inst = _build(bld)
    return Reduction(
        inst, bld.fds, Priority(bld.pairs), dict(bld.labels),
        query=parse_query(text, inst.schema), query_text=text, clauses=tuple(clauses),
    )


def _pad(lits: list[int], lineno: int) -> Clause:
    if not lits:
        raise MalformedFormula(f"line {lineno}: empty clause")
    if len(lits) > 3:
        raise MalformedFormula(f"line {lineno}: clause has {len(lits)} literals, at most 3 allowed")
    while len(lits) < 3:
        lits.append(lits[-1])
    return tuple(lits)


def _dimacs_body(text: str, quantifiers: bool):
    header = None
    prefix: list[tuple[str, list[int]]] = []
    clauses: list[Clause] = []
    pending: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedFormula(f"line {lineno}: bad problem line {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if line[0] in "ae":
            if not quantifiers:
                raise MalformedFormula(f"line {lineno}: quantifier line in a CNF file")
            nums = [int(x) for x in line[1:].split()]
            if not nums or nums[-1] != 0:
                raise MalformedFormula(f"line {lineno}: quantifier line must end with 0")
            prefix.append((line[0], nums[:-1]))
            continue
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise MalformedFormula(f"line {lineno}: cannot parse {line!r}") from None
        for x in nums:
            if x == 0:
                clauses.append(_pad(pending, lineno))
                pending = []
            else:
                pending.append(x)
    if pending:
        raise MalformedFormula("last clause is not terminated by 0")
    if header is None:
        raise MalformedFormula("missing 'p cnf' line")
    if header[1] != len(clauses):
        raise MalformedFormula(f"header announces {header[1]} clauses, found {len(clauses)}")
    return header[0], clauses, prefix


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF; clauses shorter than 3 are padded by repeating their last literal."""
    n, clauses, _ = _dimacs_body(text, quantifiers=False)
    return CnfFormula(n, tuple(clauses))


def parse_qdimacs(text: str) -> Qbf2Formula:
    """DIMACS body preceded by one ``a ... 0`` line and one ``e ... 0`` line.

    Variables are renumbered so universals come first, as the gadget expects.
    """
    n, clauses, prefix = _dimacs_body(text, quantifiers=True)
    kinds = [k for k, _ in prefix]
    if kinds not in (["a", "e"], ["a"], ["e"]):
        raise MalformedFormula("expected a forall-exists prefix: one 'a' line then one 'e' line")
    univ = next((vs for k, vs in prefix if k == "a"), [])
    exist = next((vs for k, vs in prefix if k == "e"), [])
    used = univ + exist
    if len(set(used)) != len(used) or any(v < 1 or v > n for v in used):
        raise MalformedFormula("quantified variables must be distinct and within 1..n")
    # free variables are read as existential
    exist = exist + [v for v in range(1, n + 1) if v not in used]
    renum = {v: i for i, v in enumerate(univ + exist, 1)}
    matrix = CnfFormula(
        n, tuple(tuple((1 if l > 0 else -1) * renum[abs(l)] for l in c) for c in clauses)
    )
    return Qbf2Formula(len(univ), len(exist), matrix)


def format_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def format_qdimacs(psi: Qbf2Formula) -> str:
    n, m = psi.n_universal, psi.n_existential
    lines = [f"p cnf {n + m} {len(psi.matrix.clauses)}"]
    lines.append("a " + " ".join(str(i) for i in range(1, n + 1)) + (" 0" if n else "0"))
    lines.append("e " + " ".join(str(n + j) for j in range(1, m + 1)) + (" 0" if m else "0"))
    lines += [" ".join(map(str, c)) + " 0" for c in psi.matrix.clauses]
    return "\n".join(lines) + "\n"
