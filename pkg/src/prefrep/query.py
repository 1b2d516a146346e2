"""Closed first-order queries: syntax, typing, evaluation and consistent answers.

Concrete syntax::

    query   := ('exists' | 'forall') var (',' var)* '.' query
             | disj
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | quantified | '(' query ')' | 'true' | 'false'
             | Rel '(' term (',' term)* ')' | term op term
    op      := '=' | '!=' | '<' | '>'
    term    := var | "string" | integer

Quantifier bodies extend as far right as possible.  Quantifiers range over
the active domain: the values in the evaluated database plus the constants
of the query.  A variable used at a ``nat`` position (or under ``<``/``>``)
ranges over the numbers of the active domain only, one used at a ``name``
position over the names only.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

from .core import NAME, NAT, FD, Instance, Schema, TupleId, value_type
from .errors import (
    ArityMismatch,
    FreeVariable,
    QueryError,
    QuerySyntaxError,
    TypeMismatch,
    ValidationError,
)
from .graph import DEFAULT_BUDGET, Budget, enumerate_repairs
from .grepair import enumerate_grepairs
from .lrepair import enumerate_lrepairs
from .priority import Priority

MODES = ("all", "l", "g")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Union[str, int]

    def __str__(self) -> str:
        if isinstance(self.value, str):
            return '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
        return str(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True)
class Truth:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Atom:
    rel: str
    terms: tuple[Term, ...]
    pos: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return f"{self.rel}({', '.join(map(str, self.terms))})"


@dataclass(frozen=True)
class Cmp:
    left: Term
    op: str
    right: Term
    pos: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Not:
    body: "Query"

    def __str__(self) -> str:
        return f"!({self.body})"


@dataclass(frozen=True)
class And:
    left: "Query"
    right: "Query"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Query"
    right: "Query"

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Query"
    sort: str | None = None

    def __str__(self) -> str:
        return f"(exists {self.var}. {self.body})"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Query"
    sort: str | None = None

    def __str__(self) -> str:
        return f"(forall {self.var}. {self.body})"


Query = Union[Truth, Atom, Cmp, Not, And, Or, Exists, Forall]

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|=|<|>|!|&|\||\(|\)|,|\.)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), i))
        i = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        kind, val, pos = self.next()
        if val != text or kind in ("str", "eof"):
            raise QuerySyntaxError(f"expected {text!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Query:
        q = self.query()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise QuerySyntaxError(f"unexpected {val!r}", pos)
        return q

    def query(self) -> Query:
        kind, val, _ = self.peek()
        if kind == "ident" and val in ("exists", "forall"):
            return self.quantified()
        return self.disj()

    def quantified(self) -> Query:
        _, word, _ = self.next()
        names = [self.variable()]
        while self.peek()[1] == ",":
            self.next()
            names.append(self.variable())
        self.expect(".")
        body = self.query()
        node = Exists if word == "exists" else Forall
        for name in reversed(names):
            body = node(name, body)
        return body

    def variable(self) -> str:
        kind, val, pos = self.next()
        if kind != "ident" or val in _KEYWORDS:
            raise QuerySyntaxError(f"expected a variable name, found {val!r}", pos)
        return val

    def disj(self) -> Query:
        q = self.conj()
        while self.peek()[1] == "|" and self.peek()[0] == "op":
            self.next()
            q = Or(q, self.conj())
        return q

    def conj(self) -> Query:
        q = self.unary()
        while self.peek()[1] == "&" and self.peek()[0] == "op":
            self.next()
            q = And(q, self.unary())
        return q

    def unary(self) -> Query:
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.next()
            return Not(self.unary())
        if kind == "ident" and val in ("exists", "forall"):
            return self.quantified()
        if kind == "op" and val == "(":
            self.next()
            q = self.query()
            self.expect(")")
            return q
        if kind == "ident" and val in ("true", "false"):
            self.next()
            return Truth(val == "true")
        if kind == "ident" and self.peek(1)[1] == "(" and self.peek(1)[0] == "op":
            self.next()
            self.next()
            terms = [self.term()]
            while self.peek()[1] == ",":
                self.next()
                terms.append(self.term())
            self.expect(")")
            return Atom(val, tuple(terms), pos)
        left = self.term()
        kind, op, opos = self.next()
        if kind != "op" or op not in ("=", "!=", "<", ">"):
            raise QuerySyntaxError(f"expected a comparison after {left}, found {op or 'end of input'!r}", opos)
        return Cmp(left, op, self.term(), pos)

    def term(self) -> Term:
        kind, val, pos = self.next()
        if kind == "str":
            return Const(re.sub(r"\\(.)", r"\1", val[1:-1]))
        if kind == "int":
            return Const(int(val))
        if kind == "ident" and val not in _KEYWORDS:
            return Var(val)
        raise QuerySyntaxError(f"expected a term, found {val or 'end of input'!r}", pos)


_KEYWORDS = frozenset({"exists", "forall", "true", "false"})


class _Binding:
    def __init__(self, name: str):
        self.name = name
        self.sort: str | None = None


def _constrain(b: _Binding, sort: str, pos: int) -> None:
    if b.sort is not None and b.sort != sort:
        raise TypeMismatch(f"variable {b.name} used both as {b.sort} and as {sort}", pos)
    b.sort = sort


def _check(q: Query, schema: Schema | None, env: dict[str, _Binding]) -> Query:
    if isinstance(q, Truth):
        return q
    if isinstance(q, Atom):
        if schema is not None:
            if q.rel not in schema.relations:
                raise QueryError(f"unknown relation {q.rel}", q.pos)
            attrs = schema.attributes(q.rel)
            if len(attrs) != len(q.terms):
                raise ArityMismatch(
                    f"{q.rel} has arity {len(attrs)}, used with {len(q.terms)} arguments", q.pos
                )
        for i, t in enumerate(q.terms):
            sort = schema.attributes(q.rel)[i].type if schema is not None else None
            _term(t, env, q.pos, sort)
        return q
    if isinstance(q, Cmp):
        sort = NAT if q.op in ("<", ">") else None
        for t in (q.left, q.right):
            _term(t, env, q.pos, sort)
        return q
    if isinstance(q, Not):
        return Not(_check(q.body, schema, env))
    if isinstance(q, (And, Or)):
        return type(q)(_check(q.left, schema, env), _check(q.right, schema, env))
    if isinstance(q, (Exists, Forall)):
        b = _Binding(q.var)
        inner = dict(env)
        inner[q.var] = b
        body = _check(q.body, schema, inner)
        return replace(q, body=body, sort=b.sort)
    raise TypeError(f"not a query node: {q!r}")


def _term(t: Term, env: dict[str, _Binding], pos: int, sort: str | None) -> None:
    if isinstance(t, Var):
        b = env.get(t.name)
        if b is None:
            raise FreeVariable(f"variable {t.name} is not bound", pos)
        if sort is not None:
            _constrain(b, sort, pos)
    elif sort is not None and value_type(t.value) != sort:
        raise TypeMismatch(f"constant {t} is not of type {sort}", pos)


def check_query(q: Query, schema: Schema | None = None) -> Query:
    """Type-check a query and annotate quantifiers with their sorts."""
    return _check(q, schema, {})


def parse_query(text: str, schema: Schema | None = None) -> Query:
    """Parse and check a closed query.

    Without a schema, arity and attribute types are not checked.
    """
    return check_query(_Parser(text).parse(), schema)


def constants(q: Query) -> set:
    out: set = set()
    if isinstance(q, Atom):
        out.update(t.value for t in q.terms if isinstance(t, Const))
    elif isinstance(q, Cmp):
        out.update(t.value for t in (q.left, q.right) if isinstance(t, Const))
    elif isinstance(q, Not):
        out |= constants(q.body)
    elif isinstance(q, (And, Or)):
        out |= constants(q.left) | constants(q.right)
    elif isinstance(q, (Exists, Forall)):
        out |= constants(q.body)
    return out


class _Model:
    def __init__(self, rows: Iterable[tuple[str, tuple]], extra: Iterable):
        self.facts: dict[str, set[tuple]] = defaultdict(set)
        values = set(extra)
        for rel, row in rows:
            self.facts[rel].add(row)
            values.update(row)
        self.domain = {
            None: sorted(values, key=lambda v: (value_type(v), v)),
            NAME: sorted(v for v in values if isinstance(v, str)),
            NAT: sorted(v for v in values if not isinstance(v, str)),
        }


def _value(t: Term, env: dict):
    return env[t.name] if isinstance(t, Var) else t.value


def _holds(q: Query, m: _Model, env: dict) -> bool:
    if isinstance(q, Atom):
        return tuple(_value(t, env) for t in q.terms) in m.facts.get(q.rel, ())
    if isinstance(q, Cmp):
        a, b = _value(q.left, env), _value(q.right, env)
        if q.op == "=":
            return a == b
        if q.op == "!=":
            return a != b
        if isinstance(a, str) or isinstance(b, str):
            return False
        return a < b if q.op == "<" else a > b
    if isinstance(q, Not):
        return not _holds(q.body, m, env)
    if isinstance(q, And):
        return _holds(q.left, m, env) and _holds(q.right, m, env)
    if isinstance(q, Or):
        return _holds(q.left, m, env) or _holds(q.right, m, env)
    if isinstance(q, Exists):
        return any(_holds(q.body, m, {**env, q.var: v}) for v in m.domain[q.sort])
    if isinstance(q, Forall):
        return all(_holds(q.body, m, {**env, q.var: v}) for v in m.domain[q.sort])
    if isinstance(q, Truth):
        return q.value
    raise TypeError(f"not a query node: {q!r}")


def eval_query(inst: Instance, q: Query, subset: Iterable[TupleId] | None = None) -> bool:
    """Does ``q`` hold in ``subset`` (default: the whole instance)?"""
    ids = inst.tuples.keys() if subset is None else subset
    model = _Model(((t.rel, inst.row(t)) for t in ids), constants(q))
    return _holds(q, model, {})


def cqa(
    inst: Instance,
    fds: Iterable[FD],
    pri: Priority,
    q: Query | str,
    mode: str = "all",
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    """True iff ``q`` holds in every repair of the chosen family."""
    if isinstance(q, str):
        q = parse_query(q, inst.schema)
    fds = tuple(fds)
    if mode == "all":
        family = enumerate_repairs(inst, fds, budget)
    elif mode == "l":
        family = enumerate_lrepairs(inst, fds, pri, budget)
    elif mode == "g":
        family = enumerate_grepairs(inst, fds, pri, budget)
    else:
        raise ValidationError(f"mode must be one of {', '.join(MODES)}, not {mode!r}")
    return all(eval_query(inst, q, r) for r in family)
