"""Schemas, instances, functional dependencies and conflict detection.

Values are plain Python objects: a ``str`` is an uninterpreted name and an
``int`` is a natural number (signed internally, since the hardness gadgets
store ``-1``).  Two names are equal iff their strings are equal, and a name
never equals a number.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from .errors import DataError, SchemaError, UnknownTupleId

NAME = "name"
NAT = "nat"
TYPES = (NAME, NAT)

Value = Union[str, int]


def value_type(value: Value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not database values")
    if isinstance(value, int):
        return NAT
    if isinstance(value, str):
        return NAME
    raise TypeError(f"unsupported value {value!r}")


@dataclass(frozen=True)
class Attribute:
    name: str
    type: str


class Schema:
    """Relation names mapped to ordered, typed attribute lists."""

    def __init__(self, relations: Mapping[str, Sequence[Attribute | tuple[str, str]]]):
        rels: dict[str, tuple[Attribute, ...]] = {}
        for rel, attrs in relations.items():
            if not rel.isidentifier():
                raise SchemaError(f"bad relation name {rel!r}")
            cooked = tuple(a if isinstance(a, Attribute) else Attribute(*a) for a in attrs)
            names = [a.name for a in cooked]
            if not cooked:
                raise SchemaError(f"relation {rel} has no attributes")
            if len(set(names)) != len(names):
                raise SchemaError(f"duplicate attribute in relation {rel}")
            for a in cooked:
                if a.type not in TYPES:
                    raise SchemaError(f"attribute {rel}.{a.name} has unknown type {a.type!r}")
            rels[rel] = cooked
        if not rels:
            raise SchemaError("schema needs at least one relation")
        self._relations = MappingProxyType(rels)

    @property
    def relations(self) -> Mapping[str, tuple[Attribute, ...]]:
        return self._relations

    def attributes(self, rel: str) -> tuple[Attribute, ...]:
        try:
            return self._relations[rel]
        except KeyError:
            raise SchemaError(f"unknown relation {rel!r}") from None

    def arity(self, rel: str) -> int:
        return len(self.attributes(rel))

    def position(self, rel: str, attr: str) -> int:
        for i, a in enumerate(self.attributes(rel)):
            if a.name == attr:
                return i
        raise SchemaError(f"relation {rel} has no attribute {attr!r}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Schema) and dict(self._relations) == dict(other._relations)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._relations.items())))

    def __repr__(self) -> str:
        return f"Schema({dict(self._relations)!r})"


class TupleId(NamedTuple):
    """Relation name plus 0-based load index; rendered as ``Rel#i``."""

    rel: str
    index: int

    def __str__(self) -> str:
        return f"{self.rel}#{self.index}"

    @classmethod
    def parse(cls, text: str) -> TupleId:
        rel, sep, idx = text.strip().partition("#")
        if not sep or not rel or not idx.isdigit():
            raise UnknownTupleId(f"malformed tuple id {text!r}")
        return cls(rel, int(idx))


@dataclass(frozen=True)
class Instance:
    """An immutable multi-relation database with stable tuple ids."""

    schema: Schema
    tuples: Mapping[TupleId, tuple]

    @classmethod
    def from_rows(cls, schema: Schema, rows: Mapping[str, Iterable[Sequence[Value]]]) -> Instance:
        tuples: dict[TupleId, tuple] = {}
        for rel, rel_rows in rows.items():
            attrs = schema.attributes(rel)
            seen: dict[tuple, int] = {}
            for i, row in enumerate(rel_rows):
                row = tuple(row)
                if len(row) != len(attrs):
                    raise DataError(f"{rel}#{i}: expected {len(attrs)} values, got {len(row)}")
                for a, v in zip(attrs, row):
                    try:
                        vt = value_type(v)
                    except TypeError as exc:
                        raise DataError(f"{rel}#{i}: {exc}") from None
                    if vt != a.type:
                        raise DataError(f"{rel}#{i}: attribute {a.name} expects {a.type}, got {v!r}")
                if row in seen:
                    raise DataError(f"{rel}#{i} duplicates {rel}#{seen[row]}")
                seen[row] = i
                tuples[TupleId(rel, i)] = row
        return cls(schema, MappingProxyType(tuples))

    @property
    def ids(self) -> list[TupleId]:
        return sorted(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, tid: object) -> bool:
        return tid in self.tuples

    def row(self, tid: TupleId) -> tuple:
        try:
            return self.tuples[tid]
        except KeyError:
            raise UnknownTupleId(f"unknown tuple id {tid}") from None

    def value(self, tid: TupleId, attr: str) -> Value:
        return self.row(tid)[self.schema.position(tid.rel, attr)]

    def relation(self, rel: str) -> list[TupleId]:
        return sorted(t for t in self.tuples if t.rel == rel)

    def restrict(self, ids: Iterable[TupleId]) -> Instance:
        """Sub-instance on the given ids; ids are kept, not renumbered."""
        keep = {}
        for t in ids:
            keep[t] = self.row(t)
        return Instance(self.schema, MappingProxyType(dict(sorted(keep.items()))))

    def rows(self) -> dict[str, list[tuple]]:
        out: dict[str, list[tuple]] = {rel: [] for rel in self.schema.relations}
        for t in self.ids:
            out[t.rel].append(self.tuples[t])
        return out


@dataclass(frozen=True)
class FD:
    """``rel: lhs -> rhs``."""

    rel: str
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]

    def check(self, schema: Schema) -> None:
        if not self.lhs or not self.rhs:
            raise SchemaError(f"FD {self} needs nonempty sides")
        for a in self.lhs + self.rhs:
            schema.position(self.rel, a)

    def __str__(self) -> str:
        return f"{self.rel}: {','.join(self.lhs)} -> {','.join(self.rhs)}"


FDSet = tuple  # tuple[FD, ...]


def make_fds(schema: Schema, fds: Iterable[FD]) -> tuple[FD, ...]:
    out = []
    for fd in fds:
        fd.check(schema)
        if fd not in out:
            out.append(fd)
    return tuple(out)


def _fd_violated(fd_pos: tuple[tuple[int, ...], tuple[int, ...]], r1: tuple, r2: tuple) -> bool:
    lhs, rhs = fd_pos
    return all(r1[i] == r2[i] for i in lhs) and any(r1[i] != r2[i] for i in rhs)


def _positions(schema: Schema, fd: FD) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple(schema.position(fd.rel, a) for a in fd.lhs),
        tuple(schema.position(fd.rel, a) for a in fd.rhs),
    )


def conflicting(t1: TupleId, t2: TupleId, inst: Instance, fds: Iterable[FD]) -> bool:
    r1, r2 = inst.row(t1), inst.row(t2)
    if t1.rel != t2.rel:
        return False
    return any(
        _fd_violated(_positions(inst.schema, fd), r1, r2) for fd in fds if fd.rel == t1.rel
    )


def iter_conflicts(inst: Instance, fds: Iterable[FD]) -> Iterator[tuple[TupleId, TupleId]]:
    """Yield each conflicting pair once, as ``(smaller id, larger id)``."""
    seen: set[tuple[TupleId, TupleId]] = set()
    for fd in fds:
        lhs, rhs = _positions(inst.schema, fd)
        groups: dict[tuple, list[TupleId]] = defaultdict(list)
        for t in inst.relation(fd.rel):
            row = inst.tuples[t]
            groups[tuple(row[i] for i in lhs)].append(t)
        for members in groups.values():
            for a, b in itertools.combinations(members, 2):
                ra, rb = inst.tuples[a], inst.tuples[b]
                if any(ra[i] != rb[i] for i in rhs):
                    pair = (a, b) if a < b else (b, a)
                    if pair not in seen:
                        seen.add(pair)
                        yield pair


def is_consistent(inst: Instance, fds: Iterable[FD]) -> bool:
    return next(iter_conflicts(inst, fds), None) is None
