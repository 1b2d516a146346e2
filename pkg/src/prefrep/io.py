"""Text file formats.

* schema file: one relation per line, ``Rel(Attr:name, Attr:nat, ...)``
* data: ``<Rel>.csv`` per relation, header row = attribute names
* FD file: ``Rel: A1,A2 -> B1,B2``
* priority file: ``Rel#i < Rel#j`` and ``prefer Rel max|min Attr``

Blank lines and lines starting with ``%`` or ``//`` are ignored in the
text formats.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Iterable

from .core import NAT, FD, Attribute, Instance, Schema, TupleId, make_fds
from .errors import DataError, SchemaError, ValidationError
from .graph import ConflictGraph, build_conflict_graph
from .priority import Priority, rule_pairs, validate_priority

_REL_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$")
_FD_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\s*:\s*(.+?)\s*->\s*(.+?)\s*$")
_PAIR_LINE = re.compile(r"^\s*(\S+#\d+)\s*<\s*(\S+#\d+)\s*$")
_RULE_LINE = re.compile(r"^\s*prefer\s+([A-Za-z_]\w*)\s+(max|min)\s+([A-Za-z_]\w*)\s*$")


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped and not stripped.startswith(("%", "//")):
            yield no, stripped


def parse_schema(text: str) -> Schema:
    rels: dict[str, list[Attribute]] = {}
    for no, line in _lines(text):
        m = _REL_LINE.match(line)
        if not m:
            raise SchemaError(f"schema line {no}: cannot parse {line!r}")
        rel, body = m.groups()
        if rel in rels:
            raise SchemaError(f"schema line {no}: relation {rel} declared twice")
        attrs = []
        for part in body.split(","):
            name, sep, typ = part.partition(":")
            name, typ = name.strip(), typ.strip().lower()
            if not sep or not name.isidentifier():
                raise SchemaError(f"schema line {no}: bad attribute {part.strip()!r}")
            attrs.append(Attribute(name, typ))
        rels[rel] = attrs
    return Schema(rels)


def format_schema(schema: Schema) -> str:
    return "".join(
        f"{rel}({', '.join(f'{a.name}:{a.type}' for a in attrs)})\n"
        for rel, attrs in schema.relations.items()
    )


def parse_fds(text: str, schema: Schema) -> tuple[FD, ...]:
    fds = []
    for no, line in _lines(text):
        m = _FD_LINE.match(line)
        if not m:
            raise SchemaError(f"FD line {no}: cannot parse {line!r}")
        rel, lhs, rhs = m.groups()
        fds.append(FD(rel, _attr_list(lhs), _attr_list(rhs)))
    return make_fds(schema, fds)


def _attr_list(text: str) -> tuple[str, ...]:
    return tuple(a.strip() for a in text.split(",") if a.strip())


def format_fds(fds: Iterable[FD]) -> str:
    return "".join(f"{fd}\n" for fd in fds)


def _parse_value(raw: str, typ: str, where: str):
    if typ == NAT:
        try:
            return int(raw.strip())
        except ValueError:
            raise DataError(f"{where}: {raw!r} is not a number") from None
    return raw


def load_instance(data_dir: str | Path, schema: Schema) -> Instance:
    """Read ``<Rel>.csv`` for every relation; a missing file means an empty relation."""
    data_dir = Path(data_dir)
    rows: dict[str, list[tuple]] = {}
    for rel, attrs in schema.relations.items():
        path = data_dir / f"{rel}.csv"
        rows[rel] = []
        if not path.exists():
            continue
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                continue
            header = [h.strip() for h in header]
            if sorted(header) != sorted(a.name for a in attrs):
                raise DataError(f"{path}: header {header} does not match schema of {rel}")
            order = [header.index(a.name) for a in attrs]
            for lineno, rec in enumerate(reader, 2):
                if not rec:
                    continue
                if len(rec) != len(attrs):
                    raise DataError(f"{path}:{lineno}: expected {len(attrs)} fields")
                rows[rel].append(tuple(
                    _parse_value(rec[j], a.type, f"{path}:{lineno}") for j, a in zip(order, attrs)
                ))
    return Instance.from_rows(schema, rows)


def write_instance(inst: Instance, out_dir: str | Path, with_schema: bool = True) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for rel, rel_rows in inst.rows().items():
        with (out_dir / f"{rel}.csv").open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([a.name for a in inst.schema.attributes(rel)])
            w.writerows(rel_rows)
    if with_schema:
        (out_dir / "schema.txt").write_text(format_schema(inst.schema))


def parse_priority(
    text: str,
    inst: Instance,
    fds: Iterable[FD],
    strict: bool = True,
    graph: ConflictGraph | None = None,
) -> Priority:
    g = graph if graph is not None else build_conflict_graph(inst, fds)
    pairs: set[tuple[TupleId, TupleId]] = set()
    for no, line in _lines(text):
        m = _PAIR_LINE.match(line)
        if m:
            try:
                pair = (TupleId.parse(m.group(1)), TupleId.parse(m.group(2)))
            except ValidationError as exc:
                raise ValidationError(f"priority line {no}: {exc}") from None
            pairs.add(pair)
            continue
        m = _RULE_LINE.match(line)
        if m:
            rel, direction, attr = m.groups()
            pairs |= rule_pairs(inst, fds, rel, attr, direction, graph=g)
            continue
        raise ValidationError(f"priority line {no}: cannot parse {line!r}")
    return validate_priority(pairs, inst, fds, strict=strict, graph=g)


def format_priority(pri: Priority) -> str:
    return "".join(f"{x} < {y}\n" for x, y in pri)


def format_ids(ids: Iterable[TupleId]) -> list[str]:
    return [str(t) for t in sorted(ids)]


def parse_ids(text: str) -> frozenset[TupleId]:
    parts = re.split(r"[\s,]+", text.strip())
    return frozenset(TupleId.parse(p) for p in parts if p)
