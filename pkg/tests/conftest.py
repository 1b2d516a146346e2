from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import pytest

from prefrep.core import FD, Instance, Schema, TupleId, make_fds

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@dataclass
class Example:
    schema: Schema
    inst: Instance
    fds: tuple
    ids: dict
    repairs: dict

    def __getitem__(self, name: str) -> TupleId:
        return self.ids[name]

    def set(self, *names: str) -> frozenset:
        return frozenset(self.ids[n] for n in names)


def employee_example() -> Example:
    schema = Schema({
        "Emp": [("Name", "name"), ("Dept", "name")],
        "Mgr": [("Dept", "name"), ("Name", "name"), ("T", "nat")],
    })
    inst = Instance.from_rows(schema, {
        "Emp": [("Alice", "A"), ("Alice", "B")],
        "Mgr": [("A", "Mary", 2), ("B", "Bob", 1), ("B", "Mary", 3)],
    })
    fds = make_fds(schema, [FD("Emp", ("Name",), ("Dept",)), FD("Mgr", ("Dept",), ("Name",))])
    ids = {
        "e1": TupleId("Emp", 0), "e2": TupleId("Emp", 1),
        "m1": TupleId("Mgr", 0), "m2": TupleId("Mgr", 1), "m3": TupleId("Mgr", 2),
    }
    ex = Example(schema, inst, fds, ids, {})
    ex.repairs = {
        "I1": ex.set("e1", "m1", "m2"),
        "I2": ex.set("e2", "m1", "m2"),
        "I3": ex.set("e1", "m1", "m3"),
        "I4": ex.set("e2", "m1", "m3"),
    }
    return ex


def small_example(rows, fds_spec, attrs="ABC") -> Example:
    """Single relation R over nat attributes; tuples named t_a, t_b, ..."""
    schema = Schema({"R": [(a, "nat") for a in attrs[: len(rows[0])]]})
    inst = Instance.from_rows(schema, {"R": rows})
    fds = make_fds(schema, [FD("R", tuple(l), tuple(r)) for l, r in fds_spec])
    ids = {f"t_{chr(ord('a') + i)}": TupleId("R", i) for i in range(len(rows))}
    return Example(schema, inst, fds, ids, {})


def cyclic_example() -> Example:
    return small_example([(1, 1), (1, 2), (2, 2), (2, 1)], [("A", "B"), ("B", "A")])


def proc_diff_decl_example() -> Example:
    return small_example([(1, 1, 1), (2, 1, 2), (3, 1, 3), (4, 1, 3)], [("B", "C")])


def cyclic_extension_example() -> Example:
    return small_example([(1, 1, 1), (2, 1, 1), (3, 1, 2), (4, 1, 2)], [("B", "C")])


def nontransitive_example() -> Example:
    return small_example([(1, 1), (1, 2), (1, 3)], [("A", "B")])


@pytest.fixture
def ex1() -> Example:
    return employee_example()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
