from __future__ import annotations

import random

import pytest

from conftest import cyclic_example, cyclic_extension_example, proc_diff_decl_example
from oracles import lrepair_by_ordering, naive_lrepairs, random_instance, random_priority, random_total_priority
from prefrep.errors import CyclicPriority, NotARepair, PriorityNotTotal
from prefrep.graph import enumerate_repairs
from prefrep.lrepair import clean, construct, enumerate_lrepairs, is_lrepair
from prefrep.priority import EMPTY, Priority, is_total


def test_example_lrepairs(ex1):
    pri = Priority({(ex1["m2"], ex1["m3"])})
    assert set(enumerate_lrepairs(ex1.inst, ex1.fds, pri)) == {ex1.repairs["I3"], ex1.repairs["I4"]}
    assert set(enumerate_lrepairs(ex1.inst, ex1.fds, EMPTY)) == set(ex1.repairs.values())


def test_example_membership(ex1):
    pri = Priority({(ex1["m2"], ex1["m3"])})
    assert is_lrepair(ex1.inst, ex1.fds, pri, ex1.repairs["I3"])
    assert not is_lrepair(ex1.inst, ex1.fds, pri, ex1.repairs["I1"])
    with pytest.raises(NotARepair):
        is_lrepair(ex1.inst, ex1.fds, pri, ex1.set("e1", "m1"))
    with pytest.raises(NotARepair):
        is_lrepair(ex1.inst, ex1.fds, pri, ex1.set("e1", "e2", "m1", "m3"))


def test_proc_diff_decl():
    ex = proc_diff_decl_example()
    pri = Priority({(ex["t_c"], ex["t_a"]), (ex["t_d"], ex["t_b"])})
    assert set(enumerate_lrepairs(ex.inst, ex.fds, pri)) == {ex.set("t_a"), ex.set("t_b")}
    assert not is_lrepair(ex.inst, ex.fds, pri, ex.set("t_c", "t_d"))


def test_cyclic_priority_is_rejected():
    ex = cyclic_example()
    a, b, c, d = (ex[n] for n in ("t_a", "t_b", "t_c", "t_d"))
    cyc = Priority({(a, b), (b, c), (c, d), (d, a)})
    with pytest.raises(CyclicPriority):
        enumerate_lrepairs(ex.inst, ex.fds, cyc)
    with pytest.raises(CyclicPriority):
        is_lrepair(ex.inst, ex.fds, cyc, ex.set("t_a", "t_c"))


def test_clean_examples(ex1):
    total = Priority({(ex1["e2"], ex1["e1"]), (ex1["m2"], ex1["m3"])})
    assert clean(ex1.inst, ex1.fds, total) == ex1.repairs["I3"]
    with pytest.raises(PriorityNotTotal):
        clean(ex1.inst, ex1.fds, Priority({(ex1["m2"], ex1["m3"])}))
    i3 = ex1.inst.restrict(ex1.repairs["I3"])
    assert clean(i3, ex1.fds, EMPTY) == ex1.repairs["I3"]
    ex = cyclic_extension_example()
    ext = Priority({(ex["t_c"], ex["t_a"]), (ex["t_d"], ex["t_b"]), (ex["t_d"], ex["t_a"]), (ex["t_c"], ex["t_b"])})
    assert clean(ex.inst, ex.fds, ext) == ex.set("t_a", "t_b")


def test_enumeration_matches_naive_construction():
    rng = random.Random(5)
    for _ in range(120):
        inst, fds = random_instance(rng, max_tuples=9)
        pri = random_priority(rng, inst, fds)
        got = enumerate_lrepairs(inst, fds, pri)
        assert set(got) == naive_lrepairs(inst, fds, pri)
        assert set(got) <= set(enumerate_repairs(inst, fds))
        assert got


def test_membership_matches_ordering_search():
    rng = random.Random(6)
    for _ in range(80):
        inst, fds = random_instance(rng, max_tuples=8)
        pri = random_priority(rng, inst, fds)
        for r in enumerate_repairs(inst, fds):
            assert is_lrepair(inst, fds, pri, r) == lrepair_by_ordering(inst, fds, pri, r)


def test_clean_is_the_unique_lrepair():
    rng = random.Random(8)
    for _ in range(60):
        inst, fds = random_instance(rng)
        pri = random_total_priority(rng, inst, fds)
        assert is_total(pri, inst, fds)
        assert enumerate_lrepairs(inst, fds, pri) == [clean(inst, fds, pri)]


def test_construct_with_choice_function(ex1):
    pri = Priority({(ex1["m2"], ex1["m3"])})
    r = construct(ex1.inst, ex1.fds, pri, choose=max)
    assert r in (ex1.repairs["I3"], ex1.repairs["I4"])
