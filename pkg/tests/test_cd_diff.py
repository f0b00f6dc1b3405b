from __future__ import annotations

import pytest

from semdiff.cd import (Scope, cddiff_summary, check_instance, classes_of,
                        enumerate_witnesses, find_witness, is_instance)
from semdiff.cd.diff import (_assoc_links, _candidate_class_sets, _choose_links,
                             _count_vectors, _universe_witness)
from semdiff.oracle import cd_enumerate_all
from semdiff.parsing import parse_cd


def test_scope_must_be_positive():
    with pytest.raises(ValueError, match="at least one object"):
        Scope(0)


def test_count_vectors_are_positive_compositions():
    assert list(_count_vectors(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    assert list(_count_vectors(3, 3)) == [(1, 1, 1)]
    assert list(_count_vectors(2, 3)) == []


def test_candidate_class_sets_are_canonical(cd_v1):
    sets = _candidate_class_sets(cd_v1, 2)
    assert sets == sorted(sets)
    assert all(cs == tuple(sorted(cs)) for cs in sets)
    assert ("Employee",) in sets and ("Employee", "Manager") in sets


# ------------------------------------------------------------- witnesses

def test_smallest_witness_is_the_self_managed_manager(cd_v1, cd_v2):
    om = find_witness(cd_v2, cd_v1, 5)
    assert om is not None
    assert [c for _, c in om.objects] == ["Manager"]
    (ln,) = om.links
    assert (ln.association, ln.obj_a, ln.obj_b) == ("manages", "manager1", "manager1")
    assert is_instance(om, cd_v2) and not is_instance(om, cd_v1)


def test_no_witness_between_equal_diagrams(cd_v1, cd_v2):
    assert find_witness(cd_v1, cd_v1, 10) is None
    assert find_witness(cd_v2, cd_v2, 10) is None


def test_blocking_skips_covered_class_sets(cd_v1, cd_v2):
    first = find_witness(cd_v2, cd_v1, 6)
    om = find_witness(cd_v2, cd_v1, 6, blocked=frozenset({classes_of(first)}))
    assert om is not None
    assert classes_of(om) != classes_of(first)


def test_blocked_sets_must_use_concrete_classes(cd_v1, cd_v2):
    with pytest.raises(ValueError, match="concrete classes"):
        find_witness(cd_v1, cd_v2, 3, blocked=frozenset({("Ghost",)}))


def test_witnesses_get_canonical_object_names(cd_v1, cd_v2):
    om = find_witness(cd_v1, cd_v2, 6)
    for oid, cls in om.objects:
        assert oid.startswith(cls.lower())


# ------------------------------------------------------------- summaries

def test_summary_partitions_by_class_set(cd_v1, cd_v2):
    report = cddiff_summary(cd_v2, cd_v1, 6)
    assert report.direction == ("cd_v2", "cd_v1")
    assert report.partition_kind == "class-set"
    assert [e.key.names for e in report.entries] == [
        ("Employee", "Manager"),
        ("Employee", "Manager", "Task"),
        ("Manager",),
        ("Manager", "Task"),
    ]
    for e in report.entries:
        assert check_instance(e.representative, cd_v2).ok
        assert not is_instance(e.representative, cd_v1)
        assert classes_of(e.representative) == e.key.names
        assert e.annotation == f"{len(e.representative.objects)} object(s)"


def test_summary_reverse_direction(cd_v1, cd_v2):
    report = cddiff_summary(cd_v1, cd_v2, 6)
    assert [e.key.names for e in report.entries] == [
        ("Employee", "Manager"),
        ("Employee", "Manager", "Task"),
        ("Manager",),
    ]


def test_summary_empty_for_self_diff(cd_v1, cd_v2):
    assert cddiff_summary(cd_v1, cd_v1, 6).entries == []
    assert cddiff_summary(cd_v2, cd_v2, 6).entries == []


def test_summary_is_deterministic(cd_v1, cd_v2):
    a = cddiff_summary(cd_v2, cd_v1, 6)
    b = cddiff_summary(cd_v2, cd_v1, 6)
    assert a.entries == b.entries


def test_summary_accepts_plain_int_scope(cd_v1, cd_v2):
    assert cddiff_summary(cd_v2, cd_v1, Scope(3)).keys() == \
        cddiff_summary(cd_v2, cd_v1, 3).keys()


# ------------------------------------------------------------- enumeration

def test_enumeration_matches_exhaustive_oracle_counts(cd_v1, cd_v2):
    assert len(list(enumerate_witnesses(cd_v1, cd_v2, 3))) == \
        len(cd_enumerate_all(cd_v1, cd_v2, 3).witnesses) == 9
    assert len(list(enumerate_witnesses(cd_v2, cd_v1, 3))) == \
        len(cd_enumerate_all(cd_v2, cd_v1, 3).witnesses) == 54


def test_enumeration_is_sound_and_respects_limit(cd_v1, cd_v2):
    ws = list(enumerate_witnesses(cd_v2, cd_v1, 10, limit=20))
    assert len(ws) == 20
    for w in ws:
        assert is_instance(w, cd_v2) and not is_instance(w, cd_v1)
    covered = {classes_of(w) for w in ws}
    assert covered == {
        ("Employee", "Manager"),
        ("Employee", "Manager", "Task"),
        ("Manager",),
        ("Manager", "Task"),
    }


def test_enumeration_orders_by_object_count(cd_v1, cd_v2):
    sizes = [len(w.objects) for w in enumerate_witnesses(cd_v2, cd_v1, 3)]
    assert sizes == sorted(sizes)


# ----------------------------------------------- per-universe decision bits

def test_universe_decision_agrees_with_summary_keys(cd_v1, cd_v2):
    # every scope-3 universe: decision is nonempty iff the oracle has a
    # witness with exactly that class multiset
    oracle = cd_enumerate_all(cd_v2, cd_v1, 3)
    witnessed = set()
    for om in oracle.witnesses:
        counts: dict[str, int] = {}
        for _, cls in om.objects:
            counts[cls] = counts.get(cls, 0) + 1
        witnessed.add(tuple(sorted(counts.items())))
    for total in range(1, 4):
        for cs in _candidate_class_sets(cd_v2, total):
            for counts in _count_vectors(total, len(cs)):
                objects = tuple(
                    (f"{c.lower()}{i}", c)
                    for c, n in zip(cs, counts) for i in range(1, n + 1))
                om = _universe_witness(cd_v2, cd_v1, objects, "probe")
                key = tuple(sorted(zip(cs, counts)))
                assert (om is not None) == (key in witnessed), key


def test_choose_links_respects_degree_ranges():
    # 2 left objects each needing 1..2 partners, 2 right objects exactly 1
    got = _choose_links(2, 2, [(1, 2)] * 2, [(1, 1)] * 2)
    assert got is not None
    left = [sum(1 for i, _ in got if i == k) for k in range(2)]
    right = [sum(1 for _, j in got if j == k) for k in range(2)]
    assert all(1 <= d <= 2 for d in left) and right == [1, 1]


def test_choose_links_honors_forced_pair():
    got = _choose_links(2, 2, [(0, 2)] * 2, [(0, 2)] * 2, forced=(1, 0))
    assert got is not None and (1, 0) in got


def test_choose_links_detects_infeasible_sums():
    # left wants 2 links total, right cannot absorb more than 1
    assert _choose_links(2, 1, [(1, 1)] * 2, [(0, 1)]) is None
    assert _choose_links(1, 1, [(2, 2)], [(0, 1)]) is None


def test_assoc_links_come_back_sorted(cd_v2):
    manages = cd_v2.association("manages")
    objects = (("employee1", "Employee"), ("manager1", "Manager"),
               ("manager2", "Manager"))
    links = _assoc_links(cd_v2, manages, objects)
    assert links is not None
    assert list(links) == sorted(links, key=lambda ln: (ln.obj_a, ln.obj_b))


def test_antisymmetry_of_witness_sets(cd_v1, cd_v2):
    """A witness for one direction is never a witness for the other."""
    left = list(enumerate_witnesses(cd_v1, cd_v2, 3))
    right = list(enumerate_witnesses(cd_v2, cd_v1, 3))
    sig = lambda om: (om.objects, tuple(
        sorted(om.links, key=lambda ln: (ln.association, ln.obj_a, ln.obj_b))))
    assert {sig(w) for w in left} & {sig(w) for w in right} == set()
