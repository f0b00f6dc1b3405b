"""Bounded witness search between two class diagrams.

A witness is an object model valid in cd1 and invalid in cd2.  The summary
algorithm finds one witness, blocks its instantiated class set, and repeats
until the bounded search is exhausted, so it terminates after at most
2^|classes| rounds with one representative per reachable class set.

Per object universe (a class multiset within scope), witness existence is
decided exactly instead of by enumerating link sets: multiplicities bound
each object's per-position link count, so one association's admissible link
sets are the integral flows of a small bipartite network with degree ranges.
The search builds a canonical minimal instance, and if that already conforms
to cd2 it retries with one violation pinned (a link cd2 forbids, or a
partner count outside cd2's range); if no pin is feasible, no instance over
the universe can violate cd2, because cd2 checks links and per-object counts
independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from ..summary import PartitionKey, SummaryReport, summarize
from .model import (UNBOUNDED, Association, ClassDiagram, Link, ObjectModel,
                    check_instance, classes_of, conforms, is_instance)


@dataclass(frozen=True)
class Scope:
    max_objects: int

    def __post_init__(self) -> None:
        if self.max_objects < 1:
            raise ValueError(f"scope must allow at least one object, got {self.max_objects}")


DEFAULT_SCOPE = Scope(10)

ClassSet = tuple[str, ...]  # sorted class names


def _as_scope(scope: "Scope | int") -> Scope:
    return scope if isinstance(scope, Scope) else Scope(scope)


def _check_blocked(cd1: ClassDiagram, blocked: frozenset[ClassSet]) -> frozenset[ClassSet]:
    concrete = set(cd1.concrete_classes())
    for cs in blocked:
        if not set(cs) <= concrete:
            raise ValueError(f"blocked class set {cs} is not over {cd1.name}'s concrete classes")
    return blocked


def _candidate_class_sets(cd1: ClassDiagram, size_cap: int) -> list[ClassSet]:
    names = sorted(cd1.concrete_classes())
    out: list[ClassSet] = []
    for k in range(1, min(size_cap, len(names)) + 1):
        out.extend(combinations(names, k))
    return sorted(out)  # canonical payload order


def _count_vectors(total: int, k: int) -> Iterator[tuple[int, ...]]:
    # every class in the candidate set gets at least one object
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _count_vectors(total - first, k - 1):
            yield (first,) + rest


def _pairs_for(cd1: ClassDiagram, asc: Association, objects) -> list[Link]:
    pairs = []
    for oa, ca in objects:
        if not conforms(cd1, ca, asc.class_a):
            continue
        for ob, cb in objects:
            if conforms(cd1, cb, asc.class_b):
                pairs.append(Link(asc.name, oa, ob))
    return pairs


def _assoc_link_sets(cd1: ClassDiagram, asc: Association, objects) -> Iterator[tuple[Link, ...]]:
    """Link subsets for one association that meet cd1's multiplicities.

    Backtracks over the conforming pairs (exclude before include), pruning on
    the upper bounds as links are added and on the lower bounds as an
    object's pair block closes.
    """
    pairs = _pairs_for(cd1, asc, objects)
    a_count = {oa: 0 for oa, ca in objects if conforms(cd1, ca, asc.class_a)}
    b_count = {ob: 0 for ob, cb in objects if conforms(cd1, cb, asc.class_b)}
    lo_b, hi_b = asc.mult_b.lo, asc.mult_b.hi  # bounds position-B partners of an A object
    lo_a, hi_a = asc.mult_a.lo, asc.mult_a.hi  # bounds position-A partners of a B object

    chosen: list[Link] = []

    def rec(i: int) -> Iterator[tuple[Link, ...]]:
        if i == len(pairs):
            if all(c >= lo_b for c in a_count.values()) and \
               all(c >= lo_a for c in b_count.values()):
                yield tuple(chosen)
            return
        ln = pairs[i]
        # pairs are grouped by obj_a, so after the group's last pair the
        # object's position-B tally is final
        last_of_a = i + 1 == len(pairs) or pairs[i + 1].obj_a != ln.obj_a

        # leave the pair out
        if not (last_of_a and a_count[ln.obj_a] < lo_b):
            yield from rec(i + 1)

        # take it
        if (hi_b == -1 or a_count[ln.obj_a] < hi_b) and \
           (hi_a == -1 or b_count[ln.obj_b] < hi_a):
            a_count[ln.obj_a] += 1
            b_count[ln.obj_b] += 1
            chosen.append(ln)
            yield from rec(i + 1)
            chosen.pop()
            a_count[ln.obj_a] -= 1
            b_count[ln.obj_b] -= 1

    yield from rec(0)


def _universe_objects(class_set: ClassSet, counts: tuple[int, ...]):
    objects = []
    for cls, n in zip(class_set, counts):
        objects.extend((f"{cls.lower()}{i}", cls) for i in range(1, n + 1))
    return tuple(objects)


def _universe_instances(cd1: ClassDiagram, objects,
                        name: str) -> Iterator[ObjectModel]:
    """All cd1-instances over a fixed object tuple, in backtracking order."""

    def rec(ai: int, links: tuple[Link, ...]) -> Iterator[ObjectModel]:
        if ai == len(cd1.associations):
            om = ObjectModel(name, objects, links)
            if is_instance(om, cd1):  # authoritative re-check
                yield om
            return
        for chunk in _assoc_link_sets(cd1, cd1.associations[ai], objects):
            yield from rec(ai + 1, links + chunk)

    yield from rec(0, ())


def _instances_over(cd1: ClassDiagram, class_set: ClassSet, total: int,
                    name: str) -> Iterator[ObjectModel]:
    """cd1-instances instantiating exactly class_set with `total` objects."""
    for counts in _count_vectors(total, len(class_set)):
        yield from _universe_instances(cd1, _universe_objects(class_set, counts), name)


class _FlowNet:
    """Max flow by shortest augmenting paths; just big enough for link search."""

    def __init__(self, n: int) -> None:
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def arc(self, u: int, v: int, cap: int) -> int:
        idx = len(self.to)
        self.adj[u].append(idx)
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(idx + 1)  # residual twin at idx ^ 1
        self.to.append(u)
        self.cap.append(0)
        return idx

    def flow_on(self, idx: int) -> int:
        return self.cap[idx ^ 1]

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            prev = [-1] * len(self.adj)
            prev[s] = -2
            queue = [s]
            for u in queue:
                for idx in self.adj[u]:
                    v = self.to[idx]
                    if prev[v] == -1 and self.cap[idx] > 0:
                        prev[v] = idx
                        queue.append(v)
                if prev[t] != -1:
                    break
            if prev[t] == -1:
                return total
            push = min(self.cap[idx] for idx in _walk(prev, self.to, s, t))
            for idx in _walk(prev, self.to, s, t):
                self.cap[idx] -= push
                self.cap[idx ^ 1] += push
            total += push


def _walk(prev: list[int], to: list[int], s: int, t: int) -> Iterator[int]:
    v = t
    while v != s:
        idx = prev[v]
        yield idx
        v = to[idx ^ 1]


def _choose_links(n_a: int, n_b: int, a_rng, b_rng,
                  forced: tuple[int, int] | None = None) -> list[tuple[int, int]] | None:
    """One set of (a-index, b-index) pairs meeting per-node degree ranges.

    a_rng[i] bounds object i's pair count (links are simple, so at most one
    pair per partner); `forced` demands one specific pair be present.
    Feasibility with lower bounds reduces to plain max flow by routing each
    bound through a super source/sink.  Returns None when no set exists.
    """
    if any(lo > hi for lo, hi in a_rng) or any(lo > hi for lo, hi in b_rng):
        return None
    # nodes: 0 source, 1 sink, 2 super source, 3 super sink, then a, then b
    net = _FlowNet(4 + n_a + n_b)
    need = 0

    def bounded(u: int, v: int, lo: int, hi: int) -> int:
        nonlocal need
        idx = net.arc(u, v, hi - lo)
        if lo:
            net.arc(2, v, lo)
            net.arc(u, 3, lo)
            need += lo
        return idx

    for i, (lo, hi) in enumerate(a_rng):
        bounded(0, 4 + i, lo, hi)
    pair_arcs: list[tuple[int, int, int, int]] = []  # (i, j, arc, lo)
    for i in range(n_a):
        for j in range(n_b):
            lo = 1 if forced == (i, j) else 0
            pair_arcs.append((i, j, bounded(4 + i, 4 + n_a + j, lo, 1), lo))
    for j, (lo, hi) in enumerate(b_rng):
        bounded(4 + n_a + j, 1, lo, hi)
    net.arc(1, 0, sum(hi for _, hi in a_rng))  # close the circulation

    if net.max_flow(2, 3) != need:
        return None
    return sorted((i, j) for i, j, arc, lo in pair_arcs if net.flow_on(arc) + lo)


def _hosts(cd: ClassDiagram, asc: Association, objects):
    a_objs = [oid for oid, cls in objects if conforms(cd, cls, asc.class_a)]
    b_objs = [oid for oid, cls in objects if conforms(cd, cls, asc.class_b)]
    return a_objs, b_objs


def _degree_caps(asc: Association, n_a: int, n_b: int) -> tuple[int, int]:
    hi_a = n_b if asc.mult_b.hi == UNBOUNDED else min(asc.mult_b.hi, n_b)
    hi_b = n_a if asc.mult_a.hi == UNBOUNDED else min(asc.mult_a.hi, n_a)
    return hi_a, hi_b


def _assoc_links(cd1: ClassDiagram, asc: Association, objects,
                 forced: tuple[str, str] | None = None,
                 pin: tuple[str, str, int] | None = None) -> tuple[Link, ...] | None:
    """Links for one association within cd1's multiplicities, or None.

    `forced` requires the given (obj_a, obj_b) link; `pin` fixes one object's
    partner count to an exact value ("a" pins a position-A object's count).
    """
    a_objs, b_objs = _hosts(cd1, asc, objects)
    hi_a, hi_b = _degree_caps(asc, len(a_objs), len(b_objs))
    a_rng = [(asc.mult_b.lo, hi_a)] * len(a_objs)
    b_rng = [(asc.mult_a.lo, hi_b)] * len(b_objs)
    if pin is not None:
        side, oid, v = pin
        if side == "a":
            a_rng[a_objs.index(oid)] = (v, v)
        else:
            b_rng[b_objs.index(oid)] = (v, v)
    f = (a_objs.index(forced[0]), b_objs.index(forced[1])) if forced else None
    chosen = _choose_links(len(a_objs), len(b_objs), a_rng, b_rng, forced=f)
    if chosen is None:
        return None
    return tuple(Link(asc.name, a_objs[i], b_objs[j]) for i, j in chosen)


def _universe_witness(cd1: ClassDiagram, cd2: ClassDiagram, objects,
                      name: str) -> ObjectModel | None:
    """A witness instantiating exactly `objects`, or None when none exists.

    Builds a canonical cd1-instance first; if that conforms to cd2, any
    witness over the universe must bend one association into a link cd2
    rejects (unknown name or bad endpoint) or pin one object's partner count
    outside cd2's range, and each candidate bend is tried directly.  The
    count of links not owned by cd1 associations is zero in every
    cd1-instance, so conformance of the canonical instance rules those out.
    """
    base: dict[str, tuple[Link, ...]] = {}
    for asc in cd1.associations:
        links = _assoc_links(cd1, asc, objects)
        if links is None:
            return None  # universe admits no cd1-instance
        base[asc.name] = links

    def build(override_name: str | None = None,
              override: tuple[Link, ...] = ()) -> ObjectModel:
        links: list[Link] = []
        for asc in cd1.associations:
            links.extend(override if asc.name == override_name else base[asc.name])
        om = ObjectModel(name, objects, tuple(links))
        assert is_instance(om, cd1), f"constructed model must satisfy {cd1.name}"
        return om

    om = build()
    if not is_instance(om, cd2):
        return om

    cls_of = dict(objects)
    for asc in sorted(cd1.associations, key=lambda a: a.name):
        a_objs, b_objs = _hosts(cd1, asc, objects)
        asc2 = cd2.association(asc.name)
        if asc2 is None:
            # cd2 rejects every link of this name
            for oa in a_objs:
                for ob in b_objs:
                    links = _assoc_links(cd1, asc, objects, forced=(oa, ob))
                    if links is not None:
                        return build(asc.name, links)
            continue
        for oa in a_objs:
            for ob in b_objs:
                if conforms(cd2, cls_of[oa], asc2.class_a) and \
                   conforms(cd2, cls_of[ob], asc2.class_b):
                    continue
                links = _assoc_links(cd1, asc, objects, forced=(oa, ob))
                if links is not None:
                    return build(asc.name, links)
        # partner counts cd1 allows but cd2 rejects, pinned one object at a
        # time; objects outside cd2's end class are not counted by cd2, and
        # a zero count shared with the canonical instance cannot violate
        hi_a, hi_b = _degree_caps(asc, len(a_objs), len(b_objs))
        for oa in a_objs:
            if not conforms(cd2, cls_of[oa], asc2.class_a):
                continue
            for v in range(asc.mult_b.lo, hi_a + 1):
                if asc2.mult_b.contains(v):
                    continue
                links = _assoc_links(cd1, asc, objects, pin=("a", oa, v))
                if links is not None:
                    return build(asc.name, links)
        for ob in b_objs:
            if not conforms(cd2, cls_of[ob], asc2.class_b):
                continue
            for v in range(asc.mult_a.lo, hi_b + 1):
                if asc2.mult_a.contains(v):
                    continue
                links = _assoc_links(cd1, asc, objects, pin=("b", ob, v))
                if links is not None:
                    return build(asc.name, links)
    return None


def find_witness(cd1: ClassDiagram, cd2: ClassDiagram, scope: Scope | int,
                 blocked: frozenset[ClassSet] = frozenset()) -> ObjectModel | None:
    """Smallest witness (by object count) whose class set is not blocked.

    Deterministic: ascending object count, candidate class sets in canonical
    order, object counts in composition order, then the per-universe
    decision.  Returns None only when no witness exists within the scope.
    """
    scope = _as_scope(scope)
    blocked = _check_blocked(cd1, frozenset(blocked))
    for total in range(1, scope.max_objects + 1):
        for cs in _candidate_class_sets(cd1, total):
            if cs in blocked:
                continue
            for counts in _count_vectors(total, len(cs)):
                om = _universe_witness(cd1, cd2, _universe_objects(cs, counts), "witness")
                if om is not None:
                    assert not is_instance(om, cd2)
                    return om
    return None


def enumerate_witnesses(cd1: ClassDiagram, cd2: ClassDiagram, scope: Scope | int,
                        limit: int | None = None) -> Iterator[ObjectModel]:
    """Witnesses in search order, up to `limit`; no class-set blocking.

    Universes the per-universe decision clears are skipped wholesale, so the
    (possibly huge) instance streams only run where a witness is known to
    exist.
    """
    scope = _as_scope(scope)
    emitted = 0
    for total in range(1, scope.max_objects + 1):
        for cs in _candidate_class_sets(cd1, total):
            for counts in _count_vectors(total, len(cs)):
                objects = _universe_objects(cs, counts)
                if _universe_witness(cd1, cd2, objects, "probe") is None:
                    continue
                for om in _universe_instances(cd1, objects, f"witness{emitted + 1}"):
                    if not is_instance(om, cd2):
                        yield om
                        emitted += 1
                        if limit is not None and emitted >= limit:
                            return


def cddiff_summary(cd1: ClassDiagram, cd2: ClassDiagram,
                   scope: Scope | int = DEFAULT_SCOPE) -> SummaryReport:
    """One representative witness per instantiated class set, exhaustively."""
    scope = _as_scope(scope)
    blocked: set[ClassSet] = set()
    found: list[ObjectModel] = []
    for _ in range(2 ** len(cd1.concrete_classes()) + 1):
        om = find_witness(cd1, cd2, scope, frozenset(blocked))
        if om is None:
            break
        verdict = check_instance(om, cd1)
        assert verdict.ok, f"engine produced an invalid witness: {verdict.violations}"
        found.append(om)
        blocked.add(classes_of(om))
    return summarize(
        found, lambda om: PartitionKey.class_set(classes_of(om)),
        direction=(cd1.name, cd2.name), partition_kind="class-set",
        annotate=lambda om: f"{len(om.objects)} object(s)")
