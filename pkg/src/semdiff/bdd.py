"""Reduced ordered binary decision diagrams over a shared unique table.

Nodes are plain ints. 0 and 1 are the terminals; every other id names a
row in the manager's node arrays. The table is hash-consed and children
are never equal, so two functions are the same iff their root ids are
the same. Variables are identified by their level in the fixed order;
there is no dynamic reordering and no complement edges.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

FALSE = 0
TRUE = 1

# terminals sort below every real level
_TERMINAL = 1 << 62

_AND = "&"
_OR = "|"
_XOR = "^"


class BddError(Exception):
    pass


class ManagerMismatchError(BddError):
    """Operands created by different managers were mixed."""


class EmptySetError(BddError):
    """A witness was requested from the empty set."""


class IndexOutOfRangeError(BddError):
    """A level outside the manager's allocation."""


class UnpairedBundleError(BddError):
    """A relation operand strays outside the declared variable banks."""


class BddManager:
    def __init__(self) -> None:
        self._level: list[int] = [_TERMINAL, _TERMINAL]
        self._low: list[int] = [0, 1]
        self._high: list[int] = [0, 1]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._cache: dict[tuple, int] = {}
        self._names: list[str] = []
        self._qsets: dict[tuple[int, ...], int] = {}

    # -- variables ---------------------------------------------------

    def new_var(self, name: str | None = None) -> int:
        lvl = len(self._names)
        self._names.append(name if name is not None else f"v{lvl}")
        return lvl

    @property
    def var_count(self) -> int:
        return len(self._names)

    def var_name(self, level: int) -> str:
        self._check_level(level)
        return self._names[level]

    def var(self, level: int) -> int:
        self._check_level(level)
        return self._make(level, FALSE, TRUE)

    def nvar(self, level: int) -> int:
        self._check_level(level)
        return self._make(level, TRUE, FALSE)

    def _check_level(self, level: int) -> None:
        if not 0 <= level < len(self._names):
            raise IndexOutOfRangeError(f"no variable at level {level}")

    @property
    def true_set(self) -> "SymbolicSet":
        return SymbolicSet(self, TRUE)

    @property
    def false_set(self) -> "SymbolicSet":
        return SymbolicSet(self, FALSE)

    @staticmethod
    def _as_levels(items) -> list[int]:
        # quantifier arguments may mix raw levels and VarBundles
        out: list[int] = []
        for it in items:
            if isinstance(it, VarBundle):
                out.extend(it.levels)
            else:
                out.append(it)
        return out

    # -- construction ------------------------------------------------

    def _make(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        hit = self._unique.get(key)
        if hit is not None:
            return hit
        idx = len(self._level)
        self._level.append(level)
        self._low.append(low)
        self._high.append(high)
        self._unique[key] = idx
        return idx

    def _cof(self, u: int, level: int) -> tuple[int, int]:
        if self._level[u] == level:
            return self._low[u], self._high[u]
        return u, u

    def _apply(self, op: str, a: int, b: int) -> int:
        if op == _AND:
            if a == 0 or b == 0:
                return 0
            if a == 1:
                return b
            if b == 1 or a == b:
                return a
        elif op == _OR:
            if a == 1 or b == 1:
                return 1
            if a == 0:
                return b
            if b == 0 or a == b:
                return a
        else:
            if a == b:
                return 0
            if a == 0:
                return b
            if b == 0:
                return a
        if a > b:
            a, b = b, a
        key = (op, a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        lvl = min(self._level[a], self._level[b])
        a0, a1 = self._cof(a, lvl)
        b0, b1 = self._cof(b, lvl)
        r = self._make(lvl, self._apply(op, a0, b0), self._apply(op, a1, b1))
        self._cache[key] = r
        return r

    def band(self, a: int, b: int) -> int:
        return self._apply(_AND, a, b)

    def bor(self, a: int, b: int) -> int:
        return self._apply(_OR, a, b)

    def bxor(self, a: int, b: int) -> int:
        return self._apply(_XOR, a, b)

    def bnot(self, a: int) -> int:
        return self._apply(_XOR, a, TRUE)

    def bdiff(self, a: int, b: int) -> int:
        return self.band(a, self.bnot(b))

    def ite(self, f: int, g: int, h: int) -> int:
        return self.bor(self.band(f, g), self.band(self.bnot(f), h))

    # -- quantification ----------------------------------------------

    def _intern_qset(self, levels) -> tuple[int, tuple[int, ...]]:
        qs = tuple(sorted(set(self._as_levels(levels))))
        for lvl in qs:
            self._check_level(lvl)
        qid = self._qsets.get(qs)
        if qid is None:
            qid = len(self._qsets)
            self._qsets[qs] = qid
        return qid, qs

    def exists(self, u: int, levels) -> int:
        qid, qs = self._intern_qset(levels)
        return self._exists(u, qid, qs)

    def _exists(self, u: int, qid: int, qs: tuple[int, ...]) -> int:
        if u < 2:
            return u
        lvl = self._level[u]
        i = bisect_left(qs, lvl)
        if i == len(qs):
            return u
        key = ("E", u, qid)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if qs[i] == lvl:
            r0 = self._exists(self._low[u], qid, qs)
            r = TRUE if r0 == TRUE else self.bor(r0, self._exists(self._high[u], qid, qs))
        else:
            r = self._make(lvl, self._exists(self._low[u], qid, qs),
                           self._exists(self._high[u], qid, qs))
        self._cache[key] = r
        return r

    def forall(self, u: int, levels) -> int:
        return self.bnot(self.exists(self.bnot(u), levels))

    def and_exists(self, a: int, b: int, levels) -> int:
        """exists(band(a, b), levels) without building the conjunction."""
        qid, qs = self._intern_qset(levels)
        return self._and_exists(a, b, qid, qs)

    def _and_exists(self, a: int, b: int, qid: int, qs: tuple[int, ...]) -> int:
        if a == 0 or b == 0:
            return 0
        if a == 1 and b == 1:
            return 1
        if a > b:
            a, b = b, a
        lvl = min(self._level[a], self._level[b])
        i = bisect_left(qs, lvl)
        if i == len(qs):
            return self.band(a, b)
        key = ("AE", a, b, qid)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        a0, a1 = self._cof(a, lvl)
        b0, b1 = self._cof(b, lvl)
        if qs[i] == lvl:
            r0 = self._and_exists(a0, b0, qid, qs)
            r = TRUE if r0 == TRUE else self.bor(r0, self._and_exists(a1, b1, qid, qs))
        else:
            r = self._make(lvl, self._and_exists(a0, b0, qid, qs),
                           self._and_exists(a1, b1, qid, qs))
        self._cache[key] = r
        return r

    # -- substitution ------------------------------------------------

    def rename(self, u: int, mapping: dict[int, int]) -> int:
        for old, new in mapping.items():
            self._check_level(old)
            self._check_level(new)
        memo: dict[int, int] = {}

        def rec(x: int) -> int:
            if x < 2:
                return x
            hit = memo.get(x)
            if hit is not None:
                return hit
            lvl = mapping.get(self._level[x], self._level[x])
            # ite, not _make: swapping adjacent banks can put a node's
            # new level below its children's.
            r = self.ite(self.var(lvl), rec(self._high[x]), rec(self._low[x]))
            memo[x] = r
            return r

        return rec(u)

    def restrict(self, u: int, consts: dict[int, bool]) -> int:
        for lvl in consts:
            self._check_level(lvl)
        memo: dict[int, int] = {}

        def rec(x: int) -> int:
            if x < 2:
                return x
            hit = memo.get(x)
            if hit is not None:
                return hit
            lvl = self._level[x]
            if lvl in consts:
                r = rec(self._high[x] if consts[lvl] else self._low[x])
            else:
                r = self._make(lvl, rec(self._low[x]), rec(self._high[x]))
            memo[x] = r
            return r

        return rec(u)

    # -- inspection --------------------------------------------------

    def support(self, u: int) -> tuple[int, ...]:
        seen: set[int] = set()
        out: set[int] = set()
        stack = [u]
        while stack:
            x = stack.pop()
            if x < 2 or x in seen:
                continue
            seen.add(x)
            out.add(self._level[x])
            stack.append(self._low[x])
            stack.append(self._high[x])
        return tuple(sorted(out))

    def eval_node(self, u: int, assignment: dict[int, bool]) -> bool:
        while u > 1:
            lvl = self._level[u]
            if lvl not in assignment:
                raise BddError(f"variable {self._names[lvl]} (level {lvl}) is unassigned")
            u = self._high[u] if assignment[lvl] else self._low[u]
        return u == TRUE

    def cube(self, literals: dict[int, bool]) -> int:
        node = TRUE
        for lvl in sorted(literals, reverse=True):
            self._check_level(lvl)
            node = self._make(lvl, FALSE, node) if literals[lvl] else self._make(lvl, node, FALSE)
        return node

    def count_sat(self, u: int, levels) -> int:
        """Satisfying valuations over the given levels and bundles.

        Bundles contribute their bit levels and their domain constraint,
        so out-of-range bit patterns never count.
        """
        items = list(levels)
        for it in items:
            if isinstance(it, VarBundle):
                u = self.band(u, self.domain_cube(it))
        qs = tuple(sorted(set(self._as_levels(items))))
        for lvl in qs:
            self._check_level(lvl)
        covered = set(qs)
        missing = [lvl for lvl in self.support(u) if lvl not in covered]
        if missing:
            raise BddError(f"support not covered by count_sat levels: {missing}")
        rank = {lvl: i for i, lvl in enumerate(qs)}
        n = len(qs)
        memo: dict[int, int] = {}

        def below(x: int) -> int:
            # assignments over the levels ranked at or under x's own
            hit = memo.get(x)
            if hit is not None:
                return hit
            r = rank[self._level[x]]
            total = 0
            for child in (self._low[x], self._high[x]):
                if child < 2:
                    total += child << (n - r - 1)
                else:
                    total += below(child) << (rank[self._level[child]] - r - 1)
            memo[x] = total
            return total

        if u < 2:
            return u << n
        return below(u) << rank[self._level[u]]

    def pick_one(self, u: int, bundles) -> dict[str, int]:
        """Lexicographically least valuation of the bundles, in list order."""
        if u == FALSE:
            raise EmptySetError("pick_one on the empty set")
        out: dict[str, int] = {}
        for b in bundles:
            value, u = self.pick_least(u, b)
            out[b.name] = value
        return out

    def pick_assignment(self, u: int) -> dict[int, bool]:
        """Deterministic satisfying assignment, low branch preferred."""
        if u == FALSE:
            raise EmptySetError("pick_assignment on the empty set")
        path: dict[int, bool] = {}
        while u > 1:
            if self._low[u] != FALSE:
                path[self._level[u]] = False
                u = self._low[u]
            else:
                path[self._level[u]] = True
                u = self._high[u]
        return path

    def dump(self, u: int) -> list[tuple[int, int, int, int]]:
        """Reachable internal nodes as (id, level, low, high). Debugging
        aid; not a stability-guaranteed format."""
        out: list[tuple[int, int, int, int]] = []
        seen: set[int] = set()
        stack = [u]
        while stack:
            x = stack.pop()
            if x < 2 or x in seen:
                continue
            seen.add(x)
            out.append((x, self._level[x], self._low[x], self._high[x]))
            stack.append(self._low[x])
            stack.append(self._high[x])
        return sorted(out)

    def audit(self) -> dict[str, int]:
        """Verify table invariants; raises BddError on any breach."""
        n = len(self._level)
        if not (len(self._low) == len(self._high) == n):
            raise BddError("node arrays out of sync")
        if len(self._unique) != n - 2:
            raise BddError("unique table entry count does not match node count")
        for (lvl, low, high), idx in self._unique.items():
            if not 2 <= idx < n:
                raise BddError(f"table points at invalid node {idx}")
            if (self._level[idx], self._low[idx], self._high[idx]) != (lvl, low, high):
                raise BddError(f"table key disagrees with node {idx}")
            if low == high:
                raise BddError(f"node {idx} has equal children")
            if not (0 <= low < n and 0 <= high < n):
                raise BddError(f"node {idx} has a dangling child")
            if self._level[low] <= lvl or self._level[high] <= lvl:
                raise BddError(f"node {idx} breaks the level order")
        return {
            "nodes": n,
            "internal": n - 2,
            "vars": len(self._names),
            "cache_entries": len(self._cache),
        }

    def clear_cache(self) -> None:
        self._cache.clear()

    # -- integer bundles ---------------------------------------------

    def value_cube(self, bundle: VarBundle, value: int) -> int:
        return self.cube(bundle.bits_of(value))

    def domain_cube(self, bundle: VarBundle) -> int:
        # comparator for offset <= hi - lo, assembled from the LSB up
        node = TRUE
        span = bundle.hi - bundle.lo
        for i, lvl in enumerate(reversed(bundle.levels)):
            if (span >> i) & 1:
                node = self._make(lvl, TRUE, node)
            else:
                node = self._make(lvl, node, FALSE)
        return node

    def pick_least(self, u: int, bundle: VarBundle) -> tuple[int, int]:
        """Smallest bundle value in the set, plus the narrowed set."""
        for value in range(bundle.lo, bundle.hi + 1):
            t = self.band(u, self.value_cube(bundle, value))
            if t != FALSE:
                return value, t
        raise EmptySetError(f"no value of {bundle.name} satisfies the set")

    def project_values(self, u: int, bundle: VarBundle) -> tuple[int, ...]:
        own = set(bundle.levels)
        others = [lvl for lvl in self.support(u) if lvl not in own]
        shadow = self.exists(u, others)
        return tuple(v for v in range(bundle.lo, bundle.hi + 1)
                     if self.band(shadow, self.value_cube(bundle, v)) != FALSE)


@dataclass(frozen=True)
class VarBundle:
    """An integer in [lo, hi] spread over bit levels, most significant first."""

    name: str
    lo: int
    hi: int
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"{self.name}: empty range {self.lo}..{self.hi}")
        if len(self.levels) != (self.hi - self.lo).bit_length():
            raise ValueError(
                f"{self.name}: {len(self.levels)} bits cannot hold {self.lo}..{self.hi}")
        if list(self.levels) != sorted(set(self.levels)):
            raise ValueError(f"{self.name}: bundle levels must be strictly increasing")

    @property
    def nbits(self) -> int:
        return len(self.levels)

    def bits_of(self, value: int) -> dict[int, bool]:
        if not self.lo <= value <= self.hi:
            raise ValueError(f"{self.name}: {value} outside {self.lo}..{self.hi}")
        off = value - self.lo
        n = self.nbits
        return {lvl: bool((off >> (n - 1 - i)) & 1) for i, lvl in enumerate(self.levels)}

    def decode(self, assignment: dict[int, bool]) -> int:
        off = 0
        for lvl in self.levels:
            off = (off << 1) | (1 if assignment.get(lvl, False) else 0)
        return self.lo + off


@dataclass(frozen=True, eq=False)
class SymbolicSet:
    """Operator sugar over a manager node."""

    manager: BddManager
    node: int

    def _peer(self, other: "SymbolicSet") -> int:
        if not isinstance(other, SymbolicSet):
            raise TypeError(f"expected SymbolicSet, got {type(other).__name__}")
        if other.manager is not self.manager:
            raise ManagerMismatchError("operands come from different managers")
        return other.node

    def __and__(self, other: "SymbolicSet") -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.band(self.node, self._peer(other)))

    def __or__(self, other: "SymbolicSet") -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.bor(self.node, self._peer(other)))

    def __xor__(self, other: "SymbolicSet") -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.bxor(self.node, self._peer(other)))

    def __sub__(self, other: "SymbolicSet") -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.bdiff(self.node, self._peer(other)))

    def __invert__(self) -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.bnot(self.node))

    def __bool__(self) -> bool:
        return self.node != FALSE

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolicSet):
            return NotImplemented
        return self.manager is other.manager and self.node == other.node

    def __hash__(self) -> int:
        return hash((id(self.manager), self.node))

    def exists(self, levels) -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.exists(self.node, levels))

    def forall(self, levels) -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.forall(self.node, levels))

    def rename(self, mapping: dict[int, int]) -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.rename(self.node, mapping))

    def restrict(self, consts: dict[int, bool]) -> "SymbolicSet":
        return SymbolicSet(self.manager, self.manager.restrict(self.node, consts))


def mk_var(manager: BddManager, index: int) -> SymbolicSet:
    return SymbolicSet(manager, manager.var(index))


@dataclass(frozen=True, eq=False)
class SymbolicRelation:
    """Transition relation over (current, label, next) variable banks.

    Rigid levels (say, read-only inputs with no next-state copy) may
    appear on either side of a product; they are never quantified and
    never renamed.
    """

    manager: BddManager
    node: int
    pairs: tuple[tuple[int, int], ...]  # (current level, next level)
    label_levels: tuple[int, ...] = ()
    rigid_levels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        flat = [lvl for pair in self.pairs for lvl in pair]
        flat.extend(self.label_levels)
        flat.extend(self.rigid_levels)
        if len(set(flat)) != len(flat):
            raise UnpairedBundleError("current/next/label banks overlap")

    @property
    def current_levels(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.pairs)

    @property
    def next_levels(self) -> tuple[int, ...]:
        return tuple(n for _, n in self.pairs)

    def to_next(self) -> dict[int, int]:
        return {c: n for c, n in self.pairs}

    def to_current(self) -> dict[int, int]:
        return {n: c for c, n in self.pairs}

    def _check_side(self, x: SymbolicSet, allowed: set[int]) -> None:
        if x.manager is not self.manager:
            raise ManagerMismatchError("relation and set come from different managers")
        stray = [lvl for lvl in self.manager.support(x.node) if lvl not in allowed]
        if stray:
            raise UnpairedBundleError(f"set mentions levels outside the paired banks: {stray}")


def relprod_pre(t: SymbolicRelation, x: SymbolicSet) -> SymbolicSet:
    """{ s | exists label, s': T(s, label, s') and X(s') }.

    X is given over the next bank (label and rigid levels allowed);
    the result lands on the current bank.
    """
    t._check_side(x, set(t.next_levels) | set(t.label_levels) | set(t.rigid_levels))
    m = t.manager
    qs = list(t.next_levels) + list(t.label_levels)
    return SymbolicSet(m, m.and_exists(t.node, x.node, qs))


def relprod_post(t: SymbolicRelation, x: SymbolicSet) -> SymbolicSet:
    """Forward image of X (over the current bank), renamed back onto
    the current bank so images can be iterated."""
    t._check_side(x, set(t.current_levels) | set(t.label_levels) | set(t.rigid_levels))
    m = t.manager
    qs = list(t.current_levels) + list(t.label_levels)
    img = m.and_exists(t.node, x.node, qs)
    return SymbolicSet(m, m.rename(img, t.to_current()))
