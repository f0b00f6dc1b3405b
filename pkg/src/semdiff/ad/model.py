"""Activity diagrams and their token-game semantics.

Tokens live on edges.  Decision, merge, fork, join and final nodes fire
silently; action nodes fire observably.  Silent firings are closed off
before an action fires, never after, so the configurations produced by
observable steps are the raw post-action ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


# ---------------------------------------------------------------- expressions

class ExprTypeError(ValueError):
    pass


@dataclass(frozen=True)
class IntLit:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arith:
    op: str  # + -
    left: object
    right: object

    def __str__(self) -> str:
        # + and - are left-associative; parenthesize a right-nested chain so
        # the printed form parses back to this exact tree.
        rhs = f"({self.right})" if isinstance(self.right, Arith) else str(self.right)
        return f"{self.left} {self.op} {rhs}"


@dataclass(frozen=True)
class Cmp:
    op: str  # < <= > >= == !=
    left: object
    right: object

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


_BOOL_PREC = {"||": 1, "&&": 2}


@dataclass(frozen=True)
class BoolOp:
    op: str  # && ||
    left: object
    right: object

    def __str__(self) -> str:
        def side(e: object, right: bool) -> str:
            if isinstance(e, BoolOp):
                p, q = _BOOL_PREC[e.op], _BOOL_PREC[self.op]
                if p < q or (p == q and right):
                    return f"({e})"
            return str(e)
        return f"{side(self.left, False)} {self.op} {side(self.right, True)}"


@dataclass(frozen=True)
class Not:
    operand: object

    def __str__(self) -> str:
        inner = self.operand
        if isinstance(inner, (BoolOp, Cmp)):
            return f"!({inner})"
        return f"!{inner}"


def expr_vars(e: object) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, IntLit):
        return set()
    if isinstance(e, Not):
        return expr_vars(e.operand)
    if isinstance(e, (Arith, Cmp, BoolOp)):
        return expr_vars(e.left) | expr_vars(e.right)
    raise ExprTypeError(f"not an expression: {e!r}")


def eval_int(e: object, env: dict[str, int]) -> int:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Arith):
        a, b = eval_int(e.left, env), eval_int(e.right, env)
        return a + b if e.op == "+" else a - b
    raise ExprTypeError(f"expected an integer expression: {e}")


def eval_bool(e: object, env: dict[str, int]) -> bool:
    if isinstance(e, Cmp):
        a, b = eval_int(e.left, env), eval_int(e.right, env)
        return {"<": a < b, "<=": a <= b, ">": a > b,
                ">=": a >= b, "==": a == b, "!=": a != b}[e.op]
    if isinstance(e, BoolOp):
        if e.op == "&&":
            return eval_bool(e.left, env) and eval_bool(e.right, env)
        return eval_bool(e.left, env) or eval_bool(e.right, env)
    if isinstance(e, Not):
        return not eval_bool(e.operand, env)
    raise ExprTypeError(f"expected a boolean expression: {e}")


def check_int_expr(e: object) -> None:
    if isinstance(e, (IntLit, Var)):
        return
    if isinstance(e, Arith):
        check_int_expr(e.left)
        check_int_expr(e.right)
        return
    raise ExprTypeError(f"not an integer expression: {e}")


def check_bool_expr(e: object) -> None:
    if isinstance(e, Cmp):
        check_int_expr(e.left)
        check_int_expr(e.right)
        return
    if isinstance(e, BoolOp):
        check_bool_expr(e.left)
        check_bool_expr(e.right)
        return
    if isinstance(e, Not):
        check_bool_expr(e.operand)
        return
    raise ExprTypeError(f"not a boolean expression: {e}")


# --------------------------------------------------------------------- errors

class AdValidationError(ValueError):
    pass


class SilentCycleError(AdValidationError):
    pass


class BadDegreeError(AdValidationError):
    pass


class UndeclaredVariableError(AdValidationError):
    pass


class EmptyRangeError(AdValidationError):
    pass


class MissingGuardError(AdValidationError):
    pass


class MisplacedGuardError(AdValidationError):
    pass


class InputAssignmentError(AdValidationError):
    pass


class UnsafeTokenError(RuntimeError):
    """Firing would place a second token on an occupied edge."""


class RangeViolationError(RuntimeError):
    """Effect drove a variable outside its declared range."""

    def __init__(self, node: str, var: str, value: int) -> None:
        super().__init__(f"{node}: {var} := {value} leaves its declared range")
        self.node = node
        self.var = var
        self.value = value


# ---------------------------------------------------------------------- model

INITIAL, FINAL, ACTION, DECISION, MERGE, FORK, JOIN = (
    "initial", "final", "action", "decision", "merge", "fork", "join")

NODE_KINDS = (INITIAL, FINAL, ACTION, DECISION, MERGE, FORK, JOIN)
SILENT_KINDS = (INITIAL, FINAL, DECISION, MERGE, FORK, JOIN)


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int
    init: int | None = None  # None for inputs


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    # Action identity is the name, not the node id; two nodes may share one.
    action_name: str | None = None
    effects: tuple[tuple[str, object], ...] = ()

    def name(self) -> str:
        if self.kind != ACTION:
            raise ExprTypeError(f"{self.id} is not an action node")
        return self.action_name if self.action_name is not None else self.id


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    guard: object | None = None


@dataclass(frozen=True)
class ActivityDiagram:
    name: str
    inputs: tuple[VarDecl, ...]
    locals: tuple[VarDecl, ...]
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    def node(self, node_id: str) -> Node | None:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def out_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.source == node_id]

    def in_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.target == node_id]

    def variables(self) -> tuple[VarDecl, ...]:
        return self.inputs + self.locals

    def action_names(self) -> list[str]:
        return sorted({n.name() for n in self.nodes if n.kind == ACTION})


@dataclass(frozen=True)
class Configuration:
    """Tokens (edge ids) plus a variable valuation."""

    tokens: frozenset[str]
    valuation: tuple[tuple[str, int], ...]  # sorted by name

    @staticmethod
    def make(tokens, valuation: dict[str, int]) -> "Configuration":
        return Configuration(frozenset(tokens), tuple(sorted(valuation.items())))

    def env(self) -> dict[str, int]:
        return dict(self.valuation)

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.tokens)), self.valuation)


@dataclass(frozen=True)
class ObservableStep:
    action: str
    successor: Configuration


def validate_ad(ad: ActivityDiagram) -> ActivityDiagram:
    """Structural checks; returns ad unchanged so calls can be chained."""
    names: set[str] = set()
    for v in ad.variables():
        if v.name in names:
            raise AdValidationError(f"variable declared twice: {v.name}")
        names.add(v.name)
        if v.hi < v.lo:
            raise EmptyRangeError(f"{v.name}: empty range {v.lo}..{v.hi}")
        if v.init is not None and not (v.lo <= v.init <= v.hi):
            raise EmptyRangeError(f"{v.name}: initial value {v.init} outside {v.lo}..{v.hi}")
    node_ids: set[str] = set()
    for n in ad.nodes:
        if n.id in node_ids:
            raise AdValidationError(f"node declared twice: {n.id}")
        node_ids.add(n.id)
        if n.kind not in NODE_KINDS:
            raise AdValidationError(f"{n.id}: unknown node kind {n.kind}")
        if n.effects and n.kind != ACTION:
            raise AdValidationError(f"{n.id}: only action nodes carry effects")
    edge_ids: set[str] = set()
    input_names = {v.name for v in ad.inputs}
    for e in ad.edges:
        if e.id in edge_ids:
            raise AdValidationError(f"edge declared twice: {e.id}")
        edge_ids.add(e.id)
        for end in (e.source, e.target):
            if end not in node_ids:
                raise AdValidationError(f"edge {e.id} references unknown node {end}")

    initials = [n for n in ad.nodes if n.kind == INITIAL]
    if len(initials) != 1:
        raise BadDegreeError(f"{ad.name}: need exactly one initial node, have {len(initials)}")

    degree = {INITIAL: (0, 0, 1, 1), FINAL: (1, None, 0, 0), ACTION: (1, 1, 1, 1),
              DECISION: (1, 1, 2, None), MERGE: (2, None, 1, 1),
              FORK: (1, 1, 2, None), JOIN: (2, None, 1, 1)}
    for n in ad.nodes:
        ins, outs = len(ad.in_edges(n.id)), len(ad.out_edges(n.id))
        in_lo, in_hi, out_lo, out_hi = degree[n.kind]
        if ins < in_lo or (in_hi is not None and ins > in_hi):
            raise BadDegreeError(f"{n.id} ({n.kind}): {ins} incoming edge(s)")
        if outs < out_lo or (out_hi is not None and outs > out_hi):
            raise BadDegreeError(f"{n.id} ({n.kind}): {outs} outgoing edge(s)")

    for e in ad.edges:
        src = ad.node(e.source)
        assert src is not None
        if src.kind == DECISION and e.guard is None:
            raise MissingGuardError(f"edge {e.source} -> {e.target} needs a guard")
        if src.kind != DECISION and e.guard is not None:
            raise MisplacedGuardError(
                f"edge {e.source} -> {e.target}: only decision out-edges carry guards")
        if e.guard is not None:
            check_bool_expr(e.guard)
            for v in expr_vars(e.guard):
                if v not in names:
                    raise UndeclaredVariableError(f"guard on {e.id} uses undeclared {v}")

    for n in ad.nodes:
        for var, expr in n.effects:
            if var in input_names:
                raise InputAssignmentError(f"{n.id} assigns to input {var}")
            if var not in names:
                raise UndeclaredVariableError(f"{n.id} assigns undeclared {var}")
            check_int_expr(expr)
            for v in expr_vars(expr):
                if v not in names:
                    raise UndeclaredVariableError(f"{n.id}: effect uses undeclared {v}")

    # A cycle visiting silent nodes only would let the token game spin
    # without ever producing an action.
    silent = {n.id for n in ad.nodes if n.kind in SILENT_KINDS}
    color: dict[str, int] = {}

    def dfs(nid: str, stack: list[str]) -> None:
        color[nid] = 1
        stack.append(nid)
        for e in ad.out_edges(nid):
            if e.target not in silent:
                continue
            c = color.get(e.target, 0)
            if c == 1:
                raise SilentCycleError(
                    "cycle through silent nodes: " + " -> ".join(stack + [e.target]))
            if c == 0:
                dfs(e.target, stack)
        stack.pop()
        color[nid] = 2

    for nid in sorted(silent):
        if color.get(nid, 0) == 0:
            dfs(nid, [])
    return ad


def decision_warnings(ad: ActivityDiagram) -> list[str]:
    """Decisions whose guards provably leave some valuation with no exit.

    Checked by enumerating the guards' support variables; purely advisory
    (a stuck decision at run time just deadlocks that branch).
    """
    out: list[str] = []
    ranges = {v.name: (v.lo, v.hi) for v in ad.variables()}
    for n in ad.nodes:
        if n.kind != DECISION:
            continue
        guards = [e.guard for e in ad.out_edges(n.id)]
        support = sorted(set().union(*(expr_vars(g) for g in guards)) if guards else set())
        envs: list[dict[str, int]] = [{}]
        for v in support:
            lo, hi = ranges[v]
            envs = [dict(env, **{v: x}) for env in envs for x in range(lo, hi + 1)]
        for env in envs:
            if not any(eval_bool(g, env) for g in guards):
                out.append(f"{n.id}: no guard holds for {env}")
                break
    return out


def initial_configs(ad: ActivityDiagram) -> list[Configuration]:
    """One configuration per input valuation, token on the initial out-edge.

    Valuations are enumerated in lexicographic order of the declared inputs.
    """
    init_node = next(n for n in ad.nodes if n.kind == INITIAL)
    start_edge = ad.out_edges(init_node.id)[0]
    base = {v.name: v.init for v in ad.locals}
    combos: list[dict[str, int]] = [{}]
    for v in ad.inputs:
        combos = [dict(c, **{v.name: x}) for c in combos for x in range(v.lo, v.hi + 1)]
    return [Configuration.make({start_edge.id}, {**base, **c}) for c in combos]


def _fire_silent(ad: ActivityDiagram, c: Configuration) -> list[Configuration]:
    """All configurations one silent firing away from c."""
    out: list[Configuration] = []
    env = c.env()
    for n in ad.nodes:
        if n.kind not in SILENT_KINDS or n.kind == INITIAL:
            continue
        ins = ad.in_edges(n.id)
        if n.kind == FINAL:
            for e in ins:
                if e.id in c.tokens:
                    out.append(Configuration(c.tokens - {e.id}, c.valuation))
        elif n.kind == DECISION:
            e_in = ins[0]
            if e_in.id not in c.tokens:
                continue
            for e_out in ad.out_edges(n.id):
                if eval_bool(e_out.guard, env):
                    out.append(_move(c, {e_in.id}, {e_out.id}))
        elif n.kind == MERGE:
            e_out = ad.out_edges(n.id)[0]
            for e_in in ins:
                if e_in.id in c.tokens:
                    out.append(_move(c, {e_in.id}, {e_out.id}))
        elif n.kind == FORK:
            e_in = ins[0]
            if e_in.id in c.tokens:
                outs = {e.id for e in ad.out_edges(n.id)}
                out.append(_move(c, {e_in.id}, outs))
        elif n.kind == JOIN:
            if all(e.id in c.tokens for e in ins):
                e_out = ad.out_edges(n.id)[0]
                out.append(_move(c, {e.id for e in ins}, {e_out.id}))
    return out


def _move(c: Configuration, consume: set[str], produce: set[str]) -> Configuration:
    left = c.tokens - consume
    clash = left & produce
    if clash:
        raise UnsafeTokenError(f"second token on edge(s) {sorted(clash)}")
    return Configuration(left | produce, c.valuation)


def silent_closure(ad: ActivityDiagram, c: Configuration) -> frozenset[Configuration]:
    """Silent-quiescent configurations reachable from c.

    Only normal forms are returned; a configuration with a stuck decision
    (token present, no guard true) is quiescent and stays in the result.
    """
    seen = {c}
    queue = deque([c])
    quiescent: set[Configuration] = set()
    while queue:
        cur = queue.popleft()
        succs = _fire_silent(ad, cur)
        if not succs:
            quiescent.add(cur)
            continue
        for s in succs:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return frozenset(quiescent)


def stuck_decisions(ad: ActivityDiagram, c: Configuration) -> list[str]:
    """Decision nodes holding a token no guard lets out of c."""
    env = c.env()
    out = []
    for n in ad.nodes:
        if n.kind != DECISION:
            continue
        e_in = ad.in_edges(n.id)[0]
        if e_in.id in c.tokens and not any(
                eval_bool(e.guard, env) for e in ad.out_edges(n.id)):
            out.append(n.id)
    return out


def _apply_effects(ad: ActivityDiagram, node: Node, env: dict[str, int]) -> dict[str, int]:
    ranges = {v.name: (v.lo, v.hi) for v in ad.variables()}
    env = dict(env)
    for var, expr in node.effects:  # left to right; later effects see earlier writes
        val = eval_int(expr, env)
        lo, hi = ranges[var]
        if not (lo <= val <= hi):
            raise RangeViolationError(node.id, var, val)
        env[var] = val
    return env


def observable_steps(ad: ActivityDiagram, c: Configuration) -> list[ObservableStep]:
    """Actions fireable from c after closing silent firings (closure first,
    never after: successors are raw post-action configurations)."""
    steps: set[ObservableStep] = set()
    for cq in silent_closure(ad, c):
        for n in ad.nodes:
            if n.kind != ACTION:
                continue
            e_in = ad.in_edges(n.id)[0]
            if e_in.id not in cq.tokens:
                continue
            e_out = ad.out_edges(n.id)[0]
            env = _apply_effects(ad, n, cq.env())
            succ = _move(Configuration.make(cq.tokens, env), {e_in.id}, {e_out.id})
            steps.add(ObservableStep(n.name(), succ))
    return sorted(steps, key=lambda s: (s.action, s.successor.sort_key()))


def enabled_actions(ad: ActivityDiagram, c: Configuration) -> set[str]:
    return {s.action for s in observable_steps(ad, c)}


@dataclass
class ExplicitTS:
    """Reachable transition system: states in BFS discovery order."""

    states: list[Configuration]
    initial: list[int]
    steps: list[list[tuple[str, int]]]  # per state: (action, successor index)

    def index(self) -> dict[Configuration, int]:
        return {c: i for i, c in enumerate(self.states)}


def build_explicit_ts(ad: ActivityDiagram, *, state_budget: int = 100_000) -> ExplicitTS:
    states: list[Configuration] = []
    index: dict[Configuration, int] = {}
    steps: list[list[tuple[str, int]]] = []

    def intern(c: Configuration) -> int:
        if c not in index:
            index[c] = len(states)
            states.append(c)
            steps.append([])
        return index[c]

    initial = [intern(c) for c in initial_configs(ad)]
    queue = deque(initial)
    done: set[int] = set()
    while queue:
        i = queue.popleft()
        if i in done:
            continue
        done.add(i)
        if len(states) > state_budget:
            raise RuntimeError(f"state budget exceeded building TS for {ad.name}")
        for st in observable_steps(ad, states[i]):
            j = intern(st.successor)
            steps[i].append((st.action, j))
            if j not in done:
                queue.append(j)
    return ExplicitTS(states, initial, steps)


def is_observably_deterministic(ad: ActivityDiagram) -> bool:
    """No reachable state has two distinct successors under one action name."""
    ts = build_explicit_ts(ad)
    for outs in ts.steps:
        by_action: dict[str, set[int]] = {}
        for action, j in outs:
            by_action.setdefault(action, set()).add(j)
        if any(len(v) > 1 for v in by_action.values()):
            return False
    return True
