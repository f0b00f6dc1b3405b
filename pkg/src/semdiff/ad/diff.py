"""Semantic differencing of two activity diagrams.

The engine plays a backward reachability game on the symbolic product of
the two diagrams: the base set holds all state pairs where the left
diagram can take an action the right one cannot match, and each layer
adds the pairs from which the left diagram can force the game into the
previous layer in one joint step.  A forward pass then splits the
initial diff states into symbolic traces, one per action list, and a
replay against the explicit token semantics turns each of those into a
concrete, independently checked trace.

The pair game computes a simulation-style difference.  It coincides
with trace difference exactly when the right diagram is observably
deterministic and declares no input the left one lacks; results are
labelled accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..bdd import FALSE, TRUE, BddManager, SymbolicSet, VarBundle
from ..summary import PartitionKey, SummaryEntry, SummaryReport
from .encode import DEFAULT_BIT_BUDGET, ProductEncoding, encode_product
from .model import (ActivityDiagram, Configuration, initial_configs,
                    is_observably_deterministic, observable_steps)


class ReplayMismatchError(RuntimeError):
    """A symbolic result failed its explicit replay.  Never a property of
    the input models; this is the engine contradicting itself."""


@dataclass(frozen=True)
class DiffLayers:
    """Ascending chain of divergence sets; the index is the number of
    joint steps the left diagram needs to force non-correspondence."""

    manager: BddManager
    layers: tuple[SymbolicSet, ...]

    def __post_init__(self) -> None:
        prev: SymbolicSet | None = None
        for s in self.layers:
            if s.manager is not self.manager:
                raise ValueError("layer from a different manager")
            if prev is not None:
                if s.node == prev.node:
                    raise ValueError("repeated layer in the chain")
                if self.manager.band(prev.node, s.node) != prev.node:
                    raise ValueError("layers must grow monotonically")
            prev = s

    def depth(self) -> int:
        return len(self.layers) - 1

    def fixpoint(self) -> SymbolicSet:
        return self.layers[-1]


@dataclass(frozen=True)
class SymbolicTrace:
    """All divergences sharing one action list: the list itself plus the
    set of initial input valuations it starts from.

    exact_product records whether init_inputs is exactly the product of
    its per-variable projections; rendering per variable loses nothing
    iff it is.
    """

    actions: tuple[str, ...]
    init_inputs: SymbolicSet
    exact_product: bool
    bundles: tuple[VarBundle, ...]

    def __post_init__(self) -> None:
        if not self.actions:
            raise ValueError("a symbolic trace needs at least one action")
        if not self.init_inputs:
            raise ValueError("a symbolic trace needs a nonempty input set")


@dataclass(frozen=True)
class DiffTrace:
    """One concrete divergence: replaying `actions` from `valuation`
    succeeds in the left diagram; the right diagram matches every proper
    prefix but not the full list.  configs holds the left diagram's
    replay states, len(actions) + 1 of them."""

    valuation: tuple[tuple[str, int], ...]
    actions: tuple[str, ...]
    configs: tuple[Configuration, ...]
    constraint: str


def non_correspondence(enc: ProductEncoding) -> SymbolicSet:
    """Pairs where the left diagram has an enabled action the right one
    does not, restricted to in-range input valuations on both sides."""
    m = enc.manager
    d0 = FALSE
    for a in enc.alphabet:
        en1 = enc.left.en_by_action.get(a, FALSE)
        en2 = enc.right.en_by_action.get(a, FALSE)
        d0 = m.bor(d0, m.bdiff(en1, en2))
    d0 = m.band(d0, m.band(enc.left.input_domain, enc.right.input_domain))
    return SymbolicSet(m, d0)


def backward_fixpoint(enc: ProductEncoding, d0: SymbolicSet) -> DiffLayers:
    """Least fixpoint of the one-step forcing operator over d0.

    A pair joins layer k+1 when for some action the left diagram has a
    successor, the action is enabled on the right, and every right
    successor lands the pair in layer k.  Inputs have no next-state
    copy, so they pass through the step untouched.
    """
    m = enc.manager
    ren = {**enc.left.cur_to_next(), **enc.right.cur_to_next()}
    nxt1 = enc.left.next_levels()
    nxt2 = enc.right.next_levels()

    d = d0.node
    layers = [d]
    while True:
        dn = m.rename(d, ren)
        new = d
        for a in enc.alphabet:
            t1 = enc.left.t_by_action.get(a, FALSE)
            en2 = enc.right.en_by_action.get(a, FALSE)
            if t1 == FALSE or en2 == FALSE:
                # no left move, or divergence already charged to d0
                continue
            t2 = enc.right.t_by_action[a]
            replies = m.forall(m.bor(m.bnot(t2), dn), nxt2)
            step = m.and_exists(t1, m.band(en2, replies), nxt1)
            new = m.bor(new, step)
        if new == d:
            break
        layers.append(new)
        d = new
    return DiffLayers(m, tuple(SymbolicSet(m, x) for x in layers))


def initial_diff_states(enc: ProductEncoding, layers: DiffLayers) -> SymbolicSet:
    """Paired initial states (shared inputs equal) inside the fixpoint."""
    m = enc.manager
    node = m.band(m.band(enc.left.init, enc.right.init),
                  m.band(enc.input_match, layers.fixpoint().node))
    return SymbolicSet(m, node)


def forward_split(enc: ProductEncoding, layers: DiffLayers) -> list[SymbolicTrace]:
    """Split the initial diff states into one symbolic trace per action
    list, shortest first per initial state.

    Frontiers start at the initial pairs grouped by minimal layer and
    descend one layer per joint action, so every branch reaches the base
    set in exactly as many steps as its group index; the divergence
    action closes the branch.  Initial left valuations no right initial
    state can pair with never enter the game, yet the right diagram has
    no run at all there, so each of their first actions diverges; they
    are emitted as one-action traces.
    """
    m = enc.manager
    report = enc.report_levels()
    found: dict[tuple[str, ...], int] = {}

    def emit(prefix: list[str], leaf: int) -> None:
        # inputs are rigid, so projecting the leaf recovers the
        # valuations the whole branch started from
        inputs = m.exists(leaf, [lvl for lvl in m.support(leaf)
                                 if lvl not in report])
        key = tuple(prefix)
        found[key] = m.bor(found.get(key, FALSE), inputs)

    cur = enc.left.cur_state_levels() + enc.right.cur_state_levels()
    ren = {**enc.left.next_to_cur(), **enc.right.next_to_cur()}

    def descend(pairs: int, d: int, prefix: list[str]) -> None:
        if d == 0:
            for a in enc.alphabet:
                en1 = enc.left.en_by_action.get(a, FALSE)
                en2 = enc.right.en_by_action.get(a, FALSE)
                leaf = m.band(pairs, m.bdiff(en1, en2))
                if leaf != FALSE:
                    emit(prefix + [a], leaf)
            return
        below = layers.layers[d - 1].node
        for a in enc.alphabet:
            t1 = enc.left.t_by_action.get(a, FALSE)
            t2 = enc.right.t_by_action.get(a, FALSE)
            joint = m.band(pairs, m.band(t1, t2))
            if joint == FALSE:
                continue
            img = m.band(m.rename(m.exists(joint, cur), ren), below)
            if img != FALSE:
                descend(img, d - 1, prefix + [a])

    init = initial_diff_states(enc, layers).node
    prev = FALSE
    for d, layer in enumerate(layers.layers):
        group = m.band(init, m.bdiff(layer.node, prev))
        prev = layer.node
        if group != FALSE:
            descend(group, d, [])

    matched = m.exists(m.band(enc.right.init, enc.input_match),
                       enc.right.cur_state_levels() + enc.right.input_levels())
    unmatched = m.band(enc.left.init, m.bnot(matched))
    if unmatched != FALSE:
        for a, en1 in sorted(enc.left.en_by_action.items()):
            leaf = m.band(unmatched, en1)
            if leaf != FALSE:
                emit([a], leaf)

    return [_input_family(enc, actions, found[actions])
            for actions in sorted(found)]


def _input_family(enc: ProductEncoding, actions: tuple[str, ...],
                  node: int) -> SymbolicTrace:
    m = enc.manager
    bundles = tuple(enc.report_bundles())
    levels = enc.report_levels()
    product = TRUE
    for b in bundles:
        own = set(b.levels)
        product = m.band(product, m.exists(node, [lvl for lvl in levels
                                                  if lvl not in own]))
    return SymbolicTrace(actions, SymbolicSet(m, node),
                         product == node, bundles)


def trace_exact(ad1: ActivityDiagram, ad2: ActivityDiagram) -> bool:
    """Does the pair game decide trace difference for this direction?

    Yes iff the right diagram is observably deterministic and every
    input it declares is also an input of the left one (otherwise the
    right side could dodge divergence by picking inputs or successors
    the pairing fixes arbitrarily).
    """
    names1 = {v.name for v in ad1.inputs}
    names2 = {v.name for v in ad2.inputs}
    return names2 <= names1 and is_observably_deterministic(ad2)


def render_inputs(st: SymbolicTrace) -> str:
    """Per-variable range rendering of a trace's initial input set,
    e.g. "tickets ∈ [0..7]"; multiple maximal runs join with " ∪ " and
    an inexact product gets a "(projection)" qualifier."""
    m = st.init_inputs.manager
    parts = []
    for b in st.bundles:
        values = m.project_values(st.init_inputs.node, b)
        runs: list[list[int]] = []
        for v in values:
            if runs and v == runs[-1][1] + 1:
                runs[-1][1] = v
            else:
                runs.append([v, v])
        ranges = " ∪ ".join(f"[{lo}..{hi}]" for lo, hi in runs)
        parts.append(f"{b.name} ∈ {ranges}")
    text = "; ".join(parts)
    if not st.exact_product:
        text += " (projection)"
    return text


def _replay(ad: ActivityDiagram, at: Configuration,
            actions: tuple[str, ...]) -> list[Configuration] | None:
    """Leftmost path through ad realizing the action list, if any."""
    if not actions:
        return [at]
    for step in observable_steps(ad, at):
        if step.action != actions[0]:
            continue
        tail = _replay(ad, step.successor, actions[1:])
        if tail is not None:
            return [at] + tail
    return None


def concretize(enc: ProductEncoding, layers: DiffLayers, st: SymbolicTrace,
               *, exact: bool | None = None) -> DiffTrace:
    """Pick the least valuation of st and replay it explicitly.

    The left diagram must realize the full action list.  When the
    direction is trace-exact the right diagram is co-replayed as a state
    set and must match every proper prefix but not the final action;
    under simulation semantics those two checks do not hold in general
    and are skipped.  Any violated check raises ReplayMismatchError.
    """
    if exact is None:
        exact = trace_exact(enc.left.ad, enc.right.ad)
    m = enc.manager
    chosen = m.pick_one(st.init_inputs.node, list(st.bundles))
    ad1, ad2 = enc.left.ad, enc.right.ad
    valuation = tuple(sorted((v.name, chosen[v.name]) for v in ad1.inputs))

    pinned = dict(valuation)
    start = [c for c in initial_configs(ad1)
             if all(c.env()[k] == v for k, v in pinned.items())]
    if len(start) != 1:
        raise ReplayMismatchError(
            f"{ad1.name}: {len(start)} initial states for {valuation}")
    path = _replay(ad1, start[0], st.actions)
    if path is None:
        raise ReplayMismatchError(
            f"{ad1.name} cannot replay {list(st.actions)} from {valuation}")

    shared = {v.name for v in ad2.inputs} & set(pinned)
    states = {c for c in initial_configs(ad2)
              if all(c.env()[k] == pinned[k] for k in shared)}
    for i, a in enumerate(st.actions[:-1]):
        states = {s.successor for c in states
                  for s in observable_steps(ad2, c) if s.action == a}
        if exact and not states:
            raise ReplayMismatchError(
                f"{ad2.name} cannot match the prefix {list(st.actions[:i + 1])}")
    if exact and any(s.action == st.actions[-1]
                     for c in states for s in observable_steps(ad2, c)):
        raise ReplayMismatchError(
            f"{ad2.name} matches the whole of {list(st.actions)}")

    return DiffTrace(valuation, st.actions, tuple(path), render_inputs(st))


def summarize_action_list(enc: ProductEncoding, layers: DiffLayers,
                          traces: list[SymbolicTrace],
                          *, exact: bool | None = None) -> SummaryReport:
    """One entry per action list, annotated with its input constraint."""
    entries = []
    for st in traces:
        rep = concretize(enc, layers, st, exact=exact)
        entries.append(SummaryEntry(PartitionKey.action_list(st.actions),
                                    rep, rep.constraint))
    entries.sort(key=lambda e: e.key.payload)
    return SummaryReport((enc.left.ad.name, enc.right.ad.name),
                         "action-list", entries)


def summarize_action_set(enc: ProductEncoding, layers: DiffLayers,
                         traces: list[SymbolicTrace],
                         *, exact: bool | None = None) -> SummaryReport:
    """One entry per action-name set.

    The representative is the first trace of the class (the least action
    list, traces being sorted); the annotation covers the whole class,
    so it renders the union of the members' input sets.
    """
    m = enc.manager
    clusters: dict[PartitionKey, list[SymbolicTrace]] = {}
    for st in traces:
        clusters.setdefault(PartitionKey.action_set(st.actions), []).append(st)
    entries = []
    for key, members in clusters.items():
        union = FALSE
        for st in members:
            union = m.bor(union, st.init_inputs.node)
        family = _input_family(enc, members[0].actions, union)
        rep = concretize(enc, layers, members[0], exact=exact)
        entries.append(SummaryEntry(key, rep, render_inputs(family)))
    entries.sort(key=lambda e: e.key.payload)
    return SummaryReport((enc.left.ad.name, enc.right.ad.name),
                         "action-set", entries)


@dataclass(frozen=True)
class AdDiffResult:
    """Directional diff of two activity diagrams, fully summarized.

    semantics is "trace" when the symbolic game decides trace difference
    for this direction and "simulation" when it may only witness a
    failure of simulation (see trace_exact)."""

    left_name: str
    right_name: str
    semantics: str
    traces: tuple[SymbolicTrace, ...]
    action_lists: SummaryReport
    action_sets: SummaryReport

    @property
    def has_diffs(self) -> bool:
        return bool(self.traces)


def addiff(ad1: ActivityDiagram, ad2: ActivityDiagram,
           *, bit_budget: int = DEFAULT_BIT_BUDGET) -> AdDiffResult:
    """Diff traces of ad1 against ad2: divergences of ad1 the other
    diagram cannot follow, one symbolic trace per action list."""
    exact = trace_exact(ad1, ad2)
    enc = encode_product(ad1, ad2, bit_budget=bit_budget)
    layers = backward_fixpoint(enc, non_correspondence(enc))
    traces = forward_split(enc, layers)
    return AdDiffResult(
        ad1.name, ad2.name,
        "trace" if exact else "simulation",
        tuple(traces),
        summarize_action_list(enc, layers, traces, exact=exact),
        summarize_action_set(enc, layers, traces, exact=exact))
