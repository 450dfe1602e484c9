"""Explicit finite epistemic states.

An :class:`EpistemicState` lists its admissible states, labels each with
a finite generator set (standing for its deductive closure) and carries a
strict preference order as a set of ``(lower, higher)`` pairs. These
objects are deliberately naive: they serve as the brute-force oracle the
flock operations are checked against.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Mapping

from . import logic
from .errors import EmptyFlock, SignatureTooLarge, TautologyContraction, TooLarge
from .flock import EMPTY_BASE, render_base
from .logic import Formula, as_formula

MAX_STATES = 1 << 16


@dataclass(frozen=True, eq=False)
class EpistemicState:
    states: frozenset
    label: Mapping[Hashable, frozenset]
    prefer: frozenset = frozenset()
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "prefer", frozenset(self.prefer))
        object.__setattr__(self, "label", {s: frozenset(self.label[s]) for s in self.states})
        if self.validate:
            self._check()

    def _check(self):
        above = self.above
        for s, t in self.prefer:
            if s == t:
                raise ValueError(f"preference is not irreflexive at {s!r}")
            if s not in self.states or t not in self.states:
                raise ValueError(f"preference mentions unknown state in {(s, t)!r}")
            if not above[t] <= above[s]:
                raise ValueError("preference is not transitive")

    def __eq__(self, other):
        if not isinstance(other, EpistemicState):
            return NotImplemented
        return (self.states == other.states and self.prefer == other.prefer
                and self.label == other.label)

    __hash__ = None

    def __len__(self):
        return len(self.states)

    @cached_property
    def above(self) -> dict:
        up = {s: set() for s in self.states}
        for s, t in self.prefer:
            up[s].add(t)
        return {s: frozenset(v) for s, v in up.items()}

    @cached_property
    def below(self) -> dict:
        down = {s: set() for s in self.states}
        for s, t in self.prefer:
            down[t].add(s)
        return {s: frozenset(v) for s, v in down.items()}

    @cached_property
    def signature(self) -> tuple:
        return logic.signature(f for s in self.states for f in self.label[s])

    def label_models(self, sig=None) -> dict:
        sig = self.signature if sig is None else sig
        return {s: logic.models(self.label[s], sig) for s in self.states}

    def maximal_states(self) -> frozenset:
        return frozenset(s for s in self.states if not self.above[s])

    def restrict(self, keep) -> "EpistemicState":
        keep = frozenset(keep)
        return EpistemicState(
            keep, {s: self.label[s] for s in keep},
            frozenset((s, t) for s, t in self.prefer if s in keep and t in keep),
            validate=False)


@dataclass(frozen=True)
class BeliefSummary:
    maximal_states: frozenset
    belief_formula: Formula


def _label_key(gens) -> str:
    return render_base(gens)


# ---------------------------------------------------------------------------
# Construction


def downset(F, include_empty: bool = False) -> frozenset:
    """All subsets of the bases of ``F`` (nonempty unless requested)."""
    total = sum(1 << len(b) for b in F)
    if total > MAX_STATES:
        raise TooLarge(f"flock downset may reach {total} states, limit is {MAX_STATES}")
    out = set()
    for base in F:
        members = list(base)
        for k in range(0 if include_empty else 1, len(members) + 1):
            out.update(frozenset(c) for c in combinations(members, k))
    return frozenset(out)


def generate(F, include_empty: bool = False) -> EpistemicState:
    """Epistemic state generated by a flock.

    States are the nonempty subsets of the bases, labelled by themselves and
    ordered by strict inclusion. With ``include_empty`` the empty subset is
    kept as a bottom state labelled by the trivial theory; the product-based
    merge and expansion correspond to flock operations in that form.
    """
    if include_empty and not F:
        F = frozenset([EMPTY_BASE])
    states = downset(F, include_empty)
    if not states:
        raise EmptyFlock("flock has no nonempty base")
    by_size = defaultdict(list)
    for s in states:
        by_size[len(s)].append(s)
    prefer = set()
    for s in states:
        for k, group in by_size.items():
            if k > len(s):
                prefer.update((s, t) for t in group if s < t)
    return EpistemicState(states, {s: s for s in states}, frozenset(prefer), validate=False)


def trivial_state() -> EpistemicState:
    """The one-state epistemic state labelled by the trivial theory."""
    return EpistemicState({EMPTY_BASE}, {EMPTY_BASE: EMPTY_BASE})


def proposition_state(f) -> EpistemicState:
    """Two states, ``Th(())`` below ``Th(f)``: the state generated by ``{f}``."""
    f = as_formula(f)
    top = frozenset([f])
    return EpistemicState({EMPTY_BASE, top}, {EMPTY_BASE: EMPTY_BASE, top: top},
                          {(EMPTY_BASE, top)})


# ---------------------------------------------------------------------------
# Beliefs and structural predicates


def belief_summary(E: EpistemicState) -> BeliefSummary:
    """Maximal states and a formula for what holds in all of them.

    With no states at all the summary is ``true`` (only tautologies held).
    """
    maximal = E.maximal_states()
    labels = sorted({E.label[s] for s in maximal}, key=_label_key)
    if not labels:
        return BeliefSummary(maximal, logic.TOP)
    formula = logic.disjoin(logic.conjoin(logic.sort_formulas(l)) for l in labels)
    return BeliefSummary(maximal, formula)


def believes(E: EpistemicState, f) -> bool:
    return logic.entails([belief_summary(E).belief_formula], as_formula(f))


def _includes(models_small_theory, models_big_theory):
    # Th(X) <= Th(Y)  iff  models(Y) <= models(X)
    return models_big_theory & ~models_small_theory == 0


def is_persistent(E: EpistemicState) -> bool:
    m = E.label_models()
    return all(_includes(m[s], m[t]) for s, t in E.prefer)


def is_pure(E: EpistemicState) -> bool:
    m = E.label_models()
    for s in E.states:
        for t in E.states:
            weakly_preferred = s == t or (s, t) in E.prefer
            if weakly_preferred != _includes(m[s], m[t]):
                return False
    return True


def is_determinate(E: EpistemicState) -> bool:
    return len(E.maximal_states()) == 1


# ---------------------------------------------------------------------------
# Change operations


def contract_estate(E: EpistemicState, f) -> EpistemicState:
    """Drop every state whose label entails ``f``."""
    f = as_formula(f)
    sig = logic.signature([f, *(g for s in E.states for g in E.label[s])])
    goal = logic.truth_table(f, sig)
    keep = [s for s in E.states if logic.models(E.label[s], sig) & ~goal != 0]
    if not keep and logic.is_tautology(f):
        raise TautologyContraction(
            f"cannot contract by tautology {logic.render_formula(f)}")
    return E.restrict(keep)


def pure_merge(E1: EpistemicState, E2: EpistemicState) -> EpistemicState:
    """Product of two states: pair states, union labels, componentwise order."""
    count = len(E1.states) * len(E2.states)
    if count > MAX_STATES:
        raise TooLarge(f"merge would have {count} states, limit is {MAX_STATES}")
    states = [(a, b) for a in E1.states for b in E2.states]
    label = {(a, b): E1.label[a] | E2.label[b] for a, b in states}
    up1 = {a: E1.above[a] | {a} for a in E1.states}
    up2 = {b: E2.above[b] | {b} for b in E2.states}
    prefer = frozenset(
        ((a, b), (c, d))
        for a, b in states
        for c in up1[a] for d in up2[b]
        if (c, d) != (a, b))
    return EpistemicState(frozenset(states), label, prefer, validate=False)


def expand_estate(E: EpistemicState, f) -> EpistemicState:
    return pure_merge(E, proposition_state(f))


# ---------------------------------------------------------------------------
# Comparison


def _refine(colors, nodes, above, below):
    """Colour refinement on the order; returns a canonical colour map."""
    while True:
        sig = {v: (colors[v],
                   tuple(sorted(colors[u] for u in above[v])),
                   tuple(sorted(colors[u] for u in below[v])))
               for v in nodes}
        palette = {c: i for i, c in enumerate(sorted(set(sig.values())))}
        new = {v: palette[sig[v]] for v in nodes}
        if len(palette) == len(set(colors.values())):
            return new
        colors = new


def isomorphic(E1: EpistemicState, E2: EpistemicState) -> bool:
    """Order isomorphism mapping labels to logically equivalent labels.

    Backtracking search over candidate images, pruned by colour refinement
    seeded with label truth tables and re-run after each choice.
    """
    if len(E1.states) != len(E2.states) or len(E1.prefer) != len(E2.prefer):
        return False
    if len(E1.states) > MAX_STATES:
        raise TooLarge("state space too large for isomorphism search")
    sig = tuple(sorted(set(E1.signature) | set(E2.signature)))
    m1, m2 = E1.label_models(sig), E2.label_models(sig)
    # Tag nodes by side so the two graphs share one colour space.
    nodes = [(0, s) for s in E1.states] + [(1, s) for s in E2.states]
    above = {(0, s): [(0, t) for t in E1.above[s]] for s in E1.states}
    above.update({(1, s): [(1, t) for t in E2.above[s]] for s in E2.states})
    below = {(0, s): [(0, t) for t in E1.below[s]] for s in E1.states}
    below.update({(1, s): [(1, t) for t in E2.below[s]] for s in E2.states})
    colors = {(0, s): (m1[s], 0) for s in E1.states}
    colors.update({(1, s): (m2[s], 0) for s in E2.states})
    return _search(_refine(colors, nodes, above, below), nodes, above, below, E1, E2)


def _balanced(colors, nodes):
    count = defaultdict(lambda: [0, 0])
    for side, s in nodes:
        count[colors[(side, s)]][side] += 1
    return all(a == b for a, b in count.values()), count


def _search(colors, nodes, above, below, E1, E2) -> bool:
    ok, count = _balanced(colors, nodes)
    if not ok:
        return False
    open_classes = [c for c, (a, _) in count.items() if a > 1]
    if not open_classes:
        image = {}
        by_color = {colors[(1, s)]: s for s in E2.states}
        for s in E1.states:
            image[s] = by_color[colors[(0, s)]]
        return all((image[s], image[t]) in E2.prefer for s, t in E1.prefer)
    target = min(open_classes, key=lambda c: (count[c][0], c))
    left = min((v for v in nodes if v[0] == 0 and colors[v] == target), key=repr)
    fresh = max(colors.values()) + 1
    for right in sorted((v for v in nodes if v[0] == 1 and colors[v] == target), key=repr):
        trial = dict(colors)
        trial[left] = trial[right] = fresh
        if _search(_refine(trial, nodes, above, below), nodes, above, below, E1, E2):
            return True
    return False


def _boolean_functions(n: int) -> range:
    return range(1 << (1 << n))


def behaviorally_equivalent(E1: EpistemicState, E2: EpistemicState, depth: int = 2) -> bool:
    """Bounded check that contraction sequences never separate the beliefs.

    Every non-tautological boolean function over the joint signature (at
    most three atoms) is tried at each step; belief sets are compared at
    every prefix up to ``depth`` contractions. This only approximates full
    equivalence of epistemic states.
    """
    sig = tuple(sorted(set(E1.signature) | set(E2.signature)))
    if len(sig) > 3:
        raise SignatureTooLarge(f"behavioural check supports 3 atoms, got {len(sig)}")
    full = logic.full_mask(len(sig))
    m1, m2 = E1.label_models(sig), E2.label_models(sig)

    def belief(E, m, alive):
        beliefs = 0
        any_max = False
        for s in alive:
            if not (E.above[s] & alive):
                beliefs |= m[s]
                any_max = True
        return beliefs if any_max else full

    goals = [g for g in _boolean_functions(len(sig)) if g != full]
    frontier = {(E1.states, E2.states)}
    seen = set(frontier)
    for step in range(depth + 1):
        for a, b in frontier:
            if belief(E1, m1, a) != belief(E2, m2, b):
                return False
        if step == depth:
            break
        nxt = set()
        for a, b in frontier:
            for g in goals:
                pair = (frozenset(s for s in a if m1[s] & ~g),
                        frozenset(s for s in b if m2[s] & ~g))
                if pair not in seen:
                    seen.add(pair)
                    nxt.add(pair)
        frontier = nxt
    return True


# ---------------------------------------------------------------------------
# Debug dump


def dump(E: EpistemicState) -> str:
    """One line per state: ``id : {generators} ; above: [ids]``.

    States are numbered in order of label size, then label text.
    """
    order = sorted(E.states, key=lambda s: (len(E.label[s]), _label_key(E.label[s]), repr(s)))
    ids = {s: i for i, s in enumerate(order)}
    lines = []
    for s in order:
        ups = sorted(ids[t] for t in E.above[s])
        lines.append(f"{ids[s]} : {_label_key(E.label[s])} ; above: [{', '.join(map(str, ups))}]")
    return "\n".join(lines) + "\n"
