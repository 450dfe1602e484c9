"""Randomized checks of flock operations against explicit epistemic states.

Every check is a pure function of its :class:`TrialConfig`: trial ``i`` draws
from ``random.Random(f"{seed}:{name}:{i}")`` so reports are reproducible
byte for byte and independent of how many trials were requested.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import estate, flock, logic
from .errors import FlocksError
from .estate import EpistemicState
from .logic import And, Atom, Formula, Iff, Implies, Not, Or

ATOM_NAMES = ("p", "q", "r", "s")


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 100
    atoms: int = 3
    max_bases: int = 3
    max_base_size: int = 3
    max_formula_depth: int = 2

    def __post_init__(self):
        if not 1 <= self.atoms <= 4:
            raise ValueError("atoms must be between 1 and 4")
        if not 1 <= self.max_bases <= 4 or not 1 <= self.max_base_size <= 4:
            raise ValueError("max_bases and max_base_size must be between 1 and 4")
        if not 0 <= self.max_formula_depth <= 3:
            raise ValueError("max_formula_depth must be between 0 and 3")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")


@dataclass
class CheckReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, index: int, description: str, *flocks) -> None:
        block = description + "\n" + "".join(
            f"-- {label}\n{flock.render_flock(F)}" for label, F in flocks)
        self.failures.append((index, block))

    def render(self) -> str:
        head = f"CHECK {self.name} trials={self.trials} failures={len(self.failures)}"
        if self.skipped:
            head += f" skipped={self.skipped}"
        lines = [head]
        for index, block in self.failures:
            lines.append(f"# trial {index}")
            lines.append(block.rstrip("\n"))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Generators


def _rng(cfg: TrialConfig, name: str, index: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{name}:{index}")


def random_formula(rng: random.Random, names, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.05:
            return rng.choice([logic.TOP, logic.BOTTOM])
        return Atom(rng.choice(names))
    kind = rng.choice("~&&||>=")
    if kind == "~":
        return Not(random_formula(rng, names, depth - 1))
    op = {"&": And, "|": Or, ">": Implies, "=": Iff}[kind]
    return op(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def _random_flock(rng, cfg: TrialConfig, names) -> frozenset:
    while True:
        bases = []
        for _ in range(rng.randint(1, cfg.max_bases)):
            size = rng.randint(0, cfg.max_base_size)
            bases.append(frozenset(
                random_formula(rng, names, cfg.max_formula_depth) for _ in range(size)))
        F = frozenset(bases)
        if any(F):
            return F


def random_flock(cfg: TrialConfig, index: int, names=None) -> frozenset:
    """Deterministic random flock for trial ``index`` (not normalized)."""
    names = names or ATOM_NAMES[:cfg.atoms]
    return _random_flock(_rng(cfg, "flock", index), cfg, names)


def random_persistent_state(rng, cfg: TrialConfig, names, max_states: int = 5) -> EpistemicState:
    """Random persistent state that is not, in general, flock-generated.

    A random strict order is drawn first; labels are then closed upward
    along it so that preferred states carry every lower generator.
    """
    n = rng.randint(1, max_states)
    prefer = {(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4}
    # Transitive closure over the index order.
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if (i, k) in prefer and (k, j) in prefer:
                    prefer.add((i, j))
    label = {}
    for j in range(n):
        own = {random_formula(rng, names, cfg.max_formula_depth)
               for _ in range(rng.randint(0, 2))}
        for i in range(j):
            if (i, j) in prefer:
                own |= label[i]
        label[j] = frozenset(own)
    return EpistemicState(frozenset(range(n)), label, frozenset(prefer))


def _non_tautology(rng, names, depth) -> Formula:
    while True:
        f = random_formula(rng, names, depth)
        if not logic.is_tautology(f):
            return f


# ---------------------------------------------------------------------------
# Checks


def check_lemma_contraction(cfg: TrialConfig) -> CheckReport:
    """State-level contraction equals the state generated by flock contraction.

    Compared exactly (same subsets, labels and order), both without and with
    the trivial bottom state.
    """
    report = CheckReport("lemma-contraction")
    names = ATOM_NAMES[:cfg.atoms]
    for i in range(cfg.trials):
        rng = _rng(cfg, "lemma-contraction", i)
        F = _random_flock(rng, cfg, names)
        f = random_formula(rng, names, cfg.max_formula_depth)
        while logic.is_tautology(f):
            report.skipped += 1
            f = random_formula(rng, names, cfg.max_formula_depth)
        report.trials += 1
        raw = flock.remainder_flock(F, f)
        for include_empty in (False, True):
            lhs = estate.contract_estate(estate.generate(F, include_empty), f)
            if any(raw) or include_empty:
                rhs = estate.generate(raw, include_empty)
            else:
                rhs = EpistemicState(frozenset(), {})
            if lhs != rhs:
                report.fail(i, f"contract by {f} (include_empty={include_empty})",
                            ("flock", F), ("contracted", raw))
                break
        else:
            if flock.normalize(raw) != flock.contract(F, f):
                report.fail(i, f"contract by {f}: normalization mismatch", ("flock", F))
    return report


def _disjoint_pair(rng, cfg, names):
    split = max(1, len(names) // 2)
    left, right = names[:split], names[split:] or names[:split]
    while True:
        F = _random_flock(rng, cfg, left)
        G = _random_flock(rng, cfg, right)
        if not flock.formulas_of(F) & flock.formulas_of(G):
            return F, G


def check_theorem_merge(cfg: TrialConfig) -> CheckReport:
    """Product of generated states is isomorphic to the merged flock's state."""
    report = CheckReport("theorem-merge")
    names = ATOM_NAMES[:max(cfg.atoms, 2)]
    for i in range(cfg.trials):
        rng = _rng(cfg, "theorem-merge", i)
        F, G = _disjoint_pair(rng, cfg, names)
        report.trials += 1
        product_state = estate.pure_merge(estate.generate(F, True), estate.generate(G, True))
        merged = estate.generate(flock.merge(F, G), True)
        if not estate.isomorphic(product_state, merged):
            report.fail(i, "pure merge not isomorphic to merged flock", ("F", F), ("G", G))
        elif not estate.isomorphic(
                product_state,
                estate.pure_merge(estate.generate(G, True), estate.generate(F, True))):
            report.fail(i, "pure merge not commutative", ("F", F), ("G", G))
    return report


def _fresh_formula(rng, cfg, names, F) -> Formula:
    f = random_formula(rng, names, cfg.max_formula_depth)
    if flock.occurs(F, f):
        f = logic.freshen(f, flock.formulas_of(F))
    return f


def check_expansion(cfg: TrialConfig) -> CheckReport:
    """Expansion matches pure expansion of states and adds exactly ``f`` to beliefs."""
    report = CheckReport("expansion")
    names = ATOM_NAMES[:cfg.atoms]
    for i in range(cfg.trials):
        rng = _rng(cfg, "expansion", i)
        F = _random_flock(rng, cfg, names)
        f = _fresh_formula(rng, cfg, names, F)
        report.trials += 1
        expanded, used = flock.expand(F, f)
        lhs = estate.expand_estate(estate.generate(F, True), f)
        if not estate.isomorphic(lhs, estate.generate(expanded, True)):
            report.fail(i, f"expansion by {f} not isomorphic", ("F", F))
            continue
        want = logic.And(flock.belief_formula(F), f)
        if not logic.equivalent(flock.belief_formula(expanded), want):
            report.fail(i, f"beliefs after expanding by {f} differ from B + {f}", ("F", F))
        elif not logic.equivalent(estate.belief_summary(lhs).belief_formula, want):
            report.fail(i, f"state beliefs after expanding by {f} differ", ("F", F))
    return report


def check_commutativity(cfg: TrialConfig) -> CheckReport:
    """Contraction order and fresh expansion order do not matter.

    Also confirms that minimal-base deletion is order sensitive on the
    {A, B} example, which this check treats as a required failure.
    """
    report = CheckReport("commutativity")
    names = ATOM_NAMES[:cfg.atoms]
    for i in range(cfg.trials):
        rng = _rng(cfg, "commutativity", i)
        F = _random_flock(rng, cfg, names)
        f = _non_tautology(rng, names, cfg.max_formula_depth)
        g = _non_tautology(rng, names, cfg.max_formula_depth)
        report.trials += 1
        try:
            fg = flock.contract(flock.contract(F, f), g)
            gf = flock.contract(flock.contract(F, g), f)
        except FlocksError:
            report.skipped += 1
            fg = gf = None
        if fg is not None and not flock.identical(fg, gf):
            report.fail(i, f"contract {f} then {g} differs from reverse order",
                        ("F", F), ("fg", fg), ("gf", gf))
        # Two formulas fresh to F and to each other.
        p = _fresh_formula(rng, cfg, names, F)
        q = _fresh_formula(rng, cfg, names, F | {frozenset([p])})
        pq = flock.expand(flock.expand(F, p).flock, q).flock
        qp = flock.expand(flock.expand(F, q).flock, p).flock
        if not flock.identical(pq, qp):
            report.fail(i, f"expand {p} then {q} differs from reverse order",
                        ("F", F), ("pq", pq), ("qp", qp))
    A, B = Atom("A"), Atom("B")
    base = flock.make_flock([[A, B]])
    first = flock.fukv_delete(flock.fukv_delete(base, And(A, B)), A)
    second = flock.fukv_delete(flock.fukv_delete(base, A), And(A, B))
    if flock.identical(first, second):
        report.fail(-1, "minimal-base deletion unexpectedly commutative", ("first", first))
    return report


def check_persistence(cfg: TrialConfig) -> CheckReport:
    """Generated states are persistent, and pure merge preserves persistence."""
    report = CheckReport("persistence")
    names = ATOM_NAMES[:cfg.atoms]
    for i in range(cfg.trials):
        rng = _rng(cfg, "persistence", i)
        F = _random_flock(rng, cfg, names)
        report.trials += 1
        if not estate.is_persistent(estate.generate(F)):
            report.fail(i, "generated state not persistent", ("F", F))
            continue
        E1 = random_persistent_state(rng, cfg, names)
        E2 = random_persistent_state(rng, cfg, names)
        if not (estate.is_persistent(E1) and estate.is_persistent(E2)):
            report.fail(i, "generator produced a non-persistent state")
        elif not estate.is_persistent(estate.pure_merge(E1, E2)):
            report.fail(i, "pure merge of persistent states not persistent:\n"
                        + estate.dump(E1) + estate.dump(E2))
    # Negative control: a state whose preferred label forgets the lower one.
    bad = EpistemicState({0, 1}, {0: {Atom("A")}, 1: {Atom("B")}}, {(0, 1)})
    if estate.is_persistent(bad):
        report.fail(-1, "non-persistent control state accepted")
    return report


def check_revision(cfg: TrialConfig) -> CheckReport:
    """Flock revision agrees with contraction then expansion of states."""
    report = CheckReport("revision")
    names = ATOM_NAMES[:cfg.atoms]
    for i in range(cfg.trials):
        rng = _rng(cfg, "revision", i)
        F = _random_flock(rng, cfg, names)
        f = random_formula(rng, names, cfg.max_formula_depth)
        while not logic.is_satisfiable(f):
            report.skipped += 1
            f = random_formula(rng, names, cfg.max_formula_depth)
        report.trials += 1
        revised = flock.revise(F, f)
        contracted = flock.contract(F, Not(f))
        used = flock.expand(contracted, f, auto_freshen=True).used
        E = estate.expand_estate(
            estate.contract_estate(estate.generate(F, True), Not(f)), used)
        if not estate.isomorphic(E, estate.generate(revised, True)):
            report.fail(i, f"revision by {f} disagrees with state oracle", ("F", F))
        elif not flock.believed(revised, f):
            report.fail(i, f"revision by {f} does not believe it", ("F", F))
    return report


CHECKS: dict[str, Callable[[TrialConfig], CheckReport]] = {
    "lemma-contraction": check_lemma_contraction,
    "theorem-merge": check_theorem_merge,
    "expansion": check_expansion,
    "commutativity": check_commutativity,
    "persistence": check_persistence,
    "revision": check_revision,
}


def run_check(name: str, cfg: TrialConfig) -> CheckReport:
    try:
        check = CHECKS[name]
    except KeyError:
        raise ValueError(f"unknown check {name!r}; known: {', '.join(CHECKS)}") from None
    return check(cfg)


# ---------------------------------------------------------------------------
# Constructibility


def _formula_order(f: Formula):
    return (logic.size(f), logic.render_formula(f))


@lru_cache(maxsize=None)
def canonical_formulas(names: tuple[str, ...]) -> tuple[Formula, ...]:
    """One smallest formula per boolean function over ``names``.

    Size counts AST nodes; ties go to the lexicographically first rendering.
    Ordered by truth table.
    """
    sig = tuple(sorted(names))
    target = 1 << (1 << len(sig))
    best: dict[int, Formula] = {}
    by_size: dict[int, list[Formula]] = {}

    def offer(f, bucket):
        t = logic.truth_table(f, sig)
        if t not in best:
            bucket.append((t, f))

    size = 1
    while len(best) < target:
        bucket: list = []
        if size == 1:
            for f in [logic.TOP, logic.BOTTOM, *(Atom(n) for n in sig)]:
                offer(f, bucket)
        else:
            for f in by_size.get(size - 1, []):
                offer(Not(f), bucket)
            for left_size in range(1, size - 1):
                for a in by_size.get(left_size, []):
                    for b in by_size.get(size - 1 - left_size, []):
                        for op in (And, Or, Implies, Iff):
                            offer(op(a, b), bucket)
        fresh = []
        for t, f in sorted(bucket, key=lambda tf: (tf[0], _formula_order(tf[1]))):
            if t not in best:
                best[t] = f
                fresh.append(f)
        by_size[size] = fresh
        size += 1
    return tuple(best[t] for t in sorted(best))


@dataclass
class Exploration:
    target: frozenset
    depth: int
    atoms: tuple
    found: bool
    witness: tuple | None
    reached_per_depth: list

    def render(self) -> str:
        lines = [
            "# primitive flocks: {{phi}} for one smallest formula per boolean function",
            "# operations: contract by non-tautologies, expand (auto-freshen) by any",
            f"# atoms: {', '.join(self.atoms)}  depth: {self.depth}",
            "target:",
            flock.render_flock(self.target).rstrip("\n"),
        ]
        for d, n in enumerate(self.reached_per_depth):
            lines.append(f"depth {d}: {n} new flocks")
        if self.found:
            start, *steps = self.witness
            lines.append(f"FOUND start {{ {start} }}")
            lines.extend(f"  {op} {arg}" for op, arg in steps)
        else:
            lines.append(f"NOT FOUND within depth {self.depth} (search exhausted)")
        return "\n".join(lines) + "\n"


def replay(witness) -> frozenset:
    start, *steps = witness
    F = flock.make_flock([[start]])
    for op, arg in steps:
        if op == "contract":
            F = flock.contract(F, arg)
        else:
            F = flock.expand(F, arg, auto_freshen=True).flock
    return F


def explore_constructibility(target, depth: int = 4, atoms: int = 2) -> Exploration:
    """Breadth-first search for ``target`` from primitive singleton flocks.

    Reachable flocks are deduplicated up to identity. A negative answer only
    says the target is not reachable within ``depth`` operations.
    """
    if not 1 <= atoms <= 2:
        raise ValueError("constructibility search supports 1 or 2 atoms")
    if not 0 <= depth <= 4:
        raise ValueError("constructibility search supports depth 0 to 4")
    names = ATOM_NAMES[:atoms]
    target = flock.normalize(target)
    canon = canonical_formulas(names)
    contractors = [f for f in canon if not logic.is_tautology(f)]

    witness_of: dict[frozenset, tuple] = {}
    layer = []
    for f in canon:
        F = flock.make_flock([[f]])
        if F not in witness_of:
            witness_of[F] = (f,)
            layer.append(F)
    reached = [len(layer)]
    found = target in witness_of
    for _ in range(depth):
        if found:
            break
        nxt = []
        for F in layer:
            for op, args in (("contract", contractors), ("expand", canon)):
                for f in args:
                    try:
                        if op == "contract":
                            G = flock.contract(F, f)
                        else:
                            G = flock.expand(F, f, auto_freshen=True).flock
                    except FlocksError:
                        continue
                    if G not in witness_of:
                        witness_of[G] = witness_of[F] + ((op, f),)
                        nxt.append(G)
        # Canonical order keeps the search output deterministic.
        layer = sorted(nxt, key=flock.render_flock)
        reached.append(len(layer))
        found = target in witness_of
    witness = witness_of.get(target)
    return Exploration(target, depth, names, found, witness, reached)
