"""Flocks of bases and their change operations.

A base is a ``frozenset`` of formulas and a flock is a ``frozenset`` of
bases. Formula identity is structural throughout. Operations that build
new flocks return them normalized (inclusion-maximal, nonempty bases).

A flock whose normalization is empty denotes the state holding only the
trivial theory ``Th(())``; its belief formula is ``true``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple

from . import logic
from .errors import (EmptyFlock, FlockSyntaxError, NotDisjoint, OccursInFlock,
                     TautologyContraction, TooLarge)
from .logic import Formula, as_formula

Base = frozenset
Flock = frozenset

MAX_BASE_SIZE = 16

EMPTY_BASE: frozenset = frozenset()


def make_base(formulas: Iterable) -> frozenset:
    return frozenset(as_formula(f) for f in formulas)


def make_flock(bases: Iterable[Iterable]) -> frozenset:
    """Build a flock from nested iterables of formulas or formula strings.

    >>> render_flock(make_flock([["A"], ["A", "B"]]))
    '{ A }\\n{ A ; B }\\n'
    """
    return frozenset(make_base(b) for b in bases)


def formulas_of(F) -> frozenset:
    out = set()
    for base in F:
        out |= base
    return frozenset(out)


def occurs(F, f: Formula) -> bool:
    return any(f in base for base in F)


# ---------------------------------------------------------------------------
# Text format


def render_base(base) -> str:
    if not base:
        return "{ }"
    return "{ " + " ; ".join(map(logic.render_formula, logic.sort_formulas(base))) + " }"


def sorted_bases(F) -> list:
    return sorted(F, key=render_base)


def render_flock(F) -> str:
    """Canonical text: one base per line, sorted by rendered text."""
    return "".join(render_base(b) + "\n" for b in sorted_bases(F))


def parse_base(text: str) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise FlockSyntaxError(f"base must be enclosed in braces: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return EMPTY_BASE
    return frozenset(logic.parse_formula(part) for part in body.split(";"))


def parse_flock(text: str) -> frozenset:
    """Parse the line-oriented flock format (``#`` comments, blank lines ok)."""
    bases = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            bases.append(parse_base(line))
        except ValueError as exc:
            raise FlockSyntaxError(f"line {lineno}: {exc}") from exc
    return frozenset(bases)


def parse_inline_flock(text: str) -> frozenset:
    """Parse bases written on one line, e.g. ``{ A } { A ; B }``."""
    bases = []
    rest = text.strip()
    while rest:
        if not rest.startswith("{"):
            raise FlockSyntaxError(f"expected '{{' in {text!r}")
        close = rest.find("}")
        if close < 0:
            raise FlockSyntaxError(f"unterminated base in {text!r}")
        bases.append(parse_base(rest[:close + 1]))
        rest = rest[close + 1:].strip()
    return frozenset(bases)


def load_flock(path) -> frozenset:
    with open(path, encoding="utf-8") as fh:
        return parse_flock(fh.read())


def save_flock(F, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_flock(F))


# ---------------------------------------------------------------------------
# Identity


def normalize(F) -> frozenset:
    """Keep the inclusion-maximal bases, dropping the empty base."""
    bases = sorted({b for b in F if b}, key=len, reverse=True)
    kept: list = []
    for b in bases:
        if not any(b < k for k in kept):
            kept.append(b)
    return frozenset(kept)


def identical(F, G) -> bool:
    return normalize(F) == normalize(G)


def fukv_normalize(F) -> frozenset:
    """Keep only the inclusion-minimal bases (the empty base absorbs all)."""
    if EMPTY_BASE in F:
        return frozenset([EMPTY_BASE])
    bases = sorted(set(F), key=len)
    kept: list = []
    for b in bases:
        if not any(k < b for k in kept):
            kept.append(b)
    return frozenset(kept)


# ---------------------------------------------------------------------------
# Contraction


def remainders(base, f: Formula) -> frozenset:
    """Maximal subsets of ``base`` that do not entail ``f``.

    Subsets are visited from largest to smallest; a non-entailing subset
    is maximal unless it sits inside a remainder already found.
    """
    base = frozenset(base)
    if len(base) > MAX_BASE_SIZE:
        raise TooLarge(f"base has {len(base)} formulas, limit is {MAX_BASE_SIZE}")
    members = logic.sort_formulas(base)
    sig = logic.signature(members + [f])
    full = logic.full_mask(len(sig))
    masks = [logic.truth_table(g, sig) for g in members]
    goal = logic.truth_table(f, sig)
    found: list[frozenset] = []
    for k in range(len(members), -1, -1):
        for idx in combinations(range(len(members)), k):
            m = full
            for i in idx:
                m &= masks[i]
            if m & ~goal == 0:
                continue
            subset = frozenset(members[i] for i in idx)
            if not any(subset <= r for r in found):
                found.append(subset)
    return frozenset(found)


def remainder_flock(F, f: Formula) -> frozenset:
    """Union of the remainders of every base, without normalization."""
    out = set()
    for base in F:
        out |= remainders(base, f)
    return frozenset(out)


def _check_contractible(F, f):
    if logic.is_tautology(f):
        raise TautologyContraction(
            f"cannot contract by tautology {logic.render_formula(f)}")
    if not normalize(F):
        raise EmptyFlock("cannot contract a flock without nonempty bases")


def contract(F, f) -> frozenset:
    f = as_formula(f)
    _check_contractible(F, f)
    return normalize(remainder_flock(F, f))


def fukv_delete(F, f) -> frozenset:
    """Deletion with minimal-base reduction, for comparison with ``contract``."""
    f = as_formula(f)
    if logic.is_tautology(f):
        raise TautologyContraction(
            f"cannot contract by tautology {logic.render_formula(f)}")
    return fukv_normalize(remainder_flock(F, f))


# ---------------------------------------------------------------------------
# Merge, expansion, revision


def _bases_or_empty(F):
    # The empty flock stands for the trivial state, i.e. the flock {{}}.
    return normalize(F) or frozenset([EMPTY_BASE])


def merge(F, G) -> frozenset:
    shared = formulas_of(F) & formulas_of(G)
    if shared:
        raise NotDisjoint(logic.render_formula(g) for g in logic.sort_formulas(shared))
    return normalize(
        a | b for a in _bases_or_empty(F) for b in _bases_or_empty(G))


class Expansion(NamedTuple):
    flock: frozenset
    used: Formula


def expand(F, f, auto_freshen: bool = False) -> Expansion:
    """Add ``f`` to every base.

    ``f`` must not occur in ``F``. With ``auto_freshen`` an occurring ``f``
    is replaced by ``freshen(f, ...)``; ``used`` reports what was added.
    """
    f = as_formula(f)
    if occurs(F, f):
        if not auto_freshen:
            raise OccursInFlock(f"{logic.render_formula(f)} occurs in the flock")
        f = logic.freshen(f, formulas_of(F))
    return Expansion(normalize(b | {f} for b in _bases_or_empty(F)), f)


def revise(F, f) -> frozenset:
    """Levi identity: contract by the negation, then expand (freshening)."""
    f = as_formula(f)
    negated = logic.Not(f)
    if logic.is_tautology(negated):
        raise TautologyContraction(
            f"cannot revise by unsatisfiable {logic.render_formula(f)}")
    contracted = contract(F, negated) if normalize(F) else frozenset()
    return expand(contracted, f, auto_freshen=True).flock


# ---------------------------------------------------------------------------
# Beliefs


def belief_formula(F) -> Formula:
    bases = sorted_bases(normalize(F))
    if not bases:
        return logic.TOP
    return logic.disjoin(logic.conjoin(logic.sort_formulas(b)) for b in bases)


def believed(F, f) -> bool:
    f = as_formula(f)
    bases = normalize(F)
    if not bases:
        raise EmptyFlock("flock has no nonempty base; only tautologies are believed")
    return all(logic.entails(b, f) for b in bases)


def fukv_belief_formula(F) -> Formula:
    """Belief formula when minimal bases decide validity."""
    bases = sorted_bases(fukv_normalize(F))
    if not bases:
        return logic.TOP
    return logic.disjoin(logic.conjoin(logic.sort_formulas(b)) for b in bases)
