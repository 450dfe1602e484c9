"""Propositional formulas: AST, parser, printer and classical consequence.

Formulas are immutable and compare structurally, so ``A & B`` and
``B & A`` are different objects even though they are equivalent. All
semantic questions are answered with truth tables encoded as integer
bitmasks over a finite signature.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator

from .errors import FormulaSyntaxError, SignatureTooLarge

MAX_ATOMS = 20

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class Formula:
    __slots__ = ()

    def __str__(self):
        return render_formula(self)

    # Operator sugar used heavily in tests and demos.
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not IDENTIFIER.match(self.name) or self.name in ("true", "false"):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    child: Formula

    def __repr__(self):
        return f"Not({self.child!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


TOP = Top()
BOTTOM = Bottom()


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(<->|->|[~&|()])|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        raise FormulaSyntaxError(message, self.text, self.tokens[self.i][1])

    def parse(self):
        if self.peek() == "":
            self.fail("empty formula")
        f = self.iff()
        if self.peek() != "":
            self.fail(f"unexpected token {self.peek()!r}")
        return f

    def iff(self):
        left = self.implies()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if tok == "true":
            self.take()
            return TOP
        if tok == "false":
            self.take()
            return BOTTOM
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            self.take()
            return Atom(tok)
        if tok == "":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    """Parse ASCII formula syntax.

    Binding strength, tightest first: ``~``, ``&``, ``|``, ``->``, ``<->``.
    ``&`` and ``|`` associate to the left, ``->`` and ``<->`` to the right.
    """
    return _Parser(text).parse()


def as_formula(f) -> Formula:
    return f if isinstance(f, Formula) else parse_formula(f)


# ---------------------------------------------------------------------------
# Rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_RIGHT_ASSOC = (Iff, Implies)


def _prec(f):
    if isinstance(f, Not):
        return 5
    return _PREC.get(type(f), 6)


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        inner = render_formula(f.child)
        return "~" + (f"({inner})" if _prec(f.child) < 5 else inner)
    op = type(f)
    p = _PREC[op]
    left, right = render_formula(f.left), render_formula(f.right)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (lp == p and op in _RIGHT_ASSOC):
        left = f"({left})"
    if rp < p or (rp == p and op not in _RIGHT_ASSOC):
        right = f"({right})"
    return f"{left} {_SYMBOL[op]} {right}"


# ---------------------------------------------------------------------------
# Structure


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.child)
    elif isinstance(f, _Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def signature(fs: Iterable[Formula]) -> tuple[str, ...]:
    names = set()
    for f in fs:
        names |= atoms(f)
    return tuple(sorted(names))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def conjoin(fs: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    fs = list(fs)
    return reduce(And, fs) if fs else TOP


def disjoin(fs: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    fs = list(fs)
    return reduce(Or, fs) if fs else BOTTOM


def sort_formulas(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(fs, key=render_formula)


# ---------------------------------------------------------------------------
# Semantics


def _check_size(sig):
    if len(sig) > MAX_ATOMS:
        raise SignatureTooLarge(
            f"signature has {len(sig)} atoms, limit is {MAX_ATOMS}")


@lru_cache(maxsize=None)
def atom_masks(n: int) -> tuple[int, ...]:
    """Truth tables of the ``n`` atoms over ``2**n`` valuations.

    Valuation ``v`` makes atom ``i`` true iff bit ``i`` of ``v`` is set.
    """
    rows = 1 << n
    masks = []
    for i in range(n):
        half = 1 << i
        block = ((1 << half) - 1) << half
        mask, width = block, 2 * half
        while width < rows:
            mask |= mask << width
            width *= 2
        masks.append(mask)
    return tuple(masks)


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=200_000)
def truth_table(f: Formula, sig: tuple[str, ...]) -> int:
    """Bitmask of the valuations over ``sig`` that satisfy ``f``."""
    _check_size(sig)
    n = len(sig)
    full = full_mask(n)
    if isinstance(f, Atom):
        try:
            return atom_masks(n)[sig.index(f.name)]
        except ValueError:
            raise ValueError(f"atom {f.name} not in signature {sig}") from None
    if isinstance(f, Top):
        return full
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return full & ~truth_table(f.child, sig)
    a, b = truth_table(f.left, sig), truth_table(f.right, sig)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full & ~a) | b
    if isinstance(f, Iff):
        return full & ~(a ^ b)
    raise TypeError(f"not a formula: {f!r}")


def models(fs: Iterable[Formula], sig: tuple[str, ...]) -> int:
    """Truth table of the conjunction of ``fs``."""
    result = full_mask(len(sig))
    for f in fs:
        result &= truth_table(f, sig)
    return result


def entails(premises: Iterable[Formula], goal: Formula) -> bool:
    premises = list(premises)
    sig = signature(premises + [goal])
    _check_size(sig)
    return models(premises, sig) & ~truth_table(goal, sig) == 0


def equivalent(f: Formula, g: Formula) -> bool:
    sig = signature([f, g])
    _check_size(sig)
    return truth_table(f, sig) == truth_table(g, sig)


def is_tautology(f: Formula) -> bool:
    sig = signature([f])
    _check_size(sig)
    return truth_table(f, sig) == full_mask(len(sig))


def is_satisfiable(f: Formula) -> bool:
    sig = signature([f])
    _check_size(sig)
    return truth_table(f, sig) != 0


def freshen(f: Formula, forbidden: Iterable[Formula]) -> Formula:
    """Return the first of ``~~f``, ``~~~~f``, ... unused in ``forbidden``.

    A candidate counts as used if it equals any member of ``forbidden`` or
    any subformula of one.
    """
    taken = set()
    for g in forbidden:
        taken.update(subformulas(g))
    candidate = Not(Not(f))
    while candidate in taken:
        candidate = Not(Not(candidate))
    return candidate
