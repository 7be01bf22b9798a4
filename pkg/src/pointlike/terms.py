"""Terms over letters built with concatenation and symbolic powers.

Concrete syntax is an s-expression::

    term := letter | "(* " term term+ ")" | "(pow " term exp ")"

where ``exp`` is ``w``, ``w-1``, ``nu``, ``mu:k`` or an integer >= 2.
``(* t1 t2 t3)`` denotes the right-nested ``Concat(t1, Concat(t2, t3))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .errors import InvalidExponent, TermSyntaxError, UnknownLetter
from .exponents import OMEGA, Pi, ProfiniteExponent, format_exponent, parse_exponent
from .semigroup import FiniteSemigroup, Presentation, power


@dataclass(frozen=True)
class Letter:
    symbol: str
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("L", self.symbol)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Concat:
    left: "Term"
    right: "Term"
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("C", self.left._hash, self.right._hash)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class Power:
    base: "Term"
    exp: ProfiniteExponent
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.exp.kind == "finite" and self.exp.value == 1:
            raise InvalidExponent("a power with exponent 1 is not a term node")
        object.__setattr__(self, "_hash", hash(("P", self.base._hash, self.exp)))

    def __hash__(self):
        return self._hash


Term = Union[Letter, Concat, Power]


def concat(*parts: Optional[Term]) -> Optional[Term]:
    """Right-nested concatenation, skipping ``None`` (empty) parts."""
    items = [p for p in parts if p is not None]
    if not items:
        return None
    acc = items[-1]
    for t in reversed(items[:-1]):
        acc = Concat(t, acc)
    return acc


def word_term(word: Iterable[str]) -> Term:
    letters = [Letter(a) for a in word]
    if not letters:
        raise ValueError("the empty word is not a term")
    return concat(*letters)


def omega(t: Term) -> Power:
    return Power(t, OMEGA)


def factors(t: Term) -> list:
    """Flatten nested concatenations into the list of non-Concat factors."""
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Concat):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def content(t: Term) -> frozenset:
    letters = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Letter):
            letters.add(node.symbol)
        elif isinstance(node, Concat):
            stack.append(node.left)
            stack.append(node.right)
        else:
            stack.append(node.base)
    return frozenset(letters)


def exponents(t: Term) -> set:
    found = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Concat):
            stack.extend((node.left, node.right))
        elif isinstance(node, Power):
            found.add(node.exp)
            stack.append(node.base)
    return found


def is_omega_term(t: Term) -> bool:
    """True when every power in ``t`` is an omega-power."""
    return all(e == OMEGA for e in exponents(t))


def size(t: Term) -> int:
    n = 0
    stack = [t]
    while stack:
        node = stack.pop()
        n += 1
        if isinstance(node, Concat):
            stack.extend((node.left, node.right))
        elif isinstance(node, Power):
            stack.append(node.base)
    return n


# -- evaluation -------------------------------------------------------------


def eval_term(P: Presentation, t: Term, pi: Optional[Pi] = None) -> int:
    return evaluate(P.semigroup, P.letter_map, t, pi)


def evaluate(S: FiniteSemigroup, assignment: dict, t: Term, pi: Optional[Pi] = None) -> int:
    """Value of ``t`` in ``S`` with letters interpreted by ``assignment``."""
    table = S.table
    acc = None
    for node in factors(t):
        if isinstance(node, Letter):
            try:
                v = assignment[node.symbol]
            except KeyError:
                raise UnknownLetter(f"letter {node.symbol!r} is not interpreted") from None
        else:
            v = power(S, evaluate(S, assignment, node.base, pi), node.exp, pi)
        acc = v if acc is None else table[acc][v]
    return acc


def power_lookup(S: FiniteSemigroup, e: ProfiniteExponent, pi: Optional[Pi]) -> np.ndarray:
    return np.array([power(S, x, e, pi) for x in S.elements], dtype=np.int64)


def evaluate_batch(S: FiniteSemigroup, columns: dict, t: Term, pi: Optional[Pi] = None, _cache=None) -> np.ndarray:
    """Evaluate ``t`` under many interpretations at once.

    ``columns`` maps each letter to an integer array; position ``i`` of the
    result is the value of ``t`` under the ``i``-th interpretation.
    """
    cache = {} if _cache is None else _cache
    arr = S.array
    acc = None
    for node in factors(t):
        if isinstance(node, Letter):
            try:
                v = columns[node.symbol]
            except KeyError:
                raise UnknownLetter(f"letter {node.symbol!r} is not interpreted") from None
        else:
            memo = ("node", id(node))
            v = cache.get(memo)
            if v is None:
                if node.exp not in cache:
                    cache[node.exp] = power_lookup(S, node.exp, pi)
                v = cache[node.exp][evaluate_batch(S, columns, node.base, pi, cache)]
                # keep the node alive so its id is not reused while cached
                cache[memo] = v
                cache.setdefault("_nodes", []).append(node)
        acc = v if acc is None else arr[acc, v]
    return acc


# -- parsing and printing ---------------------------------------------------

_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")
_LETTER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise TermSyntaxError("unexpected character", pos)
        if m.group(1) is None:
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


def parse_term(text: str) -> Term:
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty input", 0)
    t, i = _parse(tokens, 0, text)
    if i != len(tokens):
        raise TermSyntaxError("trailing input", tokens[i][1])
    return t


def _parse(tokens, i, text):
    if i >= len(tokens):
        raise TermSyntaxError("unexpected end of input", len(text))
    tok, pos = tokens[i]
    if tok == ")":
        raise TermSyntaxError("unexpected ')'", pos)
    if tok != "(":
        if not _LETTER.match(tok) or tok == "pow":
            raise TermSyntaxError(f"bad letter {tok!r}", pos)
        return Letter(tok), i + 1
    if i + 1 >= len(tokens):
        raise TermSyntaxError("unexpected end of input", len(text))
    head, hpos = tokens[i + 1]
    if head == "*":
        parts = []
        j = i + 2
        while j < len(tokens) and tokens[j][0] != ")":
            part, j = _parse(tokens, j, text)
            parts.append(part)
        if j >= len(tokens):
            raise TermSyntaxError("missing ')'", len(text))
        if len(parts) < 2:
            raise TermSyntaxError("(* ...) needs at least two terms", hpos)
        return concat(*parts), j + 1
    if head == "pow":
        base, j = _parse(tokens, i + 2, text)
        if j >= len(tokens):
            raise TermSyntaxError("missing exponent", len(text))
        etok, epos = tokens[j]
        try:
            e = parse_exponent(etok)
        except InvalidExponent as exc:
            raise TermSyntaxError(str(exc), epos) from None
        if e.kind == "finite" and e.value == 1:
            raise TermSyntaxError("exponent 1 is not allowed", epos)
        if j + 1 >= len(tokens) or tokens[j + 1][0] != ")":
            raise TermSyntaxError("expected ')'", tokens[j + 1][1] if j + 1 < len(tokens) else len(text))
        return Power(base, e), j + 2
    raise TermSyntaxError(f"unknown operator {head!r}", hpos)


def format_term(t: Term) -> str:
    if isinstance(t, Letter):
        return t.symbol
    if isinstance(t, Power):
        return f"(pow {format_term(t.base)} {format_exponent(t.exp)})"
    parts = []
    node = t
    while isinstance(node, Concat):
        parts.append(format_term(node.left))
        node = node.right
    parts.append(format_term(node))
    return "(* " + " ".join(parts) + ")"


def pretty(t: Term) -> str:
    """Compact infix rendering, e.g. ``aa(aa)^[mu:2]a``; for display only."""
    out = []
    for node in factors(t):
        if isinstance(node, Letter):
            out.append(node.symbol)
        else:
            inner = pretty(node.base)
            if len(factors(node.base)) > 1 or len(inner) > 1:
                inner = f"({inner})"
            out.append(f"{inner}^[{format_exponent(node.exp)}]")
    return "".join(out)
