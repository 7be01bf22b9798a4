"""Transition semigroups of complete deterministic automata."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import IncompleteAutomaton
from .semigroup import FiniteSemigroup, Presentation


@dataclass(frozen=True)
class DFA:
    states: int
    initial: int
    accepting: frozenset
    alphabet: tuple
    delta: dict  # letter -> tuple of target state per source state

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", {a: tuple(v) for a, v in self.delta.items()})
        if self.states < 1:
            raise IncompleteAutomaton("automaton needs at least one state")
        if not 0 <= self.initial < self.states:
            raise IncompleteAutomaton("initial state out of range")
        if not self.alphabet:
            raise IncompleteAutomaton("empty alphabet")
        for a in self.alphabet:
            row = self.delta.get(a)
            if row is None or len(row) != self.states:
                raise IncompleteAutomaton(f"transitions for letter {a!r} are missing or partial")
            if any(not 0 <= q < self.states for q in row):
                raise IncompleteAutomaton(f"letter {a!r} leads outside the state set")
        if set(self.delta) - set(self.alphabet):
            raise IncompleteAutomaton("delta mentions letters outside the alphabet")

    @classmethod
    def from_dict(cls, data: dict) -> DFA:
        try:
            return cls(
                states=int(data["states"]),
                initial=int(data["initial"]),
                accepting=frozenset(data.get("accepting", [])),
                alphabet=tuple(data["alphabet"]),
                delta=data["delta"],
            )
        except (KeyError, TypeError) as exc:
            raise IncompleteAutomaton(f"malformed automaton: {exc}") from None

    def accepts(self, word) -> bool:
        q = self.initial
        for a in word:
            q = self.delta[a][q]
        return q in self.accepting


def syntactic_from_dfa(dfa: DFA) -> Presentation:
    """Transition semigroup of ``dfa``; element ``x*y`` acts as ``x`` then ``y``.

    Elements are numbered in breadth-first order from the letters; the labels
    of the result are the state maps.
    """
    gens = [dfa.delta[a] for a in dfa.alphabet]
    index: dict = {}
    maps: list = []
    queue: deque = deque()
    for g in gens:
        if g not in index:
            index[g] = len(maps)
            maps.append(g)
            queue.append(g)
    while queue:
        f = queue.popleft()
        for g in gens:
            h = tuple(g[q] for q in f)
            if h not in index:
                index[h] = len(maps)
                maps.append(h)
                queue.append(h)
    table = [[index[tuple(g[q] for q in f)] for g in maps] for f in maps]
    S = FiniteSemigroup(table, check=False)
    letter_map = {a: index[g] for a, g in zip(dfa.alphabet, gens)}
    return Presentation(S, dfa.alphabet, letter_map, labels=tuple(maps))
