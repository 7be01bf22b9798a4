"""Finite semigroups given by Cayley tables, and presentations of them by letters."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from .errors import AssociativityViolation, InvalidExponent, Unreachable
from .exponents import Pi, ProfiniteExponent, exponent_mod


class FiniteSemigroup:
    """Elements are ``0 .. order-1``; ``table[x][y]`` is the product ``x*y``.

    The table is validated on construction and never mutated afterwards.
    """

    def __init__(self, table, check: bool = True):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError("table must be a non-empty square matrix")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("table entries out of range")
        arr.setflags(write=False)
        self.order = n
        self.array = arr
        self.table = tuple(tuple(int(v) for v in row) for row in arr)
        if check:
            witness = associativity_witness(arr)
            if witness is not None:
                raise AssociativityViolation(*witness)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, elements: Sequence[int]) -> int:
        it = iter(elements)
        acc = next(it)
        for y in it:
            acc = self.table[acc][y]
        return acc

    @property
    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other):
        return isinstance(other, FiniteSemigroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteSemigroup(order={self.order})"

    @cached_property
    def idempotents(self) -> frozenset:
        return frozenset(x for x in self.elements if self.table[x][x] == x)

    @cached_property
    def _power_data(self) -> tuple:
        return tuple(_index_period(self, x) for x in self.elements)


def associativity_witness(arr: np.ndarray):
    """First triple (x, y, z) with (xy)z != x(yz), or None."""
    n = arr.shape[0]
    lhs = arr[arr, :]  # lhs[x, y, z] = arr[arr[x, y], z]
    rhs = arr[np.arange(n)[:, None, None], arr[None, :, :]]  # rhs[x, y, z] = arr[x, arr[y, z]]
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    x, y, z = (int(v) for v in bad[0])
    return x, y, z


def from_cayley(order: int, table) -> FiniteSemigroup:
    S = FiniteSemigroup(table)
    if S.order != order:
        raise ValueError(f"declared order {order} but table has {S.order} rows")
    return S


@dataclass(frozen=True)
class ElementPowerData:
    index: int
    period: int
    idempotent_power: int


def _index_period(S: FiniteSemigroup, x: int) -> ElementPowerData:
    seen: dict[int, int] = {}
    cur, k = x, 1
    while cur not in seen:
        seen[cur] = k
        cur = S.table[cur][x]
        k += 1
    index = seen[cur]
    period = k - index
    # x^n with n in [index, index + period) and period | n
    n = index + (-index) % period
    e = x
    for _ in range(n - 1):
        e = S.table[e][x]
    return ElementPowerData(index, period, e)


def index_period(S: FiniteSemigroup, x: int) -> ElementPowerData:
    return S._power_data[x]


def finite_power(S: FiniteSemigroup, x: int, n: int) -> int:
    if n < 1:
        raise ValueError("finite powers need n >= 1")
    result, base = None, x
    while n:
        if n & 1:
            result = base if result is None else S.table[result][base]
        base = S.table[base][base]
        n >>= 1
    return result


def power(S: FiniteSemigroup, x: int, e: ProfiniteExponent, pi: Optional[Pi] = None) -> int:
    """``x**e``; infinite exponents evaluate to ``x^omega * x^r`` with ``r = e mod period``."""
    if e.is_finite:
        return finite_power(S, x, e.value)
    if pi is None:
        if e.kind in ("nu", "mu"):
            raise InvalidExponent(f"exponent {e} needs a set of primes")
        pi = Pi.empty()
    data = S._power_data[x]
    r = exponent_mod(e, pi, data.period)
    if r == 0:
        return data.idempotent_power
    return S.table[data.idempotent_power][finite_power(S, x, r)]


def omega_offset_power(S: FiniteSemigroup, x: int, offset: int) -> int:
    """``x^(omega + offset)`` for any integer offset."""
    data = S._power_data[x]
    r = offset % data.period
    if r == 0:
        return data.idempotent_power
    return S.table[data.idempotent_power][finite_power(S, x, r)]


# -- Green's relations ------------------------------------------------------


@dataclass(frozen=True)
class GreenData:
    r_classes: tuple
    l_classes: tuple
    j_classes: tuple
    h_classes: tuple
    regular: frozenset
    idempotents: frozenset
    max_subgroups: dict = field(hash=False)  # idempotent -> (H-class, group order)

    def class_of(self, kind: str, x: int) -> frozenset:
        for cls in getattr(self, f"{kind}_classes"):
            if x in cls:
                return cls
        raise KeyError(x)


def _partition(keys: Sequence) -> tuple:
    groups: dict = {}
    for x, key in enumerate(keys):
        groups.setdefault(key, []).append(x)
    return tuple(frozenset(g) for g in groups.values())


def green_classes(S: FiniteSemigroup) -> GreenData:
    t = S.table
    n = S.order
    right = [frozenset({x} | {t[x][s] for s in range(n)}) for x in range(n)]
    left = [frozenset({x} | {t[s][x] for s in range(n)}) for x in range(n)]
    two_sided = []
    for x in range(n):
        ideal = set(right[x])
        for y in right[x]:
            ideal.update(left[y])
        two_sided.append(frozenset(ideal))
    r_classes = _partition(right)
    l_classes = _partition(left)
    j_classes = _partition(two_sided)
    h_classes = _partition([(right[x], left[x]) for x in range(n)])
    regular = frozenset(
        x for x in range(n) if any(t[t[x][y]][x] == x for y in range(n))
    )
    idempotents = S.idempotents
    subgroups = {}
    for e in sorted(idempotents):
        h = next(c for c in h_classes if e in c)
        subgroups[e] = (h, len(h))
    return GreenData(r_classes, l_classes, j_classes, h_classes, regular, idempotents, subgroups)


# -- pseudovariety membership ----------------------------------------------

VARIETIES = ("A", "Gpi", "DA", "DO", "DO&Gpi")


def membership(S: FiniteSemigroup, variety: str, pi: Optional[Pi] = None) -> bool:
    """Decide ``S in V`` for ``V`` one of A, Gpi (all subgroups pi-groups), DA, DO, DO&Gpi."""
    green = green_classes(S)
    if variety == "A":
        return all(order == 1 for _, order in green.max_subgroups.values())
    if variety == "Gpi":
        if pi is None:
            raise ValueError("Gpi membership needs a set of primes")
        return all(pi.is_pi_number(order) for _, order in green.max_subgroups.values())
    if variety == "DA":
        return green.regular <= green.idempotents
    if variety == "DO":
        return _is_do(S, green)
    if variety == "DO&Gpi":
        return _is_do(S, green) and membership(S, "Gpi", pi)
    raise ValueError(f"unknown variety {variety!r}")


def _is_do(S: FiniteSemigroup, green: GreenData) -> bool:
    t = S.table
    for J in green.j_classes:
        if not (J & green.regular):
            continue
        idem = [e for e in J if e in green.idempotents]
        for e in idem:
            for f in idem:
                ef = t[e][f]
                # ef in J makes J a completely simple subsemigroup; ef idempotent makes it orthodox
                if ef not in J or t[ef][ef] != ef:
                    return False
    return True


# -- presentations ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Presentation:
    """A semigroup together with an onto map from letters to elements."""

    semigroup: FiniteSemigroup
    alphabet: tuple
    letter_map: dict
    labels: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "letter_map", dict(self.letter_map))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        if set(self.letter_map) != set(self.alphabet):
            raise ValueError("letter_map must be defined exactly on the alphabet")
        for a, s in self.letter_map.items():
            if not 0 <= s < self.semigroup.order:
                raise ValueError(f"letter {a!r} maps outside the semigroup")
        missing = set(self.semigroup.elements) - set(self._shortest_words)
        if missing:
            raise ValueError(f"presentation is not onto: elements {sorted(missing)} unreachable")

    @cached_property
    def _shortest_words(self) -> dict:
        t = self.semigroup.table
        words: dict = {}
        queue: deque = deque()
        for a in self.alphabet:
            s = self.letter_map[a]
            if s not in words:
                words[s] = (a,)
                queue.append(s)
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                u = t[s][self.letter_map[a]]
                if u not in words:
                    words[u] = words[s] + (a,)
                    queue.append(u)
        return words

    def evaluate_word(self, word: Sequence) -> int:
        return self.semigroup.product([self.letter_map[a] for a in word])

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.semigroup == other.semigroup
            and self.alphabet == other.alphabet
            and self.letter_map == other.letter_map
        )

    def __hash__(self):
        return hash((self.semigroup, self.alphabet, tuple(sorted(self.letter_map.items()))))


def letter_names(k: int) -> list:
    base = "abcdefghijklmnopqrstuvwxyz"
    return [base[i] if i < 26 else f"x{i}" for i in range(k)]


def generated_by(S: FiniteSemigroup, gens: Sequence[int]) -> frozenset:
    seen = set(gens)
    queue = deque(gens)
    while queue:
        s = queue.popleft()
        for g in gens:
            u = S.table[s][g]
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return frozenset(seen)


def minimal_presentation(S: FiniteSemigroup) -> Presentation:
    """Presentation by an irredundant generating set, one letter per generator.

    Generators are dropped greedily from the largest element down, so the
    result is deterministic.
    """
    gens = list(S.elements)
    for x in reversed(range(S.order)):
        trial = [g for g in gens if g != x]
        if trial and len(generated_by(S, trial)) == S.order:
            gens = trial
    names = letter_names(len(gens))
    return Presentation(S, names, dict(zip(names, gens)))


def word_for(P: Presentation, s: int) -> tuple:
    """Shortest word with image ``s``; ties go to the lexicographically least in alphabet order."""
    try:
        return P._shortest_words[s]
    except KeyError:
        raise Unreachable(f"element {s} is not the image of any word") from None


def content_augment(P: Presentation) -> Presentation:
    """Presentation of the subsemigroup of ``S x P(A)`` generated by ``(phi(a), {a})``.

    Labels of the result are pairs ``(s, content)`` with ``content`` a frozenset of letters.
    """
    t = P.semigroup.table
    gens = [(P.letter_map[a], frozenset({a})) for a in P.alphabet]
    index: dict = {}
    order: list = []
    queue: deque = deque()
    for g in gens:
        if g not in index:
            index[g] = len(order)
            order.append(g)
            queue.append(g)
    while queue:
        s, c = queue.popleft()
        for gs, gc in gens:
            v = (t[s][gs], c | gc)
            if v not in index:
                index[v] = len(order)
                order.append(v)
                queue.append(v)
    n = len(order)
    table = [[index[(t[s][u], c | d)] for (u, d) in order] for (s, c) in order]
    S2 = FiniteSemigroup(table, check=False)
    letter_map = {a: index[g] for a, g in zip(P.alphabet, gens)}
    return Presentation(S2, P.alphabet, letter_map, labels=tuple(order))


# -- isomorphism ------------------------------------------------------------


def canonical_table(S: FiniteSemigroup) -> tuple:
    """Lexicographically least relabelled table; equal iff isomorphic (brute force)."""
    n = S.order
    arr = S.array
    best = None
    for perm in permutations(range(n)):
        p = np.array(perm)
        inv = np.empty(n, dtype=np.int64)
        inv[p] = np.arange(n)
        # relabel x -> p[x]: new[p[x], p[y]] = p[arr[x, y]]
        new = p[arr][np.ix_(inv, inv)]
        key = tuple(new.ravel().tolist())
        if best is None or key < best:
            best = key
    return best


def is_isomorphic(S: FiniteSemigroup, T: FiniteSemigroup) -> bool:
    if S.order != T.order:
        return False
    if sorted(S.table[x][x] == x for x in S.elements) != sorted(T.table[x][x] == x for x in T.elements):
        return False
    return canonical_table(S) == canonical_table(T)


# -- standard examples ------------------------------------------------------


def cyclic_group(n: int) -> FiniteSemigroup:
    """Z/n with 0 the identity and 1 a generator."""
    return FiniteSemigroup([[(i + j) % n for j in range(n)] for i in range(n)])


def brandt_b2(with_identity: bool = False) -> FiniteSemigroup:
    """B_2 on elements a=0, b=1, ab=2, ba=3, zero=4 (identity 5 when adjoined)."""
    a, b, ab, ba, z = range(5)
    table = [
        [z, ab, z, a, z],
        [ba, z, b, z, z],
        [a, z, ab, z, z],
        [z, b, z, ba, z],
        [z, z, z, z, z],
    ]
    if with_identity:
        table = [row + [i] for i, row in enumerate(table)]
        table.append(list(range(6)))
    return FiniteSemigroup(table)


def adjoin_identity(S: FiniteSemigroup) -> FiniteSemigroup:
    n = S.order
    table = [list(row) + [i] for i, row in enumerate(S.table)]
    table.append(list(range(n + 1)))
    return FiniteSemigroup(table, check=False)


def content_semilattice(k: int) -> FiniteSemigroup:
    """Nonempty subsets of a k-set under union, numbered by bitmask - 1."""
    n = 2**k - 1
    return FiniteSemigroup([[((i + 1) | (j + 1)) - 1 for j in range(n)] for i in range(n)])


def null_semigroup(n: int) -> FiniteSemigroup:
    """All products equal 0."""
    return FiniteSemigroup([[0] * n for _ in range(n)])


def nilpotent_cyclic(n: int) -> FiniteSemigroup:
    """<x | x^(n+1) = x^n = 0 ...>: elements x^1 .. x^(n-1) as 0..n-2 and zero as n-1."""
    zero = n - 1
    return FiniteSemigroup(
        [[(i + j + 1) if i + j + 1 < zero else zero for j in range(n)] for i in range(n)]
    )
