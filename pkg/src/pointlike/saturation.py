"""Saturation of the power semigroup: the family of pi-bar pointlike subsets.

Subsets of a semigroup are int bitmasks (bit ``i`` set when element ``i`` is
in the subset).  The family is the least downward closed subsemigroup of the
power semigroup that contains every singleton and, for each member P
generating a cyclic group of order k with k a pi'-number, the union
``P u P^2 u ... u P^k``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

from .errors import NotCyclicGroup
from .exponents import Pi
from .semigroup import FiniteSemigroup

DENSE_LIMIT = 16


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def elements_of(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _as_mask(P: Union[int, Iterable[int]]) -> int:
    return P if isinstance(P, int) else to_mask(P)


def submasks(mask: int):
    """Nonempty submasks of ``mask`` in decreasing numeric order."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


class PowerSemigroup:
    """Fast set multiplication in P(S) using per-byte lookup tables."""

    def __init__(self, S: FiniteSemigroup):
        self.S = S
        n = S.order
        self.chunks = (n + 7) // 8
        t = S.table
        self._rows = []
        for p in range(n):
            per_chunk = []
            for c in range(self.chunks):
                lut = [0] * 256
                for byte in range(1, 256):
                    low = byte & -byte
                    q = c * 8 + low.bit_length() - 1
                    lut[byte] = lut[byte ^ low] | ((1 << t[p][q]) if q < n else 0)
                per_chunk.append(lut)
            self._rows.append(per_chunk)

    def right_image(self, p: int, Q: int) -> int:
        rows = self._rows[p]
        out = 0
        c = 0
        while Q:
            out |= rows[c][Q & 0xFF]
            Q >>= 8
            c += 1
        return out

    def mul(self, P: int, Q: int) -> int:
        out = 0
        for p in elements_of(P):
            out |= self.right_image(p, Q)
        return out


def subset_product(S: FiniteSemigroup, P, Q) -> int:
    """``{p*q : p in P, q in Q}`` as a bitmask."""
    P, Q = _as_mask(P), _as_mask(Q)
    if not P or not Q:
        raise ValueError("subsets must be nonempty")
    t = S.table
    out = 0
    for p in elements_of(P):
        for q in elements_of(Q):
            out |= 1 << t[p][q]
    return out


def _cycle_length(mul, P: int) -> Optional[int]:
    """Least k >= 1 with P^(k+1) = P, or None when P is not on its own cycle."""
    seen = {P}
    cur = P
    k = 0
    while True:
        cur = mul(cur, P)
        k += 1
        if cur == P:
            return k
        if cur in seen:
            return None
        seen.add(cur)


def cyclic_group_order(S: FiniteSemigroup, P, pi: Pi, _mul=None) -> Optional[int]:
    """Order k of the cyclic group generated by P in P(S) when it is a pi'-group, else None."""
    P = _as_mask(P)
    mul = _mul or (lambda X, Y: subset_product(S, X, Y))
    k = _cycle_length(mul, P)
    if k is None or not pi.is_coprime_number(k):
        return None
    return k


def omega_star(S: FiniteSemigroup, P, k: int, _mul=None) -> int:
    """``P u P^2 u ... u P^k`` for P generating a cyclic group of order k."""
    P = _as_mask(P)
    mul = _mul or (lambda X, Y: subset_product(S, X, Y))
    if _cycle_length(mul, P) != k:
        raise NotCyclicGroup(f"subset {elements_of(P)} does not generate a cyclic group of order {k}")
    out = 0
    cur = P
    for _ in range(k):
        out |= cur
        cur = mul(cur, P)
    return out


# -- derivation steps -------------------------------------------------------


@dataclass(frozen=True)
class Singleton:
    element: int


@dataclass(frozen=True)
class SubsetOf:
    parent: int


@dataclass(frozen=True)
class Product:
    left: int
    right: int


@dataclass(frozen=True)
class OmegaStar:
    base: int
    k: int


Step = Union[Singleton, SubsetOf, Product, OmegaStar]


@dataclass
class SaturationResult:
    semigroup: FiniteSemigroup
    pi: Pi
    dag: dict  # mask -> Step, for every explicitly discovered subset
    order: list  # discovery order of the masks in ``dag``
    maximal: tuple
    engine: str = "dense"
    _pow: PowerSemigroup = field(default=None, repr=False)

    @cached_property
    def family(self) -> frozenset:
        if self.engine == "dense":
            return frozenset(self.dag)
        out = set()
        for R in self.maximal:
            out.update(submasks(R))
        return frozenset(out)

    def __contains__(self, P) -> bool:
        P = _as_mask(P)
        if self.engine == "dense":
            return P in self.dag
        return P != 0 and any(P & R == P for R in self.maximal)

    def step(self, P: int) -> Step:
        """Derivation step of ``P``; subsets of representatives are derived on demand."""
        if P in self.dag:
            return self.dag[P]
        for R in self.maximal:
            if P & R == P:
                return SubsetOf(R)
        raise KeyError(P)

    @property
    def power_semigroup(self) -> PowerSemigroup:
        if self._pow is None:
            self._pow = PowerSemigroup(self.semigroup)
        return self._pow


def _maximal(masks: Iterable[int]) -> tuple:
    ms = sorted(set(masks), key=lambda m: (-bin(m).count("1"), m))
    keep: list = []
    for m in ms:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return tuple(sorted(keep))


def saturate(S: FiniteSemigroup, pi: Pi, engine: str = "auto") -> SaturationResult:
    """Least fixed point of the saturation rules, with the first derivation of every member."""
    if engine == "auto":
        engine = "dense" if S.order <= DENSE_LIMIT else "representative"
    ps = PowerSemigroup(S)
    if engine == "dense":
        return _saturate_dense(S, pi, ps)
    if engine == "representative":
        return _saturate_representative(S, pi, ps)
    raise ValueError(f"unknown engine {engine!r}")


def _saturate_dense(S: FiniteSemigroup, pi: Pi, ps: PowerSemigroup) -> SaturationResult:
    dag: dict = {}
    order: list = []
    queue: deque = deque()
    for s in S.elements:
        m = 1 << s
        dag[m] = Singleton(s)
        order.append(m)
        queue.append(m)
    processed: list = []
    while queue:
        P = queue.popleft()
        processed.append(P)
        fresh: dict = {}

        def note(m, step):
            if m not in dag and m not in fresh:
                fresh[m] = step

        for Q in submasks(P):
            if Q != P:
                note(Q, SubsetOf(P))
        for Q in processed:
            note(ps.mul(P, Q), Product(P, Q))
            note(ps.mul(Q, P), Product(Q, P))
        k = cyclic_group_order(S, P, pi, ps.mul)
        if k is not None and k > 1:
            note(omega_star(S, P, k, ps.mul), OmegaStar(P, k))
        for m in sorted(fresh):
            dag[m] = fresh[m]
            order.append(m)
            queue.append(m)
    return SaturationResult(S, pi, dag, order, _maximal(dag), "dense", ps)


def _saturate_representative(S: FiniteSemigroup, pi: Pi, ps: PowerSemigroup) -> SaturationResult:
    dag: dict = {}
    order: list = []
    for s in S.elements:
        dag[1 << s] = Singleton(s)
        order.append(1 << s)
    reps = _maximal(dag)
    while True:
        fresh: dict = {}

        def note(m, step):
            if not any(m & R == m for R in reps) and m not in fresh:
                fresh[m] = step

        for L in reps:
            for R in reps:
                note(ps.mul(L, R), Product(L, R))
        for R in reps:
            for P in submasks(R):
                k = cyclic_group_order(S, P, pi, ps.mul)
                if k is not None and k > 1:
                    Q = omega_star(S, P, k, ps.mul)
                    if Q not in fresh and not any(Q & X == Q for X in reps):
                        if P not in dag:
                            dag[P] = SubsetOf(R)
                            order.append(P)
                        fresh[Q] = OmegaStar(P, k)
        if not fresh:
            break
        for m in sorted(fresh):
            if m not in dag:
                dag[m] = fresh[m]
                order.append(m)
        reps = _maximal(list(reps) + list(fresh))
    return SaturationResult(S, pi, dag, order, reps, "representative", ps)


def is_pointlike(result: SaturationResult, P) -> bool:
    return _as_mask(P) in result


def idempotent_members(result: SaturationResult) -> list:
    """Members E of the family with E*E = E, in increasing mask order."""
    mul = result.power_semigroup.mul
    return sorted(E for E in result.family if mul(E, E) == E)


def idempotent_pointlikes(result: SaturationResult) -> frozenset:
    """Downward closure of the idempotent members of the family."""
    out = set()
    for E in idempotent_members(result):
        out.update(submasks(E))
    return frozenset(out)
