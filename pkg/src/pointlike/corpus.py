"""Test corpora of small semigroups and a falsifier for equality of terms over them.

Agreement on a corpus never proves two terms equal over a pseudovariety; a
disagreement on a member of the pseudovariety does prove them different.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .exponents import Pi
from .semigroup import (
    FiniteSemigroup,
    adjoin_identity,
    brandt_b2,
    canonical_table,
    content_semilattice,
    cyclic_group,
    membership,
    nilpotent_cyclic,
)
from .terms import Term, content, evaluate_batch


def _consistent_at(t: list, n: int, a: int, b: int) -> bool:
    """Check every associativity triple that reads the freshly filled cell (a, b)."""
    v = t[a][b]
    ta, tv = t[a], t[v]
    for z in range(n):
        # (a b) z = a (b z)
        bz = t[b][z]
        if bz >= 0 and tv[z] >= 0 and ta[bz] >= 0 and tv[z] != ta[bz]:
            return False
        # (z a) b = z (a b)
        za = t[z][a]
        if za >= 0 and t[za][b] >= 0 and t[z][v] >= 0 and t[za][b] != t[z][v]:
            return False
    for x in range(n):
        tx = t[x]
        for y in range(n):
            # (x y) b = x (y b) with x y = a
            if tx[y] == a:
                yb = t[y][b]
                if yb >= 0 and tx[yb] >= 0 and tx[yb] != v:
                    return False
            # (a x) y = a (x y) with x y = b
            if tx[y] == b:
                ax = ta[x]
                if ax >= 0 and t[ax][y] >= 0 and t[ax][y] != v:
                    return False
    return True


def _backtrack(n: int, choose, limit: Optional[int] = None):
    """Fill an n x n table cell by cell, pruning on partial associativity."""
    t = [[-1] * n for _ in range(n)]
    cells = [(x, y) for x in range(n) for y in range(n)]
    found = 0

    def rec(k):
        nonlocal found
        if k == len(cells):
            found += 1
            yield [row[:] for row in t]
            return
        x, y = cells[k]
        for v in choose():
            t[x][y] = v
            if _consistent_at(t, n, x, y):
                yield from rec(k + 1)
                if limit is not None and found >= limit:
                    break
        t[x][y] = -1

    yield from rec(0)


def all_tables(n: int):
    """Every associative table of order ``n`` (labelled)."""
    yield from _backtrack(n, lambda: range(n))


@lru_cache(maxsize=None)
def semigroups_of_order(n: int) -> tuple:
    """All semigroups of order ``n`` up to isomorphism (anti-isomorphic pairs kept apart)."""
    seen = {}
    for table in all_tables(n):
        S = FiniteSemigroup(table, check=False)
        key = canonical_table(S)
        if key not in seen:
            seen[key] = FiniteSemigroup(np.array(key).reshape(n, n), check=False)
    return tuple(seen[k] for k in sorted(seen))


def semigroups_up_to(max_order: int) -> list:
    out = []
    for n in range(1, max_order + 1):
        out.extend(semigroups_of_order(n))
    return out


def random_semigroup(n: int, rng: random.Random) -> FiniteSemigroup:
    """A random associative table of order ``n`` from randomised backtracking."""

    def choose():
        vals = list(range(n))
        rng.shuffle(vals)
        return vals

    table = next(_backtrack(n, choose, limit=1))
    return FiniteSemigroup(table)


def random_semigroups(n: int, count: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [random_semigroup(n, rng) for _ in range(count)]


def curated_family() -> list:
    """Named semigroups used alongside the exhaustive enumeration."""
    fam = [(f"Z{n}", cyclic_group(n)) for n in range(2, 7)]
    fam.append(("B2", brandt_b2()))
    fam.append(("B2^1", brandt_b2(with_identity=True)))
    fam.append(("content2", content_semilattice(2)))
    fam.append(("content3", content_semilattice(3)))
    fam.append(("nil4", nilpotent_cyclic(4)))
    fam.append(("nil5", nilpotent_cyclic(5)))
    left_zero = FiniteSemigroup([[0, 0], [1, 1]])
    right_zero = FiniteSemigroup([[0, 1], [0, 1]])
    fam.append(("left-zero^1", adjoin_identity(left_zero)))
    fam.append(("right-zero^1", adjoin_identity(right_zero)))
    return fam


@dataclass
class Corpus:
    members: list  # (label, FiniteSemigroup)
    variety: str = "S"
    pi: Optional[Pi] = None

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def semigroups(self) -> list:
        return [S for _, S in self.members]


def generate_corpus(variety: str, max_order: int, pi: Optional[Pi] = None, curated: bool = True) -> Corpus:
    """Semigroups of order <= ``max_order`` (up to isomorphism) plus curated ones lying in ``variety``.

    ``variety`` is one of the names accepted by :func:`membership`, or ``"S"``
    for no restriction.
    """
    if max_order > 4:
        raise ValueError("exhaustive enumeration is limited to order 4")
    candidates = [(f"order{S.order}#{i}", S) for i, S in _indexed(semigroups_up_to(max_order))]
    if curated:
        candidates.extend(curated_family())
    keep = []
    seen = set()
    for label, S in candidates:
        if variety != "S" and not membership(S, variety, pi):
            continue
        key = (S.order, canonical_table(S)) if S.order <= 6 else (S.order, S.table)
        if key in seen:
            continue
        seen.add(key)
        keep.append((label, S))
    return Corpus(keep, variety, pi)


def _indexed(items):
    counters: dict = {}
    for S in items:
        i = counters.get(S.order, 0)
        counters[S.order] = i + 1
        yield i, S


@dataclass
class Counterexample:
    label: str
    semigroup: FiniteSemigroup = field(repr=False)
    interpretation: dict
    i: int
    j: int
    values: tuple


def _interpretations(n: int, letters: Sequence[str]) -> dict:
    k = len(letters)
    if k == 0:
        return {}
    grid = np.indices((n,) * k).reshape(k, -1)
    return {a: grid[idx] for idx, a in enumerate(letters)}


def corpus_distinguish(terms: Sequence[Term], corpus: Corpus, pi: Optional[Pi] = None) -> Optional[Counterexample]:
    """First (member, interpretation, i, j) on which terms ``i`` and ``j`` evaluate differently.

    Every map from the letters to each member is tried; ``None`` means no
    member separates the terms.
    """
    if len(terms) < 2:
        return None
    if pi is None:
        pi = corpus.pi
    letters = sorted(set().union(*(content(t) for t in terms)))
    for label, S in corpus.members:
        cols = _interpretations(S.order, letters)
        cache: dict = {}
        values = [evaluate_batch(S, cols, t, pi, cache) for t in terms]
        first = values[0]
        for j in range(1, len(values)):
            diff = np.nonzero(values[j] != first)[0]
            if len(diff):
                pos = int(diff[0])
                # earlier interpretation may separate a later pair: pick the least position overall
                for jj in range(j + 1, len(values)):
                    d2 = np.nonzero(values[jj] != first)[0]
                    if len(d2) and int(d2[0]) < pos:
                        pos = int(d2[0])
                jbest = next(jj for jj in range(1, len(values)) if values[jj][pos] != first[pos])
                interp = {a: int(cols[a][pos]) for a in letters}
                vals = tuple(int(v[pos]) for v in values)
                return Counterexample(label, S, interp, 0, jbest, vals)
    return None
