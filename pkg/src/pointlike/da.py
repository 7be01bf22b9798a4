"""Central basic factorizations and DA-reductions of tuples of omega-terms.

Internally an omega-term is a flat tuple of atoms.  An atom is either a
letter (a string) or ``Pw(base, offset)``, standing for ``base^(omega+offset)``.
Offsets make peeling exact in every finite semigroup::

    x^(w+j) = x . x^(w+j-1) = x^(w+j-1) . x

so a factorization reassembles to the same value everywhere, not only over
aperiodic semigroups.  Offsets never affect contents or markers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Union

from .corpus import Corpus, corpus_distinguish, generate_corpus
from .errors import (
    EmptyContent,
    NotIdempotentLike,
    PreconditionFalsified,
    TowerUndetermined,
)
from .exponents import OMEGA, OMEGA_MINUS_ONE, finite
from .semigroup import Presentation, content_augment, omega_offset_power, word_for
from .terms import Concat, Letter, Power, Term, concat, factors, is_omega_term, word_term

DEFAULT_CAP = 64


@dataclass(frozen=True)
class Pw:
    base: tuple
    offset: int = 0


Atom = Union[str, Pw]


@lru_cache(maxsize=None)
def _atom_content(atom: Atom) -> frozenset:
    if isinstance(atom, str):
        return frozenset((atom,))
    return _seq_content(atom.base)


def _seq_content(seq: tuple) -> frozenset:
    out: frozenset = frozenset()
    for atom in seq:
        out = out | _atom_content(atom)
    return out


def _has_power(seq: tuple) -> bool:
    return any(isinstance(a, Pw) for a in seq)


def _norm(seq) -> tuple:
    """Merge ``x^(w+i) x^(w+j)`` and absorb copies of the base next to a power."""
    seq = list(seq)
    changed = True
    while changed:
        changed = False
        for i, atom in enumerate(seq):
            if not isinstance(atom, Pw):
                continue
            b, L = atom.base, len(atom.base)
            nxt = seq[i + 1] if i + 1 < len(seq) else None
            if isinstance(nxt, Pw) and nxt.base == b:
                seq[i : i + 2] = [Pw(b, atom.offset + nxt.offset)]
            elif i >= L and tuple(seq[i - L : i]) == b:
                seq[i - L : i + 1] = [Pw(b, atom.offset + 1)]
            elif tuple(seq[i + 1 : i + 1 + L]) == b:
                seq[i : i + 1 + L] = [Pw(b, atom.offset + 1)]
            else:
                continue
            changed = True
            break
    return tuple(seq)


def _power_atom(base: tuple, offset: int) -> Pw:
    # (x^(w+j))^(w+o) = x^(w+j*o): the power lives in the group of x^w
    if len(base) == 1 and isinstance(base[0], Pw):
        inner = base[0]
        return Pw(inner.base, inner.offset * offset)
    return Pw(base, offset)


def from_term(t: Term) -> tuple:
    """Atom tuple of an omega-term (finite powers, omega and omega-1 allowed)."""
    out: list = []
    for node in factors(t):
        if isinstance(node, Letter):
            out.append(node.symbol)
            continue
        base = from_term(node.base)
        e = node.exp
        if e.kind == "finite":
            out.extend(base * e.value)
        elif e.kind == "omega":
            out.append(_power_atom(base, 0))
        elif e.kind == "omega-1":
            out.append(_power_atom(base, -1))
        else:
            raise ValueError(f"exponent {e.kind} is outside the omega-term fragment")
    return _norm(out)


def to_term(seq: tuple) -> Optional[Term]:
    """Term for an atom tuple; ``None`` for the empty tuple."""
    parts = []
    for atom in seq:
        if isinstance(atom, str):
            parts.append(Letter(atom))
            continue
        B = to_term(atom.base)
        j = atom.offset
        if j == 0:
            parts.append(Power(B, OMEGA))
        elif j > 0:
            parts.append(Power(B, OMEGA))
            parts.append(B if j == 1 else Power(B, finite(j)))
        elif j == -1:
            parts.append(Power(B, OMEGA_MINUS_ONE))
        else:
            parts.append(Power(Power(B, OMEGA_MINUS_ONE), finite(-j)))
    return concat(*parts)


def _canon(seq: tuple) -> tuple:
    """Offsets reset to zero: the value of the tuple over aperiodic semigroups."""
    return _norm(Pw(_canon(a.base), 0) if isinstance(a, Pw) else a for a in seq)


# -- splitting ----------------------------------------------------------------


def _split_left(seq: tuple, target: frozenset, seen0: frozenset):
    """``(pre, marker, rest)`` where ``pre marker`` is the shortest prefix reaching ``target``."""
    seen = seen0
    for i, atom in enumerate(seq):
        c = _atom_content(atom)
        if c <= seen:
            continue
        if not (seen | c) >= target:
            seen = seen | c
            continue
        if isinstance(atom, str):
            return seq[:i], atom, seq[i + 1 :]
        pre, m, post = _split_left(atom.base, target, seen)
        return seq[:i] + pre, m, post + (Pw(atom.base, atom.offset - 1),) + seq[i + 1 :]
    return None


def _split_right(seq: tuple, target: frozenset, seen0: frozenset):
    """``(rest, marker, suf)`` where ``marker suf`` is the shortest suffix reaching ``target``."""
    seen = seen0
    for i in range(len(seq) - 1, -1, -1):
        atom = seq[i]
        c = _atom_content(atom)
        if c <= seen:
            continue
        if not (seen | c) >= target:
            seen = seen | c
            continue
        if isinstance(atom, str):
            return seq[:i], atom, seq[i + 1 :]
        pre, m, post = _split_right(atom.base, target, seen)
        return seq[:i] + (Pw(atom.base, atom.offset - 1),) + pre, m, post + seq[i + 1 :]
    return None


@dataclass(frozen=True)
class _Full:
    prefix: tuple
    a0: str
    middle: tuple
    b0: str
    suffix: tuple


@dataclass(frozen=True)
class _Shared:
    alpha: tuple
    x: str
    beta: tuple


@dataclass(frozen=True)
class _Crossed:
    alpha: tuple
    y: str
    beta: tuple
    x: str
    gamma: tuple


def _cbf(seq: tuple):
    full = _seq_content(seq)
    if not full:
        raise EmptyContent("cannot factor an empty term")
    if seq == (next(iter(full)),) and len(full) == 1:
        return None
    pre, a0, rest = _split_left(seq, full, frozenset())
    pre, rest = _norm(pre), _norm(rest)
    crest = _seq_content(rest)
    if crest == full:
        mid, b0, suf = _split_right(rest, full, frozenset())
        return _Full(pre, a0, _norm(mid), b0, _norm(suf))
    if crest | {a0} == full:
        return _Shared(pre, a0, rest)
    alpha, y, beta = _split_right(pre, full, crest | {a0})
    return _Crossed(_norm(alpha), y, _norm(beta), a0, rest)


# -- public factorization API -----------------------------------------------


@dataclass(frozen=True)
class Full:
    prefix: Optional[Term]
    a0: str
    middle: Optional[Term]
    b0: str
    suffix: Optional[Term]


@dataclass(frozen=True)
class SharedMarker:
    alpha: Optional[Term]
    x: str
    beta: Optional[Term]


@dataclass(frozen=True)
class Crossed:
    alpha: Optional[Term]
    y: str
    beta: Optional[Term]
    x: str
    gamma: Optional[Term]


@dataclass(frozen=True)
class TooShort:
    word: Term


CbfResult = Union[Full, SharedMarker, Crossed, TooShort]


def _public(r, seq: tuple):
    T = to_term
    if r is None:
        return TooShort(T(seq))
    if isinstance(r, _Full):
        return Full(T(r.prefix), r.a0, T(r.middle), r.b0, T(r.suffix))
    if isinstance(r, _Shared):
        return SharedMarker(T(r.alpha), r.x, T(r.beta))
    return Crossed(T(r.alpha), r.y, T(r.beta), r.x, T(r.gamma))


def cbf(t: Term) -> CbfResult:
    """Central basic factorization of ``t``."""
    seq = from_term(t)
    return _public(_cbf(seq), seq)


def _letter(a: str) -> Letter:
    return Letter(a)


def reassemble(r: CbfResult) -> Term:
    if isinstance(r, Full):
        return concat(r.prefix, _letter(r.a0), r.middle, _letter(r.b0), r.suffix)
    if isinstance(r, SharedMarker):
        return concat(r.alpha, _letter(r.x), r.beta)
    if isinstance(r, Crossed):
        return concat(r.alpha, _letter(r.y), r.beta, _letter(r.x), r.gamma)
    return r.word


# -- towers -----------------------------------------------------------------


class _Tower:
    """Lazily iterated factorization of the middle factor."""

    def __init__(self, seq: tuple, cap: int):
        self.full = _seq_content(seq)
        self.middles = [seq]
        self.layers: list = []  # (prefix, a, suffix, b)
        self.final = None  # overlap form of the last middle, if any
        self.status = None
        self.recurrence = None
        seen = {_canon(seq): 0}
        while len(self.layers) < cap:
            if not self._step():
                self.status = "finite"
                return
            key = _canon(self.middles[-1])
            if key in seen:
                self.status = "infinite"
                self.recurrence = (seen[key], len(self.layers))
                return
            seen[key] = len(self.layers)
        self.status = "undetermined"

    def _step(self) -> bool:
        M = self.middles[-1]
        if _seq_content(M) != self.full:
            return False
        r = _cbf(M)
        if not isinstance(r, _Full):
            self.final = r
            return False
        self.layers.append((r.prefix, r.a0, r.suffix, r.b0))
        self.middles.append(r.middle)
        return True

    def layer(self, p: int):
        while len(self.layers) <= p:
            if not self._step():
                raise AssertionError("an infinite tower stopped producing layers")
        return self.layers[p]

    def middle(self, p: int) -> tuple:
        """Middle after ``p`` layers."""
        if p > 0:
            self.layer(p - 1)
        return self.middles[p]

    def markers(self) -> list:
        return [(a, b) for _, a, _, b in self.layers]


@dataclass
class CbfTower:
    layers: list  # (prefix term, a_p, suffix term, b_p)
    middles: list
    status: str  # "finite", "infinite" or "undetermined"
    length: Optional[int] = None
    recurrence: Optional[tuple] = None
    final: Optional[CbfResult] = None
    cap: int = DEFAULT_CAP


def cbf_tower(t: Term, cap: int = DEFAULT_CAP) -> CbfTower:
    """Iterate the factorization on middle factors until the tower ends or a middle recurs."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    seq = from_term(t)
    if len(_seq_content(seq)) < 2:
        raise ValueError("one-letter content has no tower; it is a base case")
    tw = _Tower(seq, cap)
    layers = [(to_term(p), a, to_term(s), b) for p, a, s, b in tw.layers]
    middles = [to_term(m) for m in tw.middles]
    final = None if tw.final is None else _public(tw.final, tw.middles[-1])
    length = len(tw.layers) if tw.status == "finite" else None
    return CbfTower(layers, middles, tw.status, length, tw.recurrence, final, cap)


# -- reductions ---------------------------------------------------------------


@lru_cache(maxsize=None)
def da_corpus(max_order: int = 3) -> Corpus:
    """DA semigroups of order <= ``max_order`` plus the curated ones in DA."""
    return generate_corpus("DA", max_order)


def _mismatch(what: str):
    return PreconditionFalsified(f"inputs are not DA-equal: {what}")


class _Reducer:
    def __init__(self, P: Presentation, cap: int):
        self.P = P
        self.cap = cap
        self.tab = P.semigroup.table
        self._phi_atom: dict = {}
        self._memo: dict = {}
        self._towers: dict = {}

    def phi(self, seq: tuple) -> Optional[int]:
        acc = None
        for atom in seq:
            v = self._phi_atom.get(atom)
            if v is None:
                if isinstance(atom, str):
                    v = self.P.letter_map[atom]
                else:
                    v = omega_offset_power(self.P.semigroup, self.phi(atom.base), atom.offset)
                self._phi_atom[atom] = v
            acc = v if acc is None else self.tab[acc][v]
        return acc

    def mul(self, *vals) -> Optional[int]:
        acc = None
        for v in vals:
            if v is None:
                continue
            acc = v if acc is None else self.tab[acc][v]
        return acc

    def word(self, seq: tuple) -> Term:
        return word_term(word_for(self.P, self.phi(seq)))

    def tower(self, seq: tuple) -> _Tower:
        tw = self._towers.get(seq)
        if tw is None:
            tw = self._towers[seq] = _Tower(seq, self.cap)
        return tw

    def reduce(self, seqs: tuple, idempotent: bool = False) -> tuple:
        key = (seqs, idempotent)
        if key not in self._memo:
            self._memo[key] = self._reduce(seqs, idempotent)
        return self._memo[key]

    def _reduce(self, seqs: tuple, idempotent: bool) -> tuple:
        n = len(seqs)
        if all(len(s) == 0 for s in seqs):
            return (None,) * n
        if any(len(s) == 0 for s in seqs):
            raise _mismatch("an empty factor faces a nonempty one")
        contents = {_seq_content(s) for s in seqs}
        if len(contents) != 1:
            raise _mismatch("contents differ")
        (full,) = contents
        finite = [not _has_power(s) for s in seqs]
        if all(finite) and not idempotent:
            if len(set(seqs)) != 1:
                raise _mismatch("distinct finite words")
            w = word_term(seqs[0])
            return (w,) * n
        if any(finite):
            if idempotent:
                raise NotIdempotentLike("a finite word cannot have an idempotent projection over DA")
            raise _mismatch("a finite word faces an infinite term")
        if len(full) == 1:
            (a,) = full
            return tuple(Concat(Power(Letter(a), OMEGA), self.word(s)) for s in seqs)
        towers = [self.tower(s) for s in seqs]
        statuses = {tw.status for tw in towers}
        if "undetermined" in statuses:
            raise TowerUndetermined(f"tower not classified within {self.cap} layers")
        if len(statuses) != 1:
            raise _mismatch("finite and infinite towers")
        if statuses == {"finite"}:
            if idempotent:
                raise NotIdempotentLike("the tower of an idempotent-like input must be infinite")
            return self._finite_case(towers)
        return self._infinite_case(towers)

    def _chunks(self, towers, p: int):
        pre = tuple(tw.layer(p)[0] for tw in towers)
        suf = tuple(tw.layer(p)[2] for tw in towers)
        marks = {(tw.layer(p)[1], tw.layer(p)[3]) for tw in towers}
        if len(marks) != 1:
            raise _mismatch(f"markers differ at layer {p}")
        (ab,) = marks
        return pre, suf, ab

    def _finite_case(self, towers) -> tuple:
        n = len(towers)
        lengths = {len(tw.layers) for tw in towers}
        if len(lengths) != 1:
            raise _mismatch("tower lengths differ")
        (l,) = lengths
        left = [[] for _ in range(n)]
        right = [[] for _ in range(n)]
        for p in range(l):
            pre, suf, (a, b) = self._chunks(towers, p)
            wp, ws = self.reduce(pre), self.reduce(suf)
            for i in range(n):
                left[i] += [wp[i], Letter(a)]
                right[i] = [Letter(b), ws[i]] + right[i]
        finals = [tw.final for tw in towers]
        kinds = {type(f) for f in finals}
        if len(kinds) != 1:
            raise _mismatch("final factorizations differ in shape")
        if finals[0] is None:
            mids = self.reduce(tuple(tw.middles[-1] for tw in towers))
            centre = [[m] for m in mids]
        elif isinstance(finals[0], _Shared):
            if len({f.x for f in finals}) != 1:
                raise _mismatch("overlap markers differ")
            wa = self.reduce(tuple(f.alpha for f in finals))
            wb = self.reduce(tuple(f.beta for f in finals))
            centre = [[wa[i], Letter(finals[0].x), wb[i]] for i in range(n)]
        else:
            if len({(f.y, f.x) for f in finals}) != 1:
                raise _mismatch("overlap markers differ")
            wa = self.reduce(tuple(f.alpha for f in finals))
            wb = self.reduce(tuple(f.beta for f in finals))
            wc = self.reduce(tuple(f.gamma for f in finals))
            f0 = finals[0]
            centre = [[wa[i], Letter(f0.y), wb[i], Letter(f0.x), wc[i]] for i in range(n)]
        return tuple(concat(*left[i], *centre[i], *right[i]) for i in range(n))

    def _infinite_case(self, towers) -> tuple:
        n = len(towers)
        S = self.P.semigroup
        bound = S.order ** (2 * n) + 1
        pre_val = [None] * n
        suf_val = [None] * n
        seen: dict = {}
        k = l = None
        for p in range(bound + 1):
            pre, suf, (a, b) = self._chunks(towers, p)
            la, lb = self.P.letter_map[a], self.P.letter_map[b]
            for i in range(n):
                pre_val[i] = self.mul(pre_val[i], self.phi(pre[i]), la)
                suf_val[i] = self.mul(lb, self.phi(suf[i]), suf_val[i])
            key = tuple(zip(pre_val, suf_val))
            if key in seen:
                k, l = seen[key], p
                break
            seen[key] = p
        else:  # pragma: no cover - pigeonhole
            raise AssertionError("no repeated prefix/suffix tuple within the pigeonhole bound")
        left = [[[] for _ in range(n)] for _ in range(l + 1)]
        right = [[[] for _ in range(n)] for _ in range(l + 1)]
        for p in range(l + 1):
            pre, suf, (a, b) = self._chunks(towers, p)
            wp, ws = self.reduce(pre), self.reduce(suf)
            for i in range(n):
                left[p][i] = [wp[i], Letter(a)]
                right[p][i] = [Letter(b), ws[i]]
        out = []
        for i in range(n):
            head = [x for p in range(k + 1) for x in left[p][i]]
            loop_l = concat(*(x for p in range(k + 1, l + 1) for x in left[p][i]))
            mid = self.word(towers[i].middle(k + 1))
            loop_r = concat(*(x for p in range(l, k, -1) for x in right[p][i]))
            tail = [x for p in range(k, -1, -1) for x in right[p][i]]
            out.append(concat(*head, Power(loop_l, OMEGA), mid, Power(loop_r, OMEGA), *tail))
        return tuple(out)


def _flat(t: Term) -> Term:
    return concat(*factors(t))


def _prepare(P: Presentation, terms: Sequence[Term], corpus, idempotent: bool):
    if not terms:
        raise ValueError("at least one term is required")
    seqs = tuple(from_term(t) for t in terms)
    for s in seqs:
        extra = _seq_content(s) - set(P.alphabet)
        if extra:
            raise ValueError(f"letters {sorted(extra)} are not in the alphabet")
    if corpus is None:
        corpus = da_corpus()
    cx = corpus_distinguish(list(terms), corpus)
    if cx is not None:
        raise PreconditionFalsified("the DA corpus separates the inputs", cx)
    if idempotent:
        last = terms[-1]
        cx = corpus_distinguish([last, Concat(last, last)], corpus)
        if cx is not None:
            raise PreconditionFalsified("the DA corpus separates the last input from its square", cx)
    return content_augment(P), seqs


def reduce_tuple(P: Presentation, terms: Sequence[Term], cap: int = DEFAULT_CAP, corpus: Optional[Corpus] = None) -> list:
    """Omega-terms ``w_i`` with the images of ``terms`` and a common projection onto DA."""
    Q, seqs = _prepare(P, terms, corpus, False)
    return [_flat(w) for w in _Reducer(Q, cap).reduce(seqs)]


def reduce_idempotent_tuple(
    P: Presentation, terms: Sequence[Term], cap: int = DEFAULT_CAP, corpus: Optional[Corpus] = None
) -> list:
    """As :func:`reduce_tuple`, with a common projection that is moreover idempotent over DA."""
    Q, seqs = _prepare(P, terms, corpus, True)
    return [_flat(w) for w in _Reducer(Q, cap).reduce(seqs, idempotent=True)]


# -- verification -------------------------------------------------------------


@dataclass
class ReductionReport:
    images: list  # (input image, output image)
    omega_only: bool
    counterexample: object = None
    idempotent_counterexample: object = None
    idempotent_checked: bool = False
    notes: list = field(default_factory=list)

    @property
    def phi_ok(self) -> bool:
        return all(a == b for a, b in self.images)

    @property
    def passed(self) -> bool:
        return self.phi_ok and self.omega_only and self.counterexample is None and self.idempotent_counterexample is None


def verify_reduction(
    P: Presentation,
    inputs: Sequence[Term],
    outputs: Sequence[Term],
    idempotent: bool = False,
    corpus: Optional[Corpus] = None,
) -> ReductionReport:
    """Exact image check, signature check and DA-corpus falsification of the outputs."""
    from .terms import eval_term

    if corpus is None:
        corpus = da_corpus()
    images = [(eval_term(P, u), eval_term(P, w)) for u, w in zip(inputs, outputs)]
    omega_only = all(is_omega_term(w) for w in outputs)
    cx = corpus_distinguish(list(outputs), corpus)
    icx = None
    if idempotent:
        last = outputs[-1]
        icx = corpus_distinguish([last, Concat(last, last)], corpus)
    return ReductionReport(images, omega_only, cx, icx, idempotent)
