"""Explicit term witnesses for pointlike sets.

For a member P of the saturated family, a witness assigns to every element of
P a term that evaluates to it under the presentation, such that all these
terms are equal over the pseudovariety of semigroups whose subgroups are
pi-groups.  Witnesses are built by replaying the derivation of P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .corpus import Corpus, corpus_distinguish, generate_corpus
from .errors import FactorizationNotFound, NotInFamily
from .exponents import Pi, mu_for_order
from .saturation import (
    OmegaStar,
    Product,
    SaturationResult,
    Singleton,
    SubsetOf,
    _as_mask,
    elements_of,
    idempotent_members,
    subset_product,
)
from .semigroup import FiniteSemigroup, Presentation, word_for
from .terms import Concat, Power, Term, concat, eval_term, format_term, word_term


@dataclass
class WitnessMap:
    subset: int
    assignments: dict  # element -> Term
    idempotent_projection: bool = False
    trace: list = field(default_factory=list)
    blocks: dict = field(default_factory=dict)  # element -> (s factors, e factors, t) for beta terms

    @property
    def elements(self) -> list:
        return elements_of(self.subset)

    def restrict(self, mask: int) -> WitnessMap:
        if mask & self.subset != mask:
            raise ValueError("restriction to a non-subset")
        return WitnessMap(
            mask,
            {p: self.assignments[p] for p in elements_of(mask)},
            self.idempotent_projection,
            list(self.trace),
            {p: b for p, b in self.blocks.items() if mask >> p & 1},
        )


def _powers(S: FiniteSemigroup, B: int, n: int) -> list:
    """``[B^1, ..., B^n]`` as bitmasks."""
    out = [B]
    for _ in range(n - 1):
        out.append(subset_product(S, out[-1], B))
    return out


def factor_into(S: FiniteSemigroup, B: int, n: int, target: int) -> Optional[tuple]:
    """Lexicographically least ``(b_1, ..., b_n)`` with ``b_i in B`` and product ``target``."""
    t = S.table
    Bs = elements_of(B)
    pw = _powers(S, B, n) if n > 1 else [B]

    def rec(prefix_val, remaining):
        if remaining == 0:
            return () if prefix_val == target else None
        for b in Bs:
            x = b if prefix_val is None else t[prefix_val][b]
            if remaining > 1:
                rest = pw[remaining - 2]
                if not any(t[x][y] == target for y in elements_of(rest)):
                    continue
            elif x != target:
                continue
            tail = rec(x, remaining - 1)
            if tail is not None:
                return (b,) + tail
        return None

    return rec(None, n)


def set_factorizations(S: FiniteSemigroup, B, k: int, p: int) -> tuple:
    """``((s_1..s_k), (e_1..e_k), t)`` with ``p = s e t``, ``e`` idempotent, all factors in B."""
    B = _as_mask(B)
    tab = S.table
    Bk = _powers(S, B, k)[-1]
    Bk_elems = elements_of(Bk)
    idem = [e for e in Bk_elems if tab[e][e] == e]
    for s in Bk_elems:
        for e in idem:
            se = tab[s][e]
            for t in elements_of(B):
                if tab[se][t] == p:
                    sf = factor_into(S, B, k, s)
                    ef = factor_into(S, B, k, e)
                    if sf is None or ef is None:
                        raise FactorizationNotFound(f"cannot split {s} or {e} into {k} factors")
                    return sf, ef, t
    raise FactorizationNotFound(f"no factorization s*e*t of {p} over {elements_of(B)} with k={k}")


def beta_transform(P: Presentation, pi: Pi, alpha: WitnessMap, k: int) -> WitnessMap:
    """Rewrite each ``alpha(p)`` as ``alpha(s_1..s_k) (alpha(e_1..e_k))^mu alpha(t)``.

    ``mu`` is ``mu_k``, so the common projection of the result becomes
    idempotent while the images under the presentation are unchanged.
    """
    S = P.semigroup
    m = mu_for_order(k, pi)
    out: dict = {}
    blocks: dict = {}
    for p in elements_of(alpha.subset):
        s_f, e_f, t = set_factorizations(S, alpha.subset, k, p)
        a = alpha.assignments
        term = concat(*(a[x] for x in s_f), Power(concat(*(a[x] for x in e_f)), m), a[t])
        out[p] = term
        blocks[p] = (s_f, e_f, t)
    trace = alpha.trace + [f"beta k={k} on {elements_of(alpha.subset)}"]
    return WitnessMap(alpha.subset, out, True, trace, blocks)


class WitnessSynthesizer:
    """Memoised witness construction over one saturation result."""

    def __init__(self, P: Presentation, pi: Pi, result: SaturationResult):
        if P.semigroup != result.semigroup:
            raise ValueError("presentation and saturation are over different semigroups")
        self.P = P
        self.pi = pi
        self.result = result
        self._cache: dict = {}

    def witness(self, target) -> WitnessMap:
        target = _as_mask(target)
        if target not in self.result:
            raise NotInFamily(f"{elements_of(target)} is not a pointlike set")
        if target not in self._cache:
            self._cache[target] = self._build(target)
        return self._cache[target]

    def _build(self, target: int) -> WitnessMap:
        S = self.P.semigroup
        step = self.result.step(target)
        label = elements_of(target)
        if isinstance(step, Singleton):
            w = word_term(word_for(self.P, step.element))
            return WitnessMap(target, {step.element: w}, False, [f"singleton {label}"])
        if isinstance(step, SubsetOf):
            parent = self.witness(step.parent)
            w = parent.restrict(target)
            w.trace.append(f"subset {label} of {elements_of(step.parent)}")
            return w
        if isinstance(step, Product):
            left, right = self.witness(step.left), self.witness(step.right)
            tab = S.table
            out = {}
            for r in label:
                l, q = next(
                    (l, q)
                    for l in left.elements
                    for q in right.elements
                    if tab[l][q] == r
                )
                out[r] = Concat(left.assignments[l], right.assignments[q])
            trace = left.trace + right.trace + [f"product {elements_of(step.left)} * {elements_of(step.right)}"]
            return WitnessMap(target, out, False, trace)
        if isinstance(step, OmegaStar):
            base = self.witness(step.base)
            beta = beta_transform(self.P, self.pi, base, step.k)
            out = {}
            for q in label:
                for n in range(1, step.k + 1):
                    fac = factor_into(S, step.base, n, q)
                    if fac is not None:
                        out[q] = concat(*(beta.assignments[b] for b in fac))
                        break
                else:
                    raise FactorizationNotFound(f"{q} is not a product of at most {step.k} base elements")
            trace = beta.trace + [f"omega-star k={step.k} of {elements_of(step.base)}"]
            return WitnessMap(target, out, True, trace, dict(beta.blocks) if target == step.base else {})
        raise TypeError(f"unknown derivation step {step!r}")

    def idempotent_witness(self, target) -> WitnessMap:
        """Witness with idempotent common projection for an idempotent pointlike set."""
        target = _as_mask(target)
        mul = self.result.power_semigroup.mul
        for E in idempotent_members(self.result):
            if target & E == target:
                break
        else:
            raise NotInFamily(f"{elements_of(target)} is not an idempotent pointlike set")
        assert mul(E, E) == E
        beta = beta_transform(self.P, self.pi, self.witness(E), 1)
        w = beta.restrict(target)
        w.trace.append(f"idempotent witness via {elements_of(E)}")
        return w


def synthesize(P: Presentation, pi: Pi, result: SaturationResult, target) -> WitnessMap:
    return WitnessSynthesizer(P, pi, result).witness(target)


@lru_cache(maxsize=None)
def pi_corpus(pi: Pi, max_order: int = 4) -> Corpus:
    """Semigroups of order <= ``max_order`` (plus curated ones) whose subgroups are pi-groups."""
    return generate_corpus("Gpi", max_order, pi)


@dataclass
class WitnessReport:
    phi_ok: bool
    phi_failures: list
    projection_counterexample: object
    idempotent_counterexample: object
    checked_idempotent: bool

    @property
    def passed(self) -> bool:
        return self.phi_ok and self.projection_counterexample is None and self.idempotent_counterexample is None

    def to_dict(self) -> dict:
        def cx(c):
            if c is None:
                return None
            return {"member": c.label, "interpretation": c.interpretation, "i": c.i, "j": c.j, "values": list(c.values)}

        return {
            "passed": self.passed,
            "phi_ok": self.phi_ok,
            "phi_failures": self.phi_failures,
            "projection_counterexample": cx(self.projection_counterexample),
            "idempotent_checked": self.checked_idempotent,
            "idempotent_counterexample": cx(self.idempotent_counterexample),
        }


def verify_witness(P: Presentation, pi: Pi, w: WitnessMap, corpus: Optional[Corpus] = None) -> WitnessReport:
    """Exact image check plus corpus falsification of the constant projection."""
    if corpus is None:
        corpus = pi_corpus(pi)
    failures = []
    for p, term in sorted(w.assignments.items()):
        got = eval_term(P, term, pi)
        if got != p:
            failures.append({"element": p, "term": format_term(term), "image": got})
    terms = [w.assignments[p] for p in sorted(w.assignments)]
    proj = corpus_distinguish(terms, corpus, pi)
    idem = None
    if w.idempotent_projection:
        for term in terms:
            idem = corpus_distinguish([term, Concat(term, term)], corpus, pi)
            if idem is not None:
                break
    return WitnessReport(not failures, failures, proj, idem, w.idempotent_projection)
