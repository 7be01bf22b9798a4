"""JSON file formats and run reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .automata import DFA
from .errors import AssociativityViolation, IncompleteAutomaton
from .saturation import (
    OmegaStar,
    Product,
    SaturationResult,
    Singleton,
    SubsetOf,
    elements_of,
)
from .semigroup import Presentation, from_cayley, minimal_presentation
from .terms import format_term, parse_term
from .witness import WitnessMap


class FormatError(ValueError):
    """An input file is missing, unreadable or malformed."""


def read_json(path) -> tuple:
    """``(data, sha256 hex digest)`` of a JSON file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None
    return data, hashlib.sha256(raw).hexdigest()


def semigroup_from_dict(data: dict) -> Presentation:
    """Presentation from ``{"order", "table", "alphabet", "letter_map"}``.

    Without an alphabet, a small generating set is chosen and named a, b, c, ...
    """
    if not isinstance(data, dict) or "table" not in data:
        raise FormatError("semigroup file needs a 'table'")
    try:
        order = int(data.get("order", len(data["table"])))
        S = from_cayley(order, data["table"])
    except (TypeError, ValueError, IndexError, AssociativityViolation) as exc:
        raise FormatError(f"bad Cayley table: {exc}") from None
    if "letter_map" not in data:
        return minimal_presentation(S)
    letter_map = data["letter_map"]
    alphabet = data.get("alphabet", sorted(letter_map))
    try:
        return Presentation(S, tuple(alphabet), {a: int(v) for a, v in letter_map.items()})
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad presentation: {exc}") from None


def semigroup_to_dict(P: Presentation) -> dict:
    S = P.semigroup
    return {
        "order": S.order,
        "table": [list(row) for row in S.table],
        "alphabet": list(P.alphabet),
        "letter_map": {a: P.letter_map[a] for a in P.alphabet},
    }


def load_semigroup(path) -> tuple:
    data, digest = read_json(path)
    return semigroup_from_dict(data), digest


def dfa_from_dict(data: dict) -> DFA:
    if not isinstance(data, dict):
        raise FormatError("automaton file must hold a JSON object")
    try:
        return DFA.from_dict(data)
    except IncompleteAutomaton as exc:
        raise FormatError(str(exc)) from None


def dfa_to_dict(dfa: DFA) -> dict:
    return {
        "states": dfa.states,
        "initial": dfa.initial,
        "accepting": sorted(dfa.accepting),
        "alphabet": list(dfa.alphabet),
        "delta": {a: list(dfa.delta[a]) for a in dfa.alphabet},
    }


def load_dfa(path) -> tuple:
    data, digest = read_json(path)
    return dfa_from_dict(data), digest


def load_terms(path) -> tuple:
    """Terms from a file holding one s-expression per line; ``#`` starts a comment line."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    lines = [ln.strip() for ln in raw.decode("utf-8").splitlines()]
    terms = [parse_term(ln) for ln in lines if ln and not ln.startswith("#")]
    if not terms:
        raise FormatError(f"{path} holds no terms")
    return terms, hashlib.sha256(raw).hexdigest()


# -- reports ----------------------------------------------------------------


def step_to_dict(step) -> dict:
    if isinstance(step, Singleton):
        return {"rule": "singleton", "element": step.element}
    if isinstance(step, SubsetOf):
        return {"rule": "subset", "of": elements_of(step.parent)}
    if isinstance(step, Product):
        return {"rule": "product", "left": elements_of(step.left), "right": elements_of(step.right)}
    if isinstance(step, OmegaStar):
        return {"rule": "omega-star", "base": elements_of(step.base), "k": step.k}
    raise TypeError(step)


def saturation_report(result: SaturationResult, derivations: bool = True) -> dict:
    """Family as sorted element lists, each flagged maximal or not, with its derivation step."""
    maximal = set(result.maximal)
    members = sorted(result.family, key=lambda m: (bin(m).count("1"), elements_of(m)))
    out = []
    for m in members:
        entry = {"subset": elements_of(m), "maximal": m in maximal}
        if derivations:
            entry["derivation"] = step_to_dict(result.step(m))
        out.append(entry)
    return {
        "order": result.semigroup.order,
        "pi": str(result.pi),
        "engine": result.engine,
        "size": len(members),
        "family": out,
        "maximal": [elements_of(m) for m in sorted(maximal)],
    }


def witness_certificate(w: WitnessMap) -> dict:
    return {
        "subset": w.elements,
        "terms": {str(p): format_term(w.assignments[p]) for p in sorted(w.assignments)},
        "idempotent_projection": w.idempotent_projection,
        "derivation_trace": list(w.trace),
    }


def certificate_terms(cert: dict) -> dict:
    """Parse the terms of a certificate back, keyed by element."""
    return {int(p): parse_term(s) for p, s in cert["terms"].items()}


@dataclass
class RunReport:
    command: list
    inputs: dict  # name -> sha256 digest
    results: dict
    verification: dict = field(default_factory=dict)
    ok: bool = True
    timing: Optional[dict] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.timing is None:
            del d["timing"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> RunReport:
        return cls(
            command=list(data["command"]),
            inputs=dict(data["inputs"]),
            results=data["results"],
            verification=data.get("verification", {}),
            ok=bool(data.get("ok", True)),
            timing=data.get("timing"),
        )

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_dict(json.loads(text))


def counterexample_to_dict(cx) -> Optional[dict]:
    if cx is None:
        return None
    return {
        "member": cx.label,
        "interpretation": dict(sorted(cx.interpretation.items())),
        "i": cx.i,
        "j": cx.j,
        "values": list(cx.values),
    }
