"""Symbolic profinite exponents and their residues modulo an integer.

Only a closed family of exponents is supported: finite ``n``, ``omega``,
``omega - 1``, ``nu`` (relative to a set of primes ``pi``) and the ``mu_k``
family defined by ``k * (mu_k + 1) = nu - 1``.  Every exponent is evaluated
through :func:`exponent_mod`, which is all a finite semigroup ever needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidExponent, NotPiPrimeOrder


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Return ``{p: a}`` with ``n = prod p**a``."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class Pi:
    """A set of primes: ``primes`` itself, or its complement when ``complement`` is set."""

    primes: frozenset = frozenset()
    complement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(self.primes))
        for p in self.primes:
            if not _is_prime(p):
                raise ValueError(f"{p} is not a prime")

    @classmethod
    def empty(cls) -> Pi:
        return cls()

    @classmethod
    def all(cls) -> Pi:
        return cls(frozenset(), complement=True)

    @classmethod
    def of(cls, primes: Iterable[int]) -> Pi:
        return cls(frozenset(primes))

    def __contains__(self, p: int) -> bool:
        return (p in self.primes) != self.complement

    def is_pi_number(self, n: int) -> bool:
        return all(p in self for p in prime_factors(n))

    def is_coprime_number(self, n: int) -> bool:
        """True when ``n`` is a pi'-number, i.e. no prime of pi divides it."""
        return all(p not in self for p in prime_factors(n))

    def split(self, m: int) -> tuple[int, int]:
        """Split ``m`` into its pi-part and pi'-part."""
        inside = 1
        for p, a in prime_factors(m).items():
            if p in self:
                inside *= p**a
        return inside, m // inside

    def is_subset(self, other: Pi) -> bool:
        if not self.complement and not other.complement:
            return self.primes <= other.primes
        if not self.complement and other.complement:
            return not (self.primes & other.primes)
        if self.complement and other.complement:
            return other.primes <= self.primes
        return False

    def __str__(self):
        if self.complement:
            return "all" if not self.primes else "all-" + ",".join(map(str, sorted(self.primes)))
        return ",".join(map(str, sorted(self.primes))) if self.primes else "empty"


def parse_pi(text: str, complement: bool = False) -> Pi:
    """Parse ``"empty"``, ``"all"`` or a comma separated list of primes."""
    text = text.strip()
    if text == "empty":
        primes: frozenset = frozenset()
    elif text == "all":
        if complement:
            return Pi.empty()
        return Pi.all()
    else:
        try:
            primes = frozenset(int(tok) for tok in text.split(",") if tok.strip())
        except ValueError:
            raise ValueError(f"bad prime set {text!r}") from None
    return Pi(primes, complement)


_KINDS = ("finite", "omega", "omega-1", "nu", "mu")


@dataclass(frozen=True)
class ProfiniteExponent:
    kind: str
    value: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidExponent(f"unknown exponent kind {self.kind!r}")
        if self.kind == "finite" and self.value < 1:
            raise InvalidExponent("finite exponents must be >= 1")
        if self.kind == "mu" and self.value < 1:
            raise InvalidExponent("mu:k needs k >= 1")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self):
        return format_exponent(self)


OMEGA = ProfiniteExponent("omega")
OMEGA_MINUS_ONE = ProfiniteExponent("omega-1")
NU = ProfiniteExponent("nu")


def finite(n: int) -> ProfiniteExponent:
    return ProfiniteExponent("finite", n)


def mu(k: int) -> ProfiniteExponent:
    return ProfiniteExponent("mu", k)


def exponent_mod(e: ProfiniteExponent, pi: Pi, m: int) -> int:
    """Residue in ``[0, m)`` of the exponent ``e`` modulo ``m``.

    ``nu`` is the unique residue that is 0 modulo the pi-part of ``m`` and 1
    modulo its pi'-part.  ``mu_k`` solves ``k * (r + 1) = nu - 1`` modulo
    ``k * m``.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if e.kind == "finite":
        return e.value % m
    if e.kind == "omega":
        return 0
    if e.kind == "omega-1":
        return (m - 1) % m
    if e.kind == "nu":
        return _nu_mod(pi, m)
    k = e.value
    if not pi.is_coprime_number(k):
        raise NotPiPrimeOrder(f"mu:{k} is undefined: {k} is not a pi'-number for pi={pi}")
    km = k * m
    lowered = (_nu_mod(pi, km) - 1) % km
    # (nu - 1) is divisible by any pi'-number k
    assert lowered % k == 0
    return (lowered // k - 1) % m


def _nu_mod(pi: Pi, m: int) -> int:
    inside, outside = pi.split(m)
    # CRT: r = 0 mod inside, r = 1 mod outside
    if outside == 1:
        return 0
    r = inside * pow(inside, -1, outside) % m if inside > 1 else 1 % m
    return r


def mu_for_order(k: int, pi: Pi) -> ProfiniteExponent:
    """The exponent ``mu`` with ``k * (mu + 1) = nu - 1``."""
    if k < 1:
        raise InvalidExponent("order must be positive")
    if not pi.is_coprime_number(k):
        raise NotPiPrimeOrder(f"{k} is not a pi'-number for pi={pi}")
    return mu(k)


def parse_exponent(text: str) -> ProfiniteExponent:
    text = text.strip()
    if text == "w":
        return OMEGA
    if text == "w-1":
        return OMEGA_MINUS_ONE
    if text == "nu":
        return NU
    if text.startswith("mu:"):
        try:
            return mu(int(text[3:]))
        except ValueError:
            raise InvalidExponent(f"bad mu exponent {text!r}") from None
    if text.isdigit():
        return finite(int(text))
    raise InvalidExponent(f"bad exponent {text!r}")


def format_exponent(e: ProfiniteExponent) -> str:
    if e.kind == "finite":
        return str(e.value)
    if e.kind == "mu":
        return f"mu:{e.value}"
    return {"omega": "w", "omega-1": "w-1", "nu": "nu"}[e.kind]
