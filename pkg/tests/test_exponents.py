from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import nu_sequence_value
from pointlike.errors import InvalidExponent, NotPiPrimeOrder
from pointlike.exponents import (
    NU,
    OMEGA,
    OMEGA_MINUS_ONE,
    Pi,
    exponent_mod,
    finite,
    format_exponent,
    mu,
    mu_for_order,
    parse_exponent,
    parse_pi,
    prime_factors,
)

SMALL_PIS = [Pi.of(c) for r in range(4) for c in combinations((2, 3, 5), r)]


@pytest.mark.parametrize("pi", SMALL_PIS, ids=str)
def test_nu_matches_stabilised_sequence(pi):
    for m in range(1, 101):
        assert exponent_mod(NU, pi, m) == nu_sequence_value(pi.primes, m)


@pytest.mark.parametrize("pi", SMALL_PIS + [Pi.all(), Pi((2,), complement=True)], ids=str)
def test_mu_consistency(pi):
    for k in range(1, 31):
        if not pi.is_coprime_number(k):
            continue
        for m in range(1, 41):
            r = exponent_mod(mu(k), pi, m)
            nu = exponent_mod(NU, pi, k * m)
            assert (k * (r + 1) - (nu - 1)) % (k * m) == 0


def test_worked_residues():
    assert exponent_mod(NU, Pi.empty(), 5) == 1
    assert exponent_mod(NU, Pi.of([2]), 12) == 4
    assert exponent_mod(mu(2), Pi.empty(), 3) == 2
    assert exponent_mod(OMEGA, Pi.empty(), 7) == 0
    assert exponent_mod(OMEGA_MINUS_ONE, Pi.empty(), 7) == 6
    assert exponent_mod(finite(9), Pi.empty(), 4) == 1


def test_mu_one_is_omega_minus_one():
    for m in range(1, 21):
        assert exponent_mod(mu(1), Pi.empty(), m) == m - 1


def test_nu_for_all_primes_is_omega():
    for m in range(1, 50):
        assert exponent_mod(NU, Pi.all(), m) == 0


def test_mu_for_order():
    assert mu_for_order(1, Pi.empty()) == mu(1)
    assert mu_for_order(2, Pi.empty()) == mu(2)
    with pytest.raises(NotPiPrimeOrder):
        mu_for_order(2, Pi.of([2]))
    with pytest.raises(NotPiPrimeOrder):
        exponent_mod(mu(6), Pi.of([3]), 5)


def test_pi_membership_and_split():
    pi = Pi.of([2, 3])
    assert 2 in pi and 5 not in pi
    assert pi.is_pi_number(12) and not pi.is_pi_number(10)
    assert pi.is_coprime_number(35)
    assert pi.split(60) == (12, 5)
    co = Pi((2,), complement=True)
    assert 3 in co and 2 not in co
    assert Pi.empty().is_subset(pi) and pi.is_subset(Pi.all())
    assert not Pi.all().is_subset(pi)


def test_parse_pi():
    assert parse_pi("empty") == Pi.empty()
    assert parse_pi("all") == Pi.all()
    assert parse_pi("2,3") == Pi.of([2, 3])
    assert parse_pi("2", complement=True) == Pi((2,), complement=True)
    with pytest.raises(ValueError):
        parse_pi("4")


def test_prime_factors():
    assert prime_factors(360) == {2: 3, 3: 2, 5: 1}
    assert prime_factors(1) == {}


@given(
    st.one_of(
        st.integers(2, 10**6).map(finite),
        st.integers(1, 500).map(mu),
        st.sampled_from([OMEGA, OMEGA_MINUS_ONE, NU]),
    )
)
def test_exponent_syntax_round_trip(e):
    assert parse_exponent(format_exponent(e)) == e


@pytest.mark.parametrize("bad", ["x", "mu:", "mu:0", "0", "-3", "w+1"])
def test_bad_exponents(bad):
    with pytest.raises(InvalidExponent):
        parse_exponent(bad)
