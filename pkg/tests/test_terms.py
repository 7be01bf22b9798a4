import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import terms
from pointlike.corpus import semigroups_up_to
from pointlike.errors import InvalidExponent, TermSyntaxError, UnknownLetter
from pointlike.exponents import OMEGA, Pi, finite, mu
from pointlike.semigroup import Presentation, brandt_b2, cyclic_group
from pointlike.terms import (
    Concat,
    Letter,
    Power,
    content,
    eval_term,
    evaluate,
    evaluate_batch,
    format_term,
    is_omega_term,
    parse_term,
    pretty,
    word_term,
)

a, b = Letter("a"), Letter("b")


def test_content_examples():
    assert content(a) == {"a"}
    assert content(Power(Concat(a, b), OMEGA)) == {"a", "b"}
    assert content(Concat(a, Concat(Power(b, OMEGA), a))) == {"a", "b"}


def test_eval_examples():
    Z2 = Presentation(cyclic_group(2), ("a",), {"a": 1})
    t = parse_term("(* a a (pow (* a a) mu:2) a)")
    assert eval_term(Z2, t, Pi.empty()) == 1
    Z3 = Presentation(cyclic_group(3), ("a",), {"a": 1})
    assert eval_term(Z3, Power(a, OMEGA)) == 0
    B2 = Presentation(brandt_b2(), ("a", "b"), {"a": 0, "b": 1})
    assert eval_term(B2, parse_term("(pow (* a b) w)")) == 2


def test_parse_examples():
    assert parse_term("(* a (pow (* a b) w))") == Concat(a, Power(Concat(a, b), OMEGA))
    assert parse_term("(pow a mu:2)") == Power(a, mu(2))
    assert parse_term("(* a b a)") == Concat(a, Concat(b, a))


@pytest.mark.parametrize(
    "text,pos",
    [
        ("(pow a 1)", 7),
        ("", 0),
        ("(* a)", 1),
        ("(* a b", 6),
        ("(foo a b)", 1),
        ("a b", 2),
        (")", 0),
        ("(pow a q)", 7),
        ("3", 0),
    ],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text)
    assert info.value.position == pos
    assert isinstance(info.value, SyntaxError)


def test_power_one_is_not_a_node():
    with pytest.raises(InvalidExponent):
        Power(a, finite(1))


def test_unknown_letter():
    Z2 = Presentation(cyclic_group(2), ("a",), {"a": 1})
    with pytest.raises(UnknownLetter):
        eval_term(Z2, b)


def test_nu_needs_primes():
    Z2 = Presentation(cyclic_group(2), ("a",), {"a": 1})
    with pytest.raises(InvalidExponent):
        eval_term(Z2, parse_term("(pow a nu)"))


def test_pretty():
    assert pretty(parse_term("(* a a (pow (* a a) mu:2) a)")) == "aa(aa)^[mu:2]a"
    assert pretty(parse_term("(pow a w)")) == "a^[w]"


def test_word_term():
    assert word_term("ab") == Concat(a, b)
    with pytest.raises(ValueError):
        word_term("")


@given(terms())
def test_format_parse_round_trip(t):
    assert parse_term(format_term(t)) == t


@given(terms())
def test_is_omega_term(t):
    text = format_term(t)
    has_other = any(tok in text for tok in (" w-1)", " nu)", " mu:")) or any(
        f" {n})" in text for n in range(2, 6)
    )
    assert is_omega_term(t) == (not has_other)


CORPUS = semigroups_up_to(3) + [brandt_b2(), cyclic_group(4)]


@settings(max_examples=60, deadline=None)
@given(terms("ab"), st.sampled_from(range(len(CORPUS))))
def test_batch_matches_pointwise(t, idx):
    S = CORPUS[idx]
    pi = Pi.of([2])
    grid = np.indices((S.order, S.order)).reshape(2, -1)
    cols = {"a": grid[0], "b": grid[1]}
    batch = evaluate_batch(S, cols, t, pi)
    for i in range(grid.shape[1]):
        assert batch[i] == evaluate(S, {"a": int(grid[0, i]), "b": int(grid[1, i])}, t, pi)
