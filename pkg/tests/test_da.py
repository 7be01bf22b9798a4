import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from strategies import omega_terms
from pointlike.corpus import Corpus, corpus_distinguish, generate_corpus
from pointlike.da import (
    Crossed,
    Full,
    SharedMarker,
    TooShort,
    cbf,
    cbf_tower,
    da_corpus,
    from_term,
    reassemble,
    reduce_idempotent_tuple,
    reduce_tuple,
    to_term,
    verify_reduction,
)
from pointlike.errors import NotIdempotentLike, PreconditionFalsified, TowerUndetermined
from pointlike.exponents import OMEGA
from pointlike.semigroup import Presentation, brandt_b2, cyclic_group
from pointlike.terms import Concat, Letter, Power, content, is_omega_term, parse_term

B2 = Presentation(brandt_b2(), ("a", "b"), {"a": 0, "b": 1})
B2_ONE = Presentation(brandt_b2(with_identity=True), ("a", "b", "c"), {"a": 0, "b": 1, "c": 5})
AB = parse_term("(pow (* a b) w)")
AB_BA_AB = parse_term("(* (pow (* a b) w) (pow (* b a) w) (pow (* a b) w))")
SMALL_ALL = generate_corpus("S", 3)


def _content(t):
    return set() if t is None else content(t)


def test_cbf_ab_omega():
    r = cbf(AB)
    assert isinstance(r, Full)
    assert (r.prefix, r.a0, r.b0, r.suffix) == (Letter("a"), "b", "a", Letter("b"))
    assert corpus_distinguish([AB, reassemble(r)], SMALL_ALL) is None
    assert corpus_distinguish([AB, reassemble(r)], Corpus([("B2", brandt_b2())])) is None


def test_cbf_peeling_is_exact_outside_aperiodic():
    # a.b.(ab)^w.a.b differs from (ab)^w in Z3 with a -> g, b -> 1
    naive = parse_term("(* a b (pow (* a b) w) a b)")
    assert corpus_distinguish([AB, naive], Corpus([("Z3", cyclic_group(3))])) is not None
    assert corpus_distinguish([AB, reassemble(cbf(AB))], Corpus([("Z3", cyclic_group(3))])) is None


def test_cbf_small_words():
    assert cbf(parse_term("(* a b a)")) == SharedMarker(Letter("a"), "b", Letter("a"))
    assert cbf(Letter("a")) == TooShort(Letter("a"))
    r = cbf(parse_term("(* a b c a)"))
    assert isinstance(r, Crossed)
    # prefix abc ends at marker c, suffix bca starts at marker b
    assert r == Crossed(Letter("a"), "b", None, "c", Letter("a"))


def test_atom_round_trip():
    for text in ["(pow (* a b) w)", "(* a (pow a w))", "(pow (pow a w-1) 3)", "(* (pow b w) b b)"]:
        t = parse_term(text)
        seq = from_term(t)
        assert from_term(to_term(seq)) == seq


def test_tower_examples():
    tw = cbf_tower(AB)
    assert tw.status == "infinite" and tw.recurrence == (0, 1)
    tw = cbf_tower(parse_term("(* a b a b)"))
    assert tw.status == "finite" and tw.length == 1
    with pytest.raises(ValueError):
        cbf_tower(parse_term("(pow a w)"))


def test_tower_cap():
    t = parse_term("(* a a b (pow (* a b) w) b b)")
    assert cbf_tower(t, cap=1).status == "undetermined"
    assert cbf_tower(t, cap=2).status == "infinite"
    with pytest.raises(ValueError):
        cbf_tower(t, cap=0)


@settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(omega_terms("abc", max_leaves=10))
def test_cbf_soundness_and_contents(t):
    r = cbf(t)
    assert corpus_distinguish([t, reassemble(r)], SMALL_ALL) is None
    c = content(t)
    if isinstance(r, Full):
        assert _content(r.prefix) == c - {r.a0} and r.a0 not in _content(r.prefix)
        assert _content(r.suffix) == c - {r.b0} and r.b0 not in _content(r.suffix)
    elif isinstance(r, SharedMarker):
        assert _content(r.alpha) == c - {r.x} == _content(r.beta)
    elif isinstance(r, Crossed):
        left = _content(r.alpha) | {r.y} | _content(r.beta)
        right = _content(r.beta) | {r.x} | _content(r.gamma)
        assert left == c - {r.x} and r.x not in left
        assert right == c - {r.y} and r.y not in right
    else:
        assert len(c) == 1


def test_reduce_identical_terms():
    out = reduce_tuple(B2, [AB, AB])
    assert out[0] == out[1]
    assert verify_reduction(B2, [AB, AB], out).passed


def test_reduce_ab_omega_pair():
    assert corpus_distinguish([AB, AB_BA_AB], Corpus([("B2", brandt_b2())])) is not None
    out = reduce_tuple(B2, [AB, AB_BA_AB])
    rep = verify_reduction(B2, [AB, AB_BA_AB], out)
    assert rep.passed and all(is_omega_term(w) for w in out)


def test_reduce_equal_finite_words_verbatim():
    w = parse_term("(* a b b a)")
    assert reduce_tuple(B2, [w, w, w]) == [w, w, w]


def test_reduce_finite_tower_case():
    t = parse_term("(* (pow a w) b (pow a w))")
    u = parse_term("(* (pow a w) a b (pow a w) a)")
    out = reduce_tuple(B2_ONE, [t, u])
    assert verify_reduction(B2_ONE, [t, u], out).passed


def test_reduce_rejects_separated_inputs():
    with pytest.raises(PreconditionFalsified) as info:
        reduce_tuple(B2, [parse_term("(* a b)"), parse_term("(* b a)")])
    assert info.value.counterexample is not None
    with pytest.raises(PreconditionFalsified):
        reduce_tuple(B2, [AB, parse_term("(pow (* b a) w)")])


def test_reduce_undetermined():
    t = parse_term("(* a a b (pow (* a b) w) b b)")
    with pytest.raises(TowerUndetermined):
        reduce_tuple(B2, [t, t], cap=1)


def test_idempotent_examples():
    out = reduce_idempotent_tuple(B2, [AB])
    assert verify_reduction(B2, [AB], out, idempotent=True).passed
    pair = [AB, Concat(AB, AB)]
    out = reduce_idempotent_tuple(B2, pair)
    assert verify_reduction(B2, pair, out, idempotent=True).passed


def test_idempotent_rejects_finite_words():
    with pytest.raises((NotIdempotentLike, PreconditionFalsified)):
        reduce_idempotent_tuple(B2, [parse_term("(* a b)")])


def test_idempotent_rejects_finite_tower():
    # the tower of a^w b a^w stops at once with a shared marker
    t = parse_term("(* (pow a w) b (pow a w))")
    with pytest.raises((NotIdempotentLike, PreconditionFalsified)):
        reduce_idempotent_tuple(B2_ONE, [t])


def test_da_corpus_members():
    from pointlike.semigroup import membership

    assert all(membership(S, "DA") for _, S in da_corpus())


@st.composite
def da_equal_pairs(draw):
    x = draw(omega_terms("abc", max_leaves=5))
    letters = sorted(content(x))
    y = draw(omega_terms("".join(letters), max_leaves=4))
    xw = Power(x, OMEGA)
    return xw, Concat(xw, Concat(y, xw))


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(da_equal_pairs())
def test_reduction_of_da_equal_pairs(pair):
    try:
        out = reduce_tuple(B2_ONE, list(pair))
    except TowerUndetermined:
        assume(False)
    assert verify_reduction(B2_ONE, list(pair), out).passed
    out = reduce_idempotent_tuple(B2_ONE, list(pair))
    assert verify_reduction(B2_ONE, list(pair), out, idempotent=True).passed


def test_finite_tower_reported_when_corpus_is_silent():
    t = parse_term("(* (pow a w) b (pow a w))")
    with pytest.raises(NotIdempotentLike):
        reduce_idempotent_tuple(B2_ONE, [t], corpus=Corpus([]))
