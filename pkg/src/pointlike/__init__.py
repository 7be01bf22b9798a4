"""Pointlike sets of finite semigroups, term witnesses and DA-reductions."""

from .automata import DFA, syntactic_from_dfa
from .corpus import Corpus, corpus_distinguish, generate_corpus, semigroups_of_order
from .da import cbf, cbf_tower, reassemble, reduce_idempotent_tuple, reduce_tuple, verify_reduction
from .exponents import NU, OMEGA, OMEGA_MINUS_ONE, Pi, ProfiniteExponent, exponent_mod, parse_pi
from .saturation import idempotent_pointlikes, is_pointlike, saturate
from .semigroup import (
    FiniteSemigroup,
    Presentation,
    content_augment,
    green_classes,
    membership,
    minimal_presentation,
    word_for,
)
from .terms import Concat, Letter, Power, eval_term, format_term, parse_term
from .witness import WitnessSynthesizer, synthesize, verify_witness

__all__ = [
    "DFA", "syntactic_from_dfa",
    "Corpus", "corpus_distinguish", "generate_corpus", "semigroups_of_order",
    "cbf", "cbf_tower", "reassemble", "reduce_tuple", "reduce_idempotent_tuple", "verify_reduction",
    "NU", "OMEGA", "OMEGA_MINUS_ONE", "Pi", "ProfiniteExponent", "exponent_mod", "parse_pi",
    "idempotent_pointlikes", "is_pointlike", "saturate",
    "FiniteSemigroup", "Presentation", "content_augment", "green_classes", "membership",
    "minimal_presentation", "word_for",
    "Concat", "Letter", "Power", "eval_term", "format_term", "parse_term",
    "WitnessSynthesizer", "synthesize", "verify_witness",
]
