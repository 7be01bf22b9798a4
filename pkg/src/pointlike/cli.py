"""Command-line front end.  Every command prints one JSON report on stdout."""

from __future__ import annotations

import argparse
import sys
import time

from .automata import syntactic_from_dfa
from .da import reduce_idempotent_tuple, reduce_tuple, verify_reduction
from .errors import (
    InvalidExponent,
    NotIdempotentLike,
    NotInFamily,
    PointlikeError,
    PreconditionFalsified,
    TermSyntaxError,
    TowerUndetermined,
    UnknownLetter,
)
from .exponents import Pi, parse_pi
from .io import (
    FormatError,
    RunReport,
    counterexample_to_dict,
    load_dfa,
    load_semigroup,
    load_terms,
    saturation_report,
    semigroup_to_dict,
    witness_certificate,
)
from .saturation import elements_of, idempotent_members, idempotent_pointlikes, saturate
from .semigroup import brandt_b2, is_isomorphic, membership
from .terms import eval_term, format_term, parse_term
from .witness import WitnessSynthesizer, pi_corpus, verify_witness

EXIT_FAILED = 1
EXIT_FORMAT = 2
EXIT_NOT_IN_FAMILY = 3
EXIT_PRECONDITION = 4
EXIT_UNDETERMINED = 5

VARIETIES = ("A", "Gpi", "DA", "DO", "DO&Gpi")


def _pi(args) -> Pi:
    try:
        if args.pi_complement is not None:
            return parse_pi(args.pi_complement, complement=True)
        return parse_pi(args.pi)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _subset(text: str) -> list:
    try:
        out = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise FormatError(f"bad subset {text!r}; expected e.g. 0,1") from None
    if not out:
        raise FormatError("empty subset")
    return out


def cmd_pointlikes(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    pi = _pi(args)
    res = saturate(P.semigroup, pi, args.engine)
    return RunReport([], {"semigroup": digest}, saturation_report(res))


def cmd_idempotent_pointlikes(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    pi = _pi(args)
    res = saturate(P.semigroup, pi, args.engine)
    members = [elements_of(E) for E in idempotent_members(res)]
    closure = sorted((elements_of(m) for m in idempotent_pointlikes(res)), key=lambda x: (len(x), x))
    results = {"pi": str(pi), "idempotent_members": members, "idempotent_pointlikes": closure}
    return RunReport([], {"semigroup": digest}, results)


def cmd_witness(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    pi = _pi(args)
    subset = _subset(args.subset)
    if any(not 0 <= x < P.semigroup.order for x in subset):
        raise FormatError(f"subset {subset} has elements outside the semigroup")
    res = saturate(P.semigroup, pi)
    synth = WitnessSynthesizer(P, pi, res)
    w = synth.idempotent_witness(subset) if args.idempotent else synth.witness(subset)
    rep = verify_witness(P, pi, w, pi_corpus(pi, args.corpus_order))
    return RunReport([], {"semigroup": digest}, witness_certificate(w), rep.to_dict(), rep.passed)


def cmd_reduce(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    terms, tdigest = load_terms(args.terms)
    fn = reduce_idempotent_tuple if args.idempotent else reduce_tuple
    out = fn(P, terms, cap=args.cap)
    rep = verify_reduction(P, terms, out, idempotent=args.idempotent)
    results = {
        "inputs": [format_term(t) for t in terms],
        "outputs": [format_term(w) for w in out],
        "idempotent": args.idempotent,
    }
    verification = {
        "phi_images": [list(x) for x in rep.images],
        "phi_ok": rep.phi_ok,
        "omega_only": rep.omega_only,
        "corpus_counterexample": counterexample_to_dict(rep.counterexample),
        "idempotent_checked": rep.idempotent_checked,
        "idempotent_counterexample": counterexample_to_dict(rep.idempotent_counterexample),
    }
    return RunReport([], {"semigroup": digest, "terms": tdigest}, results, verification, rep.passed)


def cmd_membership(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    pi = _pi(args)
    results = {"variety": args.variety, "pi": str(pi), "member": membership(P.semigroup, args.variety, pi)}
    return RunReport([], {"semigroup": digest}, results)


def cmd_syntactic(args) -> RunReport:
    dfa, digest = load_dfa(args.dfa)
    P = syntactic_from_dfa(dfa)
    S = P.semigroup
    results = {
        "semigroup": semigroup_to_dict(P),
        "state_maps": [list(m) for m in P.labels],
        "membership": {v: membership(S, v, Pi.empty()) for v in ("A", "DA", "DO")},
        "isomorphic_to_B2": S.order == 5 and is_isomorphic(S, brandt_b2()),
    }
    return RunReport([], {"dfa": digest}, results)


def cmd_eval(args) -> RunReport:
    P, digest = load_semigroup(args.semigroup)
    pi = _pi(args)
    t = parse_term(args.term)
    results = {"term": format_term(t), "pi": str(pi), "value": eval_term(P, t, pi)}
    return RunReport([], {"semigroup": digest}, results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pointlike", description=__doc__)
    parser.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_pi(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--pi", default="empty", help="prime set: empty, all, or e.g. 2,3")
        g.add_argument("--pi-complement", metavar="PRIMES", help="complement of a finite prime set")

    p = sub.add_parser("pointlikes", help="saturated family of pointlike subsets")
    p.add_argument("semigroup")
    with_pi(p)
    p.add_argument("--engine", default="auto", choices=("auto", "dense", "representative"))
    p.set_defaults(func=cmd_pointlikes)

    p = sub.add_parser("idempotent-pointlikes", help="idempotent members and their subsets")
    p.add_argument("semigroup")
    with_pi(p)
    p.add_argument("--engine", default="auto", choices=("auto", "dense", "representative"))
    p.set_defaults(func=cmd_idempotent_pointlikes)

    p = sub.add_parser("witness", help="term witness for a pointlike subset")
    p.add_argument("semigroup")
    p.add_argument("--subset", required=True, help="comma separated element indices")
    p.add_argument("--idempotent", action="store_true")
    p.add_argument("--corpus-order", type=int, default=4, choices=(1, 2, 3, 4))
    with_pi(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("reduce-da", help="DA-reduction of a tuple of omega-terms")
    p.add_argument("semigroup")
    p.add_argument("terms", help="file with one s-expression per line")
    p.add_argument("--idempotent", action="store_true")
    p.add_argument("--cap", type=int, default=64)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("membership", help="pseudovariety membership")
    p.add_argument("semigroup")
    p.add_argument("variety", choices=VARIETIES)
    with_pi(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("syntactic", help="transition semigroup of a complete DFA")
    p.add_argument("dfa")
    p.set_defaults(func=cmd_syntactic)

    p = sub.add_parser("eval-term", help="evaluate an s-expression term")
    p.add_argument("semigroup")
    p.add_argument("term")
    with_pi(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (FormatError, TermSyntaxError, UnknownLetter, InvalidExponent) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except NotInFamily as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_FAMILY
    except (PreconditionFalsified, NotIdempotentLike) as exc:
        print(f"error: {exc}", file=sys.stderr)
        cx = getattr(exc, "counterexample", None)
        if cx is not None:
            print(f"counterexample: {counterexample_to_dict(cx)}", file=sys.stderr)
        return EXIT_PRECONDITION
    except TowerUndetermined as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except PointlikeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    report.command = [args.command] + argv[argv.index(args.command) + 1 :]
    if args.timing:
        report.timing = {"seconds": round(time.perf_counter() - start, 6)}
    print(report.to_json())
    if not report.ok:
        print("verification failed", file=sys.stderr)
        return EXIT_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
