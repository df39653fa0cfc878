"""Command line interface.

Subcommands:

  conj W1 W2          decide conjugacy of two words, print a certificate
  mckinsey W1 W2      budgeted interleaved search (words vs quotients)
  growth I            witness-size table for the relators c_{2^i}, i <= I
  check-quotient F    does a_0, b_0, t -> alpha, beta, tau extend to a
                      homomorphism onto the table in file F
  selftest            quick internal consistency battery

Exit codes: 0 conjugate / morphism exists / success, 1 non-conjugate or
no morphism, 2 error (bad input, not a group), 3 search budget exhausted.

Every report echoes the full run configuration: text output in a leading
"config:" line, CSV in a "# config:" comment, JSON in a "config" object.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from typing import Optional

from .conjugacy import conjugacy_decide, hnf_solve, IntegerLinearSystem, \
    solve_commutator_equation, solve_twisted_abelian, solve_twisted_derived
from .extension import (
    GElement,
    WordParseError,
    c_witness_word,
    g_conj,
    g_equal,
    g_inv,
    g_t,
    parse_word,
    spell_element,
    word_length,
)
from .machine import ProgramError
from .nilpotent import central_c, d_element, d_mul, generator_a, generator_b
from .quotients import make_spec
from .search import GrowthRow, McKinseyOutcome, SearchBudget, growth_table, \
    mckinsey_search
from .sepfunc import parse_d_spec
from .tables import from_permutations, hom_check, load_table

DEFAULT_D = "table:2,31,127,1021,8191"

# no minimality is promised for witness words, only a polynomial size cap
WITNESS_CAP_CONSTANT = 64


@dataclass(frozen=True)
class RunConfig:
    command: str
    d: str
    fmt: str
    max_conj_len: Optional[int] = None
    max_specs: Optional[int] = None
    max_order: Optional[int] = None
    i_max: Optional[int] = None
    seed: Optional[int] = None

    def items(self):
        out = {"command": self.command, "d": self.d, "format": self.fmt}
        for key in ("max_conj_len", "max_specs", "max_order", "i_max", "seed"):
            v = getattr(self, key)
            if v is not None:
                out[key.replace("_", "-")] = v
        return out

    def line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.items().items())


def _emit_config(cfg: RunConfig, fmt: str):
    if fmt == "text":
        print(f"config: {cfg.line()}")
    elif fmt == "csv":
        print(f"# config: {cfg.line()}")


def _witness_word(cert, n_input: int) -> str:
    word = spell_element(cert.witness)
    cap = max(n_input, 2) ** 5 + WITNESS_CAP_CONSTANT
    if word_length(word) > cap:
        raise AssertionError("witness word exceeded its size cap")
    return word


def _cmd_conj(args) -> int:
    d = parse_d_spec(args.d)
    cfg = RunConfig("conj", args.d, args.format)
    g1, g2 = parse_word(args.word1), parse_word(args.word2)
    t0 = time.perf_counter()
    cert = conjugacy_decide(g1, g2, d)
    elapsed = time.perf_counter() - t0
    n_input = word_length(args.word1) + word_length(args.word2)
    payload = {
        "config": cfg.items(),
        "verdict": cert.verdict,
        "witness_word": _witness_word(cert, n_input) if cert.is_conjugate else None,
        "reason": cert.reason_text(),
    }
    if args.time:
        payload["elapsed_seconds"] = elapsed
    if args.format == "json":
        print(json.dumps(payload))
    else:
        _emit_config(cfg, "text")
        print(f"verdict: {cert.verdict}")
        if cert.is_conjugate:
            print(f"witness: {payload['witness_word']!r}")
        else:
            print(f"reason: {cert.reason_text()}")
        if args.time:
            print(f"elapsed: {elapsed:.6f}s")
    return 0 if cert.is_conjugate else 1


def _cmd_mckinsey(args) -> int:
    d = parse_d_spec(args.d)
    budget = SearchBudget(max_conj_len=args.max_conj_len,
                          max_order=args.max_order,
                          max_specs=args.max_specs)
    cfg = RunConfig("mckinsey", args.d, args.format,
                    max_conj_len=args.max_conj_len, max_specs=args.max_specs,
                    max_order=args.max_order)
    g1, g2 = parse_word(args.word1), parse_word(args.word2)
    t0 = time.perf_counter()
    out = mckinsey_search(g1, g2, d, budget)
    elapsed = time.perf_counter() - t0
    payload = {
        "config": cfg.items(),
        "verdict": out.verdict,
        "conjugator_word": out.conjugator_word,
        "witness_spec": out.witness_spec.name() if out.witness_spec else None,
        "witness_order": out.witness_order,
        "quotients_tested": out.quotients_tested,
        "conjugators_tested": out.conjugators_tested,
    }
    if args.time:
        payload["elapsed_seconds"] = elapsed
    if args.format == "json":
        print(json.dumps(payload))
    else:
        _emit_config(cfg, "text")
        print(f"verdict: {out.verdict}")
        if out.verdict == "conjugate":
            print(f"conjugator: {out.conjugator_word!r}")
        elif out.verdict == "non-conjugate":
            print(f"witness quotient: {payload['witness_spec']}"
                  f" of order {out.witness_order}")
        print(f"quotients tested: {out.quotients_tested}")
        print(f"conjugators tested: {out.conjugators_tested}")
        if args.time:
            print(f"elapsed: {elapsed:.6f}s")
    if out.verdict == "conjugate":
        return 0
    if out.verdict == "non-conjugate":
        return 1
    return 3


def _cmd_growth(args) -> int:
    d = parse_d_spec(args.d)
    budget = SearchBudget(max_specs=args.max_specs)
    cfg = RunConfig("growth", args.d, args.format, max_specs=args.max_specs,
                    i_max=args.i_max)
    t0 = time.perf_counter()
    rows = growth_table(d, range(args.i_max + 1), budget)
    elapsed = time.perf_counter() - t0
    if args.format == "json":
        payload = {"config": cfg.items(),
                   "rows": [asdict(r) for r in rows]}
        if args.time:
            payload["elapsed_seconds"] = elapsed
        print(json.dumps(payload))
    else:
        _emit_config(cfg, "csv")
        print("i,word_length,witness_order,decide_seconds")
        for r in rows:
            wo = "" if r.witness_order is None else r.witness_order
            print(f"{r.i},{r.word_length},{wo},{r.decide_seconds:.6f}")
        if args.time:
            print(f"# elapsed: {elapsed:.6f}s")
    return 0


def _cmd_check_quotient(args) -> int:
    d = parse_d_spec(args.d)
    cfg = RunConfig("check-quotient", args.d, args.format)
    Q = load_table(args.table)
    ok = hom_check(Q, d)
    if args.format == "json":
        print(json.dumps({"config": cfg.items(), "order": Q.order,
                          "morphism": ok}))
    else:
        _emit_config(cfg, "text")
        print("morphism exists" if ok else "no morphism")
    return 0 if ok else 1


def _selftest_checks(rng: random.Random):
    from .nilpotent import d_inv as _d_inv

    def collection_example():
        got = d_mul(generator_b(0), generator_a(0))
        return got.derived == {("AB", 0, 0): -1} and got.a_part == {0: 1} \
            and got.b_part == {0: 1}

    def conj_example():
        got = g_conj(GElement(generator_a(0)), g_t(-1))
        return got == GElement(generator_a(1))

    def inverse_example():
        got = g_inv(GElement(generator_a(0), 1))
        return got == GElement(d_element(a={-1: -1}), -1)

    def twisted_abelian_example():
        got = solve_twisted_abelian({1: 1, 0: -1}, {}, 1)
        return got == ({0: -1}, {})

    def twisted_derived_example():
        got = solve_twisted_derived({("AA", 0, 1): 1, ("AA", 2, 3): -1}, 2)
        return got == {("AA", 0, 1): 1}

    def commutator_example():
        got = solve_commutator_equation(
            generator_a(0), d_element(derived={("AB", 0, 0): -1}))
        return got == generator_b(0)

    def hermite_examples():
        one = hnf_solve(IntegerLinearSystem(((2,),), (4,)))
        two = hnf_solve(IntegerLinearSystem(((2,),), (3,)))
        three = hnf_solve(IntegerLinearSystem(((1, 2), (3, 4)), (5, 6)))
        return one == (2,) and two is None and three is None

    def witness_word_parses():
        d = parse_d_spec(DEFAULT_D)
        for k in (1, 2, 5):
            g = parse_word(c_witness_word(k))
            if not g_equal(g, GElement(central_c(k)), d):
                return False
        return True

    def spell_roundtrip():
        d = parse_d_spec(DEFAULT_D)
        letters = "tabTAB"
        for _ in range(25):
            word = " ".join(rng.choice(letters)
                            for _ in range(rng.randrange(0, 9)))
            g = parse_word(word)
            if not g_equal(parse_word(spell_element(g)), g, d):
                return False
        return True

    def quotient_order():
        d = parse_d_spec("table:2,31,127,1021,8191")
        return make_spec(2, 2, d).order() == 2048

    def table_goldens():
        d = parse_d_spec(DEFAULT_D)
        z2 = from_permutations((1, 0), (1, 0), (0, 1))
        s3 = from_permutations((1, 0, 2), (2, 1, 0), (0, 1, 2))
        return hom_check(z2, d) and not hom_check(s3, d)

    def inverse_cancels():
        for _ in range(25):
            word = " ".join(rng.choice("tabTAB")
                            for _ in range(rng.randrange(0, 9)))
            g = parse_word(word)
            gi = g_inv(g)
            prod = g_conj(g, g)
            if g_inv(gi) != g:
                return False
            if prod.t_exp != g.t_exp:
                return False
        return True

    return [
        ("collection example", collection_example),
        ("conjugation by t", conj_example),
        ("inverse with twist", inverse_example),
        ("twisted abelian solver", twisted_abelian_example),
        ("twisted derived solver", twisted_derived_example),
        ("commutator equation", commutator_example),
        ("hermite solver", hermite_examples),
        ("relator witness words", witness_word_parses),
        ("spell and reparse", spell_roundtrip),
        ("quotient order", quotient_order),
        ("table goldens", table_goldens),
        ("inverse involution", inverse_cancels),
    ]


def _cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = 0
    for name, check in _selftest_checks(rng):
        try:
            ok = check()
        except Exception as exc:  # a failing check must not stop the rest
            print(f"FAIL - {name} ({exc})")
            failures += 1
            continue
        if ok:
            print(f"ok - {name}")
        else:
            print(f"FAIL - {name}")
            failures += 1
    print(f"{'all good' if not failures else f'{failures} failing'}")
    return 0 if not failures else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conjlab",
        description="conjugacy decisions, finite quotients, and witness "
                    "growth for a separability-tuned group family")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmts=("text", "json"), default_fmt="text"):
        p.add_argument("--d", default=DEFAULT_D,
                       help="central exponent function, e.g. constant:5, "
                            "table:2,3,5, nth-prime, program:PATH "
                            f"(default {DEFAULT_D})")
        p.add_argument("--format", choices=fmts, default=default_fmt)
        p.add_argument("--time", action="store_true",
                       help="report wall time")

    p = sub.add_parser("conj", help="decide conjugacy of two words")
    p.add_argument("word1")
    p.add_argument("word2")
    add_common(p)
    p.set_defaults(func=_cmd_conj)

    p = sub.add_parser("mckinsey",
                       help="interleaved word/quotient search")
    p.add_argument("word1")
    p.add_argument("word2")
    add_common(p)
    p.add_argument("--max-conj-len", type=int, default=4)
    p.add_argument("--max-specs", type=int, default=20000)
    p.add_argument("--max-order", type=int, default=None)
    p.set_defaults(func=_cmd_mckinsey)

    p = sub.add_parser("growth", help="witness growth table")
    p.add_argument("i_max", type=int,
                   help="largest relator index; rows cover i = 0..i_max")
    add_common(p, fmts=("csv", "json"), default_fmt="csv")
    p.add_argument("--max-specs", type=int, default=20000)
    p.set_defaults(func=_cmd_growth)

    p = sub.add_parser("check-quotient",
                       help="test a finite group table for a morphism")
    p.add_argument("table", help="path to a multiplication table file")
    add_common(p)
    p.set_defaults(func=_cmd_check_quotient)

    p = sub.add_parser("selftest", help="internal consistency battery")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WordParseError, ProgramError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
