"""Command-line front end.

Exit codes: 0 when everything computed and every check passed, 1 when a
mathematical check failed, 2 on bad input or a violated precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import formats
from .core import (
    CylinderSet,
    FWeightError,
    InvariantError,
    all_strings,
    canonical_key,
    covers,
    parse_bits,
    parse_rational,
    render_bits,
    render_rational,
)
from .dnrsim import exhaustive_sweep, product_space_size, run_propagation, verify_witness
from .estimators import CodeFamilyEstimator, ComplexityEstimator, TableEstimator
from .families import (
    deficiency_profile,
    requests_from_family,
    semimeasure_from_family,
    test_family_audit,
    universal_test_generate,
)
from .goodcover import build_cover, verify_good_cover
from .kraft import KraftError, kraft_chaitin_assign, kraft_sum
from .levin import (
    levin_from_functional,
    levin_measure_test,
    levin_pushforward_bound,
    levin_truncate,
    levin_validate,
)
from .selftest import SUITES, run_selftest
from .transforms import (
    convex_rationalize,
    exact_oracle,
    fg_bound_check,
    increasing_pushforward,
    length_scaled_oracle,
    log2_inflation,
    normalize_exponent,
    sigma02_weight,
    smallest_c,
)
from .weights import dwt, pwt, vwt_bruteforce, vwt_convex, vwt_depth_bounded


class Report:
    """Ordered result lines, check outcomes and witness listings."""

    def __init__(self, command: str):
        self.command = command
        self.results: list[tuple[str, Any]] = []
        self.checks: list[tuple[str, bool]] = []
        self.listings: list[tuple[str, list[str]]] = []

    def add(self, key: str, value: Any) -> None:
        self.results.append((key, _render(value)))

    def check(self, name: str, ok: bool) -> bool:
        self.checks.append((name, bool(ok)))
        return ok

    def listing(self, name: str, items) -> None:
        self.listings.append((name, [_render(x) for x in items]))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def text(self) -> str:
        lines = [f"command {self.command}"]
        lines += [f"{k} {v}" for k, v in self.results]
        for name, items in self.listings:
            lines += [f"{name} {x}" for x in items]
        lines += [f"check {n} {'pass' if ok else 'fail'}" for n, ok in self.checks]
        return "\n".join(lines) + "\n"

    def json(self) -> str:
        return json.dumps({
            "command": self.command,
            "results": dict(self.results),
            "listings": dict(self.listings),
            "checks": {n: ("pass" if ok else "fail") for n, ok in self.checks},
            "passed": self.passed,
        }, indent=2) + "\n"


def _render(value: Any) -> Any:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Fraction, int)):
        return render_rational(Fraction(value)) if isinstance(value, Fraction) else str(value)
    if isinstance(value, (CylinderSet, frozenset, set)):
        return " ".join(render_bits(s) for s in sorted(value, key=canonical_key)) or "-"
    if value is None:
        return "undef"
    return str(value)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FWeightError(f"cannot read {path}: {exc.strerror}") from None


def _set(path):
    return formats.read_set(_read(path))


def _weights(path):
    return formats.read_weights(_read(path))


def _estimator(spec: str, L: int) -> ComplexityEstimator:
    if spec == "code-family":
        return CodeFamilyEstimator(L)
    return TableEstimator(formats.read_estimator_table(_read(spec)), L)


# --------------------------------------------------------------------------
# commands

def cmd_weights(args, rep: Report) -> None:
    A, w = _set(args.set), _weights(args.weights)
    if args.which == "dwt":
        rep.add("value", dwt(A, w))
        return
    if args.which == "pwt":
        r = pwt(A, w)
    else:
        mode = args.mode or ["convex"]
        if mode[0] == "convex" and len(mode) == 1:
            r = vwt_convex(A, w)
        elif mode[0] in ("bounded", "brute") and len(mode) == 2 and mode[1].isdigit():
            fn = vwt_depth_bounded if mode[0] == "bounded" else vwt_bruteforce
            r = fn(A, w, int(mode[1]))
        else:
            raise FWeightError("--mode is 'convex', 'bounded K' or 'brute B'")
        rep.add("method", r.method)
        if r.depth_bound is not None:
            rep.add("depth-bound", r.depth_bound)
    rep.add("value", r.value)
    rep.listing("witness", sorted(r.witness, key=canonical_key))


def _rational_values(text: str) -> dict[str, Fraction]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise formats.ParseError(lineno, "expected '<bits> <rational>'")
        try:
            out[parse_bits(toks[0])] = parse_rational(toks[1])
        except (FWeightError, ValueError, ZeroDivisionError) as exc:
            raise formats.ParseError(lineno, str(exc)) from None
    return out


def _h_function(args):
    if args.h_log2 is not None:
        return log2_inflation(args.h_log2), f"log2 eps={args.h_log2}"
    if args.h_table is not None:
        table = {}
        for lineno, line in enumerate(_read(args.h_table).splitlines(), 1):
            toks = line.split("#", 1)[0].split()
            if not toks:
                continue
            if len(toks) != 2 or not all(t.isdigit() for t in toks):
                raise formats.ParseError(lineno, "expected '<n> <h(n)>'")
            table[int(toks[0])] = int(toks[1])
        return table, "table"
    return (lambda n: n), "identity"


def cmd_transform(args, rep: Report) -> None:
    which = args.which
    if which == "int-normalize":
        values = _rational_values(_read(args.values))
        for s in sorted(values, key=canonical_key):
            rep.add(render_bits(s), normalize_exponent(values[s], len(s)))
    elif which == "pushforward":
        A, w = _set(args.set), _weights(args.weights)
        bar = increasing_pushforward(A, w)
        rep.add("dwt-before", dwt(A, w))
        rep.add("dwt-after", dwt(bar, w))
        rep.listing("member", sorted(bar, key=canonical_key))
    elif which == "fg-check":
        A, w = _set(args.set), _weights(args.weights)
        h, hname = _h_function(args)
        c = args.c if args.c is not None else smallest_c(h, {w.exponent(s) for s in A})
        r = fg_bound_check(A, w, h, c)
        rep.add("h", hname)
        rep.add("c", c)
        for n, P in r.slices.items():
            rep.add(f"slice {n}", P)
        rep.add("dwt_g", r.dwt_g)
        rep.add("pwt_f", r.pwt_f)
        rep.add("bound", r.bound)
        rep.check("dwt_g<=2^c*pwt_f", r.passed)
    elif which == "sigma02":
        T = formats.read_trees(_read(args.trees))
        w = sigma02_weight(T, args.depth)
        for s in all_strings(args.depth):
            rep.add(render_bits(s), w.exponent(s))
    elif which == "rationalize":
        w = _weights(args.weights)
        oracle = length_scaled_oracle(w.s) if w.s is not None and args.exact_s else exact_oracle(w)
        eps = parse_rational(args.eps)
        wb = convex_rationalize(oracle, eps, args.depth)
        for s in all_strings(args.depth):
            rep.add(render_bits(s), wb(s))


def cmd_cover(args, rep: Report) -> None:
    w = _weights(args.weights)
    if args.which == "build":
        stream = formats.read_stream(_read(args.stream))
        B = build_cover(stream, w)
        rep.listing("cover", sorted(B, key=canonical_key))
        rep.add("pwt", pwt(B, w).value)
        if args.verify:
            _verify_into(rep, CylinderSet(stream), B, w, args.brute)
    else:
        _verify_into(rep, _set(args.set), _set(args.cover), w, args.brute)


def _verify_into(rep, A, B, w, brute):
    r = verify_good_cover(A, B, w, brute_bound=brute)
    rep.add("method", r.method)
    rep.add("pwt-cover", r.pwt_cover)
    rep.add("vwt-set", r.vwt_set)
    if r.vwt_cover is not None:
        rep.add("vwt-cover", r.vwt_cover)
        rep.add("dwt-cover-minimal", r.dwt_cover_minimal)
    rep.check("contained", r.contained)
    rep.check("pwt<=vwt", r.pwt_cover <= r.vwt_set)


def cmd_kc(args, rep: Report) -> None:
    reqs = formats.read_requests(_read(args.requests))
    rep.add("kraft-sum", kraft_sum(r.length for r in reqs))
    try:
        out = kraft_chaitin_assign(reqs)
    except KraftError as exc:
        rep.add("failed-at", exc.index)
        rep.add("running-sum", exc.running_sum)
        rep.check("assigned", False)
        return
    for label, word in out:
        rep.add(f"code {label}", render_bits(word))
    rep.check("assigned", True)


def cmd_tests(args, rep: Report) -> None:
    w = _weights(args.weights)
    if args.which == "gen":
        est = _estimator(args.estimator, args.L)
        g = universal_test_generate(est, w, args.i, args.L)
        rep.add("level", g.level)
        rep.add("admissible", g.admissible)
        rep.add("estimator-kraft-sum", est.kraft_sum(args.L))
        rep.add("dwt", g.weight)
        rep.listing("member", sorted(g.members, key=canonical_key))
        if g.admissible:
            rep.check("dwt<=2^-i", g.weight <= Fraction(1, 2**args.i))
    else:
        fam = formats.read_family(_read(args.family))
        a = test_family_audit(fam, w, args.strong)
        rep.add("mode", "strong" if args.strong else "plain")
        for row in a.rows:
            rep.add(f"level {row.index}", f"{render_rational(row.value)} <= "
                                          f"{render_rational(row.bound)} {'ok' if row.ok else 'FAIL'}")
        rep.add("pwt-partial-sum", a.bc_sum)
        if a.first_failure is not None:
            rep.add("first-failure", a.first_failure)
        rep.check("audit", a.passed)
        if a.passed:
            reqs, c = requests_from_family(fam, w) if w.is_integer_exponent else ([], None)
            if c is not None:
                rep.add("request-offset", c)
                rep.add("request-kraft-sum", kraft_sum(r.length for r in reqs))


def cmd_deficiency(args, rep: Report) -> None:
    w = _weights(args.weights)
    bits = parse_bits(args.bits)
    est = _estimator(args.estimator, max(len(bits), args.L or 0))
    p = deficiency_profile(bits, w, est)
    rep.add("profile", " ".join(str(d) for d in p.deficiencies) or "-")
    rep.add("max-level", p.max_level)


def cmd_semimeasure(args, rep: Report) -> None:
    fam = formats.read_family(_read(args.family))
    w = _weights(args.weights)
    sigma = parse_bits(args.sigma)
    v = semimeasure_from_family(fam, w, sigma)
    for i, m in v.levels.items():
        rep.add(f"m{i}", m)
    rep.add("mixture", v.mixture)


def cmd_levin(args, rep: Report) -> None:
    phi = formats.read_functional(_read(args.functional))
    if args.dX is not None:
        phi.dX = args.dX
    V = levin_from_functional(phi)

    def dump(system, prefix="V"):
        for s in all_strings(system.dX):
            rep.add(f"{prefix} {render_bits(s)}", f"{_render(system[s])} mu={render_rational(system.measure(s))}")

    which = args.which
    if which == "build":
        dump(V)
    elif which == "validate":
        r = levin_validate(V)
        for kind, a, b in r.violations:
            rep.add("violation", f"{kind} {render_bits(a)}" + (f" {render_bits(b)}" if b is not None else ""))
        rep.check("levin-system", r.passed)
    elif which == "truncate":
        caps = formats.read_caps(_read(args.caps))
        Vt = levin_truncate(V, caps)
        dump(Vt, "T")
        ok = levin_validate(Vt).passed
        for s in all_strings(V.dX):
            ok = ok and Vt.measure(s) <= caps[s] and covers(Vt[s], V[s])
        rep.check("truncation", ok)
    elif which == "test":
        w = _weights(args.weights)
        A = levin_measure_test(V, w, args.i)
        rep.listing("member", sorted(A, key=canonical_key))
        rep.add("pwt", pwt(A, w).value)
        rep.check("pwt<=2^-i", pwt(A, w).value <= Fraction(1, 2**args.i))
    else:
        w = _weights(args.weights)
        r = levin_pushforward_bound(V, _set(args.set), w, args.c)
        rep.add("measure", r.measure)
        rep.add("disjoint-sum", r.disjoint_sum)
        rep.add("pwt", r.pwt)
        rep.add("bound", r.bound)
        rep.check("pushforward", r.passed)


def cmd_dnr(args, rep: Report) -> None:
    if args.exhaustive:
        d, N, vmax = args.exhaustive
        r = exhaustive_sweep(d, N, tuple(range(vmax + 1)))
        rep.add("instances", r.instances)
        rep.add("runs", r.runs)
        rep.add("failures", len(r.failures))
        rep.check("covers-product-space", r.instances == product_space_size(d, N, vmax + 1))
        rep.check("all-witnesses", r.passed)
        return
    if not (args.cls and args.table is not None and args.N is not None):
        raise FWeightError("dnr simulate needs --class, --table and -N (or --exhaustive)")
    Q = formats.read_class(_read(args.cls))
    T = formats.read_oracle_table(_read(args.table), args.N)
    run = run_propagation(Q, T)
    rep.add("g", " ".join(map(str, run.g)) or "-")
    for n, c in enumerate(run.chain):
        rep.add(f"chain {n}", c)
    rep.add("witness", render_bits(run.witness))
    rep.check("witness", verify_witness(run, Q, T).passed)


def cmd_selftest(args, rep: Report) -> None:
    for r in run_selftest(args.scale, args.seed, args.suite):
        rep.add(f"suite {r.name}", f"{r.cases} cases" + ("" if r.passed else f" : {r.message}"))
        rep.check(r.name, r.passed)


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fweight", description="Exact f-weight calculus on finite instances.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("weights", help="direct, prefix-free and vehement weights")
    s.add_argument("which", choices=("dwt", "pwt", "vwt"))
    s.add_argument("--set", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--mode", nargs="+", metavar="MODE", help="convex | bounded K | brute B")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("transform", help="exponent and test-set transforms")
    s.add_argument("which", choices=("int-normalize", "pushforward", "fg-check", "sigma02", "rationalize"))
    s.add_argument("--values", help="int-normalize input: lines '<bits> <rational>'")
    s.add_argument("--set")
    s.add_argument("--weights")
    s.add_argument("--h-log2", metavar="EPS", help="use h(x) = ceil((1+EPS) log2 x)")
    s.add_argument("--h-table", metavar="FILE", help="lines '<n> <h(n)>'")
    s.add_argument("-c", type=int)
    s.add_argument("--trees")
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--eps", default="1")
    s.add_argument("--exact-s", action="store_true",
                   help="rationalize 2^(-s|σ|) exactly instead of the ceiling-rounded weight")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("cover", help="good covers for convex weights")
    s.add_argument("which", choices=("build", "verify"))
    s.add_argument("--stream")
    s.add_argument("--set")
    s.add_argument("--cover")
    s.add_argument("--weights", required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--brute", type=int, metavar="B", help="verify with exhaustive search of bound B")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("kc", help="Kraft-Chaitin code assignment")
    s.add_argument("which", choices=("assign",))
    s.add_argument("--requests", required=True)
    s.set_defaults(func=cmd_kc)

    s = sub.add_parser("tests", help="universal tests and audits")
    s.add_argument("which", choices=("gen", "audit"))
    s.add_argument("--weights", required=True)
    s.add_argument("--estimator", default="code-family", help="'code-family' or a table file")
    s.add_argument("-i", type=int, default=0)
    s.add_argument("-L", type=int, default=8)
    s.add_argument("--family")
    s.add_argument("--strong", action="store_true")
    s.set_defaults(func=cmd_tests)

    s = sub.add_parser("deficiency", help="deficiency profile of a string")
    s.add_argument("--bits", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--estimator", default="code-family")
    s.add_argument("-L", type=int)
    s.set_defaults(func=cmd_deficiency)

    s = sub.add_parser("semimeasure", help="semimeasures from a test family")
    s.add_argument("--family", required=True)
    s.add_argument("--weights", required=True)
    s.add_argument("--sigma", default="e")
    s.set_defaults(func=cmd_semimeasure)

    s = sub.add_parser("levin", help="finite Levin systems")
    s.add_argument("which", choices=("build", "validate", "truncate", "test", "push"))
    s.add_argument("--functional", required=True)
    s.add_argument("--dX", type=int)
    s.add_argument("--caps")
    s.add_argument("--weights")
    s.add_argument("--set")
    s.add_argument("-i", type=int, default=0)
    s.add_argument("-c", type=int, default=0)
    s.set_defaults(func=cmd_levin)

    s = sub.add_parser("dnr", help="diagonal propagation simulation")
    s.add_argument("which", choices=("simulate",))
    s.add_argument("--class", dest="cls")
    s.add_argument("--table")
    s.add_argument("-N", type=int)
    s.add_argument("--exhaustive", nargs=3, type=int, metavar=("D", "N", "VMAX"))
    s.set_defaults(func=cmd_dnr)

    s = sub.add_parser("selftest", help="run the bundled invariant suites")
    s.add_argument("scale", choices=("small", "full"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--suite", action="append", choices=sorted(SUITES))
    s.set_defaults(func=cmd_selftest)
    return p


_REQUIRED = {
    ("transform", "int-normalize"): ("values",),
    ("transform", "pushforward"): ("set", "weights"),
    ("transform", "fg-check"): ("set", "weights"),
    ("transform", "sigma02"): ("trees",),
    ("transform", "rationalize"): ("weights",),
    ("cover", "build"): ("stream",),
    ("cover", "verify"): ("set", "cover"),
    ("tests", "audit"): ("family",),
    ("levin", "truncate"): ("caps",),
    ("levin", "test"): ("weights",),
    ("levin", "push"): ("weights", "set"),
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    which = getattr(args, "which", None)
    missing = [f"--{a}" for a in _REQUIRED.get((args.command, which), ()) if getattr(args, a) is None]
    if missing:
        print(f"fweight: {args.command} {which} needs {', '.join(missing)}", file=sys.stderr)
        return 2
    rep = Report(" ".join([args.command] + ([which] if which else [])))
    try:
        args.func(args, rep)
    except InvariantError as exc:
        print(f"fweight: invariant failed: {exc}", file=sys.stderr)
        return 1
    except FWeightError as exc:
        print(f"fweight: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(rep.json() if args.format == "json" else rep.text())
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
