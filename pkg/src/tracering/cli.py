"""Command-line interface: ``tracering <command> ...``.

Exit codes: 0 ok, 2 bad input, 3 a verification failed, 4 unsupported
matrix size, 5 a configured cutoff was exceeded.  Progress lines go to
standard error; results go to standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .errors import ParseError, TraceRingError

THREADS_ENV = "TRACERING_THREADS"


@dataclass
class RunConfig:
    fmt: str = "text"
    seed: int = 0
    threads: int = 1
    quiet: bool = False

    def progress(self, msg: str) -> None:
        if not self.quiet:
            print(msg, file=sys.stderr, flush=True)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(cfg: RunConfig, data, text: str) -> None:
    if cfg.fmt == "json":
        print(json.dumps(data, indent=1, sort_keys=True))
    else:
        print(text)


def _md_key(md) -> str:
    return ",".join(str(a) for a in md)


def _parse_spec(args, n, d):
    from .matrix_eval import GenericMatrixSpec

    return GenericMatrixSpec(n, d, () if args.plain else (True,) * d)


# ---------------------------------------------------------------- commands

def cmd_identity(args, cfg: RunConfig) -> int:
    from .identities import fundamental_identity
    from .matrix_eval import GenericMatrixSpec, pi
    from .trace_algebra import format_polynomial
    from .words import parse_tuple

    words = parse_tuple(args.tuple)
    if len(words) != args.n + 1:
        raise ParseError(f"the identity for n={args.n} takes {args.n + 1} entries, got {len(words)}")
    p = fundamental_identity(words, args.n)
    data = {"n": args.n, "tuple": args.tuple, "expansion": format_polynomial(p), "terms": p.to_json()}
    code = 0
    if args.verify:
        letters = max(p.max_letter(), 1)
        ok = pi(p, GenericMatrixSpec(args.n, letters)).is_zero()
        data["vanishes"] = ok
        code = 0 if ok else 3
    _emit(cfg, data, data["expansion"])
    return code


def cmd_reduce(args, cfg: RunConfig) -> int:
    from .reduction import ReductionRule, default_rule, example_columns, reduce_once, solve_reduction
    from .trace_algebra import format_polynomial
    from .words import parse_word

    if args.rule:
        with open(args.rule) as fh:
            rule = ReductionRule.from_json(json.load(fh))
    elif args.columns == "example":
        if args.n != 2:
            raise ParseError("the classical column choice exists for n=2 only")
        rule = solve_reduction(2, example_columns())
    else:
        rule = default_rule(args.n, seed=args.rule_seed)
    if args.save:
        with open(args.save, "w") as fh:
            fh.write(rule.dumps())
    if args.word:
        word = parse_word(args.word)
        out = reduce_once(word, rule, range(1, max(word) + 1) if args.traceless else ())
        data = {"word": args.word, "result": format_polynomial(out), "terms": out.to_json()}
        _emit(cfg, data, data["result"])
        return 0
    spec = rule.specialize()
    data = {"rule": rule.to_json(), "rhs": format_polynomial(rule.rhs),
            "traceless_rhs": format_polynomial(spec), "support": len(rule.support())}
    if args.n <= 2:
        text = f"{format_polynomial(rule.lhs)} = {data['rhs']}\ntraceless: {data['traceless_rhs']}"
    else:
        text = (f"rule for n={args.n}: {data['support']} fundamental identities, "
                f"{len(rule.rhs)} terms ({len(spec)} traceless)")
    _emit(cfg, data, text)
    return 0


def _generators(args, cfg):
    from .presentation import load_c33_generators, minimal_generators

    if (args.n, args.d) == (3, 3) and not args.plain and not getattr(args, "recompute", False):
        return load_c33_generators(diagonal_first=True)
    return minimal_generators(args.n, args.d, _parse_spec(args, args.n, args.d), seed=cfg.seed,
                              threads=cfg.threads, progress=cfg.progress)


def cmd_generators(args, cfg: RunConfig) -> int:
    from .presentation import minimal_generators, verify_generating_set
    from .trace_algebra import format_polynomial

    gens = minimal_generators(args.n, args.d, _parse_spec(args, args.n, args.d), args.max_degree,
                              seed=cfg.seed, threads=cfg.threads, progress=cfg.progress)
    rows = [{"label": g.label, "multidegree": list(g.multidegree), "definition": format_polynomial(g.definition)}
            for g in gens]
    data = {"n": args.n, "d": args.d, "count": len(gens),
            "multiplicities": {str(k): v for k, v in gens.multiplicities().items()}, "generators": rows}
    code = 0
    if args.verify:
        bad = verify_generating_set(gens, seed=cfg.seed)
        data["verification_failures"] = {_md_key(md): v for md, v in bad.items()}
        code = 3 if bad else 0
    lines = [f"{len(gens)} generators, multiplicities "
             + " ".join(f"{k}^{v}" for k, v in gens.multiplicities().items())]
    lines += [f"{r['label']:>7}  {_md_key(r['multidegree']):>7}  {r['definition']}" for r in rows]
    _emit(cfg, data, "\n".join(lines))
    return code


def cmd_relations(args, cfg: RunConfig) -> int:
    from .presentation import minimal_relation_counts

    gens = _generators(args, cfg)
    counts = minimal_relation_counts(gens, args.max_degree, from_degree=args.from_degree, seed=cfg.seed,
                                     threads=cfg.threads, progress=cfg.progress)
    data = {"n": args.n, "d": args.d, "generators": gens.source, "counts": {_md_key(k): v for k, v in counts.items()}}
    text = "\n".join(f"{_md_key(k)}: {v}" for k, v in counts.items()) or "no relations"
    _emit(cfg, data, text)
    return 0


def cmd_certify(args, cfg: RunConfig) -> int:
    from .presentation import certify_relation_table, load_c33_generators, load_relation_table
    from .reduction import ReductionRule, default_rule

    path = args.data
    if path and not os.path.exists(path) and os.path.basename(path) == path:
        path = None  # the shipped table, referred to by name
    candidates = load_relation_table(path)
    if args.max_degree:
        candidates = [c for c in candidates if sum(c.multidegree) <= args.max_degree]
    gens = load_c33_generators(diagonal_first=True)
    if args.rule:
        with open(args.rule) as fh:
            rule = ReductionRule.from_json(json.load(fh))
    else:
        rule = default_rule(3, seed=args.rule_seed)
    report = certify_relation_table(candidates, rule, gens, seed=cfg.seed, threads=cfg.threads,
                                    orbit_degree=args.orbit_degree, progress=cfg.progress)
    data = report.to_json()
    summary = report.summary()
    ok = report.ok and (not args.require_complete or not summary["incomplete"])
    lines = [f"{summary['candidates']} candidates: "
             + ", ".join(f"{k} {v}" for k, v in summary["status"].items())]
    for c in report.candidates:
        if c["status"] != "certified" or c["flags"]:
            lines.append(f"  {c['tuple']}  {_md_key(c['multidegree'])}  {c['status']}  {'; '.join(c['flags'])}")
    lines.append(f"multidegrees complete: {summary['complete']}, incomplete: "
                 f"{[_md_key(m) for m in summary['incomplete']]}, unverified: "
                 f"{[_md_key(m) for m in summary['unverified']]}")
    if report.orbits:
        orb = report.orbits
        bad = [m for m in orb["multidegrees"] if m["complete"] != "yes"]
        lines.append(f"orbit expansion: {len(orb['candidates'])} permuted relations over "
                     f"{len(orb['multidegrees'])} multidegrees, {len(bad)} not complete")
    _emit(cfg, data, "\n".join(lines))
    return 0 if ok else 3


def cmd_bound(args, cfg: RunConfig) -> int:
    from .presentation.bounds import BoundInput, derksen_bound, generic_bound, hsop_bound, parse_degrees

    if args.generic:
        n, d = args.generic
        value = generic_bound(n, d)
        data = {"kind": "generic", "n": n, "d": d, "bound": value}
    else:
        if args.degrees is None or args.a is None:
            raise ParseError("give --degrees and --a (and --dim, or --hsop-degrees)")
        degrees = parse_degrees(args.degrees)
        if args.hsop_degrees:
            if args.hsop_degrees == "c33":
                from .presentation.hsop import load_c33_hsop

                hs = load_c33_hsop().degrees
            else:
                hs = parse_degrees(args.hsop_degrees)
            value = hsop_bound(degrees, hs, args.a)
            data = {"kind": "hsop", "bound": value, "max_degree": max(degrees), "a": args.a, "hsop_sum": sum(hs)}
        else:
            if args.dim is None:
                raise ParseError("--dim is required")
            try:
                value = derksen_bound(BoundInput(tuple(degrees), args.dim, args.a))
            except ValueError as e:
                raise ParseError(str(e)) from None
            data = {"kind": "derksen", "bound": value, "dim": args.dim, "a": args.a, "degrees": degrees}
    _emit(cfg, data, str(value))
    return 0


def cmd_hilbert(args, cfg: RunConfig) -> int:
    from .presentation import hilbert_function, hilbert_function_presented, minimal_relations
    from .presentation.hilbert import _check_cutoff, hilbert_cutoff

    cutoff = None if args.no_cutoff else (args.cutoff if args.cutoff is not None else hilbert_cutoff(args.n))
    _check_cutoff(args.n, args.k, cutoff)
    spec = _parse_spec(args, args.n, args.d)
    values = [hilbert_function(args.n, args.d, spec, k, cutoff=cutoff, seed=cfg.seed, threads=cfg.threads)
              for k in range(args.k + 1)]
    data = {"n": args.n, "d": args.d, "k": args.k, "values": values}
    code = 0
    if args.check:
        gens = _generators(args, cfg)
        rels = minimal_relations(gens, args.k, seed=cfg.seed, threads=cfg.threads)
        presented = [hilbert_function_presented(gens, rels, k, cutoff=cutoff, threads=cfg.threads)
                     for k in range(args.k + 1)]
        data["presented"] = presented
        data["agree"] = presented == values
        code = 0 if data["agree"] else 3
    text = " ".join(str(v) for v in values)
    if args.check:
        text += f"\npresented: {' '.join(str(v) for v in data['presented'])}\nagree: {data['agree']}"
    _emit(cfg, data, text)
    return code


# ---------------------------------------------------------------- parser

def _size(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for every randomized step")
    common.add_argument("--threads", type=_size, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")
    common.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")

    p = argparse.ArgumentParser(prog="tracering", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("identity", parents=[common], help="expand a fundamental trace identity")
    s.add_argument("-n", type=_size, required=True)
    s.add_argument("tuple", help='tuple notation, e.g. "(12,3,4)"')
    s.add_argument("--verify", action="store_true", help="also check that it vanishes on matrices")
    s.set_defaults(func=cmd_identity)

    s = sub.add_parser("reduce", parents=[common], help="trace reduction rule, or one reduction step")
    s.add_argument("-n", type=_size, required=True)
    s.add_argument("--word", help="apply the rule once to this word, e.g. 1122331")
    s.add_argument("--traceless", action="store_true", help="drop traces of single letters")
    s.add_argument("--columns", choices=("all", "example"), default="all")
    s.add_argument("--rule", help="load a rule from JSON instead of solving")
    s.add_argument("--rule-seed", type=int, default=None, help="generic rule with random free variables")
    s.add_argument("--save", help="write the rule as JSON")
    s.set_defaults(func=cmd_reduce)

    for name, func, hlp in (("generators", cmd_generators, "minimal generating set"),
                            ("relations", cmd_relations, "numbers of minimal relations per multidegree")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("-n", type=_size, required=True)
        s.add_argument("-d", type=_size, required=True)
        s.add_argument("--plain", action="store_true", help="generic matrices instead of traceless ones")
        s.set_defaults(func=func)
    gen, rel = sub.choices["generators"], sub.choices["relations"]
    gen.add_argument("--max-degree", type=_size, default=None)
    gen.add_argument("--verify", action="store_true", help="re-check minimality and spanning")
    rel.add_argument("--max-degree", type=_size, required=True)
    rel.add_argument("--from-degree", type=_size, default=1)
    rel.add_argument("--recompute", action="store_true", help="compute the generators instead of loading them")

    s = sub.add_parser("certify", parents=[common], help="certify the 3x3 relation table")
    s.add_argument("--data", default="c33_relations.json", help="relation table (default: the shipped one)")
    s.add_argument("--rule", help="reduction rule JSON (default: the shipped n=3 rule)")
    s.add_argument("--rule-seed", type=int, default=None, help="use a generic rule instead")
    s.add_argument("--max-degree", type=_size, default=None)
    s.add_argument("--orbit-degree", type=int, default=9,
                   help="carry relations up to this degree to permuted multidegrees (0: off)")
    s.add_argument("--require-complete", action="store_true",
                   help="also fail when a multidegree's candidates do not fill its relation space")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("bound", parents=[common], help="degree bounds for the relations")
    s.add_argument("--degrees", help="generator degrees, e.g. 6x10,5x9,4x9,3x11,2x6,1x3")
    s.add_argument("--dim", type=int)
    s.add_argument("--a", type=int, help="a-invariant (degree of the Hilbert series)")
    s.add_argument("--hsop-degrees", help="degrees of an hsop (or 'c33' for the shipped one); gives the bound modulo it")
    s.add_argument("--generic", type=int, nargs=2, metavar=("N", "D"),
                   help="bound from degrees <= n^2 and a = -dim")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("hilbert", parents=[common], help="Hilbert function values H(0..k)")
    s.add_argument("-n", type=_size, required=True)
    s.add_argument("-d", type=_size, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--plain", action="store_true")
    s.add_argument("--cutoff", type=int, default=None, help="largest degree allowed (default per n)")
    s.add_argument("--no-cutoff", action="store_true")
    s.add_argument("--check", action="store_true", help="compare with generators modulo relations")
    s.set_defaults(func=cmd_hilbert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.format, args.seed, args.threads or _default_threads(), args.quiet)
    try:
        return args.func(args, cfg)
    except TraceRingError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ParseError.exit_code


if __name__ == "__main__":
    sys.exit(main())
