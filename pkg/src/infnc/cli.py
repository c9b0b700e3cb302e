"""
Command line interface.

Exit status: 0 on success, 1 when a check fails, 2 on usage or input errors.
Rationals print as ``p/q``; Monte Carlo values print with 6 significant
digits and their standard error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import annular, cumulants, freeness, noncrossing, product, rmt
from .distribution import CumulantTable, Distribution, MissingValue, format_rational
from .words import Word

DEFAULT_SEED = 20240611


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _write_json(data: dict, path: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_distribution(path: str, sparse: bool) -> Distribution:
    return Distribution.from_json(_load_json(path), sparse=sparse)


def _load_marginal(path: str, sparse: bool) -> Distribution | CumulantTable:
    data = _load_json(path)
    if "kappa" in data:
        return CumulantTable.from_json(data, sparse=sparse)
    return Distribution.from_json(data, sparse=sparse)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _word(text: str) -> Word:
    try:
        return Word.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- subcommands


def cmd_enumerate(args) -> int:
    if args.nc is not None:
        items = [str(p) for p in noncrossing.enumerate_nc(args.nc)]
    elif args.pairings:
        items = [str(s) for s in annular.pairings(args.annular)]
    elif args.all_through:
        items = [str(s) for s in annular.enumerate_sncd_all_through(args.annular)]
    else:
        items = [str(s) for s in annular.enumerate_sncd(args.annular)]
    for line in items:
        print(line)
    print(f"count: {len(items)}")
    return 0


def cmd_cumulants(args) -> int:
    if args.kappa_dot is not None:
        poly = (cumulants.kappa_dot_moment_polynomial if args.moments else cumulants.kappa_dot_polynomial)(args.kappa_dot)
        print(poly)
        return 0
    if args.dist is None:
        raise UsageError("cumulants needs --dist or --kappa-dot")
    dist = _load_distribution(args.dist, args.sparse)
    if args.degree is not None:
        if args.degree > dist.degree:
            raise UsageError(f"distribution is only known to degree {dist.degree}")
        dist = dist.restricted(args.degree)
    if args.complex:
        table = cumulants.complex_infinitesimal_cumulants_from_distribution(dist)
    else:
        table = cumulants.infinitesimal_cumulants_from_distribution(dist)
    if args.output:
        _write_json(table.to_json(), args.output)
    show_prime = args.infinitesimal or args.complex
    print("word\tkappa" + ("\tkappa_prime" if show_prime else ""))
    for w in table.all_words():
        row = f"{w}\t{format_rational(table.kappa_of(w))}"
        if show_prime:
            row += f"\t{format_rational(table.kappa_prime_of(w))}"
        print(row)
    return 0


def cmd_tauprime(args) -> int:
    table = CumulantTable.from_json(_load_json(args.cumulants), sparse=args.sparse)
    if args.word is not None:
        if table.mode == "complex":
            value = cumulants.complex_tau_prime_from_cumulants(args.word, table)
        else:
            value = cumulants.tau_prime_from_cumulants(args.word, table)
        print(format_rational(value))
        return 0
    dist = cumulants.distribution_from_cumulants(table, degree=args.degree)
    if args.output:
        _write_json(dist.to_json(), args.output)
    print("word\ttau\ttau_prime")
    for w in dist.all_words():
        print(f"{w}\t{format_rational(dist.tau_of(w))}\t{format_rational(dist.tau_prime_of(w))}")
    return 0


def cmd_product(args) -> int:
    g = product.GroupingSpec(tuple(args.parts))
    if len(args.letters) != g.m:
        raise UsageError(f"--parts sums to {g.m} but --letters has {len(args.letters)} letters")
    dist = _load_distribution(args.dist, args.sparse)
    if g.m > dist.degree:
        raise UsageError(f"distribution is only known to degree {dist.degree}, need {g.m}")
    extract = (cumulants.complex_infinitesimal_cumulants_from_distribution if args.mode == "complex"
               else cumulants.infinitesimal_cumulants_from_distribution)
    table = extract(dist.restricted(g.m))
    word = args.letters
    if args.mode == "first-order":
        value = product.product_cumulant(g, word, table)
    elif args.mode == "complex":
        value = product.complex_product_cumulant_prime(g, word, table)
    else:
        value = product.product_cumulant_prime(g, word, table)
    if args.explain and args.mode != "first-order":
        parts = g.group(word)
        print(f"# entries: {', '.join(str(p) for p in parts)}")
        print("# noncrossing terms (partition: value)")
        for p in product.surviving_partitions(g):
            print(f"#   {p}: {format_rational(cumulants.dkappa_pi(p, word, table))}")
        if args.mode == "real":
            print("# annular terms (permutation: value)")
            for s in product.surviving_annular(g):
                print(f"#   {s}: {format_rational(cumulants.kappa_sigma_half(s, word, table))}")
    print(format_rational(value))
    return 0


def cmd_freeprod(args) -> int:
    if args.label and len(args.label) != len(args.marginal):
        raise UsageError("give one --label per --marginal")
    labels = args.label or [Path(p).stem for p in args.marginal]
    family = freeness.MarginalFamily(tuple((lab, _load_marginal(p, args.sparse)) for lab, p in zip(labels, args.marginal)))
    joint = freeness.free_product(family, args.degree)
    _write_json(joint.to_json(), args.output)
    return 0


def cmd_check(args) -> int:
    dist = _load_distribution(args.dist, args.sparse)
    labeling = None
    if args.labels:
        labeling = {int(k): str(v) for k, v in _load_json(args.labels).items()}
    kwargs = dict(degree=args.degree, max_length=args.max_length, max_letters=args.max_letters)
    reports = [("definition", freeness.check_definition(dist, labeling, **kwargs))]
    if args.cyclic:
        reports.append(("cyclic form", freeness.check_cyclic_form(dist, labeling, **kwargs)))
    for name, rep in reports:
        print(f"{name}: {rep.summary()}")
    return 0 if all(rep.passed for _, rep in reports) else 1


def cmd_mc_verify(args) -> int:
    data = _load_json(args.scenario)
    try:
        ensembles, words = rmt.parse_scenario(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed scenario: {exc}") from None
    ns = args.Ns or data.get("Ns") or [40, 80, 160]
    samples = args.samples or int(data.get("samples", 100000))
    checks = rmt.verify_asymptotic_freeness(ensembles, words, ns, samples, seed=args.seed,
                                            workers=args.workers, tolerance=args.tolerance)
    print(f"{'word':<16}{'tau_prime_hat':>16}{'std_err':>12}{'predicted':>12}{'z':>9}  result")
    for c in checks:
        print(f"{c.text:<16}{c.fit.tau_prime:>16.6g}{c.fit.tau_prime_se:>12.2g}{str(c.tau_prime):>12}"
              f"{c.z:>9.2f}  {'PASS' if c.passed else 'FAIL'}")
    if args.json:
        _write_json({"seed": args.seed, "Ns": list(ns), "samples": samples,
                     "results": [c.as_dict() for c in checks]}, args.json)
    return 0 if all(c.passed for c in checks) else 1


# -- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infnc", description="Exact combinatorics of real infinitesimal free probability.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list non-crossing partitions or annular permutations")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--nc", type=int, metavar="N", help="non-crossing partitions of [N]")
    what.add_argument("--annular", type=int, metavar="N", help="annular symmetric permutations on [±N]")
    p.add_argument("--all-through", action="store_true", help="only those with every cycle through")
    p.add_argument("--pairings-only", "--pairings", dest="pairings", action="store_true", help="only pairings")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("cumulants", help="free and infinitesimal cumulants of a distribution")
    p.add_argument("--dist", help="distribution JSON")
    p.add_argument("--degree", type=int)
    p.add_argument("--infinitesimal", action="store_true", help="also print the real infinitesimal cumulants")
    p.add_argument("--complex", action="store_true", help="print the complex infinitesimal cumulants instead")
    p.add_argument("--kappa-dot", type=int, metavar="N", help="print the annular correction polynomial of order N")
    p.add_argument("--moments", action="store_true", help="with --kappa-dot, expand in moments")
    p.add_argument("-o", "--output", help="write the cumulant table as JSON")
    p.set_defaults(func=cmd_cumulants)

    p = sub.add_parser("tauprime", help="moments and infinitesimal moments from cumulants")
    p.add_argument("--cumulants", required=True, help="cumulant table JSON")
    p.add_argument("--word", type=_word, help="evaluate τ′ on one word only")
    p.add_argument("--degree", type=int)
    p.add_argument("-o", "--output", help="write the distribution as JSON")
    p.set_defaults(func=cmd_tauprime)

    p = sub.add_parser("product", help="cumulants with products as entries")
    p.add_argument("--parts", type=_ints, required=True, help="interval sizes, e.g. 2,2")
    p.add_argument("--letters", type=_word, required=True, help='letters, e.g. "1 1 1 1"')
    p.add_argument("--dist", required=True, help="distribution JSON")
    p.add_argument("--mode", choices=("real", "complex", "first-order"), default="real",
                   help="real or complex infinitesimal cumulant, or the free cumulant")
    p.add_argument("--explain", action="store_true", help="list surviving terms")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("freeprod", help="joint distribution of free marginals")
    p.add_argument("--marginal", action="append", required=True, help="distribution or cumulant JSON; repeatable")
    p.add_argument("--label", action="append", help="label per marginal (default: file stem)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_freeprod)

    p = sub.add_parser("check", help="check the freeness conditions on a joint distribution")
    p.add_argument("--dist", required=True)
    p.add_argument("--labels", help="JSON mapping generator -> label (default: labels in the distribution)")
    p.add_argument("--degree", type=int)
    p.add_argument("--max-length", type=int, default=6)
    p.add_argument("--max-letters", type=int, default=3)
    p.add_argument("--cyclic", action="store_true", help="also check the cyclic form")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mc-verify", help="Monte Carlo check of asymptotic freeness")
    p.add_argument("--scenario", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int)
    p.add_argument("--Ns", type=_ints)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tolerance", type=float, default=3.0, help="in standard errors")
    p.add_argument("--json", help="write the report as JSON")
    p.set_defaults(func=cmd_mc_verify)

    for name in ("cumulants", "tauprime", "product", "freeprod", "check"):
        sub.choices[name].add_argument("--sparse", action="store_true", help="treat missing entries as zero")
    sub.choices["mc-verify"].set_defaults(sparse=False)
    sub.choices["enumerate"].set_defaults(sparse=False)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, MissingValue) as exc:
        message = exc.args[0] if isinstance(exc, MissingValue) and exc.args else exc
        print(f"infnc {args.command}: error: {message}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
