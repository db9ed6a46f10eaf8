"""Command-line interface.

``--n K`` is always the monoid degree ``K = n + 1``: maps have ``K`` images
and pairs are drawn from P_{K-1}.

Exit codes: 0 success, 1 verification failure, 2 usage/validation error,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import iso
from .algebra import basis_element
from .bounds import CLI_MAX_DEGREE, DEFAULT_EXHAUSTIVE_DEGREE, max_degree
from .catalan import CMap, compose, enumerate_monoid
from .errors import CatalanError, ResourceError
from .posets import PosetPair, enumerate_pairs
from .rings import RingSpec
from .verify import MUTATIONS, dumps_report, replay, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _map_arg(text: str, degree: int, flag: str) -> CMap:
    f = CMap.parse(text)
    if f.degree != degree:
        raise CatalanError(f"{flag} has {f.degree} images but --n is {degree}")
    return f


def _emit(obj, fmt: str, text: str) -> None:
    print(json.dumps(obj) if fmt == "json" else text)


def cmd_enumerate(args) -> int:
    bound = args.max_n if args.max_n is not None else max_degree(CLI_MAX_DEGREE)
    if args.pairs:
        pairs = enumerate_pairs(args.n - 1, bound=bound)
        _emit([p.to_json() for p in pairs], args.format, "\n".join(map(str, pairs)))
    else:
        maps = enumerate_monoid(args.n, bound=bound)
        _emit([f.to_json() for f in maps], args.format, "\n".join(map(str, maps)))
    return EXIT_OK


def cmd_compose(args) -> int:
    h = compose(_map_arg(args.f, args.n, "--f"), _map_arg(args.g, args.n, "--g"))
    _emit(h.to_json(), args.format, str(h))
    return EXIT_OK


def cmd_phi(args) -> int:
    ring = RingSpec.parse(args.ring)
    e = iso.phi(basis_element(_map_arg(args.f, args.n, "--f"), ring))
    _emit(e.to_json(), args.format, str(e))
    return EXIT_OK


def cmd_phi_inv(args) -> int:
    ring = RingSpec.parse(args.ring)
    _check_bound(args.n)
    e = iso.phi_inverse(basis_element(PosetPair.parse(args.n - 1, args.pair), ring), bound=args.n)
    _emit(e.to_json(), args.format, str(e))
    return EXIT_OK


def cmd_matrix(args) -> int:
    ring = RingSpec.parse(args.ring)
    _check_bound(args.n)
    if args.inverse:
        M = iso.phi_inverse_matrix(args.n - 1, ring, bound=args.n)
    else:
        M = iso.phi_matrix(args.n - 1, ring, bound=args.n)
    Path(args.out).write_text(M.to_csv())
    print(f"wrote {M.dim}x{M.dim} matrix to {args.out}", file=sys.stderr)
    return EXIT_OK


def _check_bound(degree: int) -> None:
    limit = max_degree(CLI_MAX_DEGREE)
    if degree > limit:
        raise ResourceError(f"degree {degree} exceeds the bound {limit}")


def cmd_verify(args) -> int:
    if args.replay is not None:
        raw = args.replay
        if not raw.lstrip().startswith("{"):
            raw = Path(raw).read_text()
        try:
            case = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CatalanError(f"--replay is not valid JSON: {exc}") from exc
        ok = replay(case, mutation=args.mutate)
        print(json.dumps({"replayed": case, "pass": ok}))
        return EXIT_OK if ok else EXIT_FAIL
    if args.n is None:
        raise CatalanError("verify needs --n (or --replay)")
    ring = RingSpec.parse(args.ring)
    report = verify_all(
        args.n,
        ring,
        seed=args.seed,
        samples=args.samples,
        exhaustive_bound=args.max_exhaustive,
        mutation=args.mutate,
    )
    if args.format == "json":
        print(dumps_report(report))
    else:
        for c in report.checks:
            status = "ok  " if c.failures == 0 else "FAIL"
            print(f"{status} {c.name:<28} cases={c.cases} failures={c.failures} time={c.wall_time:.3f}s")
        print("PASS" if report.passed else "FAIL")
    if report.passed:
        return EXIT_OK
    for c in report.checks:
        if c.counterexample is not None:
            print(json.dumps(c.counterexample), file=sys.stderr)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="catalan-incidence", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("enumerate", cmd_enumerate, "list the monoid C_K, or the pairs of P_{K-1}")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pairs", action="store_true")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--max-n", type=int, default=None, help=f"enumeration bound (default {CLI_MAX_DEGREE})")

    sp = add("compose", cmd_compose, "print f*g, i.e. i -> f(g(i))")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = add("phi", cmd_phi, "image of a map in the incidence algebra")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--ring", default="Z")
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = add("phi-inv", cmd_phi_inv, "preimage of a pair X<Y in the monoid algebra")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pair", required=True, help='e.g. "{1}<{2}" or "{}<{}"')
    sp.add_argument("--ring", default="Z")
    sp.add_argument("--format", choices=("json", "text"), default="json")

    sp = add("matrix", cmd_matrix, "write the matrix of phi (or its inverse) as CSV")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ring", default="Z")
    sp.add_argument("--out", required=True)
    sp.add_argument("--inverse", action="store_true")

    sp = add("verify", cmd_verify, "run the property suite")
    sp.add_argument("--n", type=int)
    sp.add_argument("--ring", default="Z")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=None, help="switch to randomized mode")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--max-exhaustive", type=int, default=None,
                    help=f"largest degree for exhaustive mode (default {DEFAULT_EXHAUSTIVE_DEGREE})")
    sp.add_argument("--mutate", choices=sorted(MUTATIONS), default=None,
                    help="swap in a deliberately broken product to test the harness")
    sp.add_argument("--replay", default=None, help="counterexample JSON (inline or a file path)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    n = getattr(args, "n", None)
    try:
        if n is not None and n < 1:
            raise CatalanError(f"--n must be >= 1, got {n}")
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CatalanError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
