"""``hookprod`` command line.

Exit codes: 0 success, 2 input or validation error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import linalg_fp
from .bipersistence import axis_barcodes, grid_module_of_pair
from .complex_io import read_complex
from .distances import SearchConfig, gamma_bar_search
from .errors import HookprodError, NotHookDecomposable
from .gamma_product import build_product, hooks_of_product, parse_matching, reconstruct_from_hooks
from .grid_modules import as_multiset, evaluate_hooks, grid_to_csv, hook_decompose, hooks_from_csv, \
    hooks_to_csv, rank_equal
from .persistence1 import compute_diagram, diagram_from_csv, diagram_to_csv
from .svg import render_supports


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def default_prime() -> int:
    return int(os.environ.get("HOOKPROD_PRIME", linalg_fp.DEFAULT_PRIME))


def cmd_diagram(args):
    c = read_complex(args.complex)
    _emit(diagram_to_csv(compute_diagram(c, args.function, args.degree, args.prime)), args.output)


def cmd_product(args):
    pd_f = diagram_from_csv(_read(args.pdf))
    pd_g = diagram_from_csv(_read(args.pdg))
    gamma = parse_matching(_read(args.matching))
    _emit(hooks_to_csv(hooks_of_product(build_product(pd_f, pd_g, gamma))), args.output)


def cmd_grid(args):
    c = read_complex(args.complex)
    _emit(grid_to_csv(grid_module_of_pair(c, args.degree, args.prime)), args.output)


def cmd_gammabar(args):
    c = read_complex(args.complex)
    pd_f, pd_g = axis_barcodes(c, args.degree, args.prime)
    target = grid_module_of_pair(c, args.degree, args.prime)
    cfg = SearchConfig(objective=args.objective, max_points=args.max_points, budget=args.budget,
                       p=args.prime)
    report = gamma_bar_search(pd_f, pd_g, target, cfg)
    _emit(report.render(), args.output)


def cmd_check_hook(args):
    c = read_complex(args.complex)
    module = grid_module_of_pair(c, args.degree, args.prime)
    try:
        hooks = hook_decompose(module)
    except NotHookDecomposable as exc:
        _emit(f"verdict: NotHookDecomposable\nreason: {exc}\n", args.output)
        return
    pd_f, pd_g, gamma_bar = reconstruct_from_hooks(hooks)
    rebuilt = hooks_of_product(build_product(pd_f, pd_g, gamma_bar))
    ok = as_multiset(rebuilt) == as_multiset(hooks) and rank_equal(evaluate_hooks(rebuilt, module.box), module)
    text = "verdict: hook-decomposable\n" + hooks_to_csv(hooks)
    text += "round-trip: " + ("ok" if ok else "FAILED") + "\n"
    _emit(text, args.output)
    if not ok:
        raise HookprodError("reconstructed product does not reproduce the module")


def cmd_svg(args):
    lists = [hooks_from_csv(_read(args.hooks))]
    if args.hooks2:
        lists.append(hooks_from_csv(_read(args.hooks2)))
    _emit(render_supports(lists, tuple(args.box), args.title), args.output)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hookprod", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, complex_=True):
        if complex_:
            p.add_argument("--complex", required=True, help="complex file")
            p.add_argument("--degree", type=int, required=True, help="homology degree k")
            p.add_argument("--prime", type=int, default=default_prime())
        p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("diagram", help="persistence diagram of f or g")
    common(p)
    p.add_argument("--function", choices=("f", "g"), required=True)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("product", help="hooks of the product of two diagrams under a matching")
    common(p, complex_=False)
    p.add_argument("--pdf", required=True)
    p.add_argument("--pdg", required=True)
    p.add_argument("--matching", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("grid", help="rank invariant of the pair filtration as CSV")
    common(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("gammabar", help="search the matching whose product is closest to M(f,g)")
    common(p)
    p.add_argument("--objective", choices=("auto", "exact", "matching"), default="auto")
    p.add_argument("--budget", type=int, default=12)
    p.add_argument("--max-points", type=int, default=8)
    p.set_defaults(func=cmd_gammabar)

    p = sub.add_parser("check-hook", help="decide hook-decomposability of M(f,g)")
    common(p)
    p.set_defaults(func=cmd_check_hook)

    p = sub.add_parser("svg", help="draw hook supports")
    common(p, complex_=False)
    p.add_argument("--hooks", required=True)
    p.add_argument("--hooks2")
    p.add_argument("--box", type=int, nargs=2, required=True, metavar=("B1", "B2"))
    p.add_argument("--title", default="")
    p.set_defaults(func=cmd_svg)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "prime") and not linalg_fp.is_prime(args.prime):
        print(f"hookprod: error: {args.prime} is not prime", file=sys.stderr)
        return 2
    try:
        args.func(args)
    except HookprodError as exc:
        print(f"hookprod: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hookprod: cannot open {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"hookprod: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
