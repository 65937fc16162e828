"""Command-line front end.

Exit status: 0 when every check passes or a value was computed, 1 when a
violation or witness was found, 2 on usage or contract errors.  Every flag
can be defaulted through an environment variable ``BOHRLAB_<FLAG>``
(e.g. ``BOHRLAB_SEED=7``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__, kernels
from .bounds import SLACK, TARGETS, explore_counterexamples, sweep
from .errors import BohrLabError
from .functionals import FunctionalKind, eval_functional
from .multidim import (
    DEFAULT_DIRECTIONS,
    WITNESS_ORDER,
    CircularDomain,
    HomogeneousExpansion,
    defining_direction,
    random_test_function,
    sharpness_witness,
    theorem_constant,
    verify_homothetic,
    THEOREMS,
)
from .radii import (
    RADIUS_TOL,
    ROOT_TOL,
    SHARP_CONSTANTS,
    curve_csv,
    emit_curve,
    empirical_radius,
    isolate_root,
    sharpness_scan,
)
from .series import DEFAULT_ORDER, DEFAULT_SAMPLES, MODES, MatrixPowerSeries

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2
CURVE_POINTS = 1001


class UsageError(Exception):
    pass


def _env(name: str, default: Any, conv: Callable[[str], Any] = str) -> Any:
    raw = os.environ.get("BOHRLAB_" + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"environment variable BOHRLAB_{name.upper()}={raw!r} is not a valid {conv.__name__}")


def _add(p: argparse.ArgumentParser, flag: str, conv: Callable = str, default: Any = None,
         required: bool = False, **kw) -> None:
    dest = flag.lstrip("-").replace("-", "_")
    value = _env(dest, default, conv)
    p.add_argument(flag, type=conv, default=value, required=required and value is None, **kw)


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str, what: str) -> Any:
    """Load JSON from a file, or parse ``path`` itself when it is inline JSON."""
    p = Path(path)
    try:
        text = p.read_text() if p.exists() else path
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise UsageError(f"{what}: {exc}") from None


# ----------------------------------------------------------------- subcommands


def cmd_eval(args) -> int:
    s = MatrixPowerSeries.from_json_dict(_read_json(args.series, "--series"))
    res = eval_functional(args.functional, s, args.r, args.samples)
    out = {"functional": FunctionalKind.parse(args.functional).value, "r": args.r, **res.to_json_dict()}
    _emit(_dump(out), args.out)
    return EXIT_OK


def _print_root(name: str, tol: float) -> dict:
    c = SHARP_CONSTANTS[name]
    res = isolate_root(c.poly, c.bracket, tol)
    print(f"{name} ({c.kind.value}): {res.mid:.6f}  bracket [{res.lo:.12f}, {res.hi:.12f}]")
    return {"name": name, "functional": c.kind.value, "form": c.form, "poly": list(c.poly), **res.to_json_dict()}


def cmd_roots(args) -> int:
    names = sorted(SHARP_CONSTANTS) if args.name == "all" else [args.name]
    for n in names:
        if n not in SHARP_CONSTANTS:
            raise UsageError(f"--name: unknown constant '{n}', expected one of {sorted(SHARP_CONSTANTS)}")
    report = [_print_root(n, args.tol) for n in names]
    if args.out:
        Path(args.out).write_text(_dump(report))
    return EXIT_OK


def cmd_radius(args) -> int:
    if args.name:
        args.tol = args.tol if args.tol is not None else ROOT_TOL
        return cmd_roots(args)
    if not args.functional:
        raise UsageError("radius needs --functional (or --name for a sharp-constant root)")
    tol = args.tol if args.tol is not None else RADIUS_TOL
    res = empirical_radius(args.functional, args.family, tol=tol, order=args.order, dim=args.dim,
                           samples=args.samples, evaluator=args.evaluator)
    out = {"functional": FunctionalKind.parse(args.functional).value, "family": args.family,
           "evaluator": args.evaluator, **res.to_json_dict()}
    _emit(_dump(out), args.out)
    return EXIT_OK


def cmd_sharpness(args) -> int:
    w = sharpness_scan(args.functional, args.r)
    out = {"functional": FunctionalKind.parse(args.functional).value, "r": args.r,
           "witness": None if w is None else w.to_json_dict()}
    _emit(_dump(out), args.out)
    return EXIT_OK if w is None else EXIT_FOUND


def _report_exit(rep, out: str | None) -> int:
    _emit(_dump(rep.to_json_dict()), out)
    return EXIT_OK if rep.ok else EXIT_FOUND


def cmd_lemma(args) -> int:
    rep = sweep(args.check, args.mode, args.trials, args.seed, args.dim, args.order, args.r,
                args.tol, args.samples)
    return _report_exit(rep, args.out)


def cmd_explore(args) -> int:
    rep = explore_counterexamples(args.target, args.mode, args.trials, args.seed, args.dim, args.order,
                                  args.r, args.forced, args.tol, args.samples)
    return _report_exit(rep, args.out)


def _domain(args) -> CircularDomain:
    if args.domain:
        return CircularDomain.from_json_dict(_read_json(args.domain, "--domain"), args.n)
    alphas = _read_json(args.alphas, "--alphas") if args.alphas else []
    n = args.n or (len(alphas[0]) if alphas else 2)
    return CircularDomain.from_json_dict({"shape": args.shape, "alphas": alphas, "n": n})


def cmd_multidim(args) -> int:
    dom = _domain(args)
    if args.action == "witness":
        h = sharpness_witness(args.theorem, dom, args.a, args.order, dim=args.dim)
        _emit(_dump(h.to_json_dict()), args.out)
        return EXIT_OK
    scale = args.scale if args.scale is not None else theorem_constant(args.theorem)
    extra = ()
    if args.function == "witness":
        h = sharpness_witness(args.theorem, dom, args.a, args.order, dim=args.dim)
        extra = (defining_direction(dom),)
    elif args.function == "random":
        if args.seed is None:
            raise UsageError("--seed is required for --function random")
        h = random_test_function(dom, args.seed, dim=args.dim)
    else:
        h = HomogeneousExpansion.from_json_dict(_read_json(args.function, "--function"))
    rep = verify_homothetic(args.theorem, h, dom, scale, args.directions, args.seed or 0,
                            args.tol, args.samples, extra)
    return _report_exit(rep, args.out)


def cmd_curves(args) -> int:
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    grid = [i / (args.points - 1) for i in range(args.points)]
    if args.figure == "fig2":
        grid = grid[1:]
    header, rows = emit_curve(args.figure, grid)
    _emit(curve_csv(header, rows), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bohrlab", description="Bohr-type inequalities for matrix-valued Schur series.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = ap.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in FunctionalKind]

    def common(p, seed=False, seed_required=False):
        _add(p, "--out", str, help="write the report here instead of stdout")
        _add(p, "--order", int, DEFAULT_ORDER, help="truncation order")
        _add(p, "--dim", int, 2, help="matrix dimension")
        _add(p, "--samples", int, DEFAULT_SAMPLES, help="circle samples for sup-norms")
        if seed:
            _add(p, "--seed", int, required=seed_required, help="random seed")

    p = sub.add_parser("eval", help="evaluate a functional on a series file")
    _add(p, "--series", str, required=True, help="series JSON file")
    _add(p, "--r", float, required=True)
    _add(p, "--functional", str, required=True, help=f"one of {kinds}")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("radius", help="empirical radius over an extremal family")
    _add(p, "--functional", str, help=f"one of {kinds}")
    _add(p, "--family", str, "psi", choices=["psi", "mobius"])
    _add(p, "--evaluator", str, "series", choices=["series", "closed-form"])
    _add(p, "--name", str, help="isolate a sharp-constant root instead")
    _add(p, "--tol", float)
    common(p)
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("roots", help="isolate the sharp-constant polynomial roots")
    _add(p, "--name", str, "all", help=f"'all' or one of {sorted(SHARP_CONSTANTS)}")
    _add(p, "--tol", float, ROOT_TOL)
    _add(p, "--out", str)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("sharpness", help="scan the extremal family for a witness at r")
    _add(p, "--functional", str, required=True)
    _add(p, "--r", float, required=True)
    _add(p, "--out", str)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("lemma", help="sweep a lemma check over seeded random series")
    _add(p, "--check", str, required=True, choices=["wiener", "schwarz-pick", "growth", "theorem-a"])
    _add(p, "--mode", str, "scalar-type", choices=list(MODES))
    _add(p, "--trials", int, 100)
    _add(p, "--tol", float, SLACK)
    _add(p, "--r", float)
    common(p, seed=True, seed_required=True)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("explore", help="seeded counterexample search")
    _add(p, "--target", str, required=True, choices=list(TARGETS))
    _add(p, "--mode", str, "scalar-type", choices=list(MODES))
    _add(p, "--trials", int, 100)
    _add(p, "--tol", float, SLACK)
    _add(p, "--r", float)
    p.add_argument("--forced", action="store_true", help="also probe the hand-checkable instance")
    common(p, seed=True, seed_required=True)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("multidim", help="homothetic-domain verification and witnesses")
    p.add_argument("action", choices=["verify", "witness"])
    _add(p, "--theorem", str, "T1", choices=sorted(THEOREMS))
    _add(p, "--domain", str, help="domain JSON file or inline JSON")
    _add(p, "--shape", str, "polydisk", choices=["polydisk", "ball", "functional"])
    _add(p, "--n", int)
    _add(p, "--alphas", str, help="functional list as inline JSON")
    _add(p, "--function", str, "random", help="'random', 'witness', or a multivariate JSON file")
    _add(p, "--a", float, help="extremal parameter of the witness (default: scan optimum)")
    _add(p, "--scale", float)
    _add(p, "--directions", int, DEFAULT_DIRECTIONS)
    _add(p, "--tol", float, SLACK)
    common(p, seed=True)
    p.set_defaults(func=cmd_multidim, order=_env("order", WITNESS_ORDER, int))

    p = sub.add_parser("curves", help="tabulate a figure curve as CSV")
    _add(p, "--figure", str, required=True, choices=["fig1", "fig2", "fig3"])
    _add(p, "--points", int, CURVE_POINTS)
    _add(p, "--out", str)
    p.set_defaults(func=cmd_curves)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except (UsageError, BohrLabError) as exc:
        print(f"bohrlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
