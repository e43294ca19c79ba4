"""Command-line front end: ``ppclab {generate,ppc,gaps,oracle,mc,verify}``.

Every run writes one ``# effective-config: {...}`` line to stderr with the
seed and schedule digest needed to reproduce it.  Exit status is 0 on success,
1 when an input fails validation and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance
from .construction import (
    QSpec,
    config_from_json,
    construct_sequence,
    derive_ab,
    explicit_config,
    halving_config,
)
from .errors import PpcError
from .gaps import gap_series, gap_profile
from .generators import GOLDEN, equispaced, iid_uniform, kronecker
from .oracles import MomentReport, expected_F, mc_moments, variance_F, variance_F_exact
from .pair_correlation import format_curve_csv, pc_curve
from .torus import format_sequence, read_sequence


class _UsageError(Exception):
    pass


def parse_s_grid(text: str) -> list[Fraction]:
    """``start:stop:step`` (stop included when on the lattice), a list, or one value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"s-grid must be start:stop:step, got {text!r}")
        start, stop, step = (Fraction(p) for p in parts)
        if step <= 0:
            raise _UsageError("s-grid step must be positive")
        out = []
        s = start
        while s < stop:
            out.append(s)
            s += step
        if s == stop:
            out.append(stop)
        return out
    return [Fraction(p) for p in text.split(",") if p.strip()]


def parse_alpha(text: str) -> float:
    return GOLDEN if text == "golden" else float(text)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(x) for x in text.replace(",", " ").split()]


def _read_ints(path: str) -> list[int]:
    return _int_list(Path(path).read_text())


def schedule_from_args(args, n: int):
    """Build the schedule from --config, --q-spec or --a/--b; halving by default."""
    seed = None
    if getattr(args, "config", None):
        c, seed = config_from_json(Path(args.config).read_text())
        label = f"config:{args.config}"
    elif getattr(args, "q_spec", None):
        spec = args.q_spec
        m_max = min(n.bit_length() + 1, 60)
        if spec.startswith("builtin:"):
            q = QSpec.builtin(spec.split(":", 1)[1], m_max + 1)
        else:
            q = QSpec(tuple(_read_ints(spec)))
            m_max = min(m_max, q.n_max - 1)
        c = derive_ab(q, m_max)
        label = f"q:{spec}"
    elif getattr(args, "a", None) or getattr(args, "b", None):
        if not (args.a and args.b):
            raise _UsageError("--a and --b must be given together")
        c = explicit_config(_read_ints(args.a), _read_ints(args.b))
        label = "explicit"
    else:
        c = halving_config()
        label = "halving"
    return c, label, seed


def _emit(text: str, out: str | None):
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _effective(**kw):
    print("# effective-config: " + json.dumps(kw, sort_keys=True, default=str), file=sys.stderr)


# -- subcommands -----------------------------------------------------------------


def cmd_generate(args):
    kind = args.kind
    if kind in ("iid", "construction") and args.seed is None and not args.config:
        raise _UsageError(f"--seed is required for kind={kind}")
    digest = None
    if kind == "equispaced":
        rec = equispaced(args.n)
    elif kind == "kronecker":
        rec = kronecker(parse_alpha(args.alpha), args.n)
    elif kind == "iid":
        rec = iid_uniform(args.n, args.seed)
    else:
        c, label, file_seed = schedule_from_args(args, args.n)
        seed = args.seed if args.seed is not None else file_seed
        if seed is None:
            raise _UsageError("--seed is required for kind=construction")
        rec = construct_sequence(args.n, c, seed, require_growth=not args.allow_slow_growth)
        digest = f"{label}:{c.digest()}"
    _effective(cmd="generate", kind=kind, n=args.n, seed=rec.seed, config=digest,
               alpha=args.alpha if kind == "kronecker" else None)
    _emit(format_sequence(rec), args.out)


def cmd_ppc(args):
    rec = read_sequence(args.inp)
    n = args.n or len(rec)
    grid = parse_s_grid(args.s_grid)
    rows = pc_curve(rec, n, grid, args.scaling, args.predicate)
    _effective(cmd="ppc", input=args.inp, n=n, seed=rec.seed, s_grid=args.s_grid,
               scaling=args.scaling, predicate=args.predicate)
    if args.format == "json":
        text = json.dumps([{"s": float(s), "F": f} for s, f in rows]) + "\n"
    else:
        text = format_curve_csv(rows)
    _emit(text, args.out)


def cmd_gaps(args):
    rec = read_sequence(args.inp)
    checkpoints = _int_list(args.checkpoints) if args.checkpoints else [len(rec)]
    tol = args.tol if args.tol is not None else (0.0 if rec.exact else None)
    _effective(cmd="gaps", input=args.inp, seed=rec.seed, checkpoints=checkpoints, tol=tol)
    if args.format == "csv":
        lines = ["N,g,max_phi,max_ratio"]
        lines += [f"{r.N},{r.g},{r.max_phi},{r.max_ratio:.17g}" for r in gap_series(rec, checkpoints, tol)]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([gap_profile(rec, N, tol).to_dict() for N in checkpoints]) + "\n"
    _emit(text, args.out)


def cmd_oracle(args):
    c, label, _ = schedule_from_args(args, args.n)
    grid = parse_s_grid(args.s)
    reports = []
    for s in grid:
        var = (variance_F_exact if args.exact_variance else variance_F)(args.n, s, c, args.scaling)
        reports.append(MomentReport(args.n, s, expected_F(args.n, s, c, args.scaling), var).to_dict())
    _effective(cmd="oracle", n=args.n, s=args.s, scaling=args.scaling, config=f"{label}:{c.digest()}",
               exact_variance=args.exact_variance)
    _emit(json.dumps(reports) + "\n", args.out)


def cmd_mc(args):
    c, label, file_seed = schedule_from_args(args, args.n)
    seed = args.seed if args.seed is not None else file_seed
    if seed is None:
        raise _UsageError("--seed is required")
    reports = [
        mc_moments(args.n, s, c, args.scaling, args.samples, seed, args.workers).to_dict()
        for s in parse_s_grid(args.s)
    ]
    _effective(cmd="mc", n=args.n, s=args.s, seed=seed, samples=args.samples,
               scaling=args.scaling, config=f"{label}:{c.digest()}")
    _emit(json.dumps(reports) + "\n", args.out)


def cmd_verify(args):
    _effective(cmd="verify", seeds=acceptance.SEEDS)
    results = acceptance.run_all()
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


# -- parser ----------------------------------------------------------------------


def _schedule_flags(p):
    g = p.add_argument_group("schedule (default: a(m)=ceil(m/2), b(m)=m-floor(m/2))")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--q-spec", help="file of q values, or builtin:logn / builtin:linear")
    g.add_argument("--a", help="file with the a(m) table")
    g.add_argument("--b", help="file with the b(m) table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppclab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("generate", help="write a sequence file")
    p.add_argument("--kind", required=True, choices=["equispaced", "kronecker", "iid", "construction"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", default="golden", help="'golden' or a decimal number")
    p.add_argument("--out", default="-")
    p.add_argument("--allow-slow-growth", action="store_true",
                   help="accept schedules whose m - b(m) does not grow on the table")
    _schedule_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ppc", help="pair-correlation curve of a sequence file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--s-grid", default="0.25:4:0.25")
    p.add_argument("--scaling", default="identity", choices=["identity", "plus-sqrt", "minus-sqrt"])
    p.add_argument("--predicate", choices=["strict", "nonstrict"])
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_ppc)

    p = sub.add_parser("gaps", help="gap profiles of a sequence file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--checkpoints")
    p.add_argument("--tol", type=float)
    p.add_argument("--format", default="json", choices=["csv", "json"])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gaps)

    for name, func, text in (
        ("oracle", cmd_oracle, "exact E[F] and Var[F] of the random component"),
        ("mc", cmd_mc, "Monte Carlo moments of the random component"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--s", "--s-grid", dest="s", default="1")
        p.add_argument("--scaling", default="identity", choices=["identity", "plus-sqrt", "minus-sqrt"])
        p.add_argument("--format", default="json", choices=["json"])
        p.add_argument("--out", default="-")
        _schedule_flags(p)
        if name == "oracle":
            p.add_argument("--exact-variance", action="store_true",
                           help="include cross-grid covariances")
        else:
            p.add_argument("--seed", type=int)
            p.add_argument("--samples", type=int, default=1000)
            p.add_argument("--workers", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ppclab: error: {exc}", file=sys.stderr)
        return 2
    except (PpcError, ValueError, OSError, KeyError) as exc:
        print(f"ppclab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
