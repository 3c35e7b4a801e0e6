"""Command-line front end: ``gc-moments {moments,embedded,compare}``.

Exit codes: 0 success, 1 Monte Carlo gate failure (``compare``), 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .combinatorics import MomentSequence
from .embedded import EmbeddedSpec, cumulants_embedded, moment_table, shape_stats
from .growth import GrowthSpec, cumulants_X, moment_X, moment_Y
from .montecarlo import SimConfig, compare, simulate_embedded, simulate_gc

EXIT_OK, EXIT_GATE, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _cutoff(text: str) -> MomentSequence | None:
    if text == "uniform":
        return None
    try:
        return MomentSequence([1] + [Fraction(v) for v in text.split(",")])
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad cut-off moments {text!r}: {exc}") from None


def fmt(x) -> str:
    """17 significant digits, locale-independent."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _jsonable(x):
    x = float(x)
    return None if math.isnan(x) else x


def _t_grid(args) -> list[Fraction]:
    if args.t_step <= 0:
        raise ConfigError("--t-step must be positive")
    if args.t_start < 0 or args.t_stop < args.t_start:
        raise ConfigError("need 0 <= --t-start <= --t-stop")
    count = int((args.t_stop - args.t_start) / args.t_step) + 1
    return [args.t_start + i * args.t_step for i in range(count)]


def _m_grid(args) -> list[int]:
    if args.m_start < 1 or args.m_stop < args.m_start:
        raise ConfigError("need 1 <= --m-start <= --m-stop")
    return list(range(args.m_start, args.m_stop + 1))


def _write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _write_json(header, rows) -> str:
    records = [dict(zip(header, (_jsonable(v) for v in row))) for row in rows]
    return json.dumps(records, indent=1) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_moments(args) -> int:
    spec = GrowthSpec(args.lam, cutoff=args.cutoff)
    n = args.n
    my, mx = moment_Y(spec, n), moment_X(spec, n)
    kappa = cumulants_X(spec, n) if n >= 1 else []
    if args.format == "symbolic":
        lines = [f"E[Y_t^{n}] = {my.render()}", f"E[X_t^{n}] = {mx.render()}"]
        lines += [f"kappa_{j + 1}(t) = {k.render()}" for j, k in enumerate(kappa)]
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    shape_order = max(n, 4)
    if spec.cutoff is not None and spec.cutoff.order < shape_order:
        shape_order = n
    shape = cumulants_X(spec, shape_order) if shape_order >= 2 else []
    header = ["t", f"moment_Y_{n}", f"moment_X_{n}"] + [f"kappa_{j + 1}" for j in range(n)] + ["skewness", "kurtosis"]
    rows = []
    for t in _t_grid(args):
        kvals = [k(t) for k in shape]
        skew, kurt = shape_stats(kvals) if kvals else (math.nan, math.nan)
        rows.append([t, my(t), mx(t)] + [k(t) for k in kappa] + [skew, kurt])
    if args.format == "json":
        _emit(_write_json(header, rows), args.out)
    else:
        _emit(_write_csv(header, [[fmt(v) for v in r] for r in rows]), args.out)
    return EXIT_OK


def cmd_embedded(args) -> int:
    ms = _m_grid(args)
    for m in ms:
        EmbeddedSpec(args.lam, m, args.cutoff)  # validate caps before any work
    table = moment_table(args.lam, ms, args.n_max, args.cutoff)
    if args.format == "symbolic":
        lines = []
        for row in table:
            exact = ", ".join(f"{k}={v}" for k, v in row.items() if isinstance(v, Fraction))
            lines.append(f"m={row['m']}: {exact}")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    if not table:
        return EXIT_OK
    header = list(table[0])
    rows = [list(r.values()) for r in table]
    if args.format == "json":
        _emit(_write_json(header, rows), args.out)
    else:
        _emit(_write_csv(header, [[str(r[0])] + [fmt(v) for v in r[1:]] for r in rows]), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    if args.format == "symbolic":
        raise ConfigError("compare produces numbers only; use --format csv or json")
    if args.cutoff is not None:
        raise ConfigError("compare simulates uniform cut-offs only")
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    lam = float(args.lam)
    blocks = []  # (quantity, report)
    if args.process == "gc":
        grid = [float(t) for t in _t_grid(args)]
        est = simulate_gc(SimConfig(lam, grid, args.samples, args.seed, n=args.n_max, batches=args.batches))
        kappa = cumulants_X(GrowthSpec(args.lam), args.n_max)
        for j in range(args.n_max):
            rep = compare(kappa[j], grid, est.cumulants[:, j], est.cumulant_se[:, j], args.sigma)
            blocks.append((f"kappa_{j + 1}", rep))
    else:
        ms = _m_grid(args)
        est = simulate_embedded(SimConfig(lam, ms, args.samples, args.seed, n=args.n_max, batches=args.batches))
        for chain, e in (("Y", est.Y), ("X", est.X)):
            exact = [cumulants_embedded(EmbeddedSpec(args.lam, m), args.n_max, chain).cumulants for m in ms]
            for j in range(args.n_max):
                rep = compare([k[j] for k in exact], ms, e.cumulants[:, j], e.cumulant_se[:, j], args.sigma)
                blocks.append((f"kappa_{chain}_{j + 1}", rep))
    header = ["quantity", "grid", "analytic", "estimate", "stderr", "z"]
    rows = [[q, r.grid, r.analytic, r.estimate, r.stderr, r.z] for q, rep in blocks for r in rep.rows]
    if args.format == "json":
        records = [dict(zip(header, [r[0]] + [_jsonable(v) for v in r[1:]])) for r in rows]
        _emit(json.dumps(records, indent=1) + "\n", args.out)
    else:
        _emit(_write_csv(header, [[r[0]] + [fmt(v) for v in r[1:]] for r in rows]), args.out)
    passed = all(rep.passed for _, rep in blocks)
    if not passed:
        worst = max(abs(r.z) for _, rep in blocks for r in rep.rows)
        print(f"gate failed: max |z| = {worst:.3g} > {args.sigma}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(2),
                        help="Poisson rate, rational or decimal (default: %(default)s)")
    common.add_argument("--cutoff", type=_cutoff, default=None, metavar="uniform|m1,m2,...",
                        help="cut-off law: 'uniform' or its raw moments m1,m2,... (default: uniform)")
    common.add_argument("--format", choices=["csv", "json", "symbolic"], default="csv",
                        help="output format (default: %(default)s)")
    common.add_argument("--out", default=None, help="output file (default: standard output)")

    def tgrid(start):
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--t-start", type=_fraction, default=start, help="first time (default: %(default)s)")
        g.add_argument("--t-stop", type=_fraction, default=Fraction(5), help="last time (default: %(default)s)")
        g.add_argument("--t-step", type=_fraction, default=Fraction(1, 2), help="time step (default: %(default)s)")
        return g

    mgrid = argparse.ArgumentParser(add_help=False)
    mgrid.add_argument("--m-start", type=int, default=1, help="first chain index (default: %(default)s)")
    mgrid.add_argument("--m-stop", type=int, default=10, help="last chain index (default: %(default)s)")

    p = argparse.ArgumentParser(prog="gc-moments", description="Exact moments of growth-collapse processes, with a Monte Carlo check.")
    sub = p.add_subparsers(dest="command", required=True)

    sm = sub.add_parser("moments", parents=[common, tgrid(Fraction(0))], help="moments and cumulants of Y_t and X_t")
    sm.add_argument("--n", type=int, default=2, help="moment order (default: %(default)s)")
    sm.set_defaults(func=cmd_moments)

    se = sub.add_parser("embedded", parents=[common, mgrid], help="moment table of the embedded chains Y(m), X(m)")
    se.add_argument("--n-max", type=int, default=4, help="highest order, at most 4 (default: %(default)s)")
    se.set_defaults(func=cmd_embedded)

    sc = sub.add_parser("compare", parents=[common, tgrid(Fraction(1, 2)), mgrid], help="analytic cumulants against Monte Carlo")
    sc.add_argument("--process", choices=["gc", "embedded"], default="gc",
                    help="X_t on the t-grid or Y(m), X(m) on the m-range (default: %(default)s)")
    sc.add_argument("--n-max", type=int, default=2, help="highest cumulant order, at most 4 (default: %(default)s)")
    sc.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo samples (default: %(default)s)")
    sc.add_argument("--seed", type=int, default=2024, help="RNG seed (default: %(default)s)")
    sc.add_argument("--sigma", type=float, default=4.0, help="pass threshold on |z| (default: %(default)s)")
    sc.add_argument("--batches", type=int, default=100, help="batches for standard errors (default: %(default)s)")
    sc.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "compare" and not 1 <= args.n_max <= 4:
        print("gc-moments: --n-max must be between 1 and 4", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"gc-moments: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
