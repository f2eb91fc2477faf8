"""Command-line pipeline: design -> generate -> reduce -> report -> convolve.

Every command writes delimited or JSON files; figures are left to
external tools.  Domain and validation failures exit with status 1 and
the error name on stderr; I/O failures exit with status 2.  Outputs are
deterministic byte-for-byte, apart from a timestamp comment line at the
top of CSV files that --no-header suppresses.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import design, expsum, fastconv, prony
from .gen_bm import generate_bm
from .gen_de import DEFAULT_HEADROOM, generate_de

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for I/O here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _parse_split(text: str):
    if text in design.SPLIT_PRESETS:
        return text
    try:
        rd, rt = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"split must be one of {sorted(design.SPLIT_PRESETS)} or a "
            f"'rd_fraction,rt_fraction' pair, got {text!r}"
        ) from None
    return (rd, rt)


def _parse_eps_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}") from None


def _write_text(path, body: str, stamp: bool) -> None:
    if stamp:
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        body = f"# created {now}\n" + body
    Path(path).write_text(body, encoding="utf-8")


def _emit_summary(args, **fields) -> None:
    if getattr(args, "json_summary", False):
        print(json.dumps(fields, sort_keys=True))


def _cmd_build(args) -> int:
    if not args.delta < args.T:
        raise ValueError(f"need delta < T, got delta={args.delta}, T={args.T}")
    tol = design.split_tolerances(args.eps, args.split)
    if args.method == "bm":
        s, recipe = generate_bm(args.beta, args.delta, args.T, tol)
        h, M, N = recipe.params.h, recipe.params.M, recipe.params.N
    else:
        s, recipe = generate_de(
            args.beta, args.delta, args.T, tol, headroom=args.headroom
        )
        h, M, N = recipe.h, recipe.M, recipe.N
    expsum.save_expsum(s, args.out)
    max_rho = expsum.max_relative_error(s, args.grid_P)
    if args.params_out:
        payload = {
            "method": args.method,
            "beta": args.beta,
            "delta": args.delta,
            "T": args.T,
            "eps": tol.eps,
            "eps_rd": tol.eps_rd,
            "eps_rt": tol.eps_rt,
            "h": h,
            "M": M,
            "N": N,
            "terms": s.n_terms,
            "max_rho": max_rho,
        }
        if args.method == "de":
            payload["headroom"] = args.headroom
        Path(args.params_out).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    _emit_summary(args, terms=s.n_terms, max_rho=max_rho, h=h, M=M, N=N)
    return EXIT_OK


def _cmd_report(args) -> int:
    s = expsum.load_expsum(args.infile)
    grid = expsum.geometric_grid(s.t_lo, s.t_hi, args.grid_P)
    report = expsum.relative_error_report(s, grid)
    _write_text(args.out, expsum.error_report_csv(report), not args.no_header)
    _emit_summary(args, terms=s.n_terms, max_rho=report.max_abs)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    s = expsum.load_expsum(args.infile)
    grid = expsum.geometric_grid(s.t_lo, s.t_hi, args.grid_P)
    if args.L is not None or args.K is not None:
        if args.L is None or args.K is None:
            raise ValueError("--L and --K must be given together")
        reduction = prony.prony_reduce(s.a[: args.L], s.w[: args.L], args.K)
        L, K = args.L, args.K
        cells = [
            prony.ScanCell(
                L=L,
                K=K,
                eta_max=prony.eta_error(
                    s.a[:L], s.w[:L], reduction.reduced_a,
                    reduction.reduced_w, s.beta, grid,
                ),
                below_floor=False,
            )
        ]
    else:
        if args.budget is None:
            raise ValueError("give either --L/--K or --budget")
        result = prony.auto_scan(s, args.budget, args.K_max, grid)
        reduction, L, K, cells = result.reduction, result.L, result.K, result.cells
    reduced = prony.splice(s, L, reduction) if L else s
    expsum.save_expsum(reduced, args.out)
    if args.scan_csv:
        _write_text(args.scan_csv, prony.scan_cells_csv(cells), not args.no_header)
    max_rho = expsum.max_relative_error(reduced, args.grid_P)
    _emit_summary(args, terms=reduced.n_terms, max_rho=max_rho, L=L, K=K)
    return EXIT_OK


def _cmd_scan(args) -> int:
    s = expsum.load_expsum(args.infile)
    grid = expsum.geometric_grid(s.t_lo, s.t_hi, args.grid_P)
    L_hi = args.L_max if args.L_max is not None else s.n_terms
    cells = prony.scan_table(
        s,
        L_values=range(args.L_min, L_hi + 1),
        K_values=range(args.K_min, args.K_max + 1),
        grid=grid,
    )
    _write_text(args.out, prony.scan_cells_csv(cells), not args.no_header)
    _emit_summary(args, terms=s.n_terms)
    return EXIT_OK


def _cmd_design_sweep(args) -> int:
    rows = design.design_sweep(args.beta, args.delta, args.T, args.eps_list, args.split)
    _write_text(args.out, design.sweep_rows_csv(rows), not args.no_header)
    return EXIT_OK


def _read_signal_csv(path) -> tuple[fastconv.TimeGrid, fastconv.SignalHistory]:
    times = [0.0]
    values = []
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not values and line.lower().replace(" ", "") == "t,u":
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 't,U', got {line!r}")
        times.append(float(parts[0]))
        values.append(float(parts[1]))
    return fastconv.TimeGrid(np.array(times)), fastconv.SignalHistory(np.array(values))


def _cmd_convolve(args) -> int:
    kernel = expsum.load_expsum(args.kernel)
    grid, signal = _read_signal_csv(args.signal)
    alpha = args.alpha if args.alpha is not None else 1.0 - kernel.beta
    fast = fastconv.fast_convolve(grid, signal, kernel, alpha)
    eps = expsum.max_relative_error(kernel, args.grid_P)
    bound = fastconv.error_bound(grid, signal, alpha, eps)
    direct = fastconv.direct_convolve(grid, signal, alpha) if args.with_direct else None

    header = "t,fast,direct,bound" if args.with_direct else "t,fast,bound"
    lines = [header]
    t = grid.points[1:]
    for n in range(grid.n_steps):
        cols = [f"{t[n]:.17g}", f"{fast[n]:.17g}"]
        if direct is not None:
            cols.append(f"{direct[n]:.17g}")
        cols.append(f"{bound[n]:.17g}")
        lines.append(",".join(cols))
    _write_text(args.out, "\n".join(lines) + "\n", not args.no_header)
    max_dev = float(np.abs(fast - direct).max()) if direct is not None else None
    _emit_summary(
        args, terms=kernel.n_terms, steps=grid.n_steps, kernel_eps=eps,
        max_fast_direct_deviation=max_dev,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="expsum",
        description="Exponential-sum kernel toolkit: build, compress, "
        "report, and convolve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--grid-P", type=int, default=expsum.DEFAULT_GRID_POINTS,
                       help="points in the geometric evaluation grid")
        p.add_argument("--no-header", action="store_true",
                       help="omit the timestamp comment line in CSV outputs")
        p.add_argument("--json-summary", action="store_true",
                       help="print a one-line JSON summary to stdout")

    p = sub.add_parser("build", help="generate a certified exponential sum")
    p.add_argument("--method", choices=("bm", "de"), required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--split", type=_parse_split, default="paper-ex1",
                   help="tolerance split: preset name or 'rd,rt' fractions")
    p.add_argument("--headroom", type=float, default=DEFAULT_HEADROOM,
                   help="de only: design for [delta, headroom*T]")
    p.add_argument("--out", required=True, help="output sum JSON")
    p.add_argument("--params-out", help="optional design-report JSON")
    add_common(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("report", help="relative-error CSV for a stored sum")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("reduce", help="compress a stored sum's head")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--L", type=int, help="explicit head length")
    p.add_argument("--K", type=int, help="explicit reduced term count")
    p.add_argument("--budget", type=float,
                   help="auto-scan: largest added error allowed")
    p.add_argument("--K-max", type=int, default=6)
    p.add_argument("--scan-csv", help="optional CSV of scanned (L,K) cells")
    add_common(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("scan", help="tabulate eta_max over an (L,K) grid")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--L-min", type=int, default=1)
    p.add_argument("--L-max", type=int)
    p.add_argument("--K-min", type=int, default=1)
    p.add_argument("--K-max", type=int, default=6)
    add_common(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("design-sweep", help="h, M, N vs accuracy target")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--eps-list", type=_parse_eps_list, required=True,
                   help="comma-separated targets, descending")
    p.add_argument("--split", type=_parse_split, default="thirds")
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_design_sweep)

    p = sub.add_parser("convolve", help="fast Volterra convolution of a CSV signal")
    p.add_argument("--kernel", required=True, help="exponential-sum JSON")
    p.add_argument("--signal", required=True, help="CSV of t,U rows (t_0=0 implied)")
    p.add_argument("--alpha", type=float,
                   help="fractional order; defaults to 1 - beta of the kernel")
    p.add_argument("--out", required=True)
    p.add_argument("--with-direct", action="store_true",
                   help="also run the O(N^2) oracle and emit its column")
    add_common(p)
    p.set_defaults(func=_cmd_convolve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"expsum: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        name = getattr(exc, "code", type(exc).__name__)
        print(f"expsum: {name}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
