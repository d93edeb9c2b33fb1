"""Command-line front end: ``search``, ``analyze``, ``simulate``, ``cost``.

Exit codes: 0 success/feasible, 2 infeasible, 3 search budget exhausted,
64 usage error, 65 unreadable or invalid input data.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import analysis, cost, gf2, ilp, matrix_io, simulate
from .decoders import DecoderConfig

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _p_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x) -> str:
    if isinstance(x, float) and x.is_integer():
        return str(int(x))
    return f"{x:.15g}" if isinstance(x, float) else str(x)


def read_config(path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="triortho", description="Triorthogonal code construction, analysis and decoding.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file of defaults; flags take precedence")

    s = sub.add_parser("search", parents=[common], help="search for an even-weight triorthogonal H_X")
    s.add_argument("--k0", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dperp", type=int, required=True)
    s.add_argument(
        "--orbit",
        default="none",
        help="'none', 'cyclic-shift', or generator rows such as 0100,0010,0001,1000",
    )
    s.add_argument("--cap", type=int, help="maximum multiplicity per orbit")
    s.add_argument("--max-nodes", type=int)
    s.add_argument("--time-limit", type=float, help="seconds")
    s.add_argument("--out", help="write the matrix here instead of standard output")

    a = sub.add_parser("analyze", parents=[common], help="report parameters of the code [1; H_X]")
    a.add_argument("matrix")
    a.add_argument("--method", choices=("macwilliams", "enumerate"), default="macwilliams")

    m = sub.add_parser("simulate", parents=[common], help="logical error rate sweep, CSV output")
    m.add_argument("--matrix", help="H_X matrix file")
    m.add_argument("--decoder", required=True, choices=simulate.DECODERS)
    m.add_argument("--p", type=_p_grid, required=True, help="comma-separated dephasing probabilities")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--target-errors", type=int, default=100)
    m.add_argument("--max-frames", type=int, default=10**6)
    m.add_argument("--max-query", type=int, default=10**6)
    m.add_argument("--osd-depth", "--lambda", dest="osd_depth", type=int, default=0)
    m.add_argument("--alpha", type=float, default=0.05)
    m.add_argument("--n-iter", type=int, default=100)
    m.add_argument("--count-abstain-as-error", type=_bool, default=True)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--n", type=int, help="code length for --decoder bdd without a matrix")
    m.add_argument("--dx", type=int, help="d_X for --decoder bdd without a matrix")
    m.add_argument("--out", help="CSV path (default: standard output)")

    c = sub.add_parser("cost", parents=[common], help="operation-count estimates")
    for flag in ("bp", "osd0", "cs", "avg", "qgrand"):
        c.add_argument(f"--{flag}", action="store_true")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", type=int, help="rank of H_X")
    c.add_argument("--k0", type=int, help="n - rank(H_X)")
    c.add_argument("--ne", type=int, default=0, help="number of ones in H_X")
    c.add_argument("--q", type=int, default=8)
    c.add_argument("--niter", type=int, default=100)
    c.add_argument("--lambda", dest="osd_depth", type=int, default=0)
    c.add_argument("--nmc", type=int, default=1)
    c.add_argument("--nosd", type=int, default=0)
    c.add_argument("--ng", type=int, default=0)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sp in action.choices.values():
            defaults = {}
            for act in sp._actions:  # noqa: SLF001
                if act.dest in values:
                    raw = values[act.dest]
                    if isinstance(act, argparse._StoreTrueAction):  # noqa: SLF001
                        defaults[act.dest] = _bool(raw)
                    else:
                        defaults[act.dest] = act.type(raw) if act.type else raw
                    act.required = False
            sp.set_defaults(**defaults)


def _parse_orbit(spec: str, k0: int) -> ilp.OrbitSpec | None:
    if spec == "none":
        return None
    if spec == "cyclic-shift":
        return ilp.orbit_partition(k0, ilp.cyclic_shift(k0))
    rows = spec.split(",")
    if len(rows) != k0 or any(len(r) != k0 or set(r) - {"0", "1"} for r in rows):
        raise UsageError(f"--orbit must be 'none', 'cyclic-shift' or {k0} comma-separated rows of {k0} bits")
    gen = np.array([[int(b) for b in r] for r in rows], dtype=np.uint8)
    try:
        return ilp.orbit_partition(k0, gen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_search(args, out) -> int:
    try:
        inst = ilp.build_instance(args.k0, args.n, args.dperp)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    orbit = _parse_orbit(args.orbit, args.k0)
    res = ilp.solve(inst, orbit, cap=args.cap, max_nodes=args.max_nodes, time_limit=args.time_limit)
    print(f"status: {res.status}", file=out)
    print(f"nodes: {res.nodes}", file=out)
    print(f"leaves: {res.leaves}", file=out)
    if res.status == "budget-exhausted":
        return EXIT_BUDGET
    if not res.feasible:
        return EXIT_INFEASIBLE
    h = ilp.extract_matrix(inst, res.witness)
    parities = "".join(str(int(w) % 2) for w in h.sum(axis=1))
    print(f"rank: {gf2.rank(h)}", file=out)
    print(f"row parities: {parities}", file=out)
    print(f"triorthogonal: {bool(analysis.is_triorthogonal(h))}", file=out)
    print(f"dual distance: {analysis.dual_distance(h)}", file=out)
    print(f"triply-even: {analysis.is_triply_even(h)}", file=out)
    comments = [f"k0={args.k0} n={args.n} dperp={args.dperp} orbit={args.orbit}"]
    if args.out:
        matrix_io.write_matrix(args.out, h, comments)
        print(f"matrix written to {args.out}", file=out)
    else:
        out.write(matrix_io.format_matrix(h, comments))
    return EXIT_OK


def _unknown(v) -> str:
    return "unknown" if v is None else str(v).lower() if isinstance(v, bool) else str(v)


def cmd_analyze(args, out) -> int:
    h = matrix_io.read_matrix(args.matrix)
    code = analysis.assemble_css(h).with_distances(args.method)
    d = code.distances
    print(f"n: {code.n}", file=out)
    print(f"k: {code.k}", file=out)
    print(f"k_0: {code.k_0}", file=out)
    for name in ("d_0", "d_1", "d_x", "d_z"):
        print(f"{name}: {_unknown(getattr(d, name))}", file=out)
    dist = None if d.d_x is None or d.d_z is None else min(d.d_x, d.d_z)
    print(f"d: {_unknown(dist)}", file=out)
    print(f"x-degenerate: {_unknown(d.degenerate_x)}", file=out)
    print(f"z-degenerate: {_unknown(d.degenerate_z)}", file=out)
    print(f"dual distance of H_X: {analysis.dual_distance(h)}", file=out)
    print(f"triorthogonal: {str(bool(analysis.is_triorthogonal(code.g_z))).lower()}", file=out)
    print(f"triply-even: {str(analysis.is_triply_even(h)).lower()}", file=out)
    return EXIT_OK


def _bdd_code(n: int, d_x: int) -> analysis.CssCode:
    """Placeholder code carrying only ``n`` and ``d_X`` for the analytic BDD curve."""
    g_1 = np.ones((1, n), dtype=np.uint8)
    empty = np.zeros((0, n), dtype=np.uint8)
    return analysis.CssCode(empty, g_1, g_1, empty, analysis.QuantumDistances(None, None, d_x, None))


def cmd_simulate(args, out) -> int:
    if args.matrix:
        code = analysis.assemble_css(matrix_io.read_matrix(args.matrix))
    elif args.decoder == "bdd" and args.n and args.dx:
        code = _bdd_code(args.n, args.dx)
    else:
        raise UsageError("--matrix is required (or --n and --dx with --decoder bdd)")
    cfg = DecoderConfig(
        p=args.p[0] if args.p else 0.01,
        n_iter=args.n_iter,
        alpha=args.alpha,
        osd_depth=args.osd_depth,
        max_query=args.max_query,
    )
    plan = simulate.SimPlan(
        code=code,
        decoder=args.decoder,
        cfg=cfg,
        p_grid=args.p,
        target_errors=args.target_errors,
        max_frames=args.max_frames,
        seed=args.seed,
        count_abstain_as_error=args.count_abstain_as_error,
    )
    result = simulate.run_montecarlo(plan, threads=args.threads)
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(simulate.to_csv_rows(result))
    if args.out:
        Path(args.out).write_text(buf.getvalue(), newline="\n")
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_cost(args, out) -> int:
    r, k0 = args.r, args.k0
    if r is None and k0 is None:
        r, k0 = 0, args.n
    elif r is None:
        r = args.n - k0
    elif k0 is None:
        k0 = args.n - r
    try:
        p = cost.CostParams(
            n=args.n,
            r=r,
            k_0=k0,
            n_e=args.ne,
            q=args.q,
            n_iter=args.niter,
            osd_depth=args.osd_depth,
            n_mc=args.nmc,
            n_osd=args.nosd,
            n_g=args.ng,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sections = [f for f in ("bp", "osd0", "cs", "avg", "qgrand") if getattr(args, f)]
    if not sections:
        sections = ["bp", "osd0", "cs", "avg", "qgrand"]
    lines = []
    if "bp" in sections:
        lines.append(("C(BP)", cost.cost_bp(p)))
    if "osd0" in sections:
        lines += [
            ("C(sort_OSD)", cost.cost_sort_osd(p)),
            ("C(GE)", cost.cost_ge(p)),
            ("C(INV)", cost.cost_inv(p)),
            ("C(prod_OSD)", cost.cost_prod_osd(p)),
            ("C(OSD-0)", cost.cost_osd0(p)),
        ]
    if "cs" in sections:
        lines += [
            ("n_conf", cost.n_conf(p)),
            ("C(sorting_CS)", cost.cost_sorting_cs(p)),
            ("C(precomp_CS)", cost.cost_precomp_cs(p)),
            ("C(operations)", cost.cost_operations(p)),
            ("C(comparisons)", cost.cost_comparisons(p)),
            ("C(CS-lambda)", cost.cost_cs_lambda(p)),
        ]
    if "avg" in sections:
        lines.append(("C(BP+OSD) per frame", cost.cost_bp_osd_avg(p)))
    if "qgrand" in sections:
        lines += [("C(syndrome)", cost.cost_syndrome(p)), ("C(qGRAND) per frame", cost.cost_qgrand_avg(p))]
    for name, value in lines:
        print(f"{name} = {_fmt(value)}", file=out)
    return EXIT_OK


COMMANDS = {"search": cmd_search, "analyze": cmd_analyze, "simulate": cmd_simulate, "cost": cmd_cost}


def main(argv: list[str] | None = None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"triortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"triortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"triortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (matrix_io.MatrixFileError, analysis.CodeConstructionError, OSError) as exc:
        print(f"triortho: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
