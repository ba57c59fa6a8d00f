"""Command-line surface.

Commands: family, certify, sweep, verify-tripartite, robustness.  CSV
goes to sweeps (plot-friendly), JSON to structured reports; nothing is
plotted here.  Inputs and outcome labels are 1-based on this surface
and in all files, matching conventional notation.

Exit codes: 0 success, 2 infeasible parameters, 3 invalid behavior,
4 output I/O failure, 5 verification failure.
"""

import argparse
import concurrent.futures
import json
import os
import sys
import time

import numpy as np

import maxrand
from maxrand import analytic, incompat, npa, numverify, quantum, scenario

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INVALID_BEHAVIOR = 3
EXIT_IO = 4
EXIT_VERIFICATION = 5


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _workers() -> int:
    cap = os.environ.get("MAXRAND_THREADS", "0")
    try:
        cap = int(cap)
    except ValueError:
        cap = 0
    if cap == 1:
        return 1
    auto = min(8, os.cpu_count() or 1)
    return auto if cap <= 0 else min(cap, auto * 4)


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _manifest(command: str, params: dict, seed, outputs, started: float,
              base: str | None = None) -> None:
    """One manifest per command run, listing every output file."""
    outputs = [p for p in outputs if p != "-"]
    if not outputs:
        return
    data = {
        "command": command,
        "parameters": params,
        "seed": seed,
        "tool_version": maxrand.__version__,
        "outputs": sorted(outputs),
        "wall_time_s": time.time() - started,
    }
    with open((base or outputs[0]) + ".manifest.json", "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _parse_settings(text: str, parties: int):
    parts = text.split(",")
    if len(parts) != parties:
        raise ValueError(f"expected {parties} comma-separated inputs, got {text!r}")
    return tuple(int(p) - 1 for p in parts)


# ---------------------------------------------------------------------------
# family
# ---------------------------------------------------------------------------

def cmd_family(args) -> int:
    started = time.time()
    try:
        if args.kind == "bipartite":
            real = analytic.construct_bipartite_family(args.x, args.z)
        else:
            real = analytic.construct_tripartite_family(args.x, args.z)
    except analytic.InfeasibleFamilyError as exc:
        print(f"infeasible family point: g = {_fmt(exc.g)}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    beh = real.behavior()
    summary = {
        "kind": real.kind,
        "x": args.x,
        "z": args.z,
        "g": real.g,
        "predicted_objective": real.predicted_objective,
    }
    if real.kind == "bipartite":
        summary["chsh"] = scenario.chsh_value(beh)
    try:
        real.write(args.out + ".realization.json")
        scenario.write_behavior(beh, args.out + ".behavior.json")
        _manifest("family", {"kind": args.kind, "x": args.x, "z": args.z},
                  args.seed,
                  [args.out + ".realization.json", args.out + ".behavior.json"],
                  started, base=args.out)
    except OSError as exc:
        print(f"cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    print(" ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                   for k, v in summary.items()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def cmd_certify(args) -> int:
    started = time.time()
    try:
        beh = scenario.read_behavior(args.behavior)
    except (OSError, scenario.BehaviorFormatError) as exc:
        print(f"cannot read behavior: {exc}", file=sys.stderr)
        return EXIT_INVALID_BEHAVIOR
    report = scenario.validate_behavior(beh)
    if not report.ok:
        print("behavior fails validation:", file=sys.stderr)
        print(json.dumps(report.summary(), indent=1), file=sys.stderr)
        return EXIT_INVALID_BEHAVIOR
    try:
        settings = _parse_settings(args.settings, beh.scenario.parties)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID_BEHAVIOR
    _progress(f"certifying at settings {args.settings}, level {args.level}")
    try:
        out = npa.certification_report(beh, settings, args.level)
    except npa.BehaviorOutsideRelaxationError as exc:
        out = {
            "settings": [s + 1 for s in settings],
            "level": args.level or npa.default_level(beh.scenario),
            "validation": report.summary(),
            "membership_status": "infeasible",
            "pg_upper": None,
            "min_entropy_bits": None,
            "note": str(exc),
        }
        if (beh.scenario.parties, beh.scenario.inputs_per_party,
                beh.scenario.outputs_per_party) == (2, 2, 2):
            out["chsh"] = scenario.chsh_value(beh)
    text = json.dumps(out, indent=1, sort_keys=True) + "\n"
    try:
        _write_text(args.out, text)
        _manifest("certify", {"behavior": args.behavior, "settings": args.settings,
                              "level": args.level}, args.seed, [args.out], started)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_fig2(grid: int):
    rows = []
    values = [0.5 * (i + 1) / grid for i in range(grid)]
    for s in values:
        for t in values:
            res = analytic.maximize_f_over_a(s, t)
            rows.append((s, t, res.a_star ** 2, res.f_star))
    return "s,t,A_star2,f_star", rows


def _sweep_fig3(grid: int):
    def cell(pair):
        x, z = pair
        if analytic.g_bound(x, z) < 0.0:
            return None
        real = analytic.construct_bipartite_family(x, z)
        return (x, z, scenario.chsh_value(real.behavior()))

    pairs = [(0.5 * i / (grid - 1), 0.5 * j / (grid - 1))
             for i in range(grid) for j in range(grid)]
    workers = _workers()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(cell, pairs))
    else:
        cells = [cell(p) for p in pairs]
    return "x,z,chsh", [c for c in cells if c is not None]


def _sweep_fig4(grid: int):
    def cell(pair):
        x, z = pair
        if analytic.g_bound(x, z) < 0.0:
            return None
        pt = incompat.tradeoff_point(x, z)
        return pt

    pairs = [(0.5 * i / (grid - 1), 0.5 * j / (grid - 1))
             for i in range(grid) for j in range(grid)]
    workers = _workers()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(cell, pairs))
    else:
        cells = [cell(p) for p in pairs]
    points = [c for c in cells if c is not None]
    frontier = incompat.pareto_frontier(points)
    header = "x,z,eta_A,eta_B,g,chsh"
    as_row = lambda p: (p.x, p.z, p.eta_a, p.eta_b, p.g, p.chsh)
    return header, [as_row(p) for p in points], [as_row(p) for p in frontier]


def _csv(header: str, rows) -> str:
    lines = [header]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    started = time.time()
    if args.grid < 2:
        print("grid must be at least 2", file=sys.stderr)
        return EXIT_INFEASIBLE
    _progress(f"sweeping {args.figure} on a {args.grid}x{args.grid} grid")
    outputs = [args.out]
    try:
        if args.figure == "fig2":
            header, rows = _sweep_fig2(args.grid)
            _write_text(args.out, _csv(header, rows))
        elif args.figure == "fig3":
            header, rows = _sweep_fig3(args.grid)
            _write_text(args.out, _csv(header, rows))
        else:
            header, rows, frontier = _sweep_fig4(args.grid)
            _write_text(args.out, _csv(header, rows))
            if args.out != "-":
                stem, ext = os.path.splitext(args.out)
                fpath = f"{stem}-frontier{ext or '.csv'}"
                _write_text(fpath, _csv(header, frontier))
                outputs.append(fpath)
            else:
                sys.stdout.write(_csv(header, frontier))
        _manifest("sweep", {"figure": args.figure, "grid": args.grid},
                  args.seed, outputs, started)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify-tripartite
# ---------------------------------------------------------------------------

def cmd_verify_tripartite(args) -> int:
    started = time.time()
    try:
        g = analytic.gt_bound(args.x, args.z)
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if g < 0.0:
        print(f"infeasible family point: g_T = {_fmt(g)}", file=sys.stderr)
        return EXIT_INFEASIBLE
    predicted = g * g / 4.0
    _progress(f"minimizing with {args.restarts} restarts (seed {args.seed})")
    try:
        report = numverify.verify_family_point(
            "tripartite", args.x, args.z, predicted,
            restarts=args.restarts, seed=args.seed)
    except numverify.ResidualGateError as exc:
        print(f"residual gate failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    try:
        _write_text(args.out, text)
        _manifest("verify-tripartite",
                  {"x": args.x, "z": args.z, "restarts": args.restarts,
                   "tol": args.tol}, args.seed, [args.out], started)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    if report["relative_error"] > args.tol:
        print(f"relative error {_fmt(report['relative_error'])} exceeds "
              f"tolerance {_fmt(args.tol)}", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# robustness
# ---------------------------------------------------------------------------

def _parse_vec(text: str):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three components, got {text!r}")
    return np.array(parts)


def cmd_robustness(args) -> int:
    started = time.time()
    try:
        n1 = _parse_vec(args.n1)
        n2 = _parse_vec(args.n2)
        out = {}
        if args.method in ("analytic", "both"):
            out["analytic"] = incompat.analytic_robustness(n1, n2).eta
        if args.method in ("sdp", "both"):
            out["sdp"] = incompat.sdp_robustness(n1, n2, tol=args.tol).eta
    except (ValueError, RuntimeError) as exc:
        print(f"robustness query failed: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    text = json.dumps(out, indent=1, sort_keys=True) + "\n"
    try:
        _write_text(args.out, text)
        _manifest("robustness", {"n1": args.n1, "n2": args.n2,
                                 "method": args.method, "tol": args.tol},
                  args.seed, [args.out], started)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument surface
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxrand",
        description="Certify maximal randomness directly from probability "
                    "distributions and explore the measurement trade-offs "
                    "behind it.")
    parser.add_argument("--seed", type=int, default=42,
                        help="base random seed (used by verify-tripartite)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="construct a maximal-randomness realization")
    p.add_argument("kind", choices=("bipartite", "tripartite"))
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--out", default="family", help="output path prefix")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("certify", help="validate, test membership and bound "
                                       "the guessing probability of a behavior file")
    p.add_argument("behavior", help="behavior JSON file")
    p.add_argument("--settings", default=None,
                   help="1-based input tuple, e.g. 1,1 (default: all ones)")
    p.add_argument("--level", choices=npa.LEVELS, default=None,
                   help="relaxation level (default 1ab)")
    p.add_argument("--out", default="-", help="report path or - for stdout")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="emit figure data as CSV")
    p.add_argument("figure", choices=("fig2", "fig3", "fig4"))
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV path or - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify-tripartite",
                       help="check the three-user bound by direct minimization")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--out", default="-", help="report path or - for stdout")
    p.set_defaults(func=cmd_verify_tripartite)

    p = sub.add_parser("robustness", help="incompatibility robustness of a "
                                          "Bloch-vector pair")
    p.add_argument("--n1", required=True, help="comma-separated unit vector")
    p.add_argument("--n2", required=True, help="comma-separated unit vector")
    p.add_argument("--method", choices=("analytic", "sdp", "both"),
                   default="both")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out", default="-", help="report path or - for stdout")
    p.set_defaults(func=cmd_robustness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "settings", "unset") is None:
        args.settings = None  # resolved after the behavior is read
    if args.command == "certify" and args.settings is None:
        # default to the all-ones settings tuple once the file is parsed
        try:
            beh = scenario.read_behavior(args.behavior)
            args.settings = ",".join(["1"] * beh.scenario.parties)
        except Exception:
            args.settings = "1,1"
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
