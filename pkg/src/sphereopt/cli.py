"""Command-line front end.

Subcommands:

* solve      -- run one method (multi-start) and write config/trace/report
* benchmark  -- method x n grid, one table row per cell, CSV + per-run traces
* gradcheck  -- finite-difference check of a named objective
* pack       -- max-min-distance search, JSON + text summary
* export     -- convert a configuration JSON to CSV (or re-emit JSON)

Exit codes: 0 converged, 2 stopped on the iteration budget, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .geometry import Configuration
from .packing import PackOptions, pack


def _parent_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--threads", type=int, default=1,
                   help="thread pool size for independent starts")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return p


def _parse_kv(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise SystemExit(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def _parse_schedule(text):
    """Parse "1:1e-3,10:1e-4,..." into schedule stages."""
    stages = []
    for part in text.split(","):
        lam, _, tol = part.partition(":")
        stages.append((float(lam), float(tol) if tol else 1e-6))
    return stages


def build_parser() -> argparse.ArgumentParser:
    common = _parent_flags()
    parser = argparse.ArgumentParser(
        prog="sphereopt",
        description="Minimum-energy and packing configurations on the unit sphere",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", parents=[common], help="run one method")
    ps.add_argument("--config", type=str, default=None,
                    help="JSON file mirroring the run spec; flags override it")
    ps.add_argument("--method", type=str, choices=harness.METHODS)
    ps.add_argument("--n", type=int)
    ps.add_argument("--k", type=int, default=None)
    ps.add_argument("--starts", type=int, default=None)
    ps.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="sgd penalty weight")
    ps.add_argument("--gamma", type=float, default=None, help="sgd step size")
    ps.add_argument("--iters", type=int, default=None, help="sgd iteration budget")
    ps.add_argument("--eta", type=float, default=None, help="force displacement scale")
    ps.add_argument("--passes", type=int, default=None, help="force pass budget")
    ps.add_argument("--m", type=int, default=None, help="l1 projection rows")
    ps.add_argument("--lambda-schedule", type=str, default=None,
                    help="continuation stages as lam:tol,lam:tol,...")
    ps.add_argument("--param", action="append", metavar="KEY=VALUE",
                    help="extra method parameter (JSON-decoded value)")

    pb = sub.add_parser("benchmark", parents=[common],
                        help="compare methods across point counts")
    pb.add_argument("--methods", type=str, required=True,
                    help="comma-separated method names")
    pb.add_argument("--n-list", type=str, required=True,
                    help="comma-separated point counts")
    pb.add_argument("--starts", type=int, default=20)
    pb.add_argument("--k", type=int, default=3)

    pg = sub.add_parser("gradcheck", parents=[common],
                        help="finite-difference gradient verification")
    pg.add_argument("--objective", required=True,
                    choices=("spherical", "penalty", "auglag", "pair"))
    pg.add_argument("--n", type=int, default=5)
    pg.add_argument("--k", type=int, default=3)
    pg.add_argument("--step", type=float, default=1e-6)
    pg.add_argument("--json", action="store_true", help="also print the report as JSON")

    pp = sub.add_parser("pack", parents=[common],
                        help="max-min-distance configuration search")
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--restarts", type=int, default=40)
    pp.add_argument("--perturb-scale", type=float, default=0.01)

    pe = sub.add_parser("export", parents=[common],
                        help="convert a configuration JSON")
    pe.add_argument("--input", required=True, help="configuration JSON file")
    pe.add_argument("--output", required=True, help="destination path")
    pe.add_argument("--format", choices=("json", "csv"), default="csv")

    return parser


def _cmd_solve(args) -> int:
    base = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
    params = dict(base.get("method_params", {}))
    params.update(_parse_kv(args.param))
    for key, value in (("lam", args.lam), ("gamma", args.gamma), ("iters", args.iters),
                       ("eta", args.eta), ("passes", args.passes), ("m", args.m)):
        if value is not None:
            params[key] = value
    if args.lambda_schedule:
        params["lambda_schedule"] = _parse_schedule(args.lambda_schedule)

    spec_dict = {
        "method": args.method or base.get("method"),
        "n": args.n if args.n is not None else base.get("n"),
        "k": args.k if args.k is not None else base.get("k", 3),
        "starts": args.starts if args.starts is not None else base.get("starts", 1),
        "seed": args.seed if args.seed != 0 else base.get("seed", 0),
        "method_params": params,
        "output_dir": args.out or base.get("output_dir"),
    }
    if spec_dict["method"] is None or spec_dict["n"] is None:
        raise harness.InvalidSpecError("solve needs --method and --n (or --config)")
    spec = harness.RunSpec.from_dict(spec_dict)
    _, code = harness.run(spec, threads=args.threads, quiet=args.quiet)
    return code


def _cmd_benchmark(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    n_list = [int(v) for v in args.n_list.split(",")]
    table = harness.benchmark(
        methods, n_list, starts=args.starts, seed=args.seed, k=args.k,
        out_dir=args.out, threads=args.threads,
    )
    if not args.quiet:
        print(table.format_text())
    return 0


def _cmd_gradcheck(args) -> int:
    report = harness.run_gradcheck(args.objective, args.n, args.k, args.seed,
                                   h=args.step)
    if not args.quiet:
        print(report.format_text())
    if args.json:
        print(json.dumps(report.to_dict()))
    return 0 if report.passed else 1


def _cmd_pack(args) -> int:
    opts = PackOptions(restarts=args.restarts, perturb_scale=args.perturb_scale,
                       seed=args.seed)
    state = pack(args.n, opts)
    payload = {"d_min": state.d_min,
               "configuration": json.loads(state.cfg.to_json())}
    if args.out:
        import os

        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"pack_n{args.n}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
    if not args.quiet:
        print(f"n={args.n}: min pairwise distance {state.d_min:.6f}")
    print(json.dumps({"d_min": state.d_min, "n": args.n}))
    return 0


def _cmd_export(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        cfg = Configuration.from_json(fh.read())
    harness.export_points(cfg, args.output, args.format)
    if not args.quiet:
        print(f"wrote {cfg.n} points to {args.output} ({args.format})")
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "benchmark": _cmd_benchmark,
    "gradcheck": _cmd_gradcheck,
    "pack": _cmd_pack,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (harness.InvalidSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
