"""Command-line driver: ``skewns {verify,audit,count-bc,run}``.

Exit codes: 0 pass, 1 tolerance failure, 2 usage or configuration error.
"""

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import critical_mach_sq, sweep_table
from .solver import CaseConfig, run_case
from .state import DomainError, GasParams
from .suites import dense_count, run_all

log = logging.getLogger("skewns")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
AUDIT_TOL = 1e-12
ENERGY_COLUMNS = ["step", "time", "energy", "rate_measured", "surface_inviscid",
                  "surface_viscous", "residual"]
BC_COLUMNS = (["gamma", "u_n_sign", "Mn_sq", "beta"] + [f"entry_{k}" for k in range(1, 8)]
              + ["bc_count", "status", "dense_count"])
DEFAULT_SWEEP = "0.25,0.5,0.9,1.5,4"


class UsageError(Exception):
    pass


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not serialisable: {type(o)}")


def load_config(path):
    """Read a flat JSON config; unknown keys are rejected."""
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {p}")
    text = p.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{p}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{p}: top level must be a JSON object")
    known = {f.name for f in dataclasses.fields(CaseConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise UsageError(f"{p}: unknown keys {unknown}; allowed: {sorted(known)}")
    try:
        cfg = CaseConfig(**data)
        cfg.grid()  # node counts and order checked before any work
        return cfg
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{p}: {exc}") from None


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_verify(args):
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    results = run_all(args.seed, args.trials, fault=args.inject_fault)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.name:28s} worst={r.worst:.3e} tol={r.tolerance:.0e} trials={r.trials}")
        if not r.passed:
            ok = False
            print(f"     offending state: {json.dumps(r.worst_state)}")
    report = {"command": "verify", "seed": args.seed, "trials": args.trials,
              "inject_fault": args.inject_fault, "suites": [r.summary() for r in results],
              "passed": ok}
    if args.out:
        write_json(_outdir(args) / "report.json", report)
    return EXIT_OK if ok else EXIT_FAIL


def _run(args, audit):
    if not args.config:
        raise UsageError("--config PATH is required")
    cfg = load_config(args.config)
    if audit:
        cfg = dataclasses.replace(cfg, record_energy=True)
    hist = run_case(cfg)
    rows = []
    for step, (t, rep) in enumerate(zip(hist.times, hist.reports)):
        rows.append({"step": step, "time": t, **rep.to_dict()})
    summary = {"steps": len(hist.times) - 1, "dt": hist.dt, "final_time": hist.times[-1]}
    if hist.reports:
        rel = [r.relative_residual for r in hist.reports]
        e0, e1 = hist.reports[0].energy, hist.reports[-1].energy
        summary.update(max_abs_residual=max(abs(r.residual) for r in hist.reports),
                       max_relative_residual=max(rel),
                       energy_drift=(e1 - e0) / e0)
    passed = (not hist.reports) or summary["max_relative_residual"] <= AUDIT_TOL
    report = {"command": "audit" if audit else "run", "version": __version__,
              "config": cfg.to_dict(), "reproducible": args.reproducible,
              "summary": summary, "passed": passed, "energy": rows}
    out = _outdir(args)
    write_json(out / "report.json", report)
    if hist.reports:
        write_csv(out / "energy.csv", ENERGY_COLUMNS, rows)
    np.save(out / "final_state.npy", hist.final)
    for k, v in summary.items():
        print(f"{k}: {fmt(v)}")
    if audit:
        print(("PASS" if passed else "FAIL") + f" energy balance (relative tol {AUDIT_TOL:g})")
        return EXIT_OK if passed else EXIT_FAIL
    return EXIT_OK


def cmd_audit(args):
    return _run(args, audit=True)


def cmd_run(args):
    return _run(args, audit=False)


def cmd_count_bc(args):
    try:
        g = GasParams(gamma=args.gamma)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    try:
        values = [float(v) for v in args.mn_sq.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse --mn-sq {args.mn_sq!r}") from None
    if args.include_critical:
        values.append(critical_mach_sq(g))
    if not values or any(v <= 0 for v in values):
        raise UsageError("--mn-sq needs positive values")
    signs = {"both": (1, -1), "outflow": (1,), "inflow": (-1,)}[args.signs]
    rows = sweep_table(g, values, signs)
    ok = True
    for row in rows:
        if row["status"] == "ok":
            row["dense_count"] = dense_count(row["u_n_sign"], row["Mn_sq"], g)
            ok &= row["dense_count"] == row["bc_count"]
    write_csv(_outdir(args) / "bc_table.csv", BC_COLUMNS, rows)
    for row in rows:
        print(f"u_n_sign={row['u_n_sign']:+d} Mn_sq={row['Mn_sq']:.6g} beta={fmt(row['beta'])} "
              f"count={fmt(row['bc_count'])} {row['status']}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="skewns", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--reproducible", action="store_true",
                       help="deterministic summation order (always on; recorded in reports)")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("verify", help="run the randomised identity suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb one coefficient entry by 1e-6 (sensitivity check)")
    common(p)
    p.set_defaults(func=cmd_verify)

    for name, func, text in (("audit", cmd_audit, "run a case and audit the energy balance"),
                             ("run", cmd_run, "run a case")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=False)
        p.add_argument("--seed", type=int, default=None, help="unused; accepted for symmetry")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("count-bc", help="tabulate boundary-condition counts")
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--mn-sq", default=DEFAULT_SWEEP, help="comma separated normal Mach^2 values")
    p.add_argument("--signs", choices=("both", "outflow", "inflow"), default="both")
    p.add_argument("--include-critical", action="store_true",
                   help="append the beta = 0 Mach number (flagged degenerate)")
    common(p)
    p.set_defaults(func=cmd_count_bc)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.out is None and args.command != "verify":
        args.out = "."
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
