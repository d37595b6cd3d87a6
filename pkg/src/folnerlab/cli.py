"""Command line driver.

Exit codes: 0 all checks passed, 1 configuration error, 2 task failure,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, RecipeTooLarge, TaskFailure
from .folner import profile
from .scalars import format_fraction
from .scenario import (
    _get,
    _strategy,
    load_report,
    load_scenario,
    run_scenario,
    verify_report,
    write_report,
)

EXIT_OK, EXIT_CONFIG, EXIT_TASK, EXIT_VERIFY = 0, 1, 2, 3


def _cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    rep = run_scenario(sc, args.seed)
    out = Path(args.out) if args.out else Path("out") / sc.name
    path = write_report(rep, out)
    for i, task in enumerate(rep.doc["tasks"]):
        print(f"task {i} {task['type']}: {task['status']}")
    print(f"report: {path} (hash {rep.hash})")
    return EXIT_OK if rep.ok else EXIT_TASK


def _cmd_verify(args) -> int:
    try:
        doc = load_report(args.report)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read report: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    errors = verify_report(doc)
    for e in errors:
        print(f"FAIL {e}")
    if errors:
        return EXIT_VERIFY
    print(f"verified {len(doc['tasks'])} task(s)")
    return EXIT_OK


def _cmd_profile(args) -> int:
    sc = load_scenario(args.scenario)
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"--sizes: {exc}") from exc
    if not sizes:
        raise ConfigError("--sizes: need at least one size")
    task = next((t for t in sc.tasks if t["type"] == args.task), None)
    if task is None:
        raise ConfigError(f"scenario has no {args.task!r} task to take R and budget from")
    where = f"task {args.task}"
    R = _get(task, "R", where, int)
    budget = _get(task, "budget", where, int, 10_000)
    st = _strategy(task, where, sc.seed if args.seed is None else args.seed)
    w = sc.window()
    prof = profile(w, R, sizes, budget, st, _get(task, "ambient", where, bool, True))
    out = Path(args.out) if args.out else Path("out") / sc.name
    out.mkdir(parents=True, exist_ok=True)
    path = out / "profile.csv"
    prof.to_csv(path)
    for e in prof.entries:
        print(f"N={e.N}: {format_fraction(e.ratio) if e.ratio is not None else 'none'}")
    print(f"profile: {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="folnerlab", description="Folner sets, doublings and operator diagnostics on metric windows.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario and write report.json plus CSV tables")
    r.add_argument("scenario")
    r.add_argument("--out")
    r.add_argument("--seed", type=int)
    r.set_defaults(func=_cmd_run)
    v = sub.add_parser("verify", help="re-verify every certificate and bound in a report")
    v.add_argument("report")
    v.set_defaults(func=_cmd_verify)
    pr = sub.add_parser("profile", help="isoperimetric profile over a list of target sizes")
    pr.add_argument("scenario")
    pr.add_argument("--task", default="folner")
    pr.add_argument("--sizes", required=True)
    pr.add_argument("--out")
    pr.add_argument("--seed", type=int)
    pr.set_defaults(func=_cmd_profile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RecipeTooLarge) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TaskFailure as exc:
        print(f"task failure: {exc}", file=sys.stderr)
        return EXIT_TASK


if __name__ == "__main__":
    sys.exit(main())
