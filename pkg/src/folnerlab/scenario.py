"""Scenario documents: parsing, task execution and report verification.

A scenario is one JSON document::

    {"schema_version": 1, "name": "...", "seed": 0,
     "space": {...space descriptor...},
     "tasks": [{"type": "folner", "R": 1, "eps": "1/10"}, ...]}

Rationals are written as "num/den" strings.  Reports embed the scenario,
every certificate in raw form, and a hash over everything except the
``timing`` block, so two runs with the same seed hash identically.
"""
from __future__ import annotations

import hashlib
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .diagnostics import (
    DefectReport,
    corner_subspace,
    reverse_defect_check,
    subspace_projection_defect,
    sum_dimension,
    ucp_defect,
)
from .errors import BudgetExceeded, ConfigError, InvalidMetric, RecipeTooLarge, TaskFailure
from .folner import (
    FolnerCertificate,
    SearchStrategy,
    Strategy,
    explore,
    profile,
)
from .instances import random_operator
from .leavitt import (
    binary_model,
    embed_L1n_in_L12,
    free_group_doubling,
    leavitt_relation_check,
    nary_model,
    nary_window,
    properly_infinite_witness,
    realize_words,
)
from .roe import Projection, commutator_ratio, edge_identity_check, folner_bound
from .scalars import format_fraction, parse_fraction
from .space import SpaceWindow, build_window, descriptor_from_json, enumerate_reduced_words
from .translations import DeficiencyWitness, DoublingCertificate, doubling_search

SCHEMA_VERSION = 1
TASK_TYPES = ("folner", "profile", "tarski", "operator_bench", "ucp_bench", "leavitt", "alg_amen")
FLOAT_RTOL = 1e-12


# ---- config parsing ---------------------------------------------------------------


def _get(doc, key, where, kind=None, default=...):
    if key not in doc:
        if default is ...:
            raise ConfigError(f"{where}.{key}: required field missing")
        return default
    val = doc[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise ConfigError(f"{where}.{key}: expected an integer, got {val!r}")
    if kind is bool and not isinstance(val, bool):
        raise ConfigError(f"{where}.{key}: expected true/false, got {val!r}")
    if kind is str and not isinstance(val, str):
        raise ConfigError(f"{where}.{key}: expected a string, got {val!r}")
    return val


def _rational(doc, key, where, default=...):
    raw = _get(doc, key, where, default=default)
    if raw is default and default is not ...:
        return raw
    if isinstance(raw, float):
        raise ConfigError(f"{where}.{key}: write rationals as \"num/den\" strings, not floats")
    try:
        return parse_fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}.{key}: not a rational: {raw!r}") from exc


def _label(obj):
    if isinstance(obj, list):
        return tuple(_label(o) for o in obj)
    return obj


def _points(w: SpaceWindow, labels, where):
    try:
        return [w.index(_label(lab)) for lab in labels]
    except KeyError as exc:
        raise ConfigError(f"{where}: label {exc.args[0]!r} is not a point of the window") from exc


@dataclass
class Scenario:
    doc: dict
    name: str
    seed: int
    space: Any
    tasks: list
    max_points: Optional[int] = None

    @property
    def hash(self) -> str:
        return _hash_doc(self.doc)

    def window(self) -> SpaceWindow:
        try:
            return build_window(self.space, self.max_points)
        except (ValueError, InvalidMetric, RecipeTooLarge) as exc:
            raise ConfigError(f"scenario.space: {exc}") from exc


def _hash_doc(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]


def parse_scenario(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigError("scenario: expected a JSON object")
    ver = _get(doc, "schema_version", "scenario", int, SCHEMA_VERSION)
    if ver != SCHEMA_VERSION:
        raise ConfigError(f"scenario.schema_version: unsupported version {ver}")
    name = _get(doc, "name", "scenario", str, "scenario")
    seed = _get(doc, "seed", "scenario", int, 0)
    try:
        space = descriptor_from_json(_get(doc, "space", "scenario"))
    except ValueError as exc:
        raise ConfigError(f"scenario.space: {exc}") from exc
    tasks = _get(doc, "tasks", "scenario", default=[])
    if not isinstance(tasks, list):
        raise ConfigError("scenario.tasks: expected a list")
    for i, t in enumerate(tasks):
        where = f"tasks[{i}]"
        if not isinstance(t, dict):
            raise ConfigError(f"{where}: expected an object")
        if _get(t, "type", where, str) not in TASK_TYPES:
            raise ConfigError(f"{where}.type: unknown task type {t['type']!r}; expected one of {TASK_TYPES}")
    max_points = _get(doc, "max_points", "scenario", int, None)
    return Scenario(doc, name, seed, space, tasks, max_points)


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_scenario(doc)


# ---- task runners -----------------------------------------------------------------


@dataclass
class TaskOutcome:
    result: dict
    ok: bool
    tables: dict = field(default_factory=dict)  # file name -> (header, rows)


def _task_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def _strategy(t, where, seed):
    kind = _get(t, "strategy", where, str, "auto")
    try:
        k = Strategy(kind)
    except ValueError as exc:
        raise ConfigError(f"{where}.strategy: unknown strategy {kind!r}") from exc
    return SearchStrategy(kind=k, budget=_get(t, "budget", where, int, 10_000), seed=seed,
                          centers=_get(t, "centers", where, int, None))


def _run_folner(w, t, where, seed, index):
    R = _get(t, "R", where, int)
    eps = _rational(t, "eps", where)
    ambient = _get(t, "ambient", where, bool, True)
    allow_absent = _get(t, "allow_absent", where, bool, False)
    st = _strategy(t, where, seed)
    kw = {}
    cons = t.get("constraint")
    if cons is not None:
        if "min_size" in cons:
            kw["min_size"] = _get(cons, "min_size", f"{where}.constraint", int)
        elif "superset" in cons:
            kw["superset"] = _points(w, cons["superset"], f"{where}.constraint.superset")
        else:
            raise ConfigError(f"{where}.constraint: expected min_size or superset")
    res = explore(w, R, eps, st, ambient, **kw)
    cert = res.certificate
    out = {
        "R": R,
        "eps": format_fraction(eps),
        "ambient": ambient,
        "certificate": cert.to_json() if cert else None,
        "best_ratio": format_fraction(res.best.ratio) if res.best else None,
        "best": res.best.to_json() if res.best else None,
        "examined": res.examined,
        "budget": res.budget,
        "exhausted": res.exhausted,
        "constraint": {k: (sorted(v) if k == "superset" else v) for k, v in kw.items()},
        "nonexistence": None,
    }
    if res.nonexistence is not None:
        ne = res.nonexistence
        out["nonexistence"] = {"pool_size": ne.pool_size, "examined": ne.examined,
                               "min_ratio": format_fraction(ne.min_ratio) if ne.min_ratio is not None else None}
    status = "pass" if cert else ("absent" if allow_absent else "fail")
    out["status"] = status
    tables = {}
    if cert:
        tables[f"task{index}_folner_points.csv"] = (["point", "label"], [[p, _label_str(w, p)] for p in cert.points])
    return TaskOutcome(out, status != "fail", tables)


def _label_str(w, p):
    lab = w.labels[p]
    return json.dumps(lab) if not isinstance(lab, str) else lab


def _run_profile(w, t, where, seed, index):
    R = _get(t, "R", where, int)
    sizes = _get(t, "sizes", where)
    if not isinstance(sizes, list) or not sizes or not all(isinstance(s, int) and s > 0 for s in sizes):
        raise ConfigError(f"{where}.sizes: expected a nonempty list of positive integers")
    budget = _get(t, "budget", where, int, 10_000)
    st = _strategy(t, where, seed)
    prof = profile(w, R, sizes, budget, st, _get(t, "ambient", where, bool, True),
                   _get(t, "size_slack", where, int, 0))
    entries = [{"N": e.N, "ratio": format_fraction(e.ratio) if e.ratio is not None else None,
                "certificate": e.certificate.to_json() if e.certificate else None} for e in prof.entries]
    rows = [[e.N, e.ratio.numerator if e.ratio is not None else "", e.ratio.denominator if e.ratio is not None else "", budget]
            for e in prof.entries]
    out = {"R": R, "budget": budget, "entries": entries, "status": "pass"}
    return TaskOutcome(out, True, {f"task{index}_profile.csv": (["N", "ratio_num", "ratio_den", "budget"], rows)})


def _run_tarski(w, t, where, seed, index):
    R_max = _get(t, "R_max", where, int)
    eps = _rational(t, "eps", where)
    budget = _get(t, "budget", where, int, 10_000)
    allow_absent = _get(t, "allow_absent", where, bool, True)
    if "carrier" in t:
        carrier = _points(w, t["carrier"], f"{where}.carrier")
    elif "carrier_radius" in t:
        r = _get(t, "carrier_radius", where, int)
        carrier = [p for p in range(w.n) if isinstance(w.labels[p], str) and len(w.labels[p]) <= r]
        if not carrier:
            raise ConfigError(f"{where}.carrier_radius: only meaningful on free-group windows")
    else:
        carrier = None
    st = _strategy(t, where, seed)
    st.budget = budget
    arms = []
    fired = "neither"
    folner_best = None
    doubling = None
    for R in range(1, R_max + 1):
        res = explore(w, R, eps, st, True)
        if res.best is not None and (folner_best is None or res.best.ratio < parse_fraction(folner_best["ratio"])):
            folner_best = res.best.to_json()
        c = carrier
        if c is None:
            c = np.nonzero(w.interior_mask(R))[0].tolist()
        dres = doubling_search(w, c, R) if c else None
        arms.append({
            "R": R,
            "folner_certificate": res.certificate.to_json() if res.certificate else None,
            "folner_best_ratio": format_fraction(res.best.ratio) if res.best else None,
            "flow_value": dres.flow_value if dres else None,
            "carrier_size": len(c),
            "witness": dres.witness.to_json() if dres and dres.witness else None,
        })
        if res.certificate is not None:
            fired = "folner"
            break
        if dres is not None and dres.found:
            fired = "doubling"
            doubling = dres.certificate
            break
    out = {
        "eps": format_fraction(eps), "R_max": R_max, "budget": budget, "fired": fired,
        "arms": arms, "folner_best": folner_best,
        "doubling": doubling.to_json() if doubling else None,
    }
    tables = {}
    if doubling is not None:
        _, _, rep = properly_infinite_witness(doubling, w)
        out["properly_infinite"] = rep.to_json()
        rows = [[x, doubling.t_plus(x), doubling.t_minus(x)] for x in sorted(doubling.carrier)]
        tables[f"task{index}_doubling_pairs.csv"] = (["x", "t_plus_x", "t_minus_x"], rows)
    ok = fired != "neither" or allow_absent
    if "properly_infinite" in out and not out["properly_infinite"]["passed"]:
        ok = False
    out["status"] = "pass" if fired != "neither" and ok else ("absent" if ok else "fail")
    return TaskOutcome(out, ok, tables)


def _random_set(w, rng, lo, hi, pool):
    """A BFS-ball prefix around a random center, of random size in [lo, hi]."""
    c = rng.choice(pool)
    order = [p for p in w.bfs_order(c, limit=hi * 4) if p in pool]
    k = rng.randint(min(lo, len(order)), min(hi, len(order)))
    return sorted(order[:max(k, 1)])


def _bench_instances(w, t, where, seed, index):
    n = _get(t, "instances", where, int, 20)
    R = _get(t, "R", where, int, 1)
    terms = _get(t, "terms", where, int, 3)
    lo = _get(t, "min_set", where, int, 1)
    hi = _get(t, "max_set", where, int, max(2, w.n // 2))
    rng = _task_rng(seed, index)
    pool = list(range(w.n))
    for _ in range(n):
        T = random_operator(w, R, rng, terms)
        F = _random_set(w, rng, lo, hi, pool)
        yield T, F, rng


def _operator_bench_rows(w, t, where, seed, index):
    rows = []
    for T, F, _ in _bench_instances(w, t, where, seed, index):
        R = max(T.propagation, _get(t, "R", where, int, 1))
        rows.append({
            "propagation": T.propagation,
            "set_size": len(F),
            "edge_identity": edge_identity_check(T, F, R),
            "commutator_ratio": commutator_ratio(T, F),
            "folner_bound": folner_bound(T, F, R),
        })
    return rows


def _run_operator_bench(w, t, where, seed, index):
    rows = _operator_bench_rows(w, t, where, seed, index)
    ok = all(r["edge_identity"] and r["commutator_ratio"] <= r["folner_bound"] + 1e-9 for r in rows)
    table = [[i, r["propagation"], r["set_size"], int(r["edge_identity"]), repr(r["commutator_ratio"]),
              repr(r["folner_bound"])] for i, r in enumerate(rows)]
    out = {"instances": rows, "status": "pass" if ok else "fail"}
    return TaskOutcome(out, ok, {f"task{index}_operator_bench.csv": (
        ["instance", "propagation", "set_size", "edge_identity", "commutator_ratio", "folner_bound"], table)})


def _ucp_bench_rows(w, t, where, seed, index):
    rows = []
    for A, F, rng in _bench_instances(w, t, where, seed, index):
        B = random_operator(w, _get(t, "R", where, int, 1), rng, _get(t, "terms", where, int, 3))
        P = Projection(w, F)
        rows.append({"ucp": ucp_defect(P, A, B).to_json(), "reverse": reverse_defect_check(P, A).to_json()})
    return rows


def _run_ucp_bench(w, t, where, seed, index):
    rows = _ucp_bench_rows(w, t, where, seed, index)
    ok = all(DefectReport.from_json(r[k]).holds for r in rows for k in ("ucp", "reverse"))
    table = [[i, repr(r["ucp"]["value"]), repr(r["ucp"]["bound"]), repr(r["reverse"]["value"]),
              repr(r["reverse"]["bound"])] for i, r in enumerate(rows)]
    out = {"instances": rows, "status": "pass" if ok else "fail"}
    return TaskOutcome(out, ok, {f"task{index}_ucp_bench.csv": (
        ["instance", "ucp_value", "ucp_bound", "reverse_value", "reverse_bound"], table)})


def _alg_amen_rows(w, t, where, seed, index):
    if w.n > 40:
        raise ConfigError(f"{where}: algebraic amenability checks are gated to windows of at most 40 points")
    rows = []
    R = _get(t, "R", where, int, 1)
    for a, F, _ in _bench_instances(w, t, where, seed, index):
        W = corner_subspace(w, F)
        dim = sum_dimension(a, W)
        outer = np.nonzero(w.boundary_masks(w.mask(F), R)[1])[0]
        row = {
            "set_size": len(F),
            "ratio": format_fraction(Fraction(dim, W.dim)),
            "bound": format_fraction(1 + Fraction(len(outer), len(F))),
        }
        if w.n <= 30:
            row["subspace_defect"] = subspace_projection_defect(W, a).to_json()
        rows.append(row)
    return rows


def _run_alg_amen(w, t, where, seed, index):
    rows = _alg_amen_rows(w, t, where, seed, index)
    ok = all(parse_fraction(r["ratio"]) <= parse_fraction(r["bound"]) for r in rows)
    ok = ok and all(DefectReport.from_json(r["subspace_defect"]).holds for r in rows if "subspace_defect" in r)
    out = {"instances": rows, "status": "pass" if ok else "fail"}
    table = [[i, r["set_size"], r["ratio"], r["bound"]] for i, r in enumerate(rows)]
    return TaskOutcome(out, ok, {f"task{index}_alg_amen.csv": (["instance", "set_size", "ratio", "bound"], table)})


def _leavitt_report(t, where):
    model = _get(t, "model", where, str, "binary")
    if model == "binary":
        m = _get(t, "m", where, int)
        rep = leavitt_relation_check(binary_model(), 2, nary_window(2, m))
    elif model == "nary":
        n = _get(t, "n", where, int)
        rep = leavitt_relation_check(nary_model(n), n, nary_window(n, _get(t, "m", where, int)))
    elif model == "embed":
        n = _get(t, "n", where, int)
        gens = realize_words(embed_L1n_in_L12(n), binary_model())
        rep = leavitt_relation_check(gens, n, nary_window(2, _get(t, "m", where, int)))
    elif model == "free_group":
        radius = _get(t, "radius", where, int)
        rep = leavitt_relation_check(free_group_doubling(), 2, enumerate_reduced_words(2, radius))
    else:
        raise ConfigError(f"{where}.model: unknown model {model!r}")
    return rep.to_json()


def _run_leavitt(w, t, where, seed, index):
    rep = _leavitt_report(t, where)
    ok = rep["passed"]
    return TaskOutcome({"report": rep, "status": "pass" if ok else "fail"}, ok)


RUNNERS = {
    "folner": _run_folner,
    "profile": _run_profile,
    "tarski": _run_tarski,
    "operator_bench": _run_operator_bench,
    "ucp_bench": _run_ucp_bench,
    "alg_amen": _run_alg_amen,
    "leavitt": _run_leavitt,
}


# ---- run ---------------------------------------------------------------------------


@dataclass
class RunReport:
    doc: dict
    tables: dict
    ok: bool

    @property
    def hash(self) -> str:
        return self.doc["report_hash"]


def report_hash(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k not in ("timing", "report_hash")}
    return _hash_doc(body)


def run_scenario(sc: Scenario, seed: Optional[int] = None) -> RunReport:
    seed = sc.seed if seed is None else seed
    t0 = time.perf_counter()
    w = sc.window()
    results = []
    tables = {}
    timings = []
    ok = True
    for i, t in enumerate(sc.tasks):
        where = f"tasks[{i}]"
        ts = time.perf_counter()
        try:
            outcome = RUNNERS[t["type"]](w, t, where, seed, i)
        except ConfigError:
            raise
        except BudgetExceeded as exc:
            outcome = TaskOutcome({"status": "fail", "error": str(exc)}, False)
        except Exception as exc:
            raise TaskFailure(f"{where} ({t['type']}): {exc}") from exc
        timings.append(round(time.perf_counter() - ts, 6))
        res = {"type": t["type"], **outcome.result}
        results.append(res)
        tables.update(outcome.tables)
        ok = ok and outcome.ok
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "scenario": sc.doc,
        "scenario_hash": sc.hash,
        "seed": seed,
        "window": {"hash": w.hash, "n": w.n, "components": w.n_components},
        "tasks": results,
        "all_passed": ok,
    }
    doc["report_hash"] = report_hash(doc)
    doc["timing"] = {"total_s": round(time.perf_counter() - t0, 6), "tasks_s": timings}
    return RunReport(doc, tables, ok)


def write_report(rep: RunReport, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "report.json"
    path.write_text(json.dumps(rep.doc, indent=2, sort_keys=True) + "\n")
    import csv

    for name, (header, rows) in sorted(rep.tables.items()):
        with open(out / name, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            wr.writerows(rows)
    return path


# ---- verify ------------------------------------------------------------------------


def _close(a, b) -> bool:
    return math.isclose(float(a), float(b), rel_tol=FLOAT_RTOL, abs_tol=1e-15)


def _same_rows(a, b) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_same_rows(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_same_rows(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return _close(a, b)
    return a == b


def _verify_folner_cert(w, doc, eps, label, errors):
    try:
        cert = FolnerCertificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        errors.append(f"{label}: malformed certificate ({exc})")
        return None
    if not cert.verify(w):
        errors.append(f"{label}: certificate failed re-verification")
        return None
    if eps is not None and not cert.is_folner(eps):
        errors.append(f"{label}: ratio {cert.ratio} exceeds eps {eps}")
    return cert


def verify_report(doc: dict) -> list:
    """Re-check every certificate and bound from raw data; returns failures."""
    errors = []
    try:
        sc = parse_scenario(doc["scenario"])
        seed = int(doc["seed"])
        tasks = doc["tasks"]
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        return [f"report: unreadable ({exc})"]
    if doc.get("report_hash") != report_hash(doc):
        errors.append("report: hash mismatch (content changed after the run)")
    w = sc.window()
    if doc.get("window", {}).get("hash") != w.hash:
        errors.append("report: window hash does not match the scenario's space")
    if len(tasks) != len(sc.tasks):
        return errors + ["report: task count differs from the scenario"]
    for i, (t, res) in enumerate(zip(sc.tasks, tasks)):
        label = f"tasks[{i}] ({t['type']})"
        try:
            _verify_task(w, t, res, seed, i, label, errors)
        except Exception as exc:  # malformed content is a verification failure
            errors.append(f"{label}: verification error ({type(exc).__name__}: {exc})")
    return errors


def _verify_task(w, t, res, seed, i, label, errors):
    kind = t["type"]
    where = f"tasks[{i}]"
    if res.get("type") != kind:
        errors.append(f"{label}: task type mismatch")
        return
    if kind == "folner":
        eps = parse_fraction(t["eps"])
        if res["certificate"] is not None:
            cert = _verify_folner_cert(w, res["certificate"], eps, f"{label} certificate", errors)
            cons = t.get("constraint") or {}
            if cert is not None and "min_size" in cons and cert.size < cons["min_size"]:
                errors.append(f"{label}: certificate smaller than min_size")
            if cert is not None and "superset" in cons:
                if not set(_points(w, cons["superset"], where)) <= set(cert.points):
                    errors.append(f"{label}: certificate misses the prescribed superset")
        elif res["status"] != "absent":
            errors.append(f"{label}: no certificate but status {res['status']!r}")
        if res.get("best") is not None:
            _verify_folner_cert(w, res["best"], None, f"{label} best", errors)
    elif kind == "profile":
        for e in res["entries"]:
            if e["certificate"] is None:
                continue
            cert = _verify_folner_cert(w, e["certificate"], None, f"{label} N={e['N']}", errors)
            if cert is not None:
                if cert.size < e["N"]:
                    errors.append(f"{label} N={e['N']}: certificate below target size")
                if format_fraction(cert.ratio) != e["ratio"]:
                    errors.append(f"{label} N={e['N']}: recorded ratio differs")
    elif kind == "tarski":
        eps = parse_fraction(t["eps"])
        for arm in res["arms"]:
            if arm["folner_certificate"] is not None:
                _verify_folner_cert(w, arm["folner_certificate"], eps, f"{label} R={arm['R']}", errors)
            if arm["witness"] is not None:
                wit = DeficiencyWitness.from_json(arm["witness"])
                if not wit.verify(w):
                    errors.append(f"{label} R={arm['R']}: Hall violator failed recount")
        if res["doubling"] is not None:
            cert = DoublingCertificate.from_json(w, res["doubling"])
            errs = cert.check(w)
            if errs:
                errors.append(f"{label}: doubling certificate invalid: {'; '.join(errs)}")
            else:
                _, _, rep = properly_infinite_witness(cert, w)
                if not rep.passed:
                    errors.append(f"{label}: properly infinite identities fail")
        if res["folner_best"] is not None:
            _verify_folner_cert(w, res["folner_best"], None, f"{label} best", errors)
    elif kind in ("operator_bench", "ucp_bench", "alg_amen"):
        fresh = {"operator_bench": _operator_bench_rows, "ucp_bench": _ucp_bench_rows,
                 "alg_amen": _alg_amen_rows}[kind](w, t, where, seed, i)
        if not _same_rows(fresh, res["instances"]):
            errors.append(f"{label}: recorded instances differ from regeneration")
        for j, r in enumerate(fresh):
            if kind == "operator_bench":
                if not r["edge_identity"]:
                    errors.append(f"{label} instance {j}: edge identity fails")
                if r["commutator_ratio"] > r["folner_bound"] + 1e-9:
                    errors.append(f"{label} instance {j}: commutator bound fails")
            elif kind == "ucp_bench":
                for k in ("ucp", "reverse"):
                    if not DefectReport.from_json(r[k]).holds:
                        errors.append(f"{label} instance {j}: {k} bound fails")
            else:
                if parse_fraction(r["ratio"]) > parse_fraction(r["bound"]):
                    errors.append(f"{label} instance {j}: dimension ratio above bound")
    elif kind == "leavitt":
        fresh = _leavitt_report(t, where)
        if fresh != res["report"]:
            errors.append(f"{label}: Leavitt report differs from regeneration")
        if not fresh["passed"]:
            errors.append(f"{label}: Leavitt relations fail")


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
