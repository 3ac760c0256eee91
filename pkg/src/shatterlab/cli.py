"""Command-line front end.

Every subcommand builds a JSON-ready report dict plus a list of flat rows;
the output layer renders either as an aligned table, ``#schema=1`` CSV or
sorted-key JSON. Exit codes: 0 ok, 1 domain or validation error, 2 capacity
error, 3 a verification run found violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import experiments
from .compose import (
    ClassicalConnective,
    ContinuousConnective,
    MainBoundInputs,
    alpha_k,
    compose_concepts,
    compose_functions,
    connective,
    main_bound_check,
    main_bound_multiplier,
    main_bound_rhs,
    vc_composition_bound,
    verify_covering_chain,
    verify_phi_modulus,
    verify_uniform_continuity,
)
from .core import ConceptClass, FiniteSpace, FunctionClass
from .cover import ConstantsConfig, covering_number, metric_entropy_condition, metric_from_class, mv_entropy_bound, talagrand_lower_bound
from .document import ClassDocument, load_document
from .errors import CapacityError, ShatterlabError
from .pacsim import (
    PlaneDistribution,
    Rectangle,
    build_counterexample_class,
    counterexample_fat_check,
    identify_from_one_point,
    rect_sample_complexity,
    run_rectangle_trials,
)
from .shatter import fat_dimension, growth, sauer_bound, vc_dimension

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_VIOLATION = 0, 1, 2, 3
DEFAULT_SEED = 42
CSV_SCHEMA = "#schema=1"


class UsageError(ShatterlabError, ValueError):
    pass


@dataclass
class Report:
    data: dict
    rows: list[dict] = field(default_factory=list)
    violations: int = 0
    lines: list[str] | None = None  # overrides the default table rendering


# -- helpers ----------------------------------------------------------------------


def _labels(space: FiniteSpace, idx) -> list[str]:
    return [space.points[i] for i in idx]


def _set_str(labels) -> str:
    return "{" + ",".join(labels) + "}"


def _cfg(args) -> ConstantsConfig:
    return ConstantsConfig(args.c, args.K, args.c_prime, args.K_prime, args.log_base)


def _doc(args) -> ClassDocument:
    if not args.input:
        raise UsageError("--input is required for this command")
    return load_document(args.input[0] if isinstance(args.input, list) else args.input)


def _classes(args, want: str, k: int | None = None) -> list:
    """k classes from --input (its ``classes`` list, else its single class) or several --input files."""
    paths = args.input if isinstance(args.input, list) else [args.input]
    if not paths or paths == [None]:
        raise UsageError("--input is required for this command")
    out = []
    for p in paths:
        doc = load_document(p)
        for C in doc.all_classes():
            if want == "concepts":
                if isinstance(C, FunctionClass):
                    C = C.to_concept_class()
            elif isinstance(C, ConceptClass):
                C = C.to_function_class()
            out.append(C)
    if k is not None and len(out) == 1 and k > 1:
        out = out * k
    if not out:
        raise UsageError("no classes found in the input")
    return out


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapacityError(f"{what} has {n} members, over the cap of {cap}")


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SHATTERLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"SHATTERLAB_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _named_connective(name: str, k: int, doc: ClassDocument | None = None):
    if doc is not None and name in doc.connectives:
        return doc.connectives[name]
    return connective(name, k)


def _scaled_modulus(u: ContinuousConnective, factor: float | None) -> ContinuousConnective:
    if factor is None:
        return u
    return ContinuousConnective(f"{u.name}[delta={factor:g}*eps]", u.arity, u.evaluator, lambda e: min(factor * e, 1.0))


# -- commands ---------------------------------------------------------------------


def cmd_vc(args) -> Report:
    doc = _doc(args)
    C = doc.concept_class()
    _check_cap(len(C), args.class_cap, "class")
    r = vc_dimension(C)
    labels = _labels(C.space, r.certificate.indices)
    data = {"command": "vc", "class_size": len(C), "points": len(C.space), "vc": r.value,
            "certificate": labels, "certificate_indices": list(r.certificate.indices)}
    return Report(data, [{"vc": r.value, "certificate": " ".join(labels)}],
                  lines=[f"VC = {r.value}", f"certificate = {_set_str(labels)}"])


def cmd_fat(args) -> Report:
    F = _doc(args).function_class()
    _check_cap(len(F), args.class_cap, "class")
    rows = []
    for eps in args.eps:
        r = fat_dimension(F, eps, args.tol)
        rows.append({"eps": eps, "fat": r.value, "certificate": " ".join(_labels(F.space, r.certificate.indices)),
                     "witness": " ".join(repr(c) for c in (r.witness or ()))})
    return Report({"command": "fat", "class_size": len(F), "tol": args.tol, "rows": rows}, rows)


def cmd_growth(args) -> Report:
    C = _doc(args).concept_class()
    _check_cap(len(C), args.class_cap, "class")
    n_max = len(C.space) if args.n_max is None else args.n_max
    table = growth(C, n_max)
    d = vc_dimension(C).value
    rows = []
    for n in range(n_max + 1):
        bound = sauer_bound(n, d) if d >= 1 and n >= d else None
        rows.append({"n": n, "growth": table[n], "two_pow_n": 2**n, "sauer_bound": bound})
    return Report({"command": "growth", "vc": d, "rows": rows}, rows)


def cmd_sauer(args) -> Report:
    if args.input:
        C = _doc(args).concept_class()
        r = experiments.sauer_check(C)
        rows = []
        for n, g in enumerate(r["growth"]):
            bound = sauer_bound(n, r["vc"]) if r["vc"] >= 1 and n >= r["vc"] else None
            rows.append({"n": n, "growth": g, "sauer_bound": bound, "holds": bound is None or g <= bound})
        viol = r["sauer_violations"] + r["pi_violations"]
        return Report({"command": "sauer", **r, "rows": rows, "violations": viol}, rows, viol)
    if args.n is None or args.d is None:
        raise UsageError("sauer needs --n and --d, or --input")
    value = sauer_bound(args.n, args.d)
    return Report({"command": "sauer", "n": args.n, "d": args.d, "bound": value}, [{"n": args.n, "d": args.d, "bound": value}])


def cmd_cover(args) -> Report:
    F = _doc(args).function_class()
    _check_cap(len(F), args.cover_cap, "cover input")
    M = metric_from_class(F, args.distance)
    rows = []
    for eps in args.eps:
        r = covering_number(M, eps, args.mode)
        rows.append({"eps": eps, "number": r.number, "lower_bound": r.lower_bound, "method": r.method,
                     "centers": " ".join(str(c) for c in r.centers)})
    return Report({"command": "cover", "distance": args.distance, "class_size": len(F), "rows": rows}, rows)


def cmd_entropy(args) -> Report:
    C = _doc(args).concept_class()
    _check_cap(len(C), args.cover_cap, "cover input")
    r = metric_entropy_condition(C, args.eps)
    rows = [{"eps": e, "covering_number": n, "log_covering_number": math.log(n)} for e, n in r.rows]
    return Report({"command": "entropy", "class_size": r.class_size, "rows": rows}, rows)


def _composed_report(kind: str, name: str, parts: list, composed, extra: dict) -> Report:
    data = {"command": kind, "connective": name, "component_sizes": [len(c) for c in parts],
            "composed_size": len(composed), **extra}
    if isinstance(composed, ConceptClass):
        members = ["".join("1" if b else "0" for b in row) for row in composed.matrix]
        rows = [{"member": m} for m in members]
    else:
        members = [[float(v) for v in row] for row in composed.matrix]
        rows = [{f"x{j}": v for j, v in enumerate(row)} for row in members]
    data["members"] = members
    lines = [f"{k} = {v}" for k, v in data.items() if k != "members"]
    return Report(data, rows, lines=lines)


def cmd_compose_c(args) -> Report:
    doc = _doc(args)
    Cs = _classes(args, "concepts")
    k = args.k or (len(Cs) if len(Cs) > 1 else 2)
    u = _named_connective(args.connective, k, doc)
    if not isinstance(u, ClassicalConnective):
        raise UsageError(f"{args.connective!r} is not a classical connective")
    if len(Cs) == 1 and u.arity > 1:
        Cs = Cs * u.arity
    composed = compose_concepts(u, Cs, args.class_cap)
    d = max(vc_dimension(C).value for C in Cs)
    extra = {"component_vc": [vc_dimension(C).value for C in Cs], "composed_vc": vc_dimension(composed).value,
             "truth_table": "".join(map(str, u.truth_table))}
    if d >= 1:
        extra["bound"] = vc_composition_bound(d, u.arity, args.log_base)
    return _composed_report("compose-c", args.connective, Cs, composed, extra)


def cmd_compose_f(args) -> Report:
    Fs = _classes(args, "functions")
    u = connective(args.connective, args.k or (len(Fs) if len(Fs) > 1 else 2))
    if not isinstance(u, ContinuousConnective):
        raise UsageError(f"{args.connective!r} is not a continuous connective")
    if len(Fs) == 1 and u.arity > 1:
        Fs = Fs * u.arity
    composed = compose_functions(u, Fs, args.class_cap)
    return _composed_report("compose-f", args.connective, Fs, composed, {})


def cmd_alpha(args) -> Report:
    a = alpha_k(args.k, args.log_base)
    data = {"command": "alpha", "k": args.k, "log_base": args.log_base, "alpha": a}
    if args.d is not None:
        data["bound"] = vc_composition_bound(args.d, args.k, args.log_base)
    return Report(data, [{k: v for k, v in data.items() if k != "command"}])


def cmd_bound_main(args) -> Report:
    cfg = _cfg(args)
    if args.input:
        Fs = _classes(args, "functions")
        u = connective(args.connective, len(Fs))
        if len(Fs) == 1:
            Fs = Fs * u.arity
        r = main_bound_check(u, Fs, args.eps, cfg)
        data = {"command": "bound-main", "eps": r.eps, "scale": r.scale, "fat_components": list(r.fat_components),
                "fat_composed": r.fat_composed, "rhs": r.rhs, "holds": r.holds, "conditional": r.conditional}
        return Report(data, [{k: v for k, v in data.items() if k != "command"}])
    if args.fat is None:
        raise UsageError("bound-main needs --fat values or --input")
    k = len(args.fat)
    u = connective(args.connective, k)
    inputs = MainBoundInputs(args.eps, k, u.modulus, tuple(args.fat), cfg)
    data = {"command": "bound-main", "eps": args.eps, "k": k, "connective": u.name, "scale": inputs.scale,
            "multiplier": main_bound_multiplier(inputs), "fat_values": list(inputs.fat_values),
            "rhs": main_bound_rhs(inputs), "conditional": True}
    return Report(data, [{k: v for k, v in data.items() if k != "command"}])


def cmd_bound_mv(args) -> Report:
    cfg = _cfg(args)
    data = {"command": "bound-mv", "eps": args.eps, "fat": args.fat,
            "upper": mv_entropy_bound(args.fat, args.eps, cfg), "lower": talagrand_lower_bound(args.fat, cfg)}
    return Report(data, [{k: v for k, v in data.items() if k != "command"}])


def cmd_verify(args) -> Report:
    check = args.check
    if check == "modulus":
        u = _scaled_modulus(connective(args.connective, args.k or 2), args.delta_factor)
        r = verify_uniform_continuity(u, args.eps or [0.1, 0.25, 0.5, 1.0], args.samples, args.seed)
        rows = [{"eps": x.eps, "delta": x.delta, "samples": x.samples, "violations": x.violations, "max_gap": x.max_gap}
                for x in r.rows]
        return Report({"command": "verify", "check": check, "connective": r.connective, "seed": args.seed,
                       "rows": rows, "violations": r.violations}, rows, r.violations)
    if check == "phi":
        eps_list = args.eps or [0.25, 0.5]
        if args.input:
            Fs = _classes(args, "functions", 2)
            names = [args.connective] if args.connective else ["mul", "min", "max"]
            rows = []
            for name in names:
                rep = verify_phi_modulus(connective(name, len(Fs)), Fs, eps_list, args.samples, args.seed)
                rows += [{"connective": name, "eps": x.eps, "threshold": x.threshold, "pairs_tested": x.pairs_tested,
                          "pairs_in_threshold": x.pairs_in_threshold, "violations": x.violations} for x in rep.rows]
            viol = sum(r["violations"] for r in rows)
            return Report({"command": "verify", "check": check, "seed": args.seed, "rows": rows, "violations": viol}, rows, viol)
        r = experiments.phi_run(args.instances or 50, eps_list=tuple(eps_list), seed=args.seed)
        return _run_report(r)
    if check == "chain":
        eps_list = args.eps or [0.5]
        if args.input:
            Fs = _classes(args, "functions", 2)
            u = connective(args.connective or "mul", len(Fs))
            rows = []
            for eps in eps_list:
                r = verify_covering_chain(u, Fs, eps)
                rows.append({"eps": eps, "delta_eps_k": r.delta_eps_k, "component_radius": r.component_radius,
                             "composed_number": r.composed_number, "product_number": r.product_number,
                             "component_numbers": " ".join(map(str, r.component_numbers)), "bound": r.bound,
                             "holds": r.holds})
            viol = sum(not r["holds"] for r in rows)
            return Report({"command": "verify", "check": check, "connective": u.name, "rows": rows, "violations": viol},
                          rows, viol)
        return _run_report(experiments.chain_run(args.instances or 1000, args.seed))
    run = experiments.RUNS[check]
    kwargs = {"seed": args.seed}
    if args.instances is not None:
        kwargs["random_instances" if check == "binary-eq" else "instances"] = args.instances
    return _run_report(run(**kwargs))


def _run_report(r: dict) -> Report:
    data = {"command": "verify", **r}
    return Report(data, [{k: (json.dumps(v) if isinstance(v, list) else v) for k, v in r.items()}], r["violations"])


def _load_experiment(path) -> dict:
    try:
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"{path}: expected a JSON object")
    allowed = {"target", "distribution", "eps", "delta", "m", "trials", "seed", "estimator"}
    extra = sorted(set(cfg) - allowed)
    if extra:
        raise UsageError(f"{path}: {extra[0]}: unknown field")
    return cfg


def _distribution(spec) -> PlaneDistribution:
    if spec is None or spec == "uniform":
        return PlaneDistribution.uniform_box()
    if not isinstance(spec, dict):
        raise UsageError("distribution: expected \"uniform\" or an object")
    if spec.get("kind") == "uniform-box":
        box = spec.get("box", [0.0, 1.0, 0.0, 1.0])
        return PlaneDistribution.uniform_box(*map(float, box))
    if "x" in spec and "y" in spec:
        return PlaneDistribution.segments(spec["x"], spec["y"])
    raise UsageError("distribution: expected kind \"uniform-box\" or x/y segment lists")


def cmd_pac_rect(args) -> Report:
    cfg = _load_experiment(args.config) if args.config else {}
    eps = float(cfg.get("eps", args.eps))
    delta = float(cfg.get("delta", args.delta))
    m_raw = cfg.get("m", args.m)
    m = rect_sample_complexity(eps, delta) if str(m_raw) == "auto" else int(m_raw)
    trials = int(cfg.get("trials", args.trials))
    seed = int(cfg.get("seed", args.seed))
    estimator = cfg.get("estimator", args.estimator)
    t = cfg.get("target", args.target)
    if not isinstance(t, list) or len(t) != 4:
        raise UsageError("target: expected [a, b, c, d]")
    target = Rectangle(*map(float, t))
    dist = _distribution(cfg.get("distribution"))
    r = run_rectangle_trials(target, dist, eps, delta, m, trials, seed, estimator, _threads(args))
    rows = [{"trial": i, "error": e, "failure": int(e >= eps)} for i, e in enumerate(r.errors)]
    data = {"command": "pac-rect", "eps": eps, "delta": delta, "m": m, "m_auto": rect_sample_complexity(eps, delta),
            "trials": trials, "seed": seed, "target": target.as_list(), "distribution": dist.describe(),
            "error_estimator": r.error_estimator, "failures": r.failures,
            "empirical_failure_rate": r.empirical_failure_rate, "mean_error": r.mean_error,
            "hypothesis_within_target": r.contained_every_trial}
    lines = [f"m = {m}", f"trials = {trials}", f"failures = {r.failures}",
             f"empirical failure rate = {r.empirical_failure_rate:.4f} (delta = {delta})",
             f"mean error = {r.mean_error:.6f}", f"hypothesis within target every trial = {r.contained_every_trial}"]
    return Report(data, rows, lines=lines)


def cmd_counterexample(args) -> Report:
    if args.input:
        C = _doc(args).concept_class()
    else:
        C = ConceptClass.powerset(FiniteSpace([str(i) for i in range(1, args.powerset + 1)]))
    _check_cap(len(C), args.class_cap, "class")
    r = counterexample_fat_check(C, args.eps)
    cx = build_counterexample_class(C)
    checked = wrong = 0
    for i in range(len(C)):
        for x in range(len(C.space)):
            checked += 1
            got = identify_from_one_point(cx, (x, float(cx.functions.matrix[i, x])))
            wrong += got != C[i]
    data = {"command": "counterexample", "eps": r.eps, "vc": r.vc, "fat": r.fat,
            "certificate": _labels(C.space, r.certificate), "half_witness_ok": r.half_witness_ok,
            "max_code": r.max_code, "identifications_checked": checked, "identification_failures": wrong,
            "holds": r.holds and wrong == 0}
    return Report(data, [{k: v for k, v in data.items() if k not in ("command", "certificate")}])


# -- parser -----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 by default, which is reserved for capacity errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=None, help="worker threads (env SHATTERLAB_THREADS)")
    p.add_argument("--tol", type=float, default=0.0, help="threshold tolerance for knife-edge inputs")
    p.add_argument("--class-cap", type=int, default=10**6)
    p.add_argument("--cover-cap", type=int, default=4096)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--c-prime", type=float, default=1.0)
    p.add_argument("--K-prime", type=float, default=1.0)
    p.add_argument("--log-base", type=float, default=None, help="default: natural log")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shatterlab", description="Exact VC/fat-shattering dimensions, covers and composition bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        return p

    add("vc", cmd_vc, "VC dimension with a certificate").add_argument("--input")
    p = add("fat", cmd_fat, "fat-shattering dimension")
    p.add_argument("--input")
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p = add("growth", cmd_growth, "growth function table")
    p.add_argument("--input")
    p.add_argument("--n-max", type=int)
    p = add("sauer", cmd_sauer, "Sauer bound, or growth against it for a class")
    p.add_argument("--input")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p = add("cover", cmd_cover, "covering numbers of a class")
    p.add_argument("--input")
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    p.add_argument("--distance", choices=("l2", "expected-abs", "symdiff"), default="l2")
    p = add("entropy", cmd_entropy, "metric entropy of a concept class")
    p.add_argument("--input")
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p = add("compose-c", cmd_compose_c, "compose concept classes with a classical connective")
    p.add_argument("--input", nargs="+")
    p.add_argument("--connective", required=True)
    p.add_argument("--k", type=int)
    p = add("compose-f", cmd_compose_f, "compose function classes with a continuous connective")
    p.add_argument("--input", nargs="+")
    p.add_argument("--connective", required=True)
    p.add_argument("--k", type=int)
    p = add("alpha", cmd_alpha, "alpha_k and the classical composition bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int)
    p = add("bound-main", cmd_bound_main, "fat-dimension bound for a composed class")
    p.add_argument("--input", nargs="+")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--connective", default="mul")
    p.add_argument("--fat", type=int, nargs="+")
    p = add("bound-mv", cmd_bound_mv, "covering-number bounds from a fat dimension")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--fat", type=int, required=True)
    p = add("verify", cmd_verify, "randomized or document-driven checks of proved inequalities")
    p.add_argument("check", choices=("modulus", "phi", "chain", "product", "image", "sauer", "binary-eq", "vc-comp", "cover"))
    p.add_argument("--input", nargs="+")
    p.add_argument("--connective")
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--instances", type=int)
    p.add_argument("--delta-factor", type=float, help="replace the modulus by min(factor*eps, 1)")
    p = add("pac-rect", cmd_pac_rect, "rectangle learner trials")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--m", default="auto")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--target", type=float, nargs=4, default=[0.25, 0.75, 0.25, 0.75])
    p.add_argument("--estimator", choices=("exact", "monte-carlo"), default="exact")
    p.add_argument("--config", help="experiment configuration JSON")
    p.add_argument("--rows-out", help="also write per-trial CSV rows here")
    p = add("counterexample", cmd_counterexample, "the index-encoding class f_A")
    p.add_argument("--input")
    p.add_argument("--powerset", type=int, default=3)
    p.add_argument("--eps", type=float, default=0.1)
    return parser


# -- rendering --------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, np.bool_):
        return bool(v)
    raise TypeError(f"not JSON serializable: {type(v).__name__}")


def render_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, default=_jsonable) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(CSV_SCHEMA + "\n")
    if rows:
        cols = list(rows[0])
        for r in rows[1:]:
            cols += [c for c in r if c not in cols]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def render_table(rep: Report) -> str:
    if rep.lines is not None:
        return "\n".join(rep.lines) + "\n"
    if len(rep.rows) > 1 or (rep.rows and "rows" in rep.data):
        cols = list(rep.rows[0])
        cells = [[("-" if r.get(c) is None else str(r.get(c))) for c in cols] for r in rep.rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        head = [f"{k} = {v}" for k, v in rep.data.items() if k not in ("rows", "command") and not isinstance(v, (list, dict))]
        return "\n".join(head + out) + "\n"
    return "\n".join(f"{k} = {v}" for k, v in rep.data.items() if k != "command") + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    try:
        rep = args.func(args)
        if args.format == "json":
            text = render_json(rep.data)
        elif args.format == "csv":
            text = render_csv(rep.rows)
        else:
            text = render_table(rep)
        if getattr(args, "rows_out", None):
            Path(args.rows_out).write_text(render_csv(rep.rows), encoding="utf-8")
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ShatterlabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_VIOLATION if rep.violations else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
