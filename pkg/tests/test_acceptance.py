"""The twelve acceptance criteria, each at its stated size, seed and time limit.

Every test records one ``PASS``/``FAIL`` line; the lines are printed together
in the terminal summary (see ``conftest.py``) and also on stdout under ``-s``.
"""

import itertools
import time

import numpy as np
import pytest

from shatterlab.compose import connective, ContinuousConnective, verify_uniform_continuity
from shatterlab.core import ConceptClass, FiniteSpace
from shatterlab.experiments import (
    binary_eq_run,
    chain_run,
    cover_compare_run,
    image_run,
    phi_run,
    product_run,
    sauer_run,
    vc_comp_run,
)
from shatterlab.generators import hyperplane_domain, hyperplane_traces, interval_traces
from shatterlab.pacsim import (
    PlaneDistribution,
    Rectangle,
    build_counterexample_class,
    counterexample_fat_check,
    identify_from_one_point,
    rect_sample_complexity,
    run_rectangle_trials,
)
from shatterlab.shatter import eps_shatters_with, fat_dimension, shatters, vc_dimension

import oracles

RESULTS: dict[int, str] = {}


def record(num: int, name: str, ok: bool, detail: str, elapsed: float, limit: float | None = None) -> None:
    in_time = limit is None or elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    budget = f" (limit {limit:g}s)" if limit else ""
    line = f"[{num:02d}] {status} {name}: {detail}; {elapsed:.2f}s{budget}"
    RESULTS[num] = line
    print(line)
    assert ok, line
    assert in_time, line


def test_01_interval_vc():
    t = time.perf_counter()
    C = interval_traces(10)
    r = vc_dimension(C)
    el = time.perf_counter() - t
    ok = r.value == 2 and len(r.certificate) == 2 and shatters(C, r.certificate)
    record(1, "interval traces VC", ok, f"VC={r.value} certificate={r.certificate.labels(C.space)}", el, 1.0)


def test_02_hyperplane_vc():
    t = time.perf_counter()
    got = {}
    for n in (2, 3):
        pts = hyperplane_domain(n, extra=2, rng=np.random.default_rng(42 + n))
        C = hyperplane_traces(pts)
        rows = [tuple(int(b) for b in r) for r in C.matrix]
        got[n] = (vc_dimension(C).value, oracles.brute_vc(rows, len(pts)))
    el = time.perf_counter() - t
    ok = all(v == (n, n) for n, v in got.items())
    record(2, "hyperplane traces VC = n", ok, f"(measured, brute force) by n: {got}", el, 10.0)


def test_03_sauer():
    t = time.perf_counter()
    r = sauer_run(instances=200, max_points=12, seed=42)
    el = time.perf_counter() - t
    record(3, "Sauer exhaustive check", r["violations"] == 0,
           f"{r['instances']} classes, {r['pairs_checked']} (n,d) pairs, {r['violations']} violations", el, 60.0)


def test_04_binary_equivalence():
    t = time.perf_counter()
    r = binary_eq_run(eps_list=(0.1, 0.3, 0.5), exhaustive_max_points=4, random_instances=100, seed=42)
    el = time.perf_counter() - t
    record(4, "binary equivalence fat = VC", r["violations"] == 0,
           f"{r['exhaustive_classes']} exhaustive + {r['random_classes']} random classes, {r['violations']} violations", el)


def test_05_multiplication_modulus():
    t = time.perf_counter()
    mul = connective("mul", 2)
    good = verify_uniform_continuity(mul, [0.1, 0.25, 0.5, 1.0], samples=100_000, seed=42)
    wrong = ContinuousConnective("mul-2eps", 2, mul.evaluator, lambda e: min(2 * e, 1.0))
    control = verify_uniform_continuity(wrong, [0.1, 0.25, 0.5], samples=100_000, seed=42)
    el = time.perf_counter() - t
    ok = good.violations == 0 and control.violations >= 1
    record(5, "multiplication modulus eps/2", ok,
           f"{good.violations} violations; negative control 2*eps found {control.violations}", el)


def test_06_phi_transfer():
    t = time.perf_counter()
    r = phi_run(instances=50, names=("mul", "min", "max"), eps_list=(0.25, 0.5), seed=42)
    el = time.perf_counter() - t
    ok = r["violations"] == 0 and r["pairs_in_threshold"] > 0
    record(6, "phi modulus transfer", ok,
           f"{r['pairs_in_threshold']} of {r['pairs_tested']} pairs in threshold, {r['violations']} violations", el)


def test_07_covering_chain():
    t = time.perf_counter()
    r = chain_run(instances=1000, seed=42)
    el = time.perf_counter() - t
    record(7, "covering chain", r["violations"] == 0,
           f"{r['instances'] - r['violations']}/{r['instances']} trials hold", el, 300.0)


def test_08_product_and_image():
    t = time.perf_counter()
    p = product_run(instances=1000, seed=42)
    i = image_run(instances=1000, seed=42)
    el = time.perf_counter() - t
    ok = p["violations"] == 0 and i["violations"] == 0
    record(8, "product and image covering", ok,
           f"product {p['violations']} violations, image {i['violations']} violations over 1000 each", el)


def test_09_classical_composition():
    t = time.perf_counter()
    r = vc_comp_run(instances=200, seed=42)
    el = time.perf_counter() - t
    record(9, "classical composition VC < d*alpha_2", r["violations"] == 0,
           f"max measured VC {r['max_measured_vc']}, {r['violations']} violations", el)


def test_10_rectangle_learner():
    t = time.perf_counter()
    m = rect_sample_complexity(0.1, 0.1)
    r = run_rectangle_trials(Rectangle(0.25, 0.75, 0.25, 0.75), PlaneDistribution.uniform_box(), 0.1, 0.1, m,
                             1000, seed=42)
    el = time.perf_counter() - t
    ok = m == 148 and r.empirical_failure_rate <= 0.1 and r.contained_every_trial
    record(10, "rectangle learner", ok,
           f"m={m}, failure rate {r.empirical_failure_rate:.3f}, contained every trial {r.contained_every_trial}",
           el, 30.0)


def test_11_counterexample_class():
    t = time.perf_counter()
    C = ConceptClass.powerset(FiniteSpace.uniform(3))
    rep = counterexample_fat_check(C, 0.1)
    cx = build_counterexample_class(C)
    half = eps_shatters_with(cx.functions, [0, 1, 2], 0.1, [0.5, 0.5, 0.5])
    fat = fat_dimension(cx.functions, 0.1).value
    wrong = sum(
        identify_from_one_point(cx, (x, cx.functions.matrix[i, x])) != C[i]
        for i, x in itertools.product(range(len(C)), range(3))
    )
    el = time.perf_counter() - t
    ok = fat >= 3 and half and rep.holds and wrong == 0
    record(11, "counterexample class", ok, f"fat_0.1={fat}, half witness {half}, {wrong} of 24 misidentified", el)


def test_12_exact_vs_greedy():
    t = time.perf_counter()
    r = cover_compare_run(instances=500, max_points=64, seed=42)
    el = time.perf_counter() - t
    record(12, "exact vs greedy cover", r["violations"] == 0,
           f"{r['violations']} violations, greedy suboptimal on {r['greedy_suboptimal']}", el)
