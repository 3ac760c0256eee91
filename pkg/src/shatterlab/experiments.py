"""Seeded randomized property runs.

Each run checks a proved inequality on many generated instances and returns
a plain dict with a ``violations`` count; any violation is a bug in this
package, not a counterexample. The CLI ``verify`` subcommands, the scripts in
``scripts/`` and the acceptance tests all call these.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .compose import (
    CONTINUOUS,
    ClassicalConnective,
    compose_concepts,
    connective,
    verify_covering_chain,
    verify_phi_modulus,
    vc_composition_bound,
)
from .core import ConceptClass, FiniteSpace, FunctionClass
from .cover import FiniteMetric, check_image_cover, check_product_cover, covering_number, is_cover
from .generators import (
    clustered_function_class,
    interval_traces,
    random_concept_class,
    random_function_class,
    random_metric,
    random_weights,
)
from .shatter import fat_dimension, growth, sauer_bound, vc_dimension


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))


def sauer_check(C: ConceptClass) -> dict:
    """Growth against (en/d)^d and pi(n) = 2^n iff VC >= n, for one class."""
    d = vc_dimension(C).value
    npts = len(C.space)
    table = growth(C, npts)
    sauer_viol = 0
    checked = 0
    if d >= 1:
        for n in range(d, npts + 1):
            checked += 1
            if table[n] > sauer_bound(n, d):
                sauer_viol += 1
    pi_viol = sum((d >= n) != (table[n] == 2**n) for n in range(npts + 1))
    return {"vc": d, "points": npts, "growth": [table[n] for n in range(npts + 1)],
            "sauer_checked": checked, "sauer_violations": sauer_viol, "pi_violations": pi_viol}


def sauer_run(instances: int = 200, max_points: int = 12, seed: int = 42) -> dict:
    rng = _rng(seed, 3)
    viol = pi_viol = checked = 0
    vcs = []
    done = 0
    while done < instances:
        n = int(rng.integers(3, max_points + 1))
        kind = rng.integers(0, 3)
        if kind == 0:
            C = random_concept_class(rng, n, int(rng.integers(2, min(2**n, 300) + 1)), float(rng.uniform(0.1, 0.9)))
        elif kind == 1:
            # sparse family: few members per size keeps VC small relative to n
            C = random_concept_class(rng, n, int(rng.integers(2, 4 * n + 1)), float(rng.uniform(0.05, 0.3)))
        else:
            base = interval_traces(n)
            keep = rng.random(len(base)) < rng.uniform(0.3, 1.0)
            perm = rng.permutation(n)
            C = ConceptClass(base.space, base.matrix[keep][:, perm])
        if len(C) < 2:
            continue
        r = sauer_check(C)
        viol += r["sauer_violations"]
        pi_viol += r["pi_violations"]
        checked += r["sauer_checked"]
        vcs.append(r["vc"])
        done += 1
    return {"check": "sauer", "instances": instances, "pairs_checked": checked,
            "violations": viol + pi_viol, "sauer_violations": viol, "pi_violations": pi_viol,
            "max_vc": max(vcs), "seed": seed}


def binary_equivalence(C: ConceptClass, eps_list) -> int:
    F = C.to_function_class()
    d = vc_dimension(C).value
    return sum(fat_dimension(F, e).value != d for e in eps_list)


def binary_eq_run(
    eps_list=(0.1, 0.3, 0.5), exhaustive_max_points: int = 4, random_instances: int = 100, seed: int = 42
) -> dict:
    """fat_eps = VC on bit-valued classes: every class on <= 4 points, then random larger ones."""
    viol = 0
    exhaustive = 0
    for n in range(1, exhaustive_max_points + 1):
        space = FiniteSpace.uniform(n)
        allc = ConceptClass.powerset(space).matrix
        for mask in range(1, 2 ** (2**n)):
            rows = allc[[i for i in range(2**n) if (mask >> i) & 1]]
            viol += binary_equivalence(ConceptClass(space, rows), eps_list)
            exhaustive += 1
    rng = _rng(seed, 4)
    for _ in range(random_instances):
        n = int(rng.integers(5, 9))
        C = random_concept_class(rng, n, int(rng.integers(2, 65)), float(rng.uniform(0.2, 0.8)))
        viol += binary_equivalence(C, eps_list)
    return {"check": "binary-eq", "exhaustive_classes": exhaustive, "random_classes": random_instances,
            "eps": list(eps_list), "violations": viol, "seed": seed}


def random_product_instance(rng) -> tuple[list[FiniteMetric], float]:
    k = int(rng.integers(2, 4))
    sizes = [int(rng.integers(1, 7 if k == 2 else 5)) for _ in range(k)]
    Ms = [random_metric(rng, s, dim=int(rng.integers(1, 3))) for s in sizes]
    return Ms, float(rng.uniform(0.05, 1.2))


def product_run(instances: int = 1000, seed: int = 42) -> dict:
    rng = _rng(seed, 8)
    viol = 0
    for _ in range(instances):
        Ms, eps = random_product_instance(rng)
        if not check_product_cover(Ms, eps).holds:
            viol += 1
    return {"check": "product", "instances": instances, "violations": viol, "seed": seed}


def random_image_instance(rng):
    """Points in the plane mapped by a Lipschitz projection; returns (M, images, map, delta, eps)."""
    n = int(rng.integers(1, 21))
    pts = rng.random((n, 2))
    lip = float(rng.uniform(0.2, 1.0))
    w = rng.normal(size=2)
    w /= np.linalg.norm(w)
    if rng.random() < 0.1:
        vals = np.zeros(n)
    else:
        vals = np.clip(lip * (pts @ w), -10, 10)
    uniq, mapping = np.unique(vals, return_inverse=True)
    eps = float(rng.uniform(0.05, 0.8))
    # |u(p) - u(q)| <= lip |p - q|, so delta = eps / lip is a valid modulus pair
    delta = eps / lip
    return FiniteMetric.from_points(pts), FiniteMetric.from_points(uniq), mapping, delta, eps


def image_run(instances: int = 1000, seed: int = 42) -> dict:
    rng = _rng(seed, 9)
    viol = precondition_failures = 0
    for _ in range(instances):
        M, img, mapping, delta, eps = random_image_instance(rng)
        rep = check_image_cover(M, img, mapping, delta, eps)
        if not rep.continuity_ok:
            precondition_failures += 1
        elif not rep.holds:
            viol += 1
    return {"check": "image", "instances": instances, "violations": viol + precondition_failures,
            "inequality_violations": viol, "precondition_failures": precondition_failures, "seed": seed}


def random_chain_instance(rng):
    npts = int(rng.integers(1, 7))
    space = FiniteSpace([f"x{i + 1}" for i in range(npts)], random_weights(rng, npts))
    Fs = [random_function_class(rng, space, int(rng.integers(1, 9)), levels=int(rng.integers(2, 6))) for _ in range(2)]
    name = ("mul", "min", "max", "mean")[int(rng.integers(0, 4))]
    eps = float(rng.choice([0.1, 0.25, 0.5, 0.75, 1.0]))
    return connective(name, 2), Fs, eps


def chain_run(instances: int = 1000, seed: int = 42) -> dict:
    rng = _rng(seed, 7)
    viol = 0
    strict = 0
    for _ in range(instances):
        u, Fs, eps = random_chain_instance(rng)
        rep = verify_covering_chain(u, Fs, eps)
        viol += not rep.holds
        strict += rep.composed_number < rep.bound
    return {"check": "chain", "instances": instances, "violations": viol, "strictly_below_bound": strict, "seed": seed}


def random_phi_classes(rng, k: int = 2):
    npts = int(rng.integers(2, 9))
    space = FiniteSpace([f"x{i + 1}" for i in range(npts)], random_weights(rng, npts))
    jitter = float(rng.choice([0.0005, 0.002, 0.01]))
    return [
        clustered_function_class(rng, space, int(rng.integers(2, 33)), int(rng.integers(1, 5)), jitter)
        for _ in range(k)
    ]


def phi_run(instances: int = 50, names=("mul", "min", "max"), eps_list=(0.25, 0.5), pairs: int = 2000, seed: int = 42) -> dict:
    rng = _rng(seed, 6)
    viol = in_thr = tested = 0
    for t in range(instances):
        Fs = random_phi_classes(rng)
        for name in names:
            rep = verify_phi_modulus(connective(name, 2), Fs, eps_list, pairs, seed=seed + t)
            viol += rep.violations
            in_thr += sum(r.pairs_in_threshold for r in rep.rows)
            tested += sum(r.pairs_tested for r in rep.rows)
    return {"check": "phi", "instances": instances, "connectives": list(names), "eps": list(eps_list),
            "pairs_tested": tested, "pairs_in_threshold": in_thr, "violations": viol, "seed": seed}


def random_low_vc_class(rng, npts: int, max_vc: int = 2) -> ConceptClass:
    space = FiniteSpace.uniform(npts)
    while True:
        if rng.random() < 0.5:
            base = interval_traces(npts)
            keep = rng.random(len(base)) < rng.uniform(0.2, 1.0)
            C = ConceptClass(space, base.matrix[keep][:, rng.permutation(npts)])
        else:
            C = random_concept_class(rng, npts, int(rng.integers(2, 8)), float(rng.uniform(0.1, 0.6)))
        if len(C) >= 2 and 1 <= vc_dimension(C).value <= max_vc:
            return C


def vc_comp_run(instances: int = 200, seed: int = 42, log_base: float | None = None) -> dict:
    rng = _rng(seed, 5)
    viol = 0
    worst = 0
    for _ in range(instances):
        npts = int(rng.integers(2, 11))
        Cs = [random_low_vc_class(rng, npts) for _ in range(2)]
        u = ClassicalConnective(2, tuple(int(b) for b in rng.integers(0, 2, 4)))
        d = max(vc_dimension(C).value for C in Cs)
        measured = vc_dimension(compose_concepts(u, Cs)).value
        bound = vc_composition_bound(d, 2, log_base)
        worst = max(worst, measured)
        viol += not (measured < bound)
    return {"check": "vc-comp", "instances": instances, "violations": viol, "max_measured_vc": worst, "seed": seed}


def cover_compare_run(instances: int = 500, max_points: int = 64, seed: int = 42) -> dict:
    rng = _rng(seed, 12)
    viol = 0
    gaps = 0
    for _ in range(instances):
        n = int(rng.integers(1, max_points + 1))
        M = random_metric(rng, n, dim=int(rng.integers(1, 4)))
        eps = float(rng.uniform(0.1, 0.6))
        ex = covering_number(M, eps, "exact")
        gr = covering_number(M, eps, "greedy")
        ok = ex.number <= gr.number and ex.number >= ex.lower_bound and is_cover(M, eps, ex.centers)
        ok = ok and is_cover(M, eps, gr.centers)
        viol += not ok
        gaps += ex.number < gr.number
    return {"check": "cover", "instances": instances, "violations": viol, "greedy_suboptimal": gaps, "seed": seed}


RUNS = {
    "sauer": sauer_run,
    "binary-eq": binary_eq_run,
    "product": product_run,
    "image": image_run,
    "chain": chain_run,
    "phi": phi_run,
    "vc-comp": vc_comp_run,
    "cover": cover_compare_run,
}
