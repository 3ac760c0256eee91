import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shatterlab.core import Concept, ConceptClass, FiniteSpace
from shatterlab.errors import ConstructionError, DomainError, EmptyClassError, UnknownFunctionError
from shatterlab.generators import interval_traces
from shatterlab.pacsim import (
    PlaneDistribution,
    Rectangle,
    build_counterexample_class,
    counterexample_fat_check,
    encode_table,
    exact_error,
    identify_from_one_point,
    mc_error,
    rect_sample_complexity,
    run_rectangle_trials,
    tightest_rectangle,
)

BOX = PlaneDistribution.uniform_box()
TARGET = Rectangle(0.25, 0.75, 0.25, 0.75)


def test_tightest_rectangle_examples():
    sample = [((0.2, 0.3), 1), ((0.6, 0.7), 1), ((0.9, 0.1), 0)]
    assert tightest_rectangle(sample) == Rectangle(0.2, 0.6, 0.3, 0.7)
    assert tightest_rectangle([((0.5, 0.5), 0)]).empty
    assert tightest_rectangle([((0.4, 0.1), 1)]) == Rectangle(0.4, 0.4, 0.1, 0.1)


def test_sample_complexity():
    assert rect_sample_complexity(0.1, 0.1) == 148
    assert rect_sample_complexity(0.5, 0.5) == 17
    with pytest.raises(DomainError):
        rect_sample_complexity(0.0, 0.1)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.5, 1.0), st.floats(0.5, 1.0))
def test_sample_complexity_monotone(eps, delta, f1, f2):
    assert rect_sample_complexity(eps * f1, delta * f2) >= rect_sample_complexity(eps, delta)


def test_exact_error_against_monte_carlo():
    h = Rectangle(0.3, 0.7, 0.2, 0.6)
    exact = exact_error(h, TARGET, BOX)
    assert exact == pytest.approx(0.25 + 0.16 - 2 * 0.4 * 0.35)
    assert mc_error(h, TARGET, BOX, np.random.default_rng(0)) == pytest.approx(exact, abs=0.01)


def test_segment_mixture_mass():
    dist = PlaneDistribution.segments([[0, 0.5, 0.8], [0.5, 1, 0.2]], [[0, 1, 1.0]])
    assert dist.mass(Rectangle(0, 0.5, 0, 1)) == pytest.approx(0.8)
    h = Rectangle(0.1, 0.6, 0.0, 0.5)
    assert mc_error(h, TARGET, dist, np.random.default_rng(1)) == pytest.approx(exact_error(h, TARGET, dist), abs=0.01)


def test_trials_respect_bound_and_containment():
    r = run_rectangle_trials(TARGET, BOX, 0.1, 0.1, 148, 200, seed=42)
    assert r.failures <= r.trials and r.empirical_failure_rate == r.failures / r.trials
    assert r.empirical_failure_rate <= 0.1 and r.contained_every_trial


def test_trials_independent_of_threads():
    a = run_rectangle_trials(TARGET, BOX, 0.1, 0.1, 50, 64, seed=3)
    b = run_rectangle_trials(TARGET, BOX, 0.1, 0.1, 50, 64, seed=3, threads=4)
    assert a == b and a.errors == b.errors


def test_zero_mass_target():
    r = run_rectangle_trials(Rectangle(2, 3, 2, 3), BOX, 0.1, 0.1, 30, 50)
    assert r.failures == 0 and r.mean_error == 0


def test_single_point_negative_control():
    r = run_rectangle_trials(TARGET, BOX, 0.01, 0.1, 1, 300)
    assert r.empirical_failure_rate > 0.95


def test_trial_argument_errors():
    with pytest.raises(DomainError):
        run_rectangle_trials(TARGET, BOX, 0.1, 0.1, 0, 10)
    with pytest.raises(DomainError):
        run_rectangle_trials(TARGET, BOX, 0.1, 0.1, 5, 10, estimator="guess")


def test_encode_examples():
    assert encode_table(Concept([0, 0, 0]), 0.0).values == (0.0, 0.0, 0.0)
    assert encode_table(Concept([1, 0]), 0.1).values == (0.9, 0.1)


def test_identify_examples():
    C = ConceptClass(FiniteSpace.uniform(2), [[1, 0]])
    cx = build_counterexample_class(C, codes=[0.1])
    assert cx.functions.matrix.tolist() == [[0.9, 0.1]]
    assert identify_from_one_point(cx, (0, 0.9)) == Concept([1, 0])
    cx = build_counterexample_class(ConceptClass(FiniteSpace.uniform(2), [[0, 0], [1, 1]]))
    assert cx.codes[0] == 0.0
    assert identify_from_one_point(cx, (0, 0.0)) == Concept([0, 0])
    with pytest.raises(UnknownFunctionError):
        identify_from_one_point(cx, (0, 0.47))


def test_counterexample_errors():
    with pytest.raises(EmptyClassError):
        build_counterexample_class(ConceptClass(FiniteSpace.uniform(2), []))
    C = ConceptClass(FiniteSpace.uniform(2), [[0, 0], [1, 1]])
    with pytest.raises(ConstructionError):
        build_counterexample_class(C, codes=[0.1, 0.1])
    with pytest.raises(DomainError):
        counterexample_fat_check(C, 1 / 6)


def test_tables_pairwise_distinct():
    C = ConceptClass.powerset(FiniteSpace.uniform(4))
    cx = build_counterexample_class(C)
    assert len(cx.functions) == len(C) == 16
    for i, j in itertools.combinations(range(16), 2):
        assert np.all(cx.functions.matrix[i] != cx.functions.matrix[j])


def test_counterexample_powerset_and_vc_one():
    r = counterexample_fat_check(ConceptClass.powerset(FiniteSpace.uniform(3)), 0.1)
    assert r.fat >= 3 and r.half_witness_ok and r.holds
    C = ConceptClass(FiniteSpace.uniform(3), [[0, 0, 0], [1, 0, 0]])
    r = counterexample_fat_check(C, 0.1)
    assert r.vc == 1 and r.fat >= 1


concept_classes = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.tuples(*[st.integers(0, 1)] * n), min_size=1, max_size=12).map(lambda rows: (n, rows))
)


@given(concept_classes)
def test_counterexample_property(data):
    n, rows = data
    C = ConceptClass(FiniteSpace.uniform(n), rows)
    assert counterexample_fat_check(C, 0.15).holds
    cx = build_counterexample_class(C)
    for i, x in itertools.product(range(len(C)), range(n)):
        assert identify_from_one_point(cx, (x, cx.functions.matrix[i, x])) == C[i]


def test_counterexample_on_intervals():
    assert counterexample_fat_check(interval_traces(6), 0.1).holds
