import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from shatterlab.core import ConceptClass, FiniteSpace, FunctionClass
from shatterlab.cover import (
    ConstantsConfig,
    FiniteMetric,
    check_image_cover,
    check_product_cover,
    covering_number,
    is_cover,
    metric_entropy_condition,
    metric_from_class,
    mv_entropy_bound,
    packing_number,
    product_metric,
    talagrand_lower_bound,
)
from shatterlab.errors import CapacityError, DimensionError, DomainError, ValidationError

LINE = FiniteMetric.from_points([0.0, 0.4, 0.8])


def test_metric_validation():
    with pytest.raises(ValidationError):
        FiniteMetric([[0, 1], [2, 0]])
    with pytest.raises(ValidationError):
        FiniteMetric([[1, 0], [0, 1]])
    with pytest.raises(ValidationError):
        FiniteMetric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(DimensionError):
        FiniteMetric(np.zeros((2, 3)))


def test_metric_from_class_examples():
    s = FiniteSpace.uniform(2)
    assert metric_from_class(FunctionClass(s, [[0.3, 0.3]])).dist.tolist() == [[0.0]]
    d = metric_from_class(FunctionClass(s, [[1, 0], [0, 0]])).dist
    assert d[0, 1] == d[1, 0] == pytest.approx(0.7071067811865476)
    C = ConceptClass.powerset(FiniteSpace(["a", "b", "c"], [0.2, 0.3, 0.5]))
    assert np.array_equal(metric_from_class(C, "symdiff").dist, metric_from_class(C, "expected-abs").dist)
    with pytest.raises(DomainError):
        metric_from_class(FunctionClass(s, [[0.5, 0]]), "symdiff")


def test_cover_line_examples():
    assert covering_number(LINE, 0.9).number == 1
    r = covering_number(LINE, 0.5)
    assert r.number == 1 and r.centers == (1,)
    assert covering_number(LINE, 0.1).number == 3


def test_packing_examples():
    assert packing_number(FiniteMetric([[0.0]]), 0.2) == 1
    assert packing_number(LINE, 0.3) == 3
    assert packing_number(LINE, 0.5) == 2


def test_cover_rejects_bad_radius_and_mode():
    with pytest.raises(DomainError):
        covering_number(LINE, 0.0)
    with pytest.raises(DomainError):
        covering_number(LINE, 0.5, "fast")


def test_product_examples():
    single = FiniteMetric([[0.0]])
    r = check_product_cover([single] * 3, 0.2)
    assert (r.product_number, r.bound, r.holds) == (1, 1, True)
    r = check_product_cover([LINE, LINE], 0.5)
    assert r.component_radius == pytest.approx(0.5 / math.sqrt(2))
    # strict balls of radius 0.354 contain only their centre on this line
    assert r.component_numbers == (3, 3) and r.bound == 9
    assert r.product_number == 3 and r.holds


def test_product_cap():
    big = FiniteMetric.from_points(np.arange(50) / 50.0)
    with pytest.raises(CapacityError):
        check_product_cover([big] * 3, 0.2, cap=1000)
    with pytest.raises(CapacityError):
        product_metric([big, big], cap=100)


def test_image_identity_and_constant():
    pts = FiniteMetric.from_points(np.linspace(0, 1, 7))
    r = check_image_cover(pts, pts, list(range(7)), 0.3, 0.3)
    assert r.continuity_ok and r.image_number == r.domain_number and r.holds
    r = check_image_cover(pts, FiniteMetric([[0.0]]), [0] * 7, 0.1, 0.3)
    assert r.image_number == 1 and r.holds


def test_image_precondition_report():
    pts = FiniteMetric.from_points([0.0, 0.1])
    img = FiniteMetric.from_points([0.0, 1.0])
    r = check_image_cover(pts, img, [0, 1], 0.5, 0.2)
    assert not r.continuity_ok and r.holds is None and r.continuity_violations == 1


def test_image_of_multiplication_on_grid():
    grid = np.array([(a, b) for a in np.linspace(0, 1, 6) for b in np.linspace(0, 1, 6)])
    vals, mapping = np.unique(grid[:, 0] * grid[:, 1], return_inverse=True)
    for eps in (0.2, 0.5, 1.0):
        r = check_image_cover(FiniteMetric.from_points(grid), FiniteMetric.from_points(vals), mapping, eps / 2, eps)
        assert r.continuity_ok and r.holds


def test_mv_and_talagrand_examples():
    cfg = ConstantsConfig()
    assert mv_entropy_bound(0, 0.3, cfg) == 1
    assert mv_entropy_bound(3, 0.5, cfg) == 64
    assert mv_entropy_bound(2, 1.0, ConstantsConfig(K=2)) == 16
    assert talagrand_lower_bound(0, cfg) == 1
    assert talagrand_lower_bound(3, cfg) == 8
    assert talagrand_lower_bound(5, ConstantsConfig(K_prime=0.5)) == pytest.approx(5.656854249492381)
    with pytest.raises(DomainError):
        mv_entropy_bound(1, 0.0, cfg)


def test_constants_validation():
    with pytest.raises(ValidationError):
        ConstantsConfig(c=0)
    with pytest.raises(ValidationError):
        ConstantsConfig(log_base=1)
    assert ConstantsConfig(log_base=2).log(8) == pytest.approx(3)


def test_entropy_examples():
    C = ConceptClass.powerset(FiniteSpace.uniform(2))
    rows = dict(metric_entropy_condition(C, [0.4, 0.6, 1.5]).rows)
    assert rows == {0.4: 4, 0.6: 2, 1.5: 1}


# properties

point_sets = st.integers(1, 9).flatmap(
    lambda n: st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=n, max_size=n)
)


@given(point_sets, st.floats(0.05, 1.0))
def test_exact_cover_matches_exhaustive(pts, eps):
    M = FiniteMetric.from_points(pts)
    r = covering_number(M, eps, "exact")
    assert r.number == oracles.brute_cover(M.dist.tolist(), eps)
    assert is_cover(M, eps, r.centers)


@given(point_sets, st.floats(0.05, 1.0))
def test_cover_invariants(pts, eps):
    M = FiniteMetric.from_points(pts)
    ex, gr = covering_number(M, eps, "exact"), covering_number(M, eps, "greedy")
    assert 1 <= ex.lower_bound <= ex.number <= gr.number <= M.size
    assert is_cover(M, eps, gr.centers)


@given(point_sets, st.floats(0.05, 0.5), st.floats(1.0, 2.0))
def test_cover_monotone_in_radius(pts, eps, factor):
    M = FiniteMetric.from_points(pts)
    assert covering_number(M, eps * factor).number <= covering_number(M, eps).number
