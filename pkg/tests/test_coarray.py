from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from sparsearrays.coarray import (
    CoArray,
    CoArrayKind,
    SensorArray,
    check_necessary_sensors,
    contiguous_dof,
    diff_coarray,
    first_hole,
    is_symmetric,
    metrics,
    sum_coarray,
    varsigma,
    varsigma_from_weights,
    weights,
)

position_sets = st.sets(st.integers(0, 60), min_size=1, max_size=12)
normalized_sets = position_sets.map(lambda s: {x - min(s) for x in s})


def test_sensor_array_validation():
    with pytest.raises(ValueError):
        SensorArray((0, 2, 1))
    with pytest.raises(ValueError):
        SensorArray((-1, 0))
    with pytest.raises(ValueError):
        SensorArray((0, 0))
    assert SensorArray.of([3, 1, 1, 0]).positions == (0, 1, 3)
    with pytest.raises(ValueError, match="empty"):
        SensorArray(()).aperture()


def test_small_examples():
    assert sum_coarray(SensorArray((0, 1, 3))).elements == (0, 1, 2, 3, 4, 6)
    assert diff_coarray(SensorArray((0, 1, 4, 6))).elements == tuple(range(-6, 7))
    d = SensorArray((0, 1, 3, 5, 7, 8, 17, 18))
    assert contiguous_dof(sum_coarray(d)) == (27, 0)
    assert first_hole(sum_coarray(d)) == 27


def test_singleton():
    d = SensorArray((0,))
    m = metrics(d)
    assert (m.aperture, m.contiguous_dof, m.redundancy, m.weights) == (0, 1, Fraction(1), ())
    assert m.varsigma == 0


@given(position_sets)
def test_coarrays_match_brute_force(s):
    d = SensorArray.of(s)
    assert set(sum_coarray(d).elements) == oracles.sumset(s)
    assert set(diff_coarray(d).elements) == oracles.diffset(s)
    assert sum_coarray(d).kind is CoArrayKind.SUM


@given(position_sets)
def test_diff_coarray_symmetric(s):
    e = diff_coarray(SensorArray.of(s)).elements
    assert e == tuple(-x for x in reversed(e))


@given(st.sets(st.integers(-40, 40), min_size=1, max_size=30))
def test_contiguous_dof_and_first_hole(s):
    c = CoArray(tuple(sorted(s)), CoArrayKind.SUM)
    assert contiguous_dof(c) == oracles.longest_run(s)
    assert first_hole(c) == oracles.first_hole(s)


@given(normalized_sets)
def test_weights(s):
    d = SensorArray.of(s)
    assert list(weights(d)) == oracles.pair_weights(s)
    assert sum(weights(d)) == len(s) * (len(s) - 1) // 2


def test_large_aperture_uses_dense_path():
    d = SensorArray((0, 1, 3, 2_000_001, 2_000_003))
    assert set(sum_coarray(d).elements) == oracles.sumset(d.positions)
    assert set(diff_coarray(d).elements) == oracles.diffset(d.positions)


def test_varsigma_table_values():
    # the two restricted and one general 8-sensor MRAs, compared at L = 18
    a = SensorArray((0, 1, 2, 5, 8, 11, 12, 13))
    b = SensorArray((0, 1, 3, 4, 9, 10, 12, 13))
    c = SensorArray((0, 1, 3, 5, 7, 8, 17, 18))
    assert str(varsigma(a, 18)).startswith("0.040203")
    assert str(varsigma(b, 18)).startswith("0.040204")
    assert str(varsigma(c, 18)).startswith("0.030302")
    assert varsigma(c, 18) < varsigma(a, 18) < varsigma(b, 18)


def test_varsigma_is_exact_beyond_context_precision():
    # 60 two-digit groups: far more than the default 28 significant digits
    w = [1] * 59 + [2]
    v = varsigma_from_weights(w, 60)
    assert v == Decimal("0." + "01" * 59 + "02")
    assert varsigma_from_weights([1] * 59 + [1], 60) < v


def test_varsigma_reference_too_small():
    with pytest.raises(ValueError):
        varsigma(SensorArray((0, 1, 20)), 10)


@settings(max_examples=200)
@given(normalized_sets, normalized_sets)
def test_varsigma_orders_weights_lexicographically(s, t):
    a, b = SensorArray.of(s), SensorArray.of(t)
    if len(a) < 2 or len(b) < 2:
        return
    ref = max(a.aperture(), b.aperture())
    wa = oracles.pair_weights(s) + [0] * (ref - a.aperture())
    wb = oracles.pair_weights(t) + [0] * (ref - b.aperture())
    expected = (wa > wb) - (wa < wb)
    va, vb = varsigma(a, ref), varsigma(b, ref)
    assert ((va > vb) - (va < vb)) == expected


@given(normalized_sets)
def test_metrics_consistent(s):
    d = SensorArray.of(s)
    m = metrics(d)
    sums = oracles.sumset(s)
    assert m.total_dof == len(sums)
    assert (m.contiguous_dof, m.offset) == oracles.longest_run(sums)
    assert m.redundancy == Fraction(len(s) * (len(s) + 1), 2 * m.contiguous_dof)
    assert m.redundancy >= 1
    assert m.symmetric == (s == {max(s) - x for x in s})
    assert m.as_dict()["redundancy"] == f"{m.redundancy.numerator}/{m.redundancy.denominator}"


def test_metrics_requires_normalized():
    with pytest.raises(ValueError, match="start at 0"):
        metrics(SensorArray((1, 2)))


def test_symmetry_and_necessary_sensors():
    assert is_symmetric(SensorArray((0, 1, 2, 5, 8, 9, 10)))
    assert not is_symmetric(SensorArray((0, 1, 3)))
    assert check_necessary_sensors(SensorArray((0, 1, 2, 5, 8, 9, 10)), "sum")
    assert not check_necessary_sensors(SensorArray((0, 1, 3)), "sum")
    assert check_necessary_sensors(SensorArray((0, 1, 4, 6)), "difference")
    with pytest.raises(ValueError):
        check_necessary_sensors(SensorArray((0,)))


@given(normalized_sets)
def test_contiguous_sum_needs_end_sensors(s):
    # a contiguous sum co-array forces {0, 1, L-1, L}
    d = SensorArray.of(s)
    if len(d) >= 2 and oracles.is_interval(oracles.sumset(s), 0, 2 * max(s)):
        assert check_necessary_sensors(d, "sum")


def test_large_array_weights_numpy():
    d = SensorArray(tuple(np.arange(0, 3000, 3)))
    assert weights(d)[2] == 999
