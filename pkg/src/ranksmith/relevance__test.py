import math

import numpy as np
import pytest
from assertpy import assert_that

from ranksmith.errors import UsageError
from ranksmith.relevance import (
    RelevanceKind,
    RelevanceSpec,
    relevance,
    relevance_matrix,
)

ALL_SPECS = [
    RelevanceSpec(),
    RelevanceSpec(RelevanceKind.CLIPPED_LINEAR, gamma=3.5),
    RelevanceSpec(RelevanceKind.INVERSE_LINEAR),
    RelevanceSpec(RelevanceKind.EXP_INVERSE),
]


def test__relevance__default_spec__clipped_linear_gamma_ten():
    spec = RelevanceSpec()
    assert spec.kind is RelevanceKind.CLIPPED_LINEAR
    assert spec.gamma == 10


def test__relevance__clipped_linear_zero_gap__gamma():
    assert relevance(RelevanceSpec(), 1950, 1950) == 10


def test__relevance__clipped_linear_gap_at_or_beyond_gamma__zero():
    assert relevance(RelevanceSpec(), 1950, 1960) == 0
    assert relevance(RelevanceSpec(), 1950, 1975) == 0


def test__relevance__zero_gap_other_kinds__closed_form():
    assert relevance(RelevanceSpec(RelevanceKind.INVERSE_LINEAR), 1970, 1970) == 1
    assert relevance(RelevanceSpec(RelevanceKind.EXP_INVERSE), 1970, 1970) == pytest.approx(
        2.718282, abs=1e-6
    )


@pytest.mark.parametrize("spec", ALL_SPECS)
def test__relevance__growing_gap__non_increasing(spec):
    values = [relevance(spec, 1950, 1950 + gap) for gap in range(80)]
    assert all(a >= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("spec", ALL_SPECS)
def test__relevance__swapped_years__symmetric(spec):
    for a, b in [(1930, 1999), (1944, 1950), (1980, 1979)]:
        assert relevance(spec, a, b) == relevance(spec, b, a)


def test__relevance__clipped_linear__positive_exactly_inside_gamma():
    spec = RelevanceSpec(gamma=10)
    for gap in range(40):
        assert (relevance(spec, 1950, 1950 + gap) > 0) == (gap < 10)


def test__relevance__exp_inverse__values_in_one_to_e():
    spec = RelevanceSpec(RelevanceKind.EXP_INVERSE)
    values = [relevance(spec, 1930, 1930 + gap) for gap in range(0, 1000, 7)]
    assert_that(min(values)).is_greater_than(1.0)
    assert_that(max(values)).is_less_than_or_equal_to(math.e)


def test__relevance_spec__non_positive_gamma__usage_error():
    with pytest.raises(UsageError):
        RelevanceSpec(gamma=0)


def test__relevance_kind__from_name__round_trips_every_kind():
    for kind in RelevanceKind:
        assert RelevanceKind.from_name(kind.value) is kind


def test__relevance_kind__unknown_name__usage_error():
    with pytest.raises(UsageError):
        RelevanceKind.from_name("quadratic")


def test__relevance_matrix__matches_scalar_function():
    spec = RelevanceSpec()
    queries = np.array([1930, 1955, 1999])
    items = np.array([1931, 1950, 1990, 1999])

    matrix = relevance_matrix(spec, queries, items)

    for i, q in enumerate(queries):
        for j, y in enumerate(items):
            assert matrix[i, j] == relevance(spec, q, y)
