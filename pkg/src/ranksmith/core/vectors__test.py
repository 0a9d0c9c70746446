import math

import numpy as np
import pytest

from ranksmith.core.vectors import (
    as_vector,
    cosine_similarity,
    cosine_similarity_matrix,
    unit_rows,
)
from ranksmith.errors import DomainError, UsageError


def test__cosine_similarity__identical_direction__one():
    assert cosine_similarity([3, 4], [3, 4]) == pytest.approx(1.0)


def test__cosine_similarity__orthogonal__zero():
    assert cosine_similarity([1, 0], [0, 1]) == pytest.approx(0.0)


def test__cosine_similarity__forty_five_degrees__inverse_sqrt_two():
    assert cosine_similarity([1, 0], [1, 1]) == pytest.approx(0.70710678, abs=1e-8)


def test__cosine_similarity__zero_vector__domain_error():
    with pytest.raises(DomainError):
        cosine_similarity([0, 0], [1, 1])


def test__cosine_similarity__dimension_mismatch__usage_error():
    with pytest.raises(UsageError):
        cosine_similarity([1, 0], [1, 0, 0])


def test__cosine_similarity__positive_rescaling__unchanged():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = rng.normal(size=7)
        b = rng.normal(size=7)
        alpha, beta = rng.uniform(0.01, 100, size=2)
        assert math.isclose(
            cosine_similarity(alpha * a, beta * b), cosine_similarity(a, b), abs_tol=1e-12
        )


def test__cosine_similarity__swapped_arguments__symmetric():
    assert cosine_similarity([1, 2, 3], [-2, 0.5, 4]) == cosine_similarity([-2, 0.5, 4], [1, 2, 3])


def test__as_vector__non_finite__usage_error():
    with pytest.raises(UsageError):
        as_vector([1.0, float("nan")])


def test__as_vector__empty__usage_error():
    with pytest.raises(UsageError):
        as_vector([])


def test__cosine_similarity_matrix__matches_pairwise_function():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 5))
    b = rng.normal(size=(3, 5))

    matrix = cosine_similarity_matrix(a, b)

    for i in range(4):
        for j in range(3):
            assert matrix[i, j] == pytest.approx(cosine_similarity(a[i], b[j]), abs=1e-12)


def test__unit_rows__zero_row__domain_error():
    with pytest.raises(DomainError):
        unit_rows(np.array([[1.0, 0.0], [0.0, 0.0]]))
