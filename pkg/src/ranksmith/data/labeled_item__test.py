import numpy as np
import pytest
from assertpy import assert_that

from ranksmith.data.labeled_item import DEFAULT_SPAN, ItemSet, YearSpan
from ranksmith.errors import DataValidationError


def _items() -> ItemSet:
    return ItemSet(
        [30, 10, 20],
        [1950, 1931, 1999],
        [[3.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
    )


def test__year_span__parse__inclusive_bounds():
    span = YearSpan.parse("1930:1999")
    assert span == DEFAULT_SPAN
    assert len(span) == 70
    assert 1930 in span
    assert 1999 in span
    assert 2000 not in span


def test__year_span__reversed__raises():
    with pytest.raises(DataValidationError):
        YearSpan(2000, 1990)


def test__year_span__no_separator__raises():
    with pytest.raises(DataValidationError):
        YearSpan.parse("1930-1999")


def test__item_set__duplicate_ids__raises():
    with pytest.raises(DataValidationError, match="Duplicate"):
        ItemSet([1, 1], [1950, 1951], [[1.0], [2.0]])


def test__item_set__non_finite_features__raises_naming_id():
    with pytest.raises(DataValidationError, match="7"):
        ItemSet([7, 8], [1950, 1951], [[np.nan], [2.0]])


def test__item_set__mismatched_columns__raises():
    with pytest.raises(DataValidationError):
        ItemSet([1, 2], [1950], [[1.0], [2.0]])


def test__item_set__does_not_freeze_caller_arrays():
    features = np.ones((2, 3))
    ItemSet([1, 2], [1950, 1951], features)
    features[0, 0] = 5.0
    assert features[0, 0] == 5.0


def test__item_set__iteration__yields_labeled_items_in_order():
    ids = [item.id for item in _items()]
    assert_that(ids).is_equal_to([30, 10, 20])
    assert _items()[1].year == 1931


def test__item_set__sorted_by_id__ascending():
    ordered = _items().sorted_by_id()
    np.testing.assert_array_equal(ordered.ids, [10, 20, 30])
    np.testing.assert_array_equal(ordered.features[:, 0], [1.0, 2.0, 3.0])


def test__item_set__positions_of__known_ids():
    np.testing.assert_array_equal(_items().positions_of([20, 30]), [2, 0])


def test__item_set__positions_of__unknown_id__raises():
    with pytest.raises(DataValidationError, match="99"):
        _items().positions_of([99])


def test__item_set__validate_years__names_offending_id():
    items = ItemSet([4, 5], [1950, 2100], [[1.0], [1.0]])
    with pytest.raises(DataValidationError, match="id 5"):
        items.validate_years(DEFAULT_SPAN)


def test__item_set__year_span__min_to_max():
    assert _items().year_span() == YearSpan(1931, 1999)


def test__item_set__to_frame__columns():
    frame = _items().to_frame()
    assert_that(frame.columns).is_equal_to(["id", "year", "f0", "f1"])
    assert frame.height == 3


def test__item_set__empty__has_dimension():
    empty = ItemSet.empty(4)
    assert len(empty) == 0
    assert empty.dim == 4
