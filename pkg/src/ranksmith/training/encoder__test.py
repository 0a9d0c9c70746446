import numpy as np
import pytest

from ranksmith.data.labeled_item import ItemSet
from ranksmith.errors import UsageError
from ranksmith.losses.gradient_check import central_difference_gradient, relative_gradient_error
from ranksmith.training.encoder import Encoder, EncoderMode


def _items(rng, n=5, d_in=4) -> ItemSet:
    return ItemSet(np.arange(10, 10 + n), np.full(n, 1950), rng.normal(size=(n, d_in)))


def test__encode__affine_identity__returns_features(rng):
    items = _items(rng, d_in=3)
    encoder = Encoder.affine(np.eye(3), np.zeros(3))
    np.testing.assert_array_equal(encoder.encode(items), items.features)


def test__encode__affine_zero_weights__every_output_is_bias(rng):
    encoder = Encoder.affine(np.zeros((4, 2)), [0.5, -1.0])
    np.testing.assert_array_equal(encoder.encode(_items(rng)), np.tile([0.5, -1.0], (5, 1)))


def test__encode__free_table__stored_rows_by_id(rng):
    rows = rng.normal(size=(3, 2))
    encoder = Encoder.free_table([30, 10, 20], rows)
    items = ItemSet([20, 30], [1950, 1951], np.zeros((2, 1)))
    np.testing.assert_array_equal(encoder.encode(items), rows[[2, 0]])


def test__encode__free_table_unknown_id__raises():
    encoder = Encoder.free_table([1, 2], np.ones((2, 2)))
    with pytest.raises(UsageError, match="99"):
        encoder.encode(ItemSet([99], [1950], [[0.0]]))


def test__encode__affine_dimension_mismatch__raises(rng):
    with pytest.raises(UsageError):
        Encoder.affine(np.ones((3, 2)), np.zeros(2)).encode(_items(rng, d_in=4))


def test__encode__normalize__unit_rows(rng):
    encoder = Encoder.affine(rng.normal(size=(4, 3)), np.zeros(3), normalize=True)
    np.testing.assert_allclose(np.linalg.norm(encoder.encode(_items(rng)), axis=1), 1.0)


def test__encoder__one_dimensional_output__raises():
    with pytest.raises(UsageError):
        Encoder.affine(np.ones((3, 1)), np.zeros(1))


def test__initialise__uniform_small_weights_zero_bias(rng):
    items = _items(rng, n=8, d_in=6)
    encoder = Encoder.initialise(EncoderMode.AFFINE, items, 16, seed=3)
    assert encoder.params["weights"].shape == (6, 16)
    assert np.abs(encoder.params["weights"]).max() <= 0.1
    np.testing.assert_array_equal(encoder.params["bias"], np.zeros(16))


def test__initialise__free_table_covers_every_id(rng):
    items = _items(rng)
    encoder = Encoder.initialise(EncoderMode.FREE_TABLE, items, 4, seed=3)
    np.testing.assert_array_equal(encoder.ids, items.ids)
    assert encoder.encode(items).shape == (5, 4)


def test__chain_gradient__zero_upstream__zero_gradient(rng):
    encoder = Encoder.affine(rng.normal(size=(4, 3)), rng.normal(size=3))
    gradients = encoder.chain_gradient(np.zeros((5, 3)), _items(rng))
    for gradient in gradients.values():
        assert not gradient.any()


def test__chain_gradient__free_table_single_item__touches_only_its_row(rng):
    encoder = Encoder.free_table([1, 2, 3], rng.normal(size=(3, 2)))
    gradients = encoder.chain_gradient([[1.0, 2.0]], ItemSet([2], [1950], [[0.0]]))
    np.testing.assert_array_equal(gradients["table"], [[0, 0], [1, 2], [0, 0]])


def test__chain_gradient__wrong_shape__raises(rng):
    encoder = Encoder.affine(rng.normal(size=(4, 3)), np.zeros(3))
    with pytest.raises(UsageError):
        encoder.chain_gradient(np.zeros((5, 2)), _items(rng))


@pytest.mark.parametrize("normalize", [False, True])
def test__chain_gradient__affine__matches_finite_differences(rng, normalize):
    items = _items(rng, n=6, d_in=4)
    encoder = Encoder.affine(rng.normal(size=(4, 3)), rng.normal(size=3), normalize=normalize)
    target = rng.normal(size=(6, 3))

    def loss_of(name):
        def loss(values):
            params = dict(encoder.params)
            params[name] = values
            shifted = Encoder.affine(params["weights"], params["bias"], normalize=normalize)
            return float((shifted.encode(items) * target).sum())

        return loss

    analytical = encoder.chain_gradient(target, items)
    for name in ("weights", "bias"):
        numerical = central_difference_gradient(loss_of(name), encoder.params[name], 1e-6)
        assert relative_gradient_error(analytical[name], numerical) <= 1e-4


def test__copy__independent_parameters(rng):
    encoder = Encoder.affine(rng.normal(size=(4, 3)), np.zeros(3))
    snapshot = encoder.copy()
    encoder.params["weights"] += 1.0
    assert not np.array_equal(snapshot.params["weights"], encoder.params["weights"])


def test__encoder_mode__from_name__cli_names():
    assert EncoderMode.from_name("affine") is EncoderMode.AFFINE
    assert EncoderMode.from_name("free-table") is EncoderMode.FREE_TABLE
    with pytest.raises(UsageError):
        EncoderMode.from_name("cnn")
