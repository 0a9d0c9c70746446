import numpy as np
import pytest

from ranksmith.errors import UsageError
from ranksmith.training.optimizers import Adam, OptimizerKind, OptimizerSpec, Sgd


def test__sgd__no_momentum__plain_step():
    params = {"w": np.array([1.0, 2.0])}
    Sgd(lr=0.5, momentum=0.0).step(params, {"w": np.array([2.0, -2.0])})
    np.testing.assert_array_equal(params["w"], [0.0, 3.0])


def test__sgd__momentum__accumulates_velocity():
    params = {"w": np.array([0.0])}
    optimizer = Sgd(lr=1.0, momentum=0.5)
    optimizer.step(params, {"w": np.array([1.0])})
    optimizer.step(params, {"w": np.array([1.0])})
    np.testing.assert_allclose(params["w"], [-2.5])


def test__adam__first_step__moves_by_learning_rate():
    params = {"w": np.array([1.0, -1.0])}
    Adam(lr=0.1).step(params, {"w": np.array([3.0, -0.01])})
    np.testing.assert_allclose(params["w"], [0.9, -0.9], rtol=1e-6)


def test__adam__quadratic__converges():
    params = {"w": np.array([5.0, -3.0])}
    optimizer = Adam(lr=0.1)
    for _ in range(500):
        optimizer.step(params, {"w": 2.0 * params["w"]})
    np.testing.assert_allclose(params["w"], [0.0, 0.0], atol=1e-2)


def test__optimizer_spec__build__fresh_state_each_time():
    spec = OptimizerSpec(kind=OptimizerKind.SGD, lr=0.1)
    first = spec.build()
    second = spec.build()
    assert isinstance(first, Sgd)
    assert first is not second


@pytest.mark.parametrize(
    "arguments",
    [{"lr": 0.0}, {"lr": -1.0}, {"momentum": 1.0}, {"beta2": -0.1}, {"eps": 0.0}],
)
def test__optimizer_spec__invalid__raises(arguments):
    with pytest.raises(UsageError):
        OptimizerSpec(**arguments)


def test__optimizer_kind__unknown_name__raises():
    with pytest.raises(UsageError):
        OptimizerKind.from_name("rmsprop")
