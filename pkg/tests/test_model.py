import numpy as np
import pytest

from imgql.errors import ConflictError, DimensionError, NameResolutionError, ParameterError
from imgql.model import Assertion, Model, attach_channel, eval_assertion
from imgql.space import GridSpace


@pytest.fixture
def space():
    return GridSpace((2, 2))


def test_assertions_on_zero_channel(space):
    m = Model(space, {"a": np.zeros((2, 2))})
    assert eval_assertion(m, Assertion("a", ">", 0)).is_empty()
    assert eval_assertion(m, Assertion("a", ">=", 0)) == space.full()


def test_medium_intensity_band(space):
    m = Model(space, {"a": [[0.4, 0.6], [1.3, 1.8]]})
    band = eval_assertion(m, Assertion("a", ">", 0.5)) & eval_assertion(m, Assertion("a", "<", 1.3))
    assert band.points() == [(0, 1)]


def test_attach_channel(space):
    m = attach_channel(Model(space), "FLAIR", np.arange(4.0))
    assert eval_assertion(m, Assertion("FLAIR", ">", 1.7)).count() == 2
    assert m.channel("FLAIR").dtype == np.float64


def test_attach_errors(space):
    m = Model(space, {"a": np.zeros(4)})
    with pytest.raises(DimensionError):
        m.attach_channel("b", np.zeros(3))
    with pytest.raises(ConflictError):
        m.attach_channel("a", np.zeros(4))
    with pytest.raises(ConflictError):
        m.attach_channel("border", np.zeros(4))


def test_unknown_attribute(space):
    with pytest.raises(NameResolutionError, match="FLAIR"):
        eval_assertion(Model(space), Assertion("FLAIR", "<", 1))


def test_integer_channels_are_widened(space):
    m = Model(space, {"a": np.array([[0, 255], [7, 9]], dtype=np.uint8)})
    assert m.channel("a")[0, 1] == 255.0


def test_border_predicate(space):
    assert Model(space).border() == space.full()


def test_bad_comparator():
    with pytest.raises(ParameterError):
        Assertion("a", "!=", 1.0)
