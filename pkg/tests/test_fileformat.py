import numpy as np
import pytest

from qpure import channels as chn
from qpure import fileformat as ff
from qpure.purify import optimal_purifier
from qpure.rng import random_unit_vector
from qpure.setanalysis import counter_example, usd_purifier_demo
from qpure.states import DensityOperator, random_density


def fixtures():
    yield random_density(4, 2, 9)
    yield from counter_example(0.25)
    yield random_unit_vector(3, 1)
    yield chn.random_channel(2, 3, 2, 5)
    yield optimal_purifier(random_density(3, 2, 1), random_density(3, 1, 2)).full
    yield usd_purifier_demo([np.array([1.0, 0]), np.array([1.0, 1]) / np.sqrt(2)]).channel


@pytest.mark.parametrize("obj", list(fixtures()))
def test_round_trip_is_byte_identical(obj, tmp_path):
    first = ff.dumps(obj)
    path = tmp_path / "obj.json"
    ff.write(path, obj)
    again = ff.dumps(ff.read(path))
    assert first == again == path.read_text()


def test_state_values_survive():
    rho = random_density(3, 3, 4)
    back = ff.loads(ff.dumps(rho))
    assert isinstance(back, DensityOperator)
    assert np.array_equal(back.matrix, rho.matrix)


def test_channel_fields():
    ch = usd_purifier_demo([np.array([1.0, 0]), np.array([0, 1.0])]).channel
    back = ff.loads(ff.dumps(ch))
    assert (back.dim_in, back.dim_out, back.trace_preserving) == (2, 4, False)
    assert chn.channels_equal(back, ch)


def test_negative_zero_normalized():
    text = ff.dumps(np.array([1.0, -0.0]))
    assert "-0" not in text


def test_vector_reads_as_pure_state(tmp_path):
    path = tmp_path / "v.json"
    ff.write(path, np.array([0.6, 0.8j]))
    rho = ff.read_state(path)
    assert rho.rank == 1


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"kind": "state", "dims": [2, 2]}',
        '{"kind": "matrix", "dims": [1, 1], "data": [[[1, 0]]]}',
        '{"kind": "state", "dims": [2, 2], "data": [[[1, 0]]]}',
        '{"kind": "state", "dims": [1, 1], "data": [[[2, 0]]]}',
        '{"kind": "state", "dims": [1, 1], "data": [[["x", 0]]]}',
        '{"kind": "vector", "dims": [2], "data": [[1, 0], [1, 0]]}',
        '{"kind": "channel", "dims": [1, 1], "data": []}',
        '{"kind": "channel", "dims": [1, 1], "data": [[[[1, 0]]]], "trace_preserving": "yes"}',
        '{"kind": "state", "dims": [0, 0], "data": []}',
    ],
)
def test_malformed(text):
    with pytest.raises(ff.MalformedFile):
        ff.loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(ff.MalformedFile):
        ff.read(tmp_path / "absent.json")


def test_wrong_kind_for_reader(tmp_path):
    path = tmp_path / "c.json"
    ff.write(path, chn.identity_channel(2))
    with pytest.raises(ff.MalformedFile):
        ff.read_state(path)
    ff.write(path, random_density(2, 1, 1))
    with pytest.raises(ff.MalformedFile):
        ff.read_channel(path)
