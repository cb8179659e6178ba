import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dpnoise import serialize
from dpnoise.errors import DomainError
from dpnoise.lp_sampler import NormPowerDensity, sample_norm_power
from dpnoise.noise1d import NoiseModel
from dpnoise.tradeoff import ConjugateCurve, EpsDeltaCurve, GaussianCurve, NoiseCurve, PiecewiseLinearCurve

finite = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=30))
def test_curve_csv_roundtrip_is_exact(rows):
    a = np.array([r[0] for r in rows])
    b = np.array([r[1] for r in rows])
    buf = io.StringIO()
    serialize.write_curve_csv(buf, a, b, {"kind": "test", "x": np.float64(1.5)})
    buf.seek(0)
    desc, a2, b2 = serialize.read_curve_csv(buf)
    assert desc == {"kind": "test", "x": 1.5}
    np.testing.assert_array_equal(a, a2)
    np.testing.assert_array_equal(b, b2)


def test_read_curve_rejects_other_columns():
    buf = io.StringIO("x,y\n1,2\n")
    with pytest.raises(DomainError):
        serialize.read_curve_csv(buf)


LAP = NoiseModel("laplace", 1.0)


@pytest.mark.parametrize(
    "curve",
    [
        GaussianCurve(1.3),
        EpsDeltaCurve(0.7, 0.01),
        NoiseCurve(NoiseModel("tlap", 0.5, h=2.0), 1.0),
        ConjugateCurve(NoiseCurve(LAP, 1.0), LAP, 3.0),
        PiecewiseLinearCurve(np.array([0.0, 0.4, 1.0]), np.array([1.0, 0.3, 0.0])),
    ],
    ids=["gdp", "fepsdelta", "noise", "conjugate", "piecewise"],
)
def test_descriptor_roundtrip(curve):
    desc = json.loads(serialize.dumps(curve.descriptor()))
    again = serialize.curve_from_descriptor(desc)
    a = np.linspace(0, 1, 101)
    np.testing.assert_array_equal(again(a), curve(a))


def test_curve_to_csv_header():
    text = serialize.curve_to_csv(GaussianCurve(1.0), 5)
    lines = text.splitlines()
    assert lines[0] == '# {"kind": "gdp", "mu": 1.0}'
    assert lines[1] == "alpha,beta"
    assert len(lines) == 7


def test_unknown_descriptor():
    with pytest.raises(DomainError):
        serialize.curve_from_descriptor({"kind": "mystery"})


def test_samples_binary_roundtrip():
    x = sample_norm_power(NormPowerDensity(3, 2.0, 2.0), 7, seed=0)
    data = serialize.samples_to_bytes(x)
    assert len(data) == 7 * 3 * 8
    np.testing.assert_array_equal(serialize.samples_from_bytes(data, 3), x)
    # little-endian float64, row-major
    assert np.frombuffer(data[:8], dtype="<f8")[0] == x[0, 0]
    assert np.frombuffer(data[8:16], dtype="<f8")[0] == x[0, 1]
    with pytest.raises(DomainError):
        serialize.samples_from_bytes(data, 4)


def test_samples_csv():
    buf = io.StringIO()
    serialize.write_samples_csv(buf, np.array([[1.0, 2.0]]), {"n": 2})
    assert buf.getvalue() == '# {"n": 2}\nx0,x1\n1.0,2.0\n'


def test_table_bool_and_repr():
    buf = io.StringIO()
    serialize.write_table(buf, ["a", "b", "c"], [(0.1, True, "s")])
    assert buf.getvalue() == "a,b,c\n0.1,true,s\n"


class TestReadNumbers:
    def test_mixed_separators_and_header(self):
        text = "# comment\nvalue\n1, 2 3\n4\n"
        np.testing.assert_array_equal(serialize.read_numbers(text), [1, 2, 3, 4])

    def test_bad_value(self):
        with pytest.raises(DomainError):
            serialize.read_numbers("1\nx\n")

    def test_non_finite(self):
        with pytest.raises(DomainError):
            serialize.read_numbers("1\nnan\n")

    def test_empty(self):
        assert serialize.read_numbers("").size == 0


def test_dumps_numpy():
    assert serialize.dumps({"a": np.arange(2), "b": np.float32(0.5)}) == '{"a": [0, 1], "b": 0.5}'
    with pytest.raises(TypeError):
        serialize.dumps({"a": object()})
