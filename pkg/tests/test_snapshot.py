import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qprint.errors import FormatError
from qprint.snapshot import HEADER_SIZE, KINDS, decode, encode, infer_kind, read_snapshot, write_snapshot


def sample(kind, nx=5, ny=3, seed=0):
    rng = np.random.default_rng(seed)
    if kind == "complex-scalar":
        return rng.normal(size=(nx, ny)) + 1j * rng.normal(size=(nx, ny))
    c = {"real-vector2": (2,), "real-vector3": (3,), "real-scalar": ()}[kind]
    return rng.normal(size=(nx, ny) + c)


def test_header_layout():
    buf = encode(np.zeros((4, 6)), 0.25, 1.5)
    assert HEADER_SIZE == 40 and len(buf) == 40 + 4 * 6 * 8
    assert buf[:8] == b"QPRINT01"
    assert struct.unpack_from("<IIIIdd", buf, 8) == (3, 4, 6, 0, 0.25, 1.5)


def test_payload_order_is_ix_iy_component():
    a = np.arange(2 * 3 * 2, dtype=float).reshape(2, 3, 2)
    buf = encode(a, 1.0, 0.0)
    vals = np.frombuffer(buf, "<f8", offset=HEADER_SIZE)
    assert vals.tolist() == list(range(12))
    z = np.array([[1 + 2j, 3 + 4j]])
    assert np.frombuffer(encode(z, 1.0, 0.0), "<f8", offset=HEADER_SIZE).tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip_bit_exact(kind, tmp_path):
    a = sample(kind)
    path = tmp_path / "f.qps"
    write_snapshot(path, a, 0.1, 2.0**-7)
    s = read_snapshot(path)
    assert s.kind == kind and s.dx == 0.1 and s.t == 2.0**-7
    assert s.data.shape == a.shape and s.data.dtype == a.dtype
    assert s.data.tobytes() == a.tobytes()
    assert encode(s.data, s.dx, s.t) == path.read_bytes()


@settings(max_examples=50, deadline=None)
@given(
    st.sampled_from(KINDS),
    st.integers(1, 6),
    st.integers(1, 6),
    st.floats(allow_nan=False, allow_infinity=False),
    st.floats(allow_nan=True, allow_infinity=True),
    st.integers(0, 10**6),
)
def test_round_trip_property(kind, nx, ny, dx, t, seed):
    a = sample(kind, nx, ny, seed)
    s = decode(encode(a, dx, t))
    assert s.data.tobytes() == a.tobytes()
    assert struct.pack("<d", s.dx) == struct.pack("<d", dx)
    assert struct.pack("<d", s.t) == struct.pack("<d", t)


def test_special_values_survive():
    a = np.array([[np.nan, -0.0], [np.inf, 5e-324]])
    assert decode(encode(a, 1.0, 0.0)).data.tobytes() == a.tobytes()


def test_infer_kind():
    assert infer_kind(np.zeros((2, 2), complex)) == "complex-scalar"
    assert infer_kind(np.zeros((2, 2, 3))) == "real-vector3"
    with pytest.raises(FormatError):
        infer_kind(np.zeros((2, 2, 4)))
    with pytest.raises(FormatError):
        infer_kind(np.zeros(5))
    with pytest.raises(FormatError):
        encode(np.zeros((2, 2)), 1.0, 0.0, kind="real-vector3")


def test_decode_rejects_bad_files():
    good = encode(np.zeros((3, 3)), 1.0, 0.0)
    with pytest.raises(FormatError, match="shorter"):
        decode(good[:10])
    with pytest.raises(FormatError, match="magic"):
        decode(b"QPRINT02" + good[8:])
    with pytest.raises(FormatError, match="kind"):
        decode(good[:8] + struct.pack("<I", 9) + good[12:])
    with pytest.raises(FormatError, match="reserved"):
        decode(good[:20] + struct.pack("<I", 1) + good[24:])
    with pytest.raises(FormatError, match="payload"):
        decode(good[:-8])
    with pytest.raises(FormatError, match="payload"):
        decode(good + b"\0")
